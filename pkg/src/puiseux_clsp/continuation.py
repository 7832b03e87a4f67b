"""Analytic continuation of branch sheets between singular points.

Each sheet over a base point is carried along a chord from the base disk to
the disk of every other singular point in turn (disk radius = 1/3 of the
distance to the nearest other singular point).  The monodromy equation
dw/ds = -f_z/f_w dz/ds is integrated in double precision with an embedded
Dormand-Prince pair, every accepted node is corrected by Newton on
f(z, .) = 0, and the endpoint is polished in multiprecision before it is
matched against the target's Puiseux series.

For a base at infinity everything runs in the plane of zeta = 1/z on the
curve z^d f(1/z, w), where the singular points sit at 1/s.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .curve import Curve, differentiate, reverse_at_infinity
from .numerics import (
    GUARD_DIGITS,
    BasinError,
    digits_to_bits,
    find_roots,
    refine_root,
    to_complex,
    to_mpc,
)
from .puiseux import ExpansionError, ExpansionSet, eval_series, expand
from .singular import INFINITY, SingularPoint, SingularSet

__all__ = [
    "TrackingError",
    "MatchError",
    "Node",
    "Segment",
    "ContinuationPath",
    "Hop",
    "ContinuationRecord",
    "RadiusResult",
    "plane_nodes",
    "build_path",
    "track_sheet",
    "match_sheet",
    "find_clsp",
    "class_radius",
    "monodromy_permutation",
    "cycle_type",
    "loop_path",
    "trace_lines",
]

DETOUR_FACTOR = 1.0 / 3.0
MATCH_TOL = 1e-10


class TrackingError(ArithmeticError):
    """Path tracking failed; ``reached`` is the path parameter attained."""

    def __init__(self, message: str, reached: float = 0.0):
        super().__init__(f"{message} (reached s={reached:.6g})")
        self.reached = reached


class MatchError(ArithmeticError):
    """No unique target sheet within tolerance."""

    def __init__(self, message: str, best: float = math.inf, second: float = math.inf):
        super().__init__(f"{message} (best {best:.3e}, runner-up {second:.3e})")
        self.best = best
        self.second = second


# --------------------------------------------------------------------------
# geometry


@dataclass(frozen=True)
class Node:
    """A singular point in the working plane."""

    index: int  # base-relative
    label: int | None  # global label, None for the point at infinity
    loc: object  # mpc in the working plane
    r: float  # distance to the nearest other node in this plane
    point: SingularPoint

    @property
    def c(self) -> complex:
        return to_complex(self.loc)


def plane_nodes(sset: SingularSet) -> tuple[list[Node], Node | None]:
    """Nodes of the working plane plus the node at the plane's infinity.

    For a finite base this is the z-plane and the far node is the point at
    infinity (if singular).  For the base at infinity the plane is
    zeta = 1/z: s maps to 1/s, and s = 0 becomes the far node.
    """
    if not sset.base.is_infinity:
        nodes = [Node(p.index, p.label, p.location, p.nearest_other_distance, p)
                 for p in sset.points if not p.is_infinity]
        inf = sset.infinity
        far = Node(inf.index, None, INFINITY, inf.nearest_other_distance, inf) if inf else None
        return nodes, far
    prec = digits_to_bits(max(sset.digits, 20) + GUARD_DIGITS)
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        locs = []
        far = None
        for p in sset.points:
            if p.is_infinity:
                locs.append((p, mpc(0)))
            elif p.location == 0:
                far = p
            else:
                locs.append((p, 1 / p.location))
        nodes = []
        for p, z in locs:
            best = math.inf
            for q, y in locs:
                if q is not p:
                    best = min(best, float(abs(z - y)))
            nodes.append(Node(p.index, p.label, z, best, p))
    far_node = None
    if far is not None:
        mins = min((abs(p.location) for p in sset.points
                    if not p.is_infinity and p.location != 0), default=None)
        far_node = Node(far.index, far.label, INFINITY,
                        float(mins) if mins is not None else math.inf, far)
    return nodes, far_node


@dataclass(frozen=True)
class Segment:
    """A line (z0 -> z1) or an arc about ``center`` from angle th0 by sweep."""

    kind: str
    z0: complex
    z1: complex
    center: complex = 0j
    radius: float = 0.0
    th0: float = 0.0
    sweep: float = 0.0

    def point(self, s: float) -> complex:
        if self.kind == "line":
            return self.z0 + (self.z1 - self.z0) * s
        return self.center + self.radius * cmath.exp(1j * (self.th0 + self.sweep * s))

    def velocity(self, s: float) -> complex:
        if self.kind == "line":
            return self.z1 - self.z0
        th = self.th0 + self.sweep * s
        return 1j * self.sweep * self.radius * cmath.exp(1j * th)

    @property
    def length(self) -> float:
        if self.kind == "line":
            return abs(self.z1 - self.z0)
        return abs(self.sweep) * self.radius

    def samples(self, k: int = 32) -> list[complex]:
        return [self.point(i / k) for i in range(k + 1)]


@dataclass(frozen=True)
class ContinuationPath:
    segments: tuple[Segment, ...]
    start: complex
    end: complex
    base: Node
    target: Node | None
    detours: tuple[int, ...] = ()  # indices of nodes bypassed by arcs

    @property
    def length(self) -> float:
        return sum(s.length for s in self.segments)

    def min_clearance(self, nodes: Sequence[Node]) -> float:
        """Smallest distance from the path to a node other than its ends."""
        skip = {self.base.index} | ({self.target.index} if self.target else set())
        best = math.inf
        for seg in self.segments:
            for z in seg.samples(64):
                for n in nodes:
                    if n.index not in skip:
                        best = min(best, abs(z - n.c))
        return best


def _endpoint(node: Node, toward: complex) -> complex:
    d = toward - node.c
    return node.c + node.r * DETOUR_FACTOR * d / abs(d)


def build_path(base: Node, target, nodes: Sequence[Node], end: complex | None = None) -> ContinuationPath:
    """Chord from the base disk to the target disk with detour arcs.

    ``target`` is a Node, or None together with an explicit ``end`` point
    (used for the far node).  Every other node whose disk (radius r/3)
    meets the chord is bypassed on an arc of that disk.  An arc on the side
    the chord already passes keeps the path homotopic to the chord; when the
    chord runs through the node itself the side with more clearance wins,
    counterclockwise on ties.
    """
    if target is not None:
        if abs(target.c - base.c) <= (base.r + target.r) * DETOUR_FACTOR:
            raise TrackingError("base and target disks overlap")
        A = _endpoint(base, target.c)
        D = _endpoint(target, base.c)
    else:
        A = _endpoint(base, end)
        D = end
    d = D - A
    L = abs(d)
    u = d / L
    skip = {base.index} | ({target.index} if target is not None else set())
    cuts = []
    for n in nodes:
        if n.index in skip:
            continue
        rel = (n.c - A) / u  # chord along the positive real axis
        delta = n.r * DETOUR_FACTOR
        if abs(rel.imag) >= delta:
            continue
        half = math.sqrt(delta * delta - rel.imag * rel.imag)
        t0, t1 = rel.real - half, rel.real + half
        if t1 <= 0 or t0 >= L:
            continue
        cuts.append((t0, t1, n, rel.imag, delta))
    cuts.sort(key=lambda c: c[0])
    segs: list[Segment] = []
    cur = 0.0
    used = []
    for t0, t1, n, off, delta in cuts:
        if t0 < cur:
            raise TrackingError("overlapping detour disks")
        p_in = A + u * t0
        p_out = A + u * t1
        if cur < t0:
            segs.append(Segment("line", A + u * cur, p_in))
        th_in = cmath.phase(p_in - n.c)
        th_out = cmath.phase(p_out - n.c)
        ccw = (th_out - th_in) % (2 * math.pi)
        cw = ccw - 2 * math.pi
        if abs(off) > 1e-12 * max(1.0, delta):
            # chord passes the node on one side: take the short arc there
            sweep = ccw if ccw < math.pi else cw
        else:
            sweep = _best_side(n, p_in, th_in, ccw, cw, delta, nodes, skip)
        segs.append(Segment("arc", p_in, p_out, n.c, delta, th_in, sweep))
        used.append(n.index)
        cur = t1
    if cur < L:
        segs.append(Segment("line", A + u * cur, D))
    return ContinuationPath(tuple(segs), A, D, base, target, tuple(used))


def _best_side(n, p_in, th_in, ccw, cw, delta, nodes, skip) -> float:
    def clearance(sweep):
        seg = Segment("arc", p_in, p_in, n.c, delta, th_in, sweep)
        best = math.inf
        for z in seg.samples(32):
            for m in nodes:
                if m.index not in skip and m.index != n.index:
                    best = min(best, abs(z - m.c))
        return best

    a, b = clearance(ccw), clearance(cw)
    if a >= b * (1 - 1e-12):
        return ccw
    return cw


def loop_path(base: Node) -> ContinuationPath:
    """Counterclockwise circle of radius r/3 about the base, from angle 0."""
    rad = base.r * DETOUR_FACTOR
    A = base.c + rad
    seg = Segment("arc", A, A, base.c, rad, 0.0, 2 * math.pi)
    return ContinuationPath((seg,), A, A, base, None)


# --------------------------------------------------------------------------
# tracking


class _Field:
    """Double-precision evaluation of f, f_z, f_w."""

    def __init__(self, curve: Curve):
        n, d = curve.degree_w, max(curve.degree_z, 0)
        C = np.zeros((n + 1, d + 1), dtype=complex)
        for i, a in enumerate(curve.coeffs):
            for j, c in enumerate(a.coeffs):
                C[i, j] = float(c)
        self.C = C
        self.Cz = C[:, 1:] * np.arange(1, d + 1) if d > 0 else np.zeros((n + 1, 1), dtype=complex)
        self.n, self.d = n, d

    def fiber(self, z: complex) -> np.ndarray:
        zp = z ** np.arange(self.d + 1)
        return self.C @ zp

    def fiber_z(self, z: complex) -> np.ndarray:
        zp = z ** np.arange(max(self.d, 1))
        return self.Cz @ zp[: self.Cz.shape[1]]

    def derivs(self, z: complex, w: complex):
        a = self.fiber(z)
        az = self.fiber_z(z)
        f = 0j
        fw = 0j
        fz = 0j
        for i in range(self.n, -1, -1):
            fw = fw * w + f
            f = f * w + a[i]
            fz = fz * w + az[i]
        return f, fz, fw

    def roots(self, z: complex) -> np.ndarray:
        a = self.fiber(z)
        return np.roots(a[::-1])


# Dormand-Prince 5(4)
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)


@dataclass
class TrackStats:
    accepted: int = 0
    rejected: int = 0


def _rk_step(field: _Field, seg: Segment, s: float, w: complex, h: float):
    k = []
    for i in range(7):
        si = s + _C[i] * h
        wi = w + h * sum(a * kk for a, kk in zip(_A[i], k))
        z = seg.point(si)
        _, fz, fw = field.derivs(z, wi)
        if fw == 0:
            raise ZeroDivisionError
        k.append(-fz / fw * seg.velocity(si))
    w5 = w + h * sum(b * kk for b, kk in zip(_B5, k))
    w4 = w + h * sum(b * kk for b, kk in zip(_B4, k))
    return w5, abs(w5 - w4)


def _newton(field: _Field, z: complex, w: complex, iters: int = 4) -> complex:
    for _ in range(iters):
        f, _, fw = field.derivs(z, w)
        if fw == 0 or not cmath.isfinite(f) or not cmath.isfinite(fw):
            break
        dw = f / fw
        w -= dw
        if abs(dw) <= 1e-15 * max(1.0, abs(w)):
            break
    return w


def _separation(field: _Field, z: complex, w: complex) -> float:
    r = field.roots(z)
    d = np.sort(np.abs(r - w))
    return float(d[1]) if len(d) > 1 else math.inf


def track_sheet(
    curve: Curve,
    path: ContinuationPath,
    w_start,
    tol: float = 1e-12,
    stats: TrackStats | None = None,
    field_: _Field | None = None,
) -> complex:
    """Carry w(A) = w_start along the path; returns w at the end (double).

    Predictor: adaptive Dormand-Prince step on dw/ds = -f_z/f_w dz/ds.
    Corrector: Newton on f(z, .) at the accepted node.  A step is rejected
    when the correction exceeds 10% of the distance to the nearest other
    root of f(z, .).
    """
    field_ = field_ or _Field(curve)
    stats = stats if stats is not None else TrackStats()
    w = complex(to_complex(w_start)) if not isinstance(w_start, complex) else w_start
    w = _newton(field_, path.start, w)
    done = 0.0
    total = max(path.length, 1e-300)
    for seg in path.segments:
        if seg.length == 0:
            continue
        s = 0.0
        h = min(1.0, 0.05 * total / seg.length)
        while s < 1.0:
            h = min(h, 1.0 - s)
            if h < 1e-12:
                raise TrackingError("step size underflow", done + s * seg.length / total)
            try:
                w_pred, err = _rk_step(field_, seg, s, w, h)
            except ZeroDivisionError:
                h *= 0.25
                stats.rejected += 1
                continue
            scale = tol * max(1.0, abs(w_pred))
            if not (err <= scale) or not math.isfinite(abs(w_pred)):
                stats.rejected += 1
                h *= max(0.2, 0.9 * (scale / err) ** 0.2) if err > 0 and math.isfinite(err) else 0.25
                continue
            z = seg.point(s + h)
            w_corr = _newton(field_, z, w_pred)
            sep = _separation(field_, z, w_corr)
            if abs(w_corr - w_pred) > 0.1 * sep:
                stats.rejected += 1
                h *= 0.5
                continue
            stats.accepted += 1
            w = w_corr
            s += h
            grow = 0.9 * (scale / err) ** 0.2 if err > 0 else 5.0
            h *= min(5.0, max(0.2, grow))
        done += seg.length / total
    return w


def refine_endpoint(curve: Curve, z, w, digits: int):
    """Newton-polish w at (z, w) on f(z, .) = 0 to ``digits`` digits."""
    bits = digits_to_bits(digits + GUARD_DIGITS)
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        zz = to_mpc(z)
        cs = [a(zz) for a in curve.coeffs]
        return refine_root(cs, to_mpc(w), digits)


# --------------------------------------------------------------------------
# matching


def match_sheet(value, values: Sequence, tol: float = MATCH_TOL) -> tuple[int, float, float]:
    """(1-based index, best, runner-up) of the unique value within tol.

    Distances are relative to max(1, |value|).  Raises MatchError when the
    best is not below tol or the runner-up is within 10 tol.
    """
    value = to_mpc(value)
    scale = max(mpfr(1), abs(value))
    dist = [float(abs(value - v) / scale) for v in values]
    order = sorted(range(len(dist)), key=lambda i: dist[i])
    best = dist[order[0]]
    second = dist[order[1]] if len(order) > 1 else math.inf
    if best >= tol:
        raise MatchError("no target sheet within tolerance", best, second)
    if second <= 10 * tol:
        raise MatchError("ambiguous sheet match", best, second)
    return order[0] + 1, best, second


# --------------------------------------------------------------------------
# records


@dataclass(frozen=True)
class Hop:
    target_index: int
    target_label: int | None
    landed_sheet: int
    landed_code: str
    analytic: bool
    match_residual: float


@dataclass
class ContinuationRecord:
    base_sheet: int
    hops: list[Hop] = field(default_factory=list)
    clsp: SingularPoint | None = None
    status: str = "exhausted"  # or "terminated"

    @property
    def clsp_index(self):
        return None if self.clsp is None else self.clsp.index


@dataclass(frozen=True)
class RadiusResult:
    class_id: int
    clsp_index: int | None
    clsp_label: int | None
    clsp_is_infinity: bool
    radius: float
    radius_exact: object  # mpfr or inf
    radius_symbolic: str
    roottest_estimate: float | None = None
    percent_error: float | None = None

    def to_json(self) -> dict:
        return {
            "class_id": self.class_id,
            "clsp_index": self.clsp_index,
            "clsp_label": self.clsp_label,
            "clsp_infinity": self.clsp_is_infinity,
            "radius": self.radius if math.isfinite(self.radius) else None,
            "radius_symbolic": self.radius_symbolic,
            "roottest_estimate": self.roottest_estimate,
            "percent_error": self.percent_error,
        }


# --------------------------------------------------------------------------
# driver


class _Expansions:
    """Lazy, cached expansions at the nodes of a plane."""

    def __init__(self, curve: Curve, plane_curve: Curve, infinity_base: bool,
                 nterms: int, digits: int):
        self.curve = curve
        self.plane_curve = plane_curve
        self.infinity_base = infinity_base
        self.nterms = nterms
        self.digits = digits
        self.cache: dict = {}

    def at(self, node: Node, nterms: int | None = None, digits: int | None = None) -> ExpansionSet:
        nt = nterms or self.nterms
        dg = digits or self.digits
        key = (node.index, nt, dg)
        if key not in self.cache:
            if node.loc is INFINITY:
                # far node: f's infinity (finite base) or f's origin (base at infinity)
                if self.infinity_base:
                    ex = expand(self.curve, node.point.location, nt, dg,
                                reference_radius=node.r)
                else:
                    ex = expand(self.curve, INFINITY, nt, dg, reference_radius=node.r)
            else:
                ex = expand(self.plane_curve, node.loc, nt, dg, reference_radius=node.r)
            self.cache[key] = ex
        return self.cache[key]


def _local(node: Node, z):
    """Series variable at ``node`` for working-plane point z."""
    if node.loc is INFINITY:
        return 1 / to_mpc(z)
    return to_mpc(z) - node.loc


def find_clsp(
    curve: Curve,
    base_expansion: ExpansionSet | None,
    sset: SingularSet,
    nterms: int = 48,
    digits: int | None = None,
    sheets: Sequence[int] | None = None,
    max_targets: int | None = None,
    tol: float = MATCH_TOL,
    check_infinity: bool = True,
    on_hop: Callable | None = None,
) -> list[ContinuationRecord]:
    """Continue every base sheet across s_2, s_3, ... until it meets a CLSP.

    A sheet stops at the first singular point where it lands on a sheet
    whose class is not T or E.  Sheets that pass every finite point are
    checked against the far node (infinity, or the origin when the base is
    infinity) and marked exhausted.
    """
    digits = digits or max(sset.digits, 30)
    infinity_base = sset.base.is_infinity
    plane = reverse_at_infinity(curve) if infinity_base else curve
    nodes, far = plane_nodes(sset)
    base = nodes[0]
    ex = _Expansions(curve, plane, infinity_base, nterms, digits)
    if base_expansion is None:
        base_expansion = ex.at(base)
    n = len(base_expansion.series)
    chosen = list(sheets) if sheets is not None else list(range(1, n + 1))
    records = {i: ContinuationRecord(base_sheet=i) for i in chosen}
    active = list(chosen)
    fld = _Field(plane)
    targets = nodes[1:]
    if max_targets is not None:
        targets = targets[:max_targets]
    bits = digits_to_bits(digits + GUARD_DIGITS)
    for tgt in targets:
        if not active:
            break
        path = build_path(base, tgt, nodes)
        landed = _carry(plane, fld, path, base, base_expansion, active, digits, bits)
        seen: dict[int, int] = {}
        for sheet, wD in landed.items():
            j, best, code, analytic = _land(ex, tgt, path.end, wD, tol, digits)
            rec = records[sheet]
            hop = Hop(tgt.index, tgt.label, j, code, analytic, best)
            rec.hops.append(hop)
            if on_hop:
                on_hop(sheet, hop)
            if analytic:
                if j in seen:
                    raise MatchError(f"sheets {seen[j]} and {sheet} landed on the same sheet {j}"
                                     f" of s_{tgt.index}", best)
                seen[j] = sheet
            else:
                rec.clsp = tgt.point
                rec.status = "terminated"
        active = [s for s in active if records[s].status != "terminated"]
    if active and check_infinity and far is not None and max_targets is None:
        big = max((abs(nd.c) for nd in nodes), default=1.0)
        end = base.c + (3 * big + abs(base.c) + 1.0)
        path = build_path(base, None, nodes, end=end)
        landed = _carry(plane, fld, path, base, base_expansion, active, digits, bits)
        for sheet, wD in landed.items():
            far_ex = ex.at(far)
            with gmpy2.context(gmpy2.get_context(), precision=bits):
                vals = far_ex.values(_local(far, path.end))
            j, best, _ = match_sheet(wD, vals, tol)
            cls = far_ex.class_of(j)
            hop = Hop(far.index, far.label, j, cls.code, cls.branch_class.analytic, best)
            records[sheet].hops.append(hop)
            if on_hop:
                on_hop(sheet, hop)
            if not cls.branch_class.analytic:
                records[sheet].clsp = far.point
    return [records[i] for i in chosen]


def _carry(plane, fld, path, base, base_expansion, active, digits, bits) -> dict:
    out = {}
    for sheet in active:
        with gmpy2.context(gmpy2.get_context(), precision=bits):
            wA = eval_series(base_expansion.series[sheet - 1], _local(base, path.start))[0]
        w = track_sheet(plane, path, to_complex(wA), field_=fld)
        try:
            wD = refine_endpoint(plane, path.end, w, digits)
        except BasinError as exc:
            raise TrackingError(f"endpoint refinement failed for sheet {sheet}: {exc}", 1.0)
        out[sheet] = wD
    return out


def _land(ex: _Expansions, tgt: Node, D, wD, tol, digits):
    """Match wD against the target series, escalating terms then digits."""
    ladder = [(ex.nterms, digits), (2 * ex.nterms, digits), (2 * ex.nterms, 2 * digits)]
    last = None
    for nt, dg in ladder:
        tex = ex.at(tgt, nt, dg)
        with gmpy2.context(gmpy2.get_context(), precision=digits_to_bits(dg + GUARD_DIGITS)):
            vals = tex.values(_local(tgt, D))
        try:
            j, best, _ = match_sheet(wD, vals, tol)
        except MatchError as exc:
            last = exc
            continue
        cls = tex.class_of(j)
        return j, best, cls.code, cls.branch_class.analytic
    raise MatchError(f"could not match at s_{tgt.index}: {last}",
                     getattr(last, "best", math.inf), getattr(last, "second", math.inf))


def class_radius(records: Sequence[ContinuationRecord], cls, sset: SingularSet,
                 sheet_of: Callable | None = None) -> RadiusResult:
    """Minimum over the class members of the base-to-CLSP distance.

    ``records`` must cover every member sheet; ``sheet_of(member)`` maps a
    member series to its 1-based sheet index (defaults to record order).
    """
    base = sset.base
    by_sheet = {r.base_sheet: r for r in records}
    members = cls.members
    best = None
    best_pt = None
    prec = digits_to_bits(max(sset.digits, 20) + GUARD_DIGITS)
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        for m in members:
            sheet = sheet_of(m) if sheet_of else None
            rec = by_sheet.get(sheet) if sheet is not None else None
            if rec is None:
                raise KeyError(f"no continuation record for sheet {sheet}")
            pt = rec.clsp
            if pt is None:
                dist = mpfr("inf")
            elif pt.is_infinity:
                dist = mpfr("inf")
            elif base.is_infinity:
                dist = mpfr("inf") if pt.location == 0 else 1 / abs(pt.location)
            else:
                dist = abs(pt.location - base.location)
            if best is None or _closer(dist, pt, best, best_pt):
                best, best_pt = dist, pt
    if best_pt is None or not gmpy2.is_finite(best):
        sym = "inf"
        return RadiusResult(cls.class_id, best_pt.index if best_pt else None,
                            best_pt.label if best_pt else None,
                            bool(best_pt and best_pt.is_infinity), math.inf, best, sym)
    if base.is_infinity:
        sym = f"|1/s_{best_pt.label}|"
    else:
        sym = f"|s_{base.label} - s_{best_pt.label}|"
    return RadiusResult(cls.class_id, best_pt.index, best_pt.label, False,
                        float(best), best, sym)


def _closer(d, pt, best, best_pt) -> bool:
    """Smaller distance; equal distances (conjugate points) go to the lower index."""
    if gmpy2.is_finite(d) and gmpy2.is_finite(best):
        tol = mpfr(10) ** (-(gmpy2.get_context().precision // 8))
        if abs(d - best) <= tol * max(mpfr(1), best):
            return pt is not None and (best_pt is None or pt.index < best_pt.index)
    return d < best


def monodromy_permutation(curve: Curve, expansion: ExpansionSet, node: Node,
                          digits: int | None = None) -> list[int]:
    """Sheet permutation induced by one counterclockwise loop about the base.

    Returns perm with perm[i-1] = sheet reached from sheet i.
    """
    digits = digits or expansion.digits
    plane = expansion.curve
    path = loop_path(node)
    fld = _Field(plane)
    bits = digits_to_bits(digits + GUARD_DIGITS)
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        vals = expansion.values(_local(node, path.start))
    perm = []
    for i, s in enumerate(expansion.series):
        w = track_sheet(plane, path, to_complex(vals[i]), field_=fld)
        wD = refine_endpoint(plane, path.end, w, digits)
        j, _, _ = match_sheet(wD, vals)
        perm.append(j)
    return perm


def cycle_type(perm: Sequence[int]) -> list[int]:
    seen = set()
    out = []
    for i in range(1, len(perm) + 1):
        if i in seen:
            continue
        k, j = 0, i
        while j not in seen:
            seen.add(j)
            j = perm[j - 1]
            k += 1
        out.append(k)
    return sorted(out)


def trace_lines(records: Sequence[ContinuationRecord]) -> str:
    """JSON lines, one per hop."""
    out = []
    for rec in records:
        for h in rec.hops:
            out.append(json.dumps({
                "sheet": rec.base_sheet,
                "target_index": h.target_index,
                "landed_index": h.landed_sheet,
                "landed_class": h.landed_code,
                "match_residual": h.match_residual,
            }, sort_keys=True))
    return "\n".join(out) + ("\n" if out else "")
