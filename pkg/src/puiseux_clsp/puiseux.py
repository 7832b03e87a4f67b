"""Puiseux expansions of w(z) at a point by the Newton polygon.

The polygon steps are done numerically at working precision: a coefficient
is treated as zero when it is below 10^(-P/2) of the sum of the absolute
values that produced it.  Once a root of the characteristic polynomial is
simple the remaining terms come from a linear recurrence (lifting), which is
what makes several hundred or thousand terms affordable.

Only one series per conjugate class is computed; the others follow from
t -> e^(2 pi i j / c) t.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .curve import Curve, differentiate, reverse_at_infinity
from .numerics import (
    GUARD_DIGITS,
    decimal_string,
    digits_to_bits,
    find_roots,
    precision,
    principal_root,
    refine_root,
    to_complex,
    to_mpc,
)
from .singular import INFINITY, SingularPoint

__all__ = [
    "ExpansionError",
    "BranchClass",
    "PuiseuxSeries",
    "ConjugateClass",
    "ExpansionSet",
    "expand",
    "conjugate",
    "group_conjugates",
    "classify",
    "branch_code",
    "eval_series",
    "derivative_at_center",
    "is_removable",
    "format_series",
]

UNBOUNDED = math.inf


class ExpansionError(ArithmeticError):
    """The expansion could not be completed at the requested precision."""


# --------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class BranchClass:
    tag: str
    cycle: int
    order: int

    @property
    def code(self) -> str:
        return branch_code(self.tag, self.cycle, self.order)

    @property
    def analytic(self) -> bool:
        """Single-valued and bounded at the center (T or E)."""
        return self.tag in ("T", "E")

    def __str__(self):
        return self.code


def branch_code(tag: str, p: int, q: int) -> str:
    """X_p^q with the subscript dropped for p = 1 and the superscript for q = 1."""
    out = tag
    if p != 1:
        out += f"_{p}"
    if q != 1 and tag not in ("T", "E"):
        out += f"^{q}"
    return out


@dataclass(frozen=True)
class PuiseuxSeries:
    """sum_k a_k (z - z0)^(m_k / c), stored densely.

    ``dense[j]`` is the coefficient of t^(start + j) where t^c = z - z0, so
    the exponent numerators are start, start+1, ...  Zero slots are kept;
    :attr:`exponent_numerators` and :attr:`coefficients` give the sparse
    view with numerically negligible slots removed.  For an expansion at
    infinity the variable is 1/z.
    """

    center: object
    cycle: int
    start: int
    dense: tuple
    digits: int
    order: int
    class_id: int = 0
    conjugate_index: int = 0

    @property
    def top(self) -> int:
        """Largest exponent numerator carried."""
        return self.start + len(self.dense) - 1

    @property
    def exponent_numerators(self) -> list[int]:
        mask = _nonzero_mask(self.dense, self.cycle, self.digits)
        return [self.start + j for j, keep in enumerate(mask) if keep]

    @property
    def coefficients(self) -> list:
        mask = _nonzero_mask(self.dense, self.cycle, self.digits)
        return [a for a, keep in zip(self.dense, mask) if keep]

    def terms(self) -> list[tuple[int, object]]:
        mask = _nonzero_mask(self.dense, self.cycle, self.digits)
        return [(self.start + j, a) for j, (a, keep) in enumerate(zip(self.dense, mask)) if keep]

    def coefficient(self, m: int):
        """Coefficient of t^m (zero outside the stored range)."""
        j = m - self.start
        if 0 <= j < len(self.dense):
            return self.dense[j]
        return mpc(0)

    def truncate(self, z_order) -> PuiseuxSeries:
        """Keep exponents m/c <= z_order."""
        top = math.floor(Fraction(z_order) * self.cycle)
        keep = max(top - self.start + 1, 1)
        return replace(self, dense=self.dense[:keep])

    def __call__(self, t):
        return eval_series(self, t)[0]

    def to_json(self, digits: int | None = None) -> dict:
        d = digits or min(self.digits, 30)
        return {
            "center": _center_json(self.center, d),
            "cycle": self.cycle,
            "order": self.order,
            "class_id": self.class_id,
            "conjugate_index": self.conjugate_index,
            "terms": [
                {"num": m, "den": self.cycle,
                 "re": decimal_string(a.real, d), "im": decimal_string(a.imag, d)}
                for m, a in self.terms()
            ],
        }

    def __str__(self):
        return format_series(self)


@dataclass(frozen=True)
class ConjugateClass:
    members: tuple[PuiseuxSeries, ...]
    cycle: int
    order: int
    branch_class: BranchClass
    class_id: int = 0

    @property
    def code(self) -> str:
        return self.branch_class.code

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class ExpansionSet:
    """All n series at one center, in reference-point order."""

    center: object
    curve: Curve
    series: tuple[PuiseuxSeries, ...]
    classes: tuple[ConjugateClass, ...]
    reference_point: object
    digits: int
    nterms: int
    radius_hint: float = math.inf
    ties: tuple = ()

    @property
    def is_infinity(self) -> bool:
        return self.center is INFINITY

    def class_of(self, sheet: int) -> ConjugateClass:
        """Class of the 1-based sheet index."""
        cid = self.series[sheet - 1].class_id
        return self.classes[cid]

    def values(self, t) -> list:
        return [eval_series(s, t)[0] for s in self.series]

    def to_json(self, digits: int | None = None) -> dict:
        d = digits or min(self.digits, 30)
        return {
            "center": _center_json(self.center, d),
            "digits": self.digits,
            "nterms": self.nterms,
            "classes": [
                {"class_id": c.class_id, "code": c.code, "cycle": c.cycle, "order": c.order,
                 "sheets": [self.series.index(m) + 1 for m in c.members]}
                for c in self.classes
            ],
            "series": [s.to_json(d) for s in self.series],
        }


def _center_json(center, digits):
    if center is INFINITY:
        return {"infinity": True}
    return {"re": decimal_string(center.real, digits), "im": decimal_string(center.imag, digits)}


# --------------------------------------------------------------------------
# negligible coefficients


def _log10_abs(a) -> float:
    v = abs(a)
    if v == 0:
        return -math.inf
    return float(gmpy2.log10(v))


def _nonzero_mask(dense: Sequence, cycle: int, digits: int) -> list[bool]:
    """A slot is negligible when it is 10^(-P/2) below its neighbourhood."""
    if not dense:
        return []
    logs = np.array([_log10_abs(a) for a in dense])
    w = max(8, 4 * cycle)
    n = len(logs)
    local = np.full(n, -np.inf)
    for s in range(-w, w + 1):
        if s == 0:
            continue
        lo, hi = max(0, -s), min(n, n - s)
        if lo < hi:
            local[lo:hi] = np.maximum(local[lo:hi], logs[lo + s:hi + s])
    cut = digits / 2
    keep = np.isfinite(logs) & ~(logs < local - cut)
    return keep.tolist()


# --------------------------------------------------------------------------
# bivariate working polynomials: rows[i] = coefficients of y^i in x


class _BiPoly:
    """Numeric polynomial sum_i rows[i](x) y^i with per-coefficient mass."""

    __slots__ = ("rows", "mass")

    def __init__(self, rows: list[list], mass: list[list[float]]):
        self.rows = rows
        self.mass = mass

    @property
    def n(self) -> int:
        return len(self.rows) - 1

    def clean(self, tol: float) -> _BiPoly:
        rows, mass = [], []
        for r, m in zip(self.rows, self.mass):
            r2 = [mpc(0) if abs(a) <= tol * mm else a for a, mm in zip(r, m)]
            while r2 and r2[-1] == 0:
                r2.pop()
            rows.append(r2)
            mass.append(m[: len(r2)])
        while len(rows) > 1 and not rows[-1]:
            rows.pop()
            mass.pop()
        return _BiPoly(rows, mass)

    def valuation(self, i: int):
        for j, a in enumerate(self.rows[i]):
            if a != 0:
                return j
        return None

    def drop_zero_root(self) -> _BiPoly:
        """Divide by y (used when y = 0 is an exact branch)."""
        return _BiPoly(self.rows[1:], self.mass[1:])


def _shifted(curve: Curve, z0) -> _BiPoly:
    """F(x, y) = f(z0 + x, y) by Taylor shift of every a_i."""
    rows, mass = [], []
    exact = z0 == 0
    az0 = float(abs(z0)) if not exact else 0.0
    for a in curve.coeffs:
        cs = a.coeffs
        d = len(cs) - 1
        if exact:
            rows.append([to_mpc(c) for c in cs])
            mass.append([float(abs(c)) for c in cs])
            continue
        r, m = [], []
        zp = [mpc(1)]
        for _ in range(d):
            zp.append(zp[-1] * z0)
        for j in range(d + 1):
            acc = mpc(0)
            mm = 0.0
            for k in range(j, d + 1):
                if cs[k]:
                    b = math.comb(k, j)
                    acc += b * to_mpc(cs[k]) * zp[k - j]
                    mm += b * float(abs(cs[k])) * az0 ** (k - j)
            r.append(acc)
            m.append(mm)
        rows.append(r)
        mass.append(m)
    return _BiPoly(rows, mass)


def _lower_hull(pts: list[tuple[int, int]]) -> list[tuple[int, int]]:
    hull: list[tuple[int, int]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


@dataclass
class _Edge:
    i1: int
    i2: int
    alpha: int  # y ~ x^(alpha/beta)
    beta: int
    psi: list  # coefficients in u = c^beta, ascending


def _edges(F: _BiPoly, imax: int, positive_only: bool) -> list[_Edge]:
    pts = []
    for i in range(0, imax + 1):
        v = F.valuation(i)
        if v is not None:
            pts.append((i, v))
    hull = _lower_hull(pts)
    vals = dict(pts)
    out = []
    for (i1, v1), (i2, v2) in zip(hull, hull[1:]):
        mu = Fraction(v1 - v2, i2 - i1)
        if positive_only and mu <= 0:
            continue
        alpha, beta = mu.numerator, mu.denominator
        psi = []
        for i in range(i1, i2 + 1, beta):
            v = vals.get(i)
            if v is not None and (v - v1) * (i2 - i1) == (v2 - v1) * (i - i1):
                psi.append(F.rows[i][v])
            else:
                psi.append(mpc(0))
        out.append(_Edge(i1, i2, alpha, beta, psi))
    return out


def _psi_roots(psi: list, digits: int) -> list[tuple[object, int]]:
    """Distinct nonzero roots of psi with multiplicities, refined."""
    deg = len(psi) - 1
    if deg == 1:
        return [(-psi[0] / psi[1], 1)]
    tol = mpfr(10) ** (-(digits / (2 * deg)))
    rs = find_roots(psi, max(digits, 20), merge_tol=tol, maxiter=2000)
    out = []
    for r, m in zip(rs.roots, rs.multiplicities):
        if m > 1:
            # the (m-1)-th derivative has a simple root there
            d = list(psi)
            for _ in range(m - 1):
                d = [k * c for k, c in enumerate(d)][1:]
            try:
                r = refine_root(d, r, digits)
            except ArithmeticError:
                pass
        out.append((mpc(r), m))
    return out


def _substitute(F: _BiPoly, e: _Edge, c) -> _BiPoly:
    """G(x1, y1) = x1^(-N) F(x1^beta, x1^alpha (c + y1))."""
    alpha, beta = e.alpha, e.beta
    N = None
    for k in range(F.n + 1):
        v = F.valuation(k)
        if v is not None:
            val = beta * v + alpha * k
            N = val if N is None else min(N, val)
    ac = float(abs(c))
    nrows = F.n
    size = 0
    for k in range(F.n + 1):
        if F.rows[k]:
            size = max(size, beta * (len(F.rows[k]) - 1) + alpha * k - N + 1)
    rows = [[mpc(0)] * size for _ in range(nrows + 1)]
    mass = [[0.0] * size for _ in range(nrows + 1)]
    cpow = [mpc(1)]
    for _ in range(F.n):
        cpow.append(cpow[-1] * c)
    for k in range(F.n + 1):
        rk, mk = F.rows[k], F.mass[k]
        for j, a in enumerate(rk):
            if a == 0:
                continue
            ex = beta * j + alpha * k - N
            if ex < 0:
                raise ExpansionError("coefficient below the Newton polygon")
            ma = mk[j]
            for i in range(0, k + 1):
                b = math.comb(k, i)
                rows[i][ex] += b * a * cpow[k - i]
                mass[i][ex] += b * ma * ac ** (k - i)
    return _BiPoly(rows, mass)


# a branch under construction: y = sum_j coeffs[j] t^(start + j), x = t^E;
# ``lead_known`` says coeffs[0] is structurally nonzero
@dataclass
class _Frac:
    E: int
    start: int
    coeffs: list
    lead_known: bool
    order: int | None = None  # first nonzero exponent other than 0, if known


def _lift(G: _BiPoly, K: int) -> list:
    """y1 = sum_{k=1..K} b_k x1^k with G(x1, y1) = 0 and G_1(0) != 0."""
    n = G.n
    if K <= 0:
        return []
    g10 = G.rows[1][0] if G.rows[1] else mpc(0)
    if g10 == 0:
        raise ExpansionError("lifting requires a simple root")
    rows = [np.array(r, dtype=object) for r in G.rows]
    zero = mpc(0)
    Y = [None] + [np.array([zero] * (K + 1), dtype=object) for _ in range(n)]
    b = Y[1]
    for k in range(1, K + 1):
        for i in range(2, n + 1):
            if k >= i:
                Y[i][k] = np.dot(b[1:k], Y[i - 1][k - 1:0:-1])
        s = rows[0][k] if k < len(rows[0]) else zero
        for i in range(1, n + 1):
            r = rows[i]
            if len(r) == 0:
                continue
            jmax = min(len(r) - 1, k)
            j0 = 1 if i == 1 else 0
            if jmax >= j0:
                s += np.dot(r[j0:jmax + 1], Y[i][k - jmax:k - j0 + 1][::-1])
        b[k] = -s / g10
    return list(b[1:])


def _branches(F: _BiPoly, need: int, digits: int, tol: float, top: bool) -> list[_Frac]:
    """One representative branch per conjugate class of F(x, y) = 0.

    At the top level every branch is returned; below it only the branches
    with y -> 0 (the part of the polygon left of the first row with a
    nonzero constant term).  ``need`` is the x-order required.
    """
    F = F.clean(tol)
    if top:
        imax = F.n
    else:
        imax = next(i for i in range(F.n + 1) if F.rows[i] and F.rows[i][0] != 0)
    out: list[_Frac] = []
    if not F.rows[0]:
        # y = 0 is an exact branch
        out.append(_Frac(1, 0, [], False))
        F = F.drop_zero_root()
        if top:
            imax = F.n
        else:
            imax = next(i for i in range(F.n + 1) if F.rows[i] and F.rows[i][0] != 0)
        if imax == 0:
            return out
    for e in _edges(F, imax, positive_only=not top):
        for u, m in _psi_roots(e.psi, digits):
            c = principal_root(u, e.beta)
            K1 = need * e.beta - e.alpha
            G = _substitute(F, e, c)
            if m == 1:
                b = _lift(G.clean(tol), K1)
                sub = [_Frac(1, 1, b, False)]
            else:
                sub = _branches(G, K1, digits, tol, top=False)
            for s in sub:
                out.append(_compose(e.alpha, e.beta, c, s))
    return out


def _compose(alpha: int, beta: int, c, s: _Frac) -> _Frac:
    """y = x^(alpha/beta) (c + s(x1)) with x = x1^beta and x1 = t^(s.E)."""
    E = beta * s.E
    start = alpha * s.E
    coeffs = [c]
    if s.coeffs:
        coeffs += [mpc(0)] * (s.start - 1) + list(s.coeffs)
    if start != 0:
        order = start
    elif s.coeffs and s.lead_known:
        order = s.start
    else:
        order = None
    return _Frac(E, start, coeffs, True, order)


# --------------------------------------------------------------------------
# public operations


def _center_of(center):
    if isinstance(center, SingularPoint):
        return center.location, center.nearest_other_distance
    return center, None


def expand(
    c: Curve,
    center,
    nterms: int,
    digits: int,
    reference_radius: float | None = None,
    reference_direction=None,
) -> ExpansionSet:
    """Puiseux expansion of w(z) at ``center`` through z-order ``nterms``.

    ``center`` is a SingularPoint, a number, or INFINITY (expanded as
    z^d f(1/z, w) at 0).  Every series carries all exponents m/c <= nterms.
    Series are ordered by their values at the reference point
    t = (r/3) * direction, r the distance to the nearest other singular
    point, direction 1 unless ``reference_direction`` is given.
    """
    if nterms < 1:
        raise ValueError("nterms must be positive")
    if c.degree_w < 1:
        raise ValueError("curve has zero degree in w")
    loc, r = _center_of(center)
    if reference_radius is not None:
        r = reference_radius
    curve = c
    if loc is INFINITY:
        curve = reverse_at_infinity(c)
    bits = digits_to_bits(digits + GUARD_DIGITS)
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        z0 = mpc(0) if loc is INFINITY else to_mpc(loc)
        F = _shifted(curve, z0)
        tol = 10.0 ** (-(digits / 2))
        reps = _branches(F, nterms, digits, tol, top=True)
        if sum(_cycle_of(f) for f in reps) != curve.degree_w:
            raise ExpansionError("branch count does not match the degree in w; raise precision")
        classes_raw = []
        for f in reps:
            rep = _finish(f, loc, nterms, digits)
            members = [conjugate(rep, j) for j in range(rep.cycle)]
            classes_raw.append(members)
        if r is None or not math.isfinite(r):
            r = 1.0
        direction = to_mpc(reference_direction) if reference_direction is not None else mpc(1)
        direction = direction / abs(direction)
        p_ref = direction * (mpfr(r) / 3)
        return _assemble(loc, curve, classes_raw, p_ref, digits, nterms, r)


def _cycle_of(f: _Frac) -> int:
    return _reduce(f)[0]


def _reduce(f: _Frac) -> tuple[int, int]:
    """(cycle, scale) after removing a common factor of E and the exponents."""
    g = f.E
    for j, a in enumerate(f.coeffs):
        if a != 0:
            g = math.gcd(g, f.start + j)
    g = g or 1
    return f.E // g, g


def _finish(f: _Frac, loc, nterms: int, digits: int) -> PuiseuxSeries:
    cycle, g = _reduce(f)
    start = f.start // g
    coeffs = f.coeffs[::g]
    if not coeffs:
        coeffs = [mpc(0)]
        start = 0
    top = nterms * cycle
    keep = max(top - start + 1, 1)
    coeffs = (list(coeffs) + [mpc(0)] * max(0, keep - len(coeffs)))[:keep]
    if f.order is not None:
        order = f.order // g
    elif f.lead_known and start != 0:
        order = start
    else:
        order = _first_nonconstant(start, coeffs, cycle, digits)
    return PuiseuxSeries(
        center=loc,
        cycle=cycle,
        start=start,
        dense=tuple(coeffs),
        digits=digits,
        order=order,
    )


def _first_nonconstant(start, coeffs, cycle, digits) -> int:
    mask = _nonzero_mask(coeffs, cycle, digits)
    for j, keep in enumerate(mask):
        m = start + j
        if keep and m != 0:
            return m
    return 0


def _assemble(loc, curve, classes_raw, p_ref, digits, nterms, r) -> ExpansionSet:
    flat = []
    for k, members in enumerate(classes_raw):
        for s in members:
            v = eval_series(s, p_ref)[0]
            flat.append((v, s.dense[0], k, s))
    tol = mpfr(10) ** (-(digits // 2))
    flat.sort(key=functools.cmp_to_key(_value_cmp(tol)))
    ties = tuple((i + 1, i + 2) for i in range(len(flat) - 1)
                 if abs(flat[i][0] - flat[i + 1][0]) <= tol * max(1, abs(flat[i][0])))
    order_cls: list[int] = []
    for item in flat:
        if item[2] not in order_cls:
            order_cls.append(item[2])
    remap = {k: i for i, k in enumerate(order_cls)}
    series = tuple(replace(item[3], class_id=remap[item[2]]) for item in flat)
    groups = []
    for k in order_cls:
        members = tuple(sorted((s for s in series if s.class_id == remap[k]),
                               key=lambda s: s.conjugate_index))
        groups.append((k, members, classify_members(members, curve, digits)))
    # a removable center makes every analytic 1-cycle there an E branch
    if any(bc.tag == "E" for _, _, bc in groups):
        groups = [(k, m, BranchClass("E", 1, bc.order) if bc.tag == "T" else bc)
                  for k, m, bc in groups]
    classes = []
    for k, members, bc in groups:
        rep = members[0]
        classes.append(ConjugateClass(members=members, cycle=rep.cycle, order=rep.order,
                                      branch_class=bc, class_id=remap[k]))
    return ExpansionSet(center=loc, curve=curve, series=series, classes=tuple(classes),
                        reference_point=p_ref, digits=digits, nterms=nterms,
                        radius_hint=float(r), ties=ties)


def _value_cmp(tol):
    """Real part, then imaginary part, equal within tol; then leading coefficient."""

    def part(x, y):
        if abs(x - y) <= tol * max(1, abs(x), abs(y)):
            return 0
        return -1 if x < y else 1

    def cmp(a, b):
        va, vb = a[0], b[0]
        return (part(va.real, vb.real) or part(va.imag, vb.imag)
                or part(a[1].real, b[1].real) or part(a[1].imag, b[1].imag))

    return cmp


def conjugate(s: PuiseuxSeries, j: int) -> PuiseuxSeries:
    """Member j of the class: a_k -> a_k * exp(2 pi i j m_k / c)."""
    c = s.cycle
    j %= c
    if j == 0:
        return replace(s, conjugate_index=(s.conjugate_index) % c)
    with gmpy2.context(gmpy2.get_context(), precision=digits_to_bits(s.digits + GUARD_DIGITS)):
        pi2 = 2 * gmpy2.const_pi()
        roots = [gmpy2.exp(mpc(0, pi2 * k / c)) for k in range(c)]
        # exact values at the quarter turns
        for k in range(c):
            if (4 * k) % c == 0:
                roots[k] = [mpc(1), mpc(0, 1), mpc(-1), mpc(0, -1)][(4 * k) // c]
        dense = tuple(a * roots[(j * (s.start + i)) % c] if a != 0 else a
                      for i, a in enumerate(s.dense))
    return replace(s, dense=dense, conjugate_index=(s.conjugate_index + j) % c)


def group_conjugates(series: Sequence[PuiseuxSeries], digits: int | None = None) -> list[list[PuiseuxSeries]]:
    """Partition series into conjugate classes by explicit conjugation."""
    left = list(series)
    out = []
    while left:
        rep = left.pop(0)
        d = digits or rep.digits
        tol = mpfr(10) ** (-(d // 2))
        cls = [rep]
        for j in range(1, rep.cycle):
            target = conjugate(rep, j)
            best, bi = None, -1
            for k, s in enumerate(left):
                if s.cycle != rep.cycle or s.start != rep.start:
                    continue
                dist = _series_distance(target, s)
                if best is None or dist < best:
                    best, bi = dist, k
            if best is None or best > tol:
                raise ExpansionError(
                    f"unmatched conjugate (residual {float(best) if best is not None else math.inf:.3e})")
            cls.append(left.pop(bi))
        out.append(cls)
    return out


def _series_distance(a: PuiseuxSeries, b: PuiseuxSeries):
    n = min(len(a.dense), len(b.dense), 4 * a.cycle + 8)
    scale = max(max(abs(x) for x in a.dense[:n]), mpfr(1))
    return max(abs(x - y) for x, y in zip(a.dense[:n], b.dense[:n])) / scale


def classify_members(members, curve: Curve, digits: int) -> BranchClass:
    rep = members[0]
    p, q = rep.cycle, rep.order
    if p == 1:
        if rep.start < 0:
            return BranchClass("L", 1, rep.start)
        w0 = rep.coefficient(0)
        removable = is_removable(curve, 0 if rep.center is INFINITY else rep.center, w0, rep)
        return BranchClass("E" if removable else "T", 1, q)
    if rep.start < 0:
        return BranchClass("P", p, rep.start)
    if q < p:
        return BranchClass("V", p, q)
    return BranchClass("F", p, q)


def classify(cls: ConjugateClass, curve: Curve) -> BranchClass:
    """T/E/F/V/P/L tag from cycle p and order q; E by the triple-zero test.

    ``curve`` is the curve that was expanded (z^d f(1/z, w) for infinity).
    """
    return classify_members(cls.members, curve, cls.members[0].digits)


def eval_series(s: PuiseuxSeries, t) -> tuple:
    """(value, truncation estimate) of s at t - z0 = t, principal powers."""
    with gmpy2.context(gmpy2.get_context(), precision=digits_to_bits(s.digits + GUARD_DIGITS)):
        t = to_mpc(t)
        if t == 0:
            if s.start < 0:
                raise ZeroDivisionError("series has a pole at its center")
            return (s.dense[0] if s.start == 0 else mpc(0)), mpfr(0)
        tau = principal_root(t, s.cycle)
        acc = mpc(0)
        for a in reversed(s.dense):
            acc = acc * tau + a
        val = acc * tau ** s.start
        last = abs(s.dense[-1]) * abs(tau) ** s.top
        return val, last


def derivative_at_center(s: PuiseuxSeries):
    """dP/dz at the center: a number, or UNBOUNDED (math.inf)."""
    c = s.cycle
    if s.start < 0:
        return UNBOUNDED
    for m, a in s.terms():
        if 0 < m < c:
            return UNBOUNDED
    if c == 1 or c <= s.top:
        return s.coefficient(c) if _slot_nonzero(s, c) else mpc(0)
    return mpc(0)


def _slot_nonzero(s: PuiseuxSeries, m: int) -> bool:
    j = m - s.start
    if not 0 <= j < len(s.dense):
        return False
    return _nonzero_mask(s.dense, s.cycle, s.digits)[j]


def is_removable(curve: Curve, center, w0, series: PuiseuxSeries | None = None) -> bool:
    """f = f_z = f_w = 0 at (center, w0) and a finite derivative there."""
    digits = series.digits if series is not None else 50
    with gmpy2.context(gmpy2.get_context(), precision=digits_to_bits(digits + GUARD_DIGITS)):
        z = to_mpc(center)
        w = to_mpc(w0)
        tol = mpfr(10) ** (-(digits // 2))
        for g in (curve, differentiate(curve, "z"), differentiate(curve, "w")):
            val, mass = _eval_with_mass(g, z, w)
            if abs(val) > tol * mass:
                return False
    if series is not None and derivative_at_center(series) is UNBOUNDED:
        return False
    return True


def _eval_with_mass(g: Curve, z, w):
    az, aw = abs(z), abs(w)
    val = mpc(0)
    mass = mpfr(0)
    for a in reversed(g.coeffs):
        av = mpc(0)
        am = mpfr(0)
        for c in reversed(a.coeffs):
            av = av * z + to_mpc(c)
            am = am * az + abs(to_mpc(c))
        val = val * w + av
        mass = mass * aw + am
    return val, mass


def _fmt_num(a, digits: int) -> str:
    re_, im_ = float(a.real), float(a.imag)
    tiny = 10.0 ** (-digits - 2) * max(abs(re_), abs(im_), 1e-300)

    def g(x):
        return f"{x:.{digits}g}"

    if abs(im_) <= tiny:
        return g(re_)
    if abs(re_) <= tiny:
        return g(im_) + "i"
    return f"({g(re_)}{'+' if im_ >= 0 else '-'}{g(abs(im_))}i)"


def format_series(s: PuiseuxSeries, nterms: int = 8, digits: int = 6) -> str:
    """a z^(m/c) layout, first ``nterms`` nonzero terms."""
    parts = []
    for m, a in s.terms()[:nterms]:
        coef = _fmt_num(a, digits)
        e = Fraction(m, s.cycle)
        if e == 0:
            mono = ""
        elif e == 1:
            mono = " z"
        elif e.denominator == 1:
            mono = f" z^{e.numerator}"
        else:
            mono = f" z^({e.numerator}/{e.denominator})"
        parts.append(coef + mono)
    text = " + ".join(parts).replace("+ -", "- ") or "0"
    return text + " + ..."
