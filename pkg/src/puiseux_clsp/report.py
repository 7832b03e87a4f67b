"""End-to-end pipeline, tables and verification helpers."""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpc, mpfr

from .continuation import class_radius, find_clsp, trace_lines
from .curve import Curve, format_curve, parse_curve
from .numerics import GUARD_DIGITS, decimal_string, digits_to_bits, find_roots, to_mpc
from .puiseux import ConjugateClass, ExpansionSet, eval_series, expand
from .roottest import RootTestError, compare, default_order, estimate_radius
from .singular import INFINITY, SingularSet, order_from, singular_points

__all__ = [
    "Profile",
    "PROFILES",
    "Options",
    "CenterResult",
    "Report",
    "analyze_base",
    "run_report",
    "render_table",
    "verify_at",
    "VerifyResult",
    "sample_surface",
    "sig",
]


@dataclass(frozen=True)
class Profile:
    name: str
    digits: int
    nterms: int


PROFILES = {
    "ci": Profile("ci", 100, 128),
    "paper": Profile("paper", 400, 512),
}


@dataclass
class Options:
    profile: Profile = PROFILES["ci"]
    digits: int | None = None
    nterms: int | None = None
    bases: object = "all"  # "all", "origin", "infinity", or a list of labels / INFINITY
    roottest: bool = True
    window: tuple[int, int] | None = None
    fit: int | None = None  # 1 or 2; default by term count
    match_terms: int = 48
    workers: int = 1

    @property
    def P(self) -> int:
        return self.digits or self.profile.digits

    @property
    def N(self) -> int:
        return self.nterms or self.profile.nterms


def sig(x: float, n: int = 4) -> str:
    """n significant figures, fixed notation for moderate magnitudes."""
    if x is None:
        return "-"
    if not math.isfinite(x):
        return "inf"
    if x == 0:
        return "0"
    e = math.floor(math.log10(abs(x)))
    if -5 <= e < 6:
        return f"{x:.{max(n - 1 - e, 0)}f}"
    return f"{x:.{n - 1}e}"


@dataclass
class CenterResult:
    sset: SingularSet
    expansion: ExpansionSet
    records: list
    radii: list

    def clsp_name(self, r) -> str:
        if r.clsp_is_infinity:
            return "s_inf"
        if r.clsp_index is None:
            return "-"
        if self.sset.base.is_infinity:
            return f"s_{r.clsp_index}"
        return f"s_{r.clsp_label}"

    def to_json(self, digits: int) -> dict:
        base = self.sset.base
        rows = []
        for cls, r in zip(self.expansion.classes, self.radii):
            d = r.to_json()
            d["code"] = cls.code
            d["cycle"] = cls.cycle
            d["order"] = cls.order
            d["clsp"] = self.clsp_name(r)
            d["sheets"] = [self.expansion.series.index(m) + 1 for m in cls.members]
            if r.radius_exact is not None and gmpy2.is_finite(r.radius_exact):
                d["radius_digits"] = decimal_string(r.radius_exact, min(digits, 40))
            rows.append(d)
        errs = [r.percent_error for r in self.radii if r.percent_error is not None]
        return {
            "base": base.name,
            "label": base.label,
            "value": None if base.is_infinity else {
                "re": decimal_string(base.location.real, min(digits, 40)),
                "im": decimal_string(base.location.imag, min(digits, 40)),
            },
            "classes": rows,
            "percent_error": max(errs) if errs else None,
        }


def analyze_base(curve: Curve, points, base, opts: Options) -> CenterResult:
    """Expansion, continuation and radii for one base point."""
    P, N = opts.P, opts.N
    sset = order_from(points, base, curve, P)
    ex = expand(curve, sset.base, N, P, reference_radius=sset.base.nearest_other_distance)
    records = find_clsp(curve, ex, sset, nterms=min(opts.match_terms, N), digits=P)
    radii = []
    for cls in ex.classes:
        rr = class_radius(records, cls, sset, sheet_of=lambda m: ex.series.index(m) + 1)
        if opts.roottest and math.isfinite(rr.radius):
            order = opts.fit or default_order(N)
            try:
                fit = estimate_radius(cls.members[0], N, opts.window, order)
                rr = _with_roottest(rr, fit.radius)
            except RootTestError:
                pass
        radii.append(rr)
    return CenterResult(sset, ex, records, radii)


def _with_roottest(rr, estimate):
    from dataclasses import replace

    return replace(rr, roottest_estimate=estimate, percent_error=compare(rr.radius, estimate))


def _resolve_bases(points, bases):
    labels = [p.label for p in points if not p.is_infinity]
    has_inf = any(p.is_infinity for p in points)
    if bases == "all":
        return labels + ([INFINITY] if has_inf else [])
    if bases == "origin":
        for p in points:
            if not p.is_infinity and p.location == 0:
                return [p.label]
        raise ValueError("the origin is not a singular point")
    if bases in ("infinity", INFINITY):
        return [INFINITY]
    return list(bases)


def _analyze_job(args):
    text, P, base, opts = args
    curve = parse_curve(text)
    points = singular_points(curve, P)
    return analyze_base(curve, points, base, opts)


@dataclass
class Report:
    curve: Curve
    options: Options
    points: list
    centers: list = field(default_factory=list)

    def to_json(self) -> dict:
        P = self.options.P
        ordered = order_from(self.points, self.points[0].label, self.curve, P).points \
            if self.points and not self.points[0].is_infinity else tuple(self.points)
        by_label = sorted(ordered, key=lambda p: (p.is_infinity, p.label or 0))
        return {
            "curve": format_curve(self.curve),
            "profile": {"name": self.options.profile.name, "digits": P, "terms": self.options.N},
            "singular_points": [_point_json(p, P) for p in by_label],
            "centers": [c.to_json(P) for c in self.centers],
            "expansions": [c.expansion.to_json(min(P, 30)) for c in self.centers],
            "traces": [{"base": c.sset.base.name, "lines": trace_lines(c.records).splitlines()}
                       for c in self.centers],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    def table(self) -> str:
        return render_table(self.to_json())


def _point_json(p, P):
    d = {"label": p.label, "infinity": p.is_infinity, "is_pole_locus": p.is_pole_locus}
    if not p.is_infinity:
        d["re"] = decimal_string(p.location.real, min(P, 40))
        d["im"] = decimal_string(p.location.imag, min(P, 40))
    return d


def run_report(curve, options: Options | None = None) -> Report:
    """singular points, then per base: expansion, CLSPs, radii, root test."""
    opts = options or Options()
    if isinstance(curve, str):
        curve = parse_curve(curve)
    pts = singular_points(curve, opts.P)
    if not pts:
        return Report(curve, opts, [], [])
    bases = _resolve_bases(pts, opts.bases)
    if opts.workers > 1 and len(bases) > 1:
        jobs = [(format_curve(curve), opts.P, b, opts) for b in bases]
        with ProcessPoolExecutor(max_workers=opts.workers) as pool:
            centers = list(pool.map(_analyze_job, jobs))
    else:
        centers = [analyze_base(curve, pts, b, opts) for b in bases]
    return Report(curve, opts, pts, centers)


def _format_value(v) -> str:
    if v is None:
        return ""
    re_, im_ = float(v["re"]), float(v["im"])
    if im_ == 0:
        return sig(re_)
    if re_ == 0:
        return f"{sig(im_)} i"
    sign = "+" if im_ > 0 else "-"
    return f"{sig(re_)} {sign} {sig(abs(im_))} i"


def render_table(report: dict) -> str:
    """Plain-text table: s_b, value, (type, CLSP) list, % error."""
    head = ("s_b", "value", "(type, CLSP)", "% error")
    rows = []
    for c in report["centers"]:
        pairs = ", ".join(f"({k['code']},{k['clsp']})" for k in c["classes"])
        err = c["percent_error"]
        rows.append((c["base"], _format_value(c["value"]), pairs,
                     "-" if err is None else sig(err, 2)))
    widths = [max(len(r[i]) for r in rows + [head]) for i in range(4)]
    line = lambda r: "  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip()
    out = [line(head), line(tuple("-" * w for w in widths))]
    out += [line(r) for r in rows]
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# verification and surface samples


@dataclass(frozen=True)
class VerifyResult:
    z: object
    roots: list
    series_values: list
    pairing: list  # root index per series
    deviations: list
    max_deviation: object
    agreement_digits: float

    def table(self, digits: int = 12) -> str:
        out = ["sheet  series value                                 root"]
        for i, (v, j) in enumerate(zip(self.series_values, self.pairing)):
            r = self.roots[j]
            out.append(f"{i + 1:<5}  {_cfmt(v, digits):<45}  {_cfmt(r, digits)}")
        out.append(f"max deviation {float(self.max_deviation):.3e}"
                   f" ({self.agreement_digits:.1f} digits)")
        return "\n".join(out) + "\n"


def _cfmt(x, digits):
    re_ = decimal_string(x.real, digits)
    im_ = decimal_string(x.imag, digits)
    return f"{re_} {'+' if not im_.startswith('-') else '-'} {im_.lstrip('-')} i"


class DivergenceError(ValueError):
    pass


def verify_at(curve: Curve, z1, expansion: ExpansionSet, radii=None) -> VerifyResult:
    """Compare the roots of f(z1, .) with the series evaluated at z1.

    For an expansion at infinity the series variable is 1/z1.  ``radii``
    (one per class) bound the admissible |t|; without them the distance to
    the nearest other singular point is used.
    """
    P = expansion.digits
    bits = digits_to_bits(P + GUARD_DIGITS)
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        z = to_mpc(z1)
        t = 1 / z if expansion.is_infinity else z - to_mpc(expansion.center)
        bounds = [r.radius for r in radii] if radii is not None else \
            [expansion.radius_hint] * len(expansion.classes)
        for cls, R in zip(expansion.classes, bounds):
            if float(abs(t)) >= R:
                raise DivergenceError(f"|t| = {float(abs(t)):.6g} is outside the radius "
                                      f"{R:.6g} of class {cls.code}")
        vals = [eval_series(s, t)[0] for s in expansion.series]
        roots = list(find_roots(curve.fiber(z), P).roots)
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        free = list(range(len(roots)))
        pairing, devs = [], []
        for v in vals:
            j = min(free, key=lambda k: abs(roots[k] - v))
            free.remove(j)
            pairing.append(j)
            devs.append(abs(roots[j] - v))
        mx = max(devs) if devs else mpfr(0)
        scale = max([mpfr(1)] + [abs(r) for r in roots])
        rel = mx / scale
        agree = float(-gmpy2.log10(rel)) if rel > 0 else float(P)
    return VerifyResult(z, roots, vals, pairing, devs, mx, agree)


def sample_surface(cls: ConjugateClass, annulus, grid, part: str = "Re",
                   radius: float | None = None) -> list[tuple]:
    """Rows (sheet, Re t, Im t, value part) over a polar grid about the center.

    t is measured from the center (1/z for infinity).  ``radius`` defaults to
    no check; pass the class radius to reject annuli that leave the disk.
    """
    r0, r1 = float(annulus[0]), float(annulus[1])
    n_r, n_t = int(grid[0]), int(grid[1])
    if n_r < 1 or n_t < 1:
        raise ValueError("grid sizes must be positive")
    if radius is not None and r1 > radius * (1 + 1e-12):
        raise DivergenceError(f"annulus outer radius {r1} exceeds the class radius {radius}")
    if cls.order < 0 and r0 <= 0:
        raise DivergenceError("a pole class needs r0 > 0")
    if part not in ("Re", "Im"):
        raise ValueError("part must be Re or Im")
    rows = []
    digits = cls.members[0].digits
    with gmpy2.context(gmpy2.get_context(), precision=digits_to_bits(digits + GUARD_DIGITS)):
        for k, s in enumerate(cls.members):
            for i in range(n_r):
                r = r0 if n_r == 1 else r0 + (r1 - r0) * i / (n_r - 1)
                for j in range(n_t):
                    th = 2 * math.pi * j / n_t
                    t = mpc(r * math.cos(th), r * math.sin(th)) if j else mpc(r, 0)
                    if r == 0 and s.start < 0:
                        continue
                    v = eval_series(s, t)[0]
                    val = float(v.real if part == "Re" else v.imag)
                    rows.append((k + 1, float(t.real), float(t.imag), val))
    return rows
