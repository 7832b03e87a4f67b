"""Multiprecision complex arithmetic and polynomial root finding.

Numbers are :class:`gmpy2.mpc`; the working precision is a decimal digit
count P, converted to bits by :func:`digits_to_bits`.  gmpy2 contexts are
thread-local, so every public entry point here sets its own precision.
"""

from __future__ import annotations

import cmath
import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

__all__ = [
    "GUARD_DIGITS",
    "MIN_DIGITS",
    "ConvergenceError",
    "BasinError",
    "RootSet",
    "digits_to_bits",
    "precision",
    "to_mpc",
    "to_complex",
    "horner",
    "horner_with_derivative",
    "find_roots",
    "refine_root",
    "sort_key",
    "decimal_string",
    "parse_decimal",
    "principal_root",
    "principal_power",
]

MIN_DIGITS = 20
GUARD_DIGITS = 10
_LOG2_10 = math.log2(10)


class ConvergenceError(ArithmeticError):
    """Root iteration did not converge; ``residual`` is the best achieved."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (achieved residual {residual:.3e})")
        self.residual = residual


class BasinError(ArithmeticError):
    """Newton refinement did not decrease the residual."""


def digits_to_bits(digits: int) -> int:
    return int(math.ceil(digits * _LOG2_10)) + 8


@contextmanager
def precision(digits: int):
    """Set the gmpy2 working precision to ``digits`` decimal digits."""
    with gmpy2.context(gmpy2.get_context(), precision=digits_to_bits(digits)) as ctx:
        yield ctx


def to_mpc(x) -> mpc:
    """Convert Fraction / int / float / complex / mpfr / mpc at current precision."""
    if isinstance(x, mpc):
        return mpc(x)
    if isinstance(x, Fraction):
        return mpc(mpfr(x.numerator) / x.denominator)
    if isinstance(x, complex):
        return mpc(x.real, x.imag)
    return mpc(x)


def to_complex(x) -> complex:
    return complex(float(x.real), float(x.imag)) if isinstance(x, mpc) else complex(x)


def sort_key(x):
    """Deterministic ordering: real part, then imaginary part."""
    return (x.real, x.imag)


def horner(cs: Sequence, x):
    acc = 0
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def horner_with_derivative(cs: Sequence, x):
    p = 0
    dp = 0
    for c in reversed(cs):
        dp = dp * x + p
        p = p * x + c
    return p, dp


@dataclass
class RootSet:
    """Roots with multiplicities.

    ``residual_bound`` bounds |p(r)| for every returned root;
    ``error_bounds[i]`` is an a posteriori radius n*|p/p'| around root i
    (zero for merged clusters, where that inclusion does not apply).
    """

    roots: list
    multiplicities: list[int]
    residual_bound: float
    error_bounds: list[float] = field(default_factory=list)
    digits: int = 0

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    @property
    def degree(self) -> int:
        return sum(self.multiplicities)


def _coeff_norm(cs) -> mpfr:
    return max(abs(c) for c in cs)


def _initial_circle(cs: list[complex]) -> np.ndarray:
    """Seeds on circles from the upper hull of log|coefficients| (Bini)."""
    n = len(cs) - 1
    logs = [math.log(abs(c)) if c != 0 else -math.inf for c in cs]
    pts = [(k, logs[k]) for k in range(n + 1) if logs[k] > -math.inf]
    hull: list[tuple[int, float]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    seeds = []
    for (k1, l1), (k2, l2) in zip(hull, hull[1:]):
        cnt = k2 - k1
        radius = math.exp((l1 - l2) / cnt)
        for j in range(cnt):
            theta = 2 * math.pi * j / cnt + 2 * math.pi * k1 / (n + 1) + 0.4
            seeds.append(radius * cmath.exp(1j * theta))
    return np.array(seeds, dtype=complex)


def _aberth_double(cs: list[complex], seeds: np.ndarray, maxiter: int = 600) -> np.ndarray:
    """Vectorised Aberth-Ehrlich in double precision (warm start only)."""
    z = seeds.copy()
    n = len(z)
    rev = np.array(cs[::-1], dtype=complex)
    drev = np.polyder(rev)
    active = np.ones(n, dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(maxiter):
            p = np.polyval(rev, z)
            dp = np.polyval(drev, z)
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = np.sum(1.0 / diff, axis=1)
            step = ratio / (1 - ratio * s)
            step = np.where(active & np.isfinite(step), step, 0)
            z = z - step
            small = np.abs(step) <= 1e-14 * np.maximum(np.abs(z), 1e-300)
            active &= ~small
            if not active.any():
                break
    return z


def _mass(abs_cs: list, x) -> mpfr:
    """sum |c_k| |x|^k, the scale of rounding error when evaluating p(x)."""
    ax = abs(x)
    acc = mpfr(0)
    for c in reversed(abs_cs):
        acc = acc * ax + c
    return acc


def _aberth_mp(cs: list, z: list, maxiter: int) -> tuple[list, bool]:
    n = len(z)
    dcs = [k * c for k, c in enumerate(cs)][1:]
    abs_cs = [abs(c) for c in cs]
    eps = mpfr(2) ** (-(gmpy2.get_context().precision - 6))
    done = [False] * n
    for _ in range(maxiter):
        moved = False
        for k in range(n):
            if done[k]:
                continue
            zk = z[k]
            p, dp = horner_with_derivative(cs, zk)
            if abs(p) <= 8 * eps * _mass(abs_cs, zk):
                done[k] = True
                continue
            s = 0
            for j in range(n):
                if j != k:
                    d = zk - z[j]
                    if d != 0:
                        s += 1 / d
            ratio = p / dp if dp != 0 else mpc(0)
            denom = 1 - ratio * s
            step = ratio / denom if denom != 0 else ratio
            z[k] = zk - step
            if abs(step) <= eps * abs(z[k]):
                done[k] = True
            else:
                moved = True
        if not moved:
            return z, True
    return z, all(done)


def _newton_polish(cs: list, dcs: list, x, steps: int = 4):
    for _ in range(steps):
        p = horner(cs, x)
        dp = horner(dcs, x)
        if dp == 0 or p == 0:
            break
        x = x - p / dp
    return x


def find_roots(
    p: Sequence,
    digits: int,
    merge_tol=None,
    maxiter: int = 200,
) -> RootSet:
    """All complex roots of a univariate polynomial, to ``digits`` digits.

    ``p`` is an ascending coefficient list (Fractions, ints, complex or mpc)
    or a :class:`~puiseux_clsp.curve.UniPoly`.  Roots closer than
    ``merge_tol`` (default 10^(-P/2), relative to max(1, |root|)) are merged
    and reported once with multiplicity.  Results are sorted by
    (real, imaginary).
    """
    coeffs = list(getattr(p, "coeffs", p))
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial")
    if len(coeffs) == 1:
        raise ValueError("constant polynomial has no roots")
    if digits < MIN_DIGITS:
        raise ValueError(f"digits must be >= {MIN_DIGITS}")

    zeros = 0
    while coeffs[zeros] == 0:
        zeros += 1
    exact = coeffs[zeros:]
    with precision(digits + GUARD_DIGITS):
        roots: list = [mpc(0)] * zeros
        if len(exact) > 1:
            roots += _solve_nonzero(exact, digits, maxiter)
        tol_merge = mpfr(10) ** (-(digits // 2)) if merge_tol is None else mpfr(merge_tol)
        bits = max([gmpy2.get_context().precision] + [r.precision[0] for r in roots])
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        return _assemble(coeffs, roots, tol_merge, digits)


def _solve_nonzero(exact: list, digits: int, maxiter: int) -> list:
    n = len(exact) - 1
    cs = [to_mpc(c) for c in exact]
    if n == 1:
        return [-cs[0] / cs[1]]
    norm = _coeff_norm(cs)
    with np.errstate(all="ignore"):
        dcs = [to_complex(c / norm) for c in cs]
    seeds = _initial_circle(dcs) if all(math.isfinite(abs(c)) for c in dcs) else None
    if seeds is not None and len(seeds) == n:
        z0 = _aberth_double(dcs, seeds)
        if not np.all(np.isfinite(z0)):
            z0 = seeds
    else:
        z0 = np.exp(2j * np.pi * (np.arange(n) + 0.25) / n)
    # extra digits so that rounding in p(z) stays below |p| * 10^-(P+guard)
    amp = 0.0
    with np.errstate(all="ignore"):
        acs = np.abs(np.array(dcs))
        for v in z0:
            m = float(np.polyval(acs[::-1], abs(v)))
            if math.isfinite(m) and m > 0:
                amp = max(amp, math.log10(m))
    extra = int(math.ceil(amp)) if amp > 0 else 0
    bits = digits_to_bits(digits + GUARD_DIGITS + extra)
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        cs = [to_mpc(c) for c in exact]
        z = [mpc(complex(v)) * (1 + mpc(0, 1e-12 * (k + 1))) for k, v in enumerate(z0)]
        z, ok = _aberth_mp(cs, z, maxiter)
        dcs_mp = [k * c for k, c in enumerate(cs)][1:]
        z = [_newton_polish(cs, dcs_mp, x, 2) for x in z]
        z = _polish_to_residual(exact, z, norm, digits)
        if not ok:
            res = _true_residual([to_mpc(c) for c in exact], z)
            ceiling = float(norm) * 10.0 ** (-(digits - 5))
            if res > ceiling:
                raise ConvergenceError("Aberth iteration budget exhausted", res)
    return z


def _true_residual(cs: list, z: list) -> float:
    # evaluate at doubled precision so rounding does not mask the residual
    bits = 2 * gmpy2.get_context().precision
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        return max(float(abs(horner(cs, x))) for x in z)


def _polish_to_residual(exact: list, z: list, norm, digits: int) -> list:
    """Raise precision until |p(z)| <= norm * 10^-(digits+guard) at every root."""
    target = float(norm) * 10.0 ** (-(digits + GUARD_DIGITS))
    for _ in range(4):
        cs = [to_mpc(c) for c in exact]
        worst = _true_residual(cs, z)
        if worst <= target:
            break
        extra = int(math.ceil(math.log10(worst / target))) + GUARD_DIGITS
        gmpy2.get_context().precision += digits_to_bits(extra)
        cs = [to_mpc(c) for c in exact]
        dcs = [k * c for k, c in enumerate(cs)][1:]
        z = [_newton_polish(cs, dcs, mpc(x), 3) for x in z]
    return z


def _assemble(coeffs, roots, tol_merge, digits) -> RootSet:
    cs = [to_mpc(c) for c in coeffs]
    dcs = [k * c for k, c in enumerate(cs)][1:]
    n = len(cs) - 1
    roots = sorted(roots, key=sort_key)
    # cluster by single linkage under a relative tolerance
    groups: list[list] = []
    used = [False] * len(roots)
    for i, r in enumerate(roots):
        if used[i]:
            continue
        group = [r]
        used[i] = True
        stack = [r]
        while stack:
            x = stack.pop()
            for j, y in enumerate(roots):
                if not used[j] and abs(x - y) <= tol_merge * max(mpfr(1), abs(x)):
                    used[j] = True
                    group.append(y)
                    stack.append(y)
        groups.append(group)
    out, mult, bounds = [], [], []
    worst = mpfr(0)
    for g in groups:
        centroid = sum(g, mpc(0)) / len(g)
        out.append(centroid)
        mult.append(len(g))
        val = abs(horner(cs, centroid))
        worst = max(worst, val)
        if len(g) == 1:
            d = horner(dcs, centroid)
            bounds.append(float(n * val / abs(d)) if d != 0 else math.inf)
        else:
            bounds.append(0.0)
    order = sorted(range(len(out)), key=lambda i: sort_key(out[i]))
    return RootSet(
        roots=[out[i] for i in order],
        multiplicities=[mult[i] for i in order],
        residual_bound=float(worst),
        error_bounds=[bounds[i] for i in order],
        digits=digits,
    )


def refine_root(p: Sequence, approx, digits: int, maxiter: int = 200):
    """Newton refinement of a simple root to ``digits`` digits.

    Raises :class:`BasinError` if the residual fails to decrease over three
    consecutive steps.
    """
    coeffs = list(getattr(p, "coeffs", p))
    with precision(digits + GUARD_DIGITS):
        cs = [to_mpc(c) for c in coeffs]
        dcs = [k * c for k, c in enumerate(cs)][1:]
        x = to_mpc(approx)
        tol = mpfr(10) ** (-(digits + GUARD_DIGITS - 2))
        best = abs(horner(cs, x))
        stalls = 0
        for _ in range(maxiter):
            pv = horner(cs, x)
            if pv == 0:
                return x
            dp = horner(dcs, x)
            if dp == 0:
                raise BasinError("vanishing derivative during refinement")
            step = pv / dp
            x = x - step
            res = abs(horner(cs, x))
            if abs(step) <= tol * max(mpfr(1), abs(x)):
                return x
            if res >= best:
                stalls += 1
                if stalls >= 3:
                    raise BasinError("residual did not decrease over 3 Newton steps")
            else:
                stalls = 0
                best = res
        return x


def decimal_string(x, digits: int) -> str:
    """Scientific notation of a real mpfr with ``digits`` significant digits."""
    if not isinstance(x, mpfr):
        # ints and strings convert exactly enough at the requested precision
        with gmpy2.context(gmpy2.get_context(), precision=digits_to_bits(digits + GUARD_DIGITS)):
            x = mpfr(x)
    if x == 0:
        return "0"
    if not gmpy2.is_finite(x):
        return str(x)
    mant, exp, _ = x.digits(10, digits)
    sign = ""
    if mant.startswith("-"):
        sign, mant = "-", mant[1:]
    mant = mant.rstrip("0") or "0"
    body = mant[0] + ("." + mant[1:] if len(mant) > 1 else "")
    e = exp - 1
    return f"{sign}{body}e{e:+d}" if e else f"{sign}{body}"


def parse_decimal(text: str, digits: int) -> mpfr:
    with precision(digits):
        return mpfr(text)


def principal_root(u, k: int):
    """Principal k-th root; a signed-zero imaginary part is read as +0."""
    u = mpc(u)
    if k == 1:
        return u
    if u == 0:
        return mpc(0)
    if u.imag == 0:
        u = mpc(u.real, 0)
    return gmpy2.exp(gmpy2.log(u) / k)


def principal_power(t, m: int, c: int):
    """t^(m/c) with the principal branch."""
    return principal_root(t, c) ** m
