"""Cycle-aware root test for Puiseux series.

R = 1 / liminf |a_k|^(c/m_k).  The scatter S = {(1/m_k, |a_k|^(-c/m_k))} is
reduced to its lower envelope and a low-degree polynomial in x = 1/m is
extrapolated to x = 0.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import gmpy2
import numpy as np

from .numerics import GUARD_DIGITS, digits_to_bits
from .puiseux import PuiseuxSeries

__all__ = [
    "RootTestError",
    "RootTestSequence",
    "RootTestFit",
    "roottest_sequence",
    "default_window",
    "default_order",
    "lower_envelope",
    "fit_envelope",
    "estimate_radius",
    "compare",
    "to_csv",
]

NEIGHBOURS = 7
MIN_TERMS = 8


class RootTestError(ValueError):
    pass


@dataclass(frozen=True)
class RootTestSequence:
    m: tuple[int, ...]  # exponent numerators, increasing
    x: tuple[float, ...]
    y: tuple[float, ...]
    cycle: int
    source: str = ""

    def __len__(self):
        return len(self.x)


@dataclass(frozen=True)
class RootTestFit:
    radius: float
    window: tuple[int, int]
    order: int
    envelope: tuple[int, ...]  # indices into the sequence
    coeffs: tuple[float, ...]  # highest degree first


def roottest_sequence(s: PuiseuxSeries, source: str = "") -> RootTestSequence:
    """Points (1/m_k, |a_k|^(-c/m_k)) over positive exponents, nonzero a_k."""
    ms, xs, ys = [], [], []
    with gmpy2.context(gmpy2.get_context(), precision=digits_to_bits(s.digits + GUARD_DIGITS)):
        for m, a in s.terms():
            if m <= 0:
                continue
            mag = abs(a)
            if mag == 0:
                continue
            ms.append(m)
            xs.append(1.0 / m)
            ys.append(float(gmpy2.exp(-gmpy2.log(mag) * s.cycle / m)))
    if len(ms) < MIN_TERMS:
        raise RootTestError(f"only {len(ms)} usable terms; need at least {MIN_TERMS}")
    return RootTestSequence(tuple(ms), tuple(xs), tuple(ys), s.cycle, source)


def default_window(n: int) -> tuple[int, int]:
    """Drop the first max(64, 10%) points; keep the tail.

    Short sequences keep at least their last half.
    """
    skip = max(64, n // 10)
    skip = min(skip, n // 2)
    return skip, n


def default_order(nterms: int) -> int:
    return 2 if nterms <= 512 else 1


def lower_envelope(x, y, neighbours: int = NEIGHBOURS) -> list[int]:
    """Indices that are the minimum of some run of ``neighbours`` consecutive points.

    Points are taken in x order.  A monotone tail keeps nearly every point,
    an oscillating scatter keeps its lower boundary.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    order = np.argsort(x, kind="stable")
    ys = y[order]
    n = len(ys)
    k = min(neighbours, n)
    keep = set()
    for a in range(0, n - k + 1):
        keep.add(a + int(np.argmin(ys[a:a + k])))
    return sorted(int(order[i]) for i in keep)


def fit_envelope(seq: RootTestSequence, window: tuple[int, int] | None = None,
                 order: int = 2) -> RootTestFit:
    """Least-squares polynomial through the windowed lower envelope, at x = 0."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    a, b = window if window is not None else default_window(len(seq))
    if not (0 <= a < b <= len(seq)):
        raise RootTestError(f"window {a}:{b} outside 0:{len(seq)}")
    x = np.array(seq.x[a:b])
    y = np.array(seq.y[a:b])
    env = lower_envelope(x, y)
    need = 2 * (order + 1)
    if len(env) < need:
        raise RootTestError(f"{len(env)} envelope points; need {need}")
    xe, ye = x[env], y[env]
    if np.ptp(xe) == 0:
        raise RootTestError("degenerate fit: envelope has a single abscissa")
    coeffs = np.polyfit(xe, ye, order)
    return RootTestFit(float(coeffs[-1]), (a, b), order, tuple(a + i for i in env),
                       tuple(float(c) for c in coeffs))


def estimate_radius(s: PuiseuxSeries, nterms: int | None = None,
                    window: tuple[int, int] | None = None,
                    order: int | None = None) -> RootTestFit:
    seq = roottest_sequence(s)
    if order is None:
        order = default_order(nterms if nterms is not None else s.top // s.cycle)
    return fit_envelope(seq, window, order)


def compare(ac_radius: float, rt_radius: float) -> float:
    """Percent error 100 |rt - ac| / ac."""
    if not ac_radius > 0:
        raise ValueError("ac_radius must be positive")
    if math.isinf(ac_radius):
        return math.inf
    return 100.0 * abs(rt_radius - ac_radius) / ac_radius


def to_csv(seq: RootTestSequence, fit: RootTestFit | None = None) -> str:
    """Rows k, m_k, x_k, y_k, envelope_flag."""
    env = set(fit.envelope) if fit is not None else set()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "m", "x", "y", "envelope"])
    for k, (m, x, y) in enumerate(zip(seq.m, seq.x, seq.y)):
        w.writerow([k, m, repr(x), repr(y), int(k in env)])
    return buf.getvalue()
