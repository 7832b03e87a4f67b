"""Singular points of w(z): zeros of R(f, f_w), zeros of a_n, and infinity.

Each point carries a global ``label`` (its rank by |s|, which is how the
points are named s_1, s_2, ... in tables) and a base-relative ``index``
assigned by :func:`order_from`.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import gmpy2
from gmpy2 import mpc, mpfr

from .curve import Curve, UniPoly, differentiate, resultant_w, reverse_at_infinity
from .numerics import decimal_string, find_roots, precision, sort_key

__all__ = [
    "INFINITY",
    "SingularPoint",
    "SingularSet",
    "singular_points",
    "order_from",
    "singular_at_infinity",
]


class _Infinity:
    """The point at infinity.  Compared by identity; never a number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


@dataclass(frozen=True)
class SingularPoint:
    location: object  # gmpy2.mpc or INFINITY
    is_pole_locus: bool = False
    is_resultant_zero: bool = False
    label: int | None = None
    index: int = 0
    nearest_other_distance: float = math.inf

    @property
    def is_infinity(self) -> bool:
        return self.location is INFINITY

    @property
    def name(self) -> str:
        return "s_inf" if self.is_infinity else f"s_{self.label}"

    def to_complex(self) -> complex:
        if self.is_infinity:
            raise ValueError("point at infinity has no complex value")
        return complex(float(self.location.real), float(self.location.imag))

    def to_json(self, digits: int = 20) -> dict:
        if self.is_infinity:
            return {"index": self.index, "infinity": True, "label": None,
                    "nearest_other_distance": _float(self.nearest_other_distance)}
        return {
            "index": self.index,
            "label": self.label,
            "re": decimal_string(self.location.real, digits),
            "im": decimal_string(self.location.imag, digits),
            "is_pole_locus": self.is_pole_locus,
            "is_resultant_zero": self.is_resultant_zero,
            "nearest_other_distance": _float(self.nearest_other_distance),
        }


def _float(x) -> float | None:
    x = float(x)
    return x if math.isfinite(x) else None


@dataclass(frozen=True)
class SingularSet:
    """Singular points indexed 1..N by distance from ``base`` (points[0])."""

    base: SingularPoint
    points: tuple[SingularPoint, ...]
    curve: Curve | None = None
    digits: int = 0

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, index: int) -> SingularPoint:
        """1-based, matching s_1 = base."""
        if index < 1:
            raise IndexError(index)
        return self.points[index - 1]

    def by_label(self, label) -> SingularPoint:
        for p in self.points:
            if p.label == label and not p.is_infinity:
                return p
        raise KeyError(label)

    @property
    def infinity(self) -> SingularPoint | None:
        for p in self.points:
            if p.is_infinity:
                return p
        return None

    @property
    def finite(self) -> list[SingularPoint]:
        return [p for p in self.points if not p.is_infinity]

    def to_json(self, digits: int = 20) -> list[dict]:
        return [p.to_json(digits) for p in self.points]


def singular_at_infinity(c: Curve) -> bool:
    """True when g = z^d f(1/z, w) is singular at z = 0 (exact test)."""
    g = reverse_at_infinity(c)
    if g.leading(0) == 0:
        return True
    if g.degree_w < 2:
        return False
    return resultant_w(g, differentiate(g, "w"))(Fraction(0)) == 0


def _distance_cmp(tol):
    def cmp(a, b):
        da, db = a[0], b[0]
        if abs(da - db) > tol * max(1, da, db):
            return -1 if da < db else 1
        for x, y in zip(sort_key(a[1]), sort_key(b[1])):
            if abs(x - y) > tol * max(1, abs(x), abs(y)):
                return -1 if x < y else 1
        return 0

    return cmp


def singular_points(c: Curve, digits: int) -> list[SingularPoint]:
    """Unordered singular points, labelled by increasing |s|.

    Finite points are the zeros of the squarefree part of R(f, f_w), which
    contains every zero of a_n.  Infinity is appended when the reversed
    curve is singular at the origin.
    """
    c.validate()
    lead = c.leading
    res = resultant_w(c, differentiate(c, "w")) if c.degree_w > 1 else lead
    locus = res.squarefree_part() if res.degree > 0 else res
    locs: list = []
    if locus.degree > 0:
        locs = list(find_roots(locus, digits).roots)
    poles: list = []
    if lead.degree > 0:
        poles = list(find_roots(lead.squarefree_part(), digits).roots)
    with precision(digits):
        tol = mpfr(10) ** (-(digits // 2))
        is_pole = []
        for s in locs:
            is_pole.append(any(abs(s - p) <= tol * max(1, abs(p)) for p in poles))
        for p in poles:
            if not any(abs(s - p) <= tol * max(1, abs(p)) for s in locs):
                locs.append(p)
                is_pole.append(True)
        keyed = sorted(
            [(abs(s), s, pole) for s, pole in zip(locs, is_pole)],
            key=functools.cmp_to_key(_distance_cmp(tol)),
        )
    out = [
        SingularPoint(
            location=s,
            is_pole_locus=pole,
            is_resultant_zero=True,
            label=k + 1,
        )
        for k, (_, s, pole) in enumerate(keyed)
    ]
    if singular_at_infinity(c):
        pole = reverse_at_infinity(c).leading(0) == 0
        out.append(SingularPoint(location=INFINITY, is_pole_locus=pole))
    return out


def order_from(
    points: Sequence[SingularPoint],
    base,
    curve: Curve | None = None,
    digits: int = 0,
) -> SingularSet:
    """Assign base-relative indices 1..N.

    ``base`` is a SingularPoint from ``points``, a global label, or INFINITY.
    For a finite base, points are ordered by |s - base| with infinity last.
    For the infinite base, finite points take the reverse of the increasing
    |s| order.  Ties fall back to (Re, Im).
    """
    base_pt = _resolve_base(points, base)
    finite = [p for p in points if not p.is_infinity]
    inf = [p for p in points if p.is_infinity]
    prec = max([digits] + [20])
    with precision(prec):
        tol = mpfr(10) ** (-(prec // 2))
        if base_pt.is_infinity:
            keyed = [(abs(p.location), p.location, p) for p in finite]
        else:
            keyed = [(abs(p.location - base_pt.location), p.location, p)
                     for p in finite]
        keyed.sort(key=functools.cmp_to_key(_distance_cmp(tol)))
        ordered = [k[2] for k in keyed]
        if base_pt.is_infinity:
            # the exact reverse of the |s| order, ties included
            ordered = inf + ordered[::-1]
        else:
            ordered = ordered + inf
        near = _nearest_distances(ordered)
    pts = tuple(replace(p, index=i + 1, nearest_other_distance=near[i])
                for i, p in enumerate(ordered))
    return SingularSet(base=pts[0], points=pts, curve=curve, digits=digits)


def _resolve_base(points, base) -> SingularPoint:
    if base is INFINITY or (isinstance(base, SingularPoint) and base.is_infinity):
        for p in points:
            if p.is_infinity:
                return p
        raise ValueError("infinity is not a singular point of this curve")
    if isinstance(base, SingularPoint):
        for p in points:
            if p.label == base.label and not p.is_infinity:
                return p
        raise ValueError("base is not among the points")
    for p in points:
        if not p.is_infinity and p.label == base:
            return p
    raise ValueError(f"no singular point with label {base!r}")


def _nearest_distances(ordered: list[SingularPoint]) -> list[float]:
    """Distance to the nearest other point.

    For infinity this is measured in the inverted coordinate 1/z, i.e.
    1 / max |s|, which is the radius that matters for expansions there.
    """
    finite = [p.location for p in ordered if not p.is_infinity]
    out = []
    for p in ordered:
        if p.is_infinity:
            big = max((abs(s) for s in finite), default=mpfr(0))
            out.append(float(1 / big) if big else math.inf)
            continue
        best = math.inf
        for s in finite:
            if s is p.location:
                continue
            d = float(abs(s - p.location))
            if d < best:
                best = d
        out.append(best)
    return out
