"""Cached pipeline results shared by the test modules."""

from __future__ import annotations

import functools

from puiseux_clsp import INFINITY, parse_curve, singular_points
from puiseux_clsp.report import Options, analyze_base

import reference as ref

CURVES = {"f1": ref.F1, "f2": ref.F2, "f3": ref.F3, "f4": ref.F4}
CI_DIGITS = 100
CI_TERMS = 128


@functools.lru_cache(maxsize=None)
def curve(name: str):
    return parse_curve(CURVES.get(name, name))


@functools.lru_cache(maxsize=None)
def points(name: str, digits: int = CI_DIGITS):
    return tuple(singular_points(curve(name), digits))


@functools.lru_cache(maxsize=None)
def analysis(name: str, base, digits: int = CI_DIGITS, nterms: int = CI_TERMS,
             roottest: bool = False):
    opts = Options(digits=digits, nterms=nterms, roottest=roottest)
    return analyze_base(curve(name), list(points(name, digits)), base, opts)


def bases(name: str, digits: int = CI_DIGITS):
    pts = points(name, digits)
    out = [p.label for p in pts if not p.is_infinity]
    if any(p.is_infinity for p in pts):
        out.append(INFINITY)
    return out


def row(name: str, base, digits: int = CI_DIGITS, nterms: int = CI_TERMS):
    """[(code, CLSP label or 'inf' or None)] in class order."""
    res = analysis(name, base, digits, nterms)
    out = []
    for cls, r in zip(res.expansion.classes, res.radii):
        if r.clsp_is_infinity:
            lab = "inf"
        elif r.clsp_index is None:
            lab = None
        elif res.sset.base.is_infinity:
            lab = r.clsp_index
        else:
            lab = r.clsp_label
        out.append((cls.code, lab))
    return out
