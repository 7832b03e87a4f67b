"""Command line: puiseux-clsp <subcommand> --input EXPR [options]."""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

import gmpy2
from gmpy2 import mpc, mpfr

from .curve import CurveError, ParseError, parse_curve
from .numerics import decimal_string, precision
from .puiseux import format_series
from .report import (
    DivergenceError,
    PROFILES,
    Options,
    analyze_base,
    render_table,
    run_report,
    sample_surface,
    sig,
    verify_at,
)
from .roottest import compare, estimate_radius, roottest_sequence, to_csv
from .singular import INFINITY, order_from, singular_points

__all__ = ["main", "build_parser", "parse_complex"]


def parse_complex(text: str, digits: int):
    """'10', '20+25i', '-0.5-1e-3i', '2i', '-i' -> mpc at ``digits``."""
    s = text.replace(" ", "").replace("I", "i").replace("i", "j")
    # a bare unit needs an explicit 1 for the mpc string parser
    s = re.sub(r"(^|[+-])j$", r"\g<1>1j", s)
    if not re.fullmatch(r"[0-9.eE+-]*j?", s) or not s:
        raise ValueError(f"cannot parse complex number {text!r}")
    with precision(digits):
        try:
            return mpc(s)
        except ValueError:
            raise ValueError(f"cannot parse complex number {text!r}") from None


def _read_input(arg: str) -> str:
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _base(arg: str, points):
    if arg in ("infinity", "inf"):
        return INFINITY
    if arg == "origin":
        for p in points:
            if not p.is_infinity and p.location == 0:
                return p.label
        raise SystemExit("error: the origin is not a singular point")
    return int(arg)


def _window(arg):
    if arg is None:
        return None
    a, b = arg.split(":")
    return int(a), int(b)


def _options(ns) -> Options:
    prof = PROFILES[ns.profile]
    fit = {"linear": 1, "quadratic": 2}.get(ns.fit) if ns.fit else None
    return Options(profile=prof, digits=ns.digits, nterms=ns.terms,
                   window=_window(ns.window), fit=fit, workers=ns.threads)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="puiseux-clsp",
                                description="Puiseux expansions and convergence radii of algebraic functions")
    sub = p.add_subparsers(dest="command", required=True)
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--input", "-i", required=True, help="curve f(z,w) as an expression or a file")
    shared.add_argument("--profile", choices=sorted(PROFILES), default="ci")
    shared.add_argument("--digits", type=int, help="working precision P (overrides profile)")
    shared.add_argument("--terms", type=int, help="series terms N (overrides profile)")
    shared.add_argument("--base", default="all", help="label, origin, infinity or all")
    shared.add_argument("--format", choices=("json", "table", "csv"), default="table")
    shared.add_argument("--threads", type=int, default=1, help="worker processes over base points")
    shared.add_argument("--window", help="root test window a:b over sequence indices")
    shared.add_argument("--fit", choices=("linear", "quadratic"))
    sub.add_parser("singular", parents=[shared], help="singular points")
    sub.add_parser("expand", parents=[shared], help="Puiseux expansions at a base")
    sub.add_parser("radii", parents=[shared], help="branch codes, CLSPs and radii")
    rt = sub.add_parser("roottest", parents=[shared], help="root test scatter and estimate")
    rt.add_argument("--class", dest="cls", type=int, default=None, help="class number (1-based)")
    v = sub.add_parser("verify", parents=[shared], help="series values against roots of f(z1, w)")
    v.add_argument("--at", required=True, help="z1, e.g. 10 or 20+25i")
    s = sub.add_parser("surface", parents=[shared], help="branch surface samples (CSV)")
    s.add_argument("--class", dest="cls", type=int, default=1)
    s.add_argument("--annulus", required=True, help="r0:r1")
    s.add_argument("--grid", default="10:36", help="n_r:n_theta")
    s.add_argument("--part", choices=("Re", "Im"), default="Re")
    sub.add_parser("report", parents=[shared], help="full report")
    return p


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        curve = parse_curve(_read_input(ns.input))
    except (ParseError, CurveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return _run(ns, curve, _options(ns), sys.stdout)
    except (CurveError, DivergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _run(ns, curve, opts: Options, out) -> int:
    if ns.command == "singular":
        pts = singular_points(curve, opts.P)
        if pts:
            # base-relative indices; the listing defaults to s_1 as base
            if ns.base != "all":
                start = _base(ns.base, pts)
            else:
                start = next((p.label for p in pts if not p.is_infinity), INFINITY)
            pts = list(order_from(pts, start, curve, opts.P).points)
        rows = [p.to_json(min(opts.P, 40)) for p in pts]
        if ns.format == "json":
            json.dump(rows, out, sort_keys=True, indent=1)
            out.write("\n")
        else:
            sep = "," if ns.format == "csv" else "  "
            out.write(sep.join(["index", "label", "re", "im", "pole"]) + "\n")
            for p, r in zip(pts, rows):
                if p.is_infinity:
                    out.write(sep.join([str(p.index), "inf", "", "", str(p.is_pole_locus)]) + "\n")
                else:
                    re_ = r["re"] if ns.format == "csv" else sig(float(r["re"]))
                    im_ = r["im"] if ns.format == "csv" else sig(float(r["im"]))
                    out.write(sep.join([str(p.index), str(p.label), re_, im_,
                                        str(p.is_pole_locus)]) + "\n")
        return 0
    if ns.command == "report":
        if ns.base != "all":
            pts = singular_points(curve, opts.P)
            opts.bases = [_base(ns.base, pts)]
        rep = run_report(curve, opts)
        out.write(rep.dumps() + "\n" if ns.format == "json" else rep.table())
        return 0

    pts = singular_points(curve, opts.P)
    if ns.base == "all":
        if ns.command != "radii":
            print("error: --base is required for this command", file=sys.stderr)
            return 2
        opts.bases = "all"
        rep = run_report(curve, opts)
        out.write(rep.dumps() + "\n" if ns.format == "json" else rep.table())
        return 0
    base = _base(ns.base, pts)

    if ns.command == "expand":
        from .puiseux import expand

        ss = order_from(pts, base, curve, opts.P)
        ex = expand(curve, ss.base, opts.N, opts.P, reference_radius=ss.base.nearest_other_distance)
        if ns.format == "json":
            json.dump(ex.to_json(), out, sort_keys=True, indent=1)
            out.write("\n")
        else:
            for i, s in enumerate(ex.series):
                out.write(f"P_{i + 1} [{ex.class_of(i + 1).code}] = {format_series(s)}\n")
        return 0

    res = analyze_base(curve, pts, base, opts) if ns.command != "roottest" else \
        analyze_base(curve, pts, base, Options(**{**opts.__dict__, "roottest": False}))
    if ns.command == "radii":
        data = {"centers": [res.to_json(opts.P)]}
        if ns.format == "json":
            json.dump(data, out, sort_keys=True, indent=1)
            out.write("\n")
        else:
            out.write(render_table(data))
        return 0
    if ns.command == "roottest":
        classes = list(enumerate(res.expansion.classes, 1))
        if ns.cls is not None:
            classes = [classes[ns.cls - 1]]
        for k, cls in classes:
            rr = res.radii[k - 1]
            seq = roottest_sequence(cls.members[0])
            fit = estimate_radius(cls.members[0], opts.N, opts.window, opts.fit)
            if ns.format == "csv":
                out.write(to_csv(seq, fit))
            else:
                err = compare(rr.radius, fit.radius) if rr.radius != float("inf") else None
                out.write(f"class {k} {cls.code}: root test {sig(fit.radius)}"
                          f"  continuation {sig(rr.radius)}"
                          f"  error {sig(err, 2) if err is not None else '-'}%\n")
        return 0
    if ns.command == "verify":
        z1 = parse_complex(ns.at, opts.P)
        vr = verify_at(curve, z1, res.expansion, res.radii)
        if ns.format == "json":
            d = {"z": [decimal_string(z1.real, 20), decimal_string(z1.imag, 20)],
                 "max_deviation": float(vr.max_deviation),
                 "agreement_digits": vr.agreement_digits,
                 "values": [[decimal_string(v.real, 20), decimal_string(v.imag, 20)]
                            for v in vr.series_values]}
            json.dump(d, out, sort_keys=True, indent=1)
            out.write("\n")
        else:
            out.write(vr.table())
        return 0
    if ns.command == "surface":
        a, b = (float(x) for x in ns.annulus.split(":"))
        nr, nt = (int(x) for x in ns.grid.split(":"))
        cls = res.expansion.classes[ns.cls - 1]
        rows = sample_surface(cls, (a, b), (nr, nt), ns.part, res.radii[ns.cls - 1].radius)
        out.write("sheet,re_t,im_t,value\n")
        for r in rows:
            out.write(",".join(repr(x) for x in r) + "\n")
        return 0
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
