import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from puiseux_clsp import INFINITY, expand, order_from, parse_curve, singular_points
from puiseux_clsp.continuation import (
    DETOUR_FACTOR,
    MatchError,
    TrackingError,
    build_path,
    class_radius,
    cycle_type,
    find_clsp,
    loop_path,
    match_sheet,
    monodromy_permutation,
    plane_nodes,
    track_sheet,
    trace_lines,
)
from puiseux_clsp.continuation import _Field

from helpers import analysis, curve, points


def nodes_at(name, base, digits=60):
    c = curve(name)
    ss = order_from(list(points(name, digits)), base, c, digits)
    return c, ss, *plane_nodes(ss)


def test_path_endpoints_sit_on_the_disks():
    _, _, nodes, _ = nodes_at("f2", 2)
    base, tgt = nodes[0], nodes[2]  # s_2 -> s_3, nothing in between
    p = build_path(base, tgt, nodes)
    assert [s.kind for s in p.segments] == ["line"]
    assert abs(p.start - base.c) == pytest.approx(base.r * DETOUR_FACTOR)
    assert abs(p.end - tgt.c) == pytest.approx(tgt.r * DETOUR_FACTOR)


def test_detour_around_the_origin():
    # s_2 -> s_4 runs along the real axis straight through s_1 = 0
    _, _, nodes, _ = nodes_at("f2", 2)
    p = build_path(nodes[0], nodes[3], nodes)
    assert [s.kind for s in p.segments] == ["line", "arc", "line"]
    assert p.detours == (2,)
    arc = p.segments[1]
    assert arc.radius == pytest.approx(nodes[1].r / 3)
    assert abs(abs(arc.sweep) - math.pi) < 1e-9
    assert p.min_clearance(nodes) >= nodes[1].r / 3 * (1 - 1e-9)


def test_short_arc_when_chord_misses_the_node():
    # 1 -> 3 + i passes just above the node 2 + 0.45i
    c = parse_curve("w^2 - (z - 1) (z^2 - 6 z + 10) (z^2 - 4 z + 4.2025)")
    pts = singular_points(c, 30)
    start = next(p for p in pts if not p.is_infinity and abs(p.to_complex() - 1) < 1e-9)
    ss = order_from(pts, start.label, c, 30)
    nodes, _ = plane_nodes(ss)
    tgt = next(n for n in nodes if abs(n.c - (3 + 1j)) < 1e-9)
    near = next(n for n in nodes if abs(n.c - (2 + 0.45j)) < 1e-9)
    p = build_path(nodes[0], tgt, nodes)
    arcs = [s for s in p.segments if s.kind == "arc"]
    assert p.detours == (near.index,)
    assert len(arcs) == 1 and abs(arcs[0].sweep) < math.pi
    assert arcs[0].point(0.5).imag > near.c.imag


def test_overlapping_disks_rejected():
    _, _, nodes, _ = nodes_at("f2", 2)
    from dataclasses import replace

    fat = replace(nodes[1], r=1.0)
    with pytest.raises(TrackingError):
        build_path(nodes[0], fat, [nodes[0], fat])


def test_track_residual():
    c, ss, nodes, _ = nodes_at("f2", 2)
    ex = expand(c, ss.base, 48, 60, reference_radius=ss.base.nearest_other_distance)
    p = build_path(nodes[0], nodes[3], nodes)
    fld = _Field(c)
    for v in ex.values(p.start - nodes[0].loc):
        w = track_sheet(c, p, complex(v), field_=fld)
        fib = fld.fiber(p.end)
        resid = abs(sum(a * w ** i for i, a in enumerate(fib)))
        mass = sum(abs(a) * abs(w) ** i for i, a in enumerate(fib))
        assert resid / mass < 1e-10


def test_match_sheet():
    assert match_sheet(1.0 + 1e-13, [0.0, 1.0, 2.0])[0] == 2
    with pytest.raises(MatchError):
        match_sheet(1.0 + 1e-6, [0.0, 1.0, 2.0])
    with pytest.raises(MatchError):
        match_sheet(1.0, [1.0 + 1e-12, 1.0 - 1e-12])


def test_origin_of_f2_sheets():
    res = analysis("f2", 1)
    got = [r.clsp.label for r in res.records]
    assert got == [2, 4, 5, 2]


def test_square_root_goes_to_infinity():
    c = parse_curve("w^2 - z")
    ss = order_from(singular_points(c, 30), 1, c, 30)
    ex = expand(c, ss.base, 16, 30, reference_radius=ss.base.nearest_other_distance)
    recs = find_clsp(c, ex, ss, nterms=16, digits=30)
    assert all(r.clsp is not None and r.clsp.is_infinity for r in recs)
    rr = class_radius(recs, ex.classes[0], ss, sheet_of=lambda m: ex.series.index(m) + 1)
    assert math.isinf(rr.radius)


def test_stop_at_first_nonanalytic_landing():
    for name in ("f1", "f2", "f3"):
        for base in (1, 2):
            res = analysis(name, base)
            for rec in res.records:
                if rec.status == "terminated":
                    *head, last = rec.hops
                    assert all(h.analytic for h in head)
                    assert not last.analytic
                    assert rec.clsp.index == last.target_index


def test_radius_equals_distance_to_clsp():
    for name in ("f1", "f2"):
        res = analysis(name, 2)
        base = res.sset.base.to_complex()
        for rr in res.radii:
            if math.isfinite(rr.radius):
                pt = next(p for p in res.sset.points if p.index == rr.clsp_index)
                assert rr.radius == pytest.approx(abs(pt.to_complex() - base), rel=1e-12)


@pytest.mark.parametrize("name,base", [("f1", 1), ("f2", 1), ("f3", 1), ("f2", 5), ("f3", INFINITY)])
def test_monodromy_matches_classes(name, base):
    c, ss, nodes, _ = nodes_at(name, base)
    plane = c
    if ss.base.is_infinity:
        from puiseux_clsp.curve import reverse_at_infinity

        plane = reverse_at_infinity(c)
    ex = expand(plane if ss.base.is_infinity else c, nodes[0].loc if ss.base.is_infinity else ss.base,
                48, 60, reference_radius=nodes[0].r)
    perm = monodromy_permutation(plane, ex, nodes[0])
    assert cycle_type(perm) == sorted(cl.cycle for cl in ex.classes)


def test_cycle_type():
    assert cycle_type([2, 1, 3]) == [1, 2]
    assert cycle_type([2, 3, 4, 1]) == [4]


def test_loop_path_closes():
    _, _, nodes, _ = nodes_at("f1", 1)
    p = loop_path(nodes[0])
    assert abs(p.start - p.end) < 1e-12
    assert p.length == pytest.approx(2 * math.pi * nodes[0].r / 3)


def test_path_independent_of_step_tolerance():
    c, ss, nodes, _ = nodes_at("f2", 2)
    ex = expand(c, ss.base, 48, 60, reference_radius=ss.base.nearest_other_distance)
    p = build_path(nodes[0], nodes[4], nodes)
    for v in ex.values(p.start - nodes[0].loc):
        a = track_sheet(c, p, complex(v), tol=1e-12)
        b = track_sheet(c, p, complex(v), tol=5e-13)
        assert abs(a - b) < 1e-9 * max(1, abs(a))


def test_trace_lines():
    res = analysis("f1", 1)
    lines = trace_lines(res.records).splitlines()
    assert lines
    for line in lines:
        d = json.loads(line)
        assert set(d) == {"sheet", "target_index", "landed_index", "landed_class", "match_residual"}
        assert d["match_residual"] < 1e-10


@settings(max_examples=10)
@given(st.sampled_from(["f1", "f2", "f3"]), st.integers(1, 12))
def test_class_radius_is_member_minimum(name, k):
    labels = [p.label for p in points(name) if not p.is_infinity]
    base = labels[(k - 1) % len(labels)]
    res = analysis(name, base)
    here = res.sset.base.to_complex()
    for cls, rr in zip(res.expansion.classes, res.radii):
        dists = []
        for m in cls.members:
            rec = res.records[res.expansion.series.index(m)]
            pt = rec.clsp
            dists.append(math.inf if pt is None or pt.is_infinity else abs(pt.to_complex() - here))
        assert rr.radius == pytest.approx(min(dists), rel=1e-12) or rr.radius == min(dists)
        # nothing is singular closer than the nearest neighbour
        assert rr.radius >= res.sset.base.nearest_other_distance * (1 - 1e-12)
