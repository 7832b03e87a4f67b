import io
import json
import math
from contextlib import redirect_stdout

import gmpy2
import pytest
from gmpy2 import mpc

from puiseux_clsp import expand, parse_curve
from puiseux_clsp.cli import main, parse_complex
from puiseux_clsp.numerics import precision, to_mpc
from puiseux_clsp.report import (
    DivergenceError,
    Options,
    render_table,
    run_report,
    sample_surface,
    sig,
    verify_at,
)

import reference as ref
from helpers import analysis, curve


def cli(*args):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(args))
    return code, buf.getvalue()


@pytest.fixture(scope="module")
def f1_report():
    return run_report(curve("f1"), Options(digits=60, nterms=64))


def test_report_is_deterministic(f1_report):
    again = run_report(curve("f1"), Options(digits=60, nterms=64))
    assert f1_report.dumps() == again.dumps()


def test_worker_processes_agree(f1_report):
    par = run_report(curve("f1"), Options(digits=60, nterms=64, workers=2))
    assert par.dumps() == f1_report.dumps()


def test_table_renders_from_json(f1_report):
    data = json.loads(f1_report.dumps())
    assert render_table(data) == f1_report.table()
    head = f1_report.table().splitlines()[0].split()
    assert head[:2] == ["s_b", "value"]


def test_report_json_shape(f1_report):
    data = json.loads(f1_report.dumps())
    assert {"curve", "profile", "singular_points", "centers", "expansions", "traces"} <= set(data)
    assert len(data["centers"]) == len(data["singular_points"])
    for c in data["centers"]:
        for k in c["classes"]:
            assert k["code"] and k["clsp"].startswith("s_")


def test_nonsingular_curve_gives_empty_report():
    rep = run_report(parse_curve("w - 1"), Options(digits=30, nterms=16))
    assert rep.centers == [] and json.loads(rep.dumps())["singular_points"] == []


def test_surface_residual():
    # r1 = 0.43 is 98% of the radius, so the tail needs about 1000 terms
    res = analysis("f1", 1)
    c = curve("f1")
    k = next(i for i, cl in enumerate(res.expansion.classes) if cl.code == "V_2")
    R = res.radii[k].radius
    assert R > 0.43
    ex = expand(c, res.sset.base, 1024, 60, reference_radius=res.sset.base.nearest_other_distance)
    cls = ex.classes[k]
    re_rows = sample_surface(cls, (0.043, 0.43), (4, 36), "Re", R)
    im_rows = sample_surface(cls, (0.043, 0.43), (4, 36), "Im", R)
    assert len(re_rows) == 2 * 4 * 36
    with precision(60):
        for a, b in zip(re_rows, im_rows):
            z = mpc(a[1], a[2])
            w = mpc(a[3], b[3])
            fib = c.fiber(z)
            val = abs(sum(to_mpc(x) * w ** i for i, x in enumerate(fib)))
            assert float(val) < 1e-8


def test_surface_outside_radius():
    res = analysis("f1", 1)
    cls = res.expansion.classes[0]
    with pytest.raises(DivergenceError):
        sample_surface(cls, (0.1, 2 * res.radii[0].radius), (2, 4), "Re", res.radii[0].radius)


def test_verify_square_root():
    res = analysis("w^2 - z", 1, 40, 16)
    assert math.isinf(res.radii[0].radius)
    with precision(40):
        vr = verify_at(parse_curve("w^2 - z"), mpc(4), res.expansion, res.radii)
    assert vr.agreement_digits > 35
    assert sorted(float(v.real) for v in vr.series_values) == [-2.0, 2.0]


def test_verify_outside_disk():
    res = analysis("f1", 1)
    with pytest.raises(DivergenceError):
        verify_at(curve("f1"), mpc(5), res.expansion, res.radii)


@pytest.mark.parametrize("text,z", [("10", 10), ("20+25i", 20 + 25j), ("-0.5-1e-3i", -0.5 - 1e-3j),
                                    ("2i", 2j), ("-i", -1j), ("3 - 4j", 3 - 4j)])
def test_parse_complex(text, z):
    assert complex(parse_complex(text, 30)) == z


def test_parse_complex_rejects():
    with pytest.raises(ValueError):
        parse_complex("abc", 30)


def test_sig():
    assert sig(0.166816768) == "0.1668"
    assert sig(1.09352) == "1.094"
    assert sig(math.inf) == "inf" and sig(None) == "-"


def test_cli_singular():
    code, out = cli("singular", "--input", ref.F1, "--digits", "40", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1 + 13
    assert [ln.split(",")[0] for ln in lines[1:4]] == ["1", "2", "3"]


def test_cli_radii_json():
    code, out = cli("radii", "--input", ref.F1, "--digits", "60", "--terms", "64",
                    "--base", "origin", "--format", "json")
    assert code == 0
    data = json.loads(out)
    codes = sorted(k["code"] for k in data["centers"][0]["classes"])
    assert codes == ["E", "V_2"]


def test_cli_expand_and_verify():
    code, out = cli("expand", "--input", ref.F1, "--digits", "40", "--terms", "8", "--base", "origin")
    assert code == 0 and out.count("P_") == 3
    code, out = cli("verify", "--input", ref.F1, "--digits", "60", "--terms", "64",
                    "--base", "origin", "--at", "0.1", "--format", "json")
    assert code == 0 and json.loads(out)["agreement_digits"] > 20


def test_cli_roottest_and_surface():
    code, out = cli("roottest", "--input", ref.F1, "--digits", "60", "--terms", "128",
                    "--base", "origin", "--format", "csv", "--class", "1")
    assert code == 0 and out.startswith("k,m,x,y,envelope")
    code, out = cli("surface", "--input", ref.F1, "--digits", "40", "--terms", "32",
                    "--base", "origin", "--annulus", "0.1:0.3", "--grid", "2:4")
    assert code == 0 and len(out.splitlines()) > 1


def test_cli_errors(capsys):
    assert main(["singular", "--input", "w^2 - z +"]) == 2
    assert main(["expand", "--input", "w^2 - z"]) == 2
    assert main(["singular", "--input", "(w - z)^2"]) == 2
    assert "error" in capsys.readouterr().err
