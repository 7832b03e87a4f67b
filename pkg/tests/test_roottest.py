import csv
import io
import math

import numpy as np
import pytest
from gmpy2 import mpc, mpfr
from hypothesis import given, settings, strategies as st

from puiseux_clsp.numerics import precision
from puiseux_clsp.puiseux import PuiseuxSeries
from puiseux_clsp.roottest import (
    RootTestError,
    compare,
    default_order,
    default_window,
    estimate_radius,
    fit_envelope,
    lower_envelope,
    roottest_sequence,
    to_csv,
)


def series(coeffs, cycle=1, start=0, digits=40):
    with precision(digits):
        dense = tuple(mpc(c) for c in coeffs)
    return PuiseuxSeries(mpc(0), cycle, start, dense, digits, start)


def geometric(rho, n, cycle=1):
    with precision(60):
        return series([mpfr(rho) ** (-mpfr(k) / cycle) for k in range(n)], cycle, digits=60)


def test_geometric_series_exact():
    fit = estimate_radius(geometric(0.37, 200), 200)
    assert fit.radius == pytest.approx(0.37, rel=1e-12)


def test_cycle_scaling():
    # exponents k/3: the root test must use |a_k|^(-3/k)
    fit = estimate_radius(geometric(1.7, 300, cycle=3), 100)
    assert fit.radius == pytest.approx(1.7, rel=1e-12)


def test_polynomial_prefactor_converges():
    # y_k = 2 (k+1)^(-3/k) approaches 2 only logarithmically; more terms must help
    errs = []
    for n in (150, 600):
        with precision(60):
            s = series([(k + 1) ** 3 * mpfr(2) ** (-k) for k in range(n)], digits=60)
        errs.append(compare(2.0, estimate_radius(s, n).radius))
    assert errs[1] < errs[0] and errs[1] < 2.0


def test_zero_and_constant_terms_skipped():
    with precision(40):
        cs = [mpfr(5)] + [mpfr(3) ** (-k) if k % 2 else 0 for k in range(1, 200)]
    seq = roottest_sequence(series(cs))
    assert all(m % 2 == 1 for m in seq.m)
    assert seq.y[0] == pytest.approx(3.0)


def test_too_short():
    with pytest.raises(RootTestError):
        roottest_sequence(series([1, 2, 3]))


def test_envelope_lower_boundary():
    x = np.linspace(1, 0.01, 100)
    y = 1 + x + np.where(np.arange(100) % 2, 0.5, 0.0)  # two interleaved lines
    env = lower_envelope(x, y)
    assert all(i % 2 == 0 for i in env)
    assert len(env) >= 40


def test_envelope_monotone_keeps_tail():
    x = 1 / np.arange(1, 51)
    y = 2 + x
    assert len(lower_envelope(x, y)) >= 44


def test_window_and_order_defaults():
    assert default_window(2000) == (200, 2000)
    assert default_window(500) == (64, 500)
    assert default_window(100) == (50, 100)
    assert default_order(512) == 2 and default_order(513) == 1


def test_bad_window():
    seq = roottest_sequence(geometric(0.5, 100))
    with pytest.raises(RootTestError):
        fit_envelope(seq, (90, 200))
    with pytest.raises(ValueError):
        fit_envelope(seq, None, order=3)


@pytest.mark.parametrize("ac,rt,pct", [(0.1668, 0.1677, 0.54), (1.094, 1.099, 0.457)])
def test_compare(ac, rt, pct):
    assert compare(ac, rt) == pytest.approx(pct, abs=0.005)


def test_compare_guards():
    assert math.isinf(compare(math.inf, 1.0))
    with pytest.raises(ValueError):
        compare(0.0, 1.0)


def test_csv_round_trip():
    s = geometric(0.8, 120)
    seq = roottest_sequence(s)
    fit = fit_envelope(seq)
    rows = list(csv.DictReader(io.StringIO(to_csv(seq, fit))))
    assert len(rows) == len(seq)
    assert sum(int(r["envelope"]) for r in rows) == len(fit.envelope)
    assert float(rows[10]["y"]) == pytest.approx(0.8)


@settings(max_examples=30)
@given(st.floats(0.05, 20.0), st.integers(1, 4), st.integers(0, 40), st.integers(80, 160))
def test_geometric_any_window(rho, cycle, a, n):
    seq = roottest_sequence(geometric(rho, n * cycle, cycle))
    fit = fit_envelope(seq, (a, len(seq)), order=1 + (a % 2))
    assert fit.radius == pytest.approx(rho, rel=1e-9)
