import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize_scalar
from scipy.special import gammaincc

from asymchar.bounds import (
    b0,
    c_d,
    c_d_optimized,
    cn_constant,
    d_g_from_m,
    full_report,
    geometric_constants,
    ggr_check,
    k_constant,
    m_n,
    optimal_l,
    sln_upper,
    theorem1_lower_bound,
    theorem35_bracket,
)
from asymchar.dhspline import b_value
from asymchar.rootsys import build


def test_theorem1_closed_form():
    # d = 3: h = 5/2
    h = 2.5
    expected = math.exp(-1) * (1 - math.exp(-1)) ** h / (h**h * math.log(h) ** 1.5)
    assert theorem1_lower_bound(3) == pytest.approx(expected, rel=1e-15)
    assert 0.005 < theorem1_lower_bound(3) < 0.02
    with pytest.raises(ValueError):
        theorem1_lower_bound(2)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 40), st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_c_d_against_scipy_gamma(d, L, v):
    q = gammaincc(d / 2, d * v / 2)
    expected = ((1 - L) * (1 - q) - math.exp(-L / v)) / q
    assert c_d(d, L, v) == pytest.approx(expected, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("d", [3, 8, 10, 14])
def test_optimal_l_is_stationary(d):
    _, L, v = c_d_optimized(d)
    h = 1e-6
    slope = (c_d(d, L + h, v) - c_d(d, L - h, v)) / (2 * h)
    assert abs(slope) < 1e-5
    assert optimal_l(d, v) == pytest.approx(L)


@pytest.mark.parametrize("d", [3, 10])
def test_c_d_optimized_beats_brute_force(d):
    val, _, _ = c_d_optimized(d)
    best = -math.inf
    for L in np.linspace(0.01, 0.99, 99):
        for v in np.geomspace(1e-3, 0.99, 200):
            best = max(best, c_d(d, L, v))
    assert val >= best - 1e-12
    assert val <= best * 1.05 + 1e-12


def test_chain_d3():
    val, _, _ = c_d_optimized(3)
    assert theorem1_lower_bound(3) <= val <= 0.2172


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 20))
def test_b0_solves_equation(z):
    b = b0(z)
    assert 0 < b < 1
    assert 1 / b + math.log(b) - 1 == pytest.approx(z, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(1.05, 50))
def test_d_g_is_minimum(m):
    res = minimize_scalar(lambda b: (1 / (1 - b)) * (math.log(m) - math.log(b)), bounds=(1e-9, 1 - 1e-9), method="bounded", options={"xatol": 1e-12})
    assert math.log(d_g_from_m(m)) == pytest.approx(res.fun, rel=1e-7)


def _ratio_float(n, x):
    taylor = sum((-1j * x) ** j / math.factorial(j) for j in range(n + 1))
    return abs(math.factorial(n) * (taylor - np.exp(-1j * x)) / x**n)


def test_m_n_against_dense_sampling():
    xs = np.linspace(0.5, 60, 200000)
    for n in (1, 2):
        dense = max(_ratio_float(n, x) for x in xs[::10])
        assert m_n(n) == pytest.approx(dense, rel=1e-6)
    assert m_n(0) == 2.0
    assert m_n(1) == pytest.approx(1.25959, abs=1e-5)
    for n in (3, 4):
        assert m_n(n) == 1.0
        assert max(_ratio_float(n, x) for x in xs[::50]) < 1.0


def test_cn_small_cases():
    # degree 0: |a0| <= 1 so C_1 = M_0; degree 1: the extreme line is 1 - 2t
    assert cn_constant(1).value == pytest.approx(2.0)
    assert cn_constant(2).value == pytest.approx(2.0 + 2 * m_n(1), rel=1e-9)
    res = cn_constant(4)
    vals = [v for _, v in res.grid_values]
    assert all(a >= b - 1e-9 for a, b in zip(vals, vals[1:]))
    assert 100 < res.value < 110


def test_k_constant():
    k, a = k_constant()
    assert k == pytest.approx(4 / math.pi**2, abs=1e-10)
    assert a == pytest.approx(math.pi / 2, abs=1e-6)
    assert sln_upper(3) == pytest.approx(4 / math.pi**2, abs=1e-10)
    assert sln_upper(2) == 1.0


@pytest.mark.parametrize("kind,rank", [("A", 1), ("A", 2), ("C", 2), ("G", 2)])
def test_geometric_constants(kind, rank):
    rs = build(kind, rank)
    rep = geometric_constants(rs)
    assert rep["M_G"] == pytest.approx(math.sqrt(rs.coxeter_number + 1) / rep["R_G"])
    assert 0 < rep["b0"] < 1
    assert rep["E_G"] > 1e5
    lo, hi = theorem35_bracket(rs)
    assert lo <= b_value(rs, rs.rho) <= hi


def test_a1_radius():
    assert geometric_constants(build("A", 1))["R_G"] == pytest.approx(1.0)


def test_full_report_json():
    rep = full_report(build("A", 2))
    data = json.loads(rep.to_json())
    assert data["group"] == "A2"
    assert {"E_G", "C(G)", "C_N", "sln_upper", "theorem1_lower_bound"} <= set(data["constants"])
    assert rep["sln_upper"] == pytest.approx(4 / math.pi**2)


def test_ggr_a1_witness():
    rs = build("A", 1)
    res = ggr_check(rs, (10,), 0.2172, 1e6)
    # chi_10 / 11 = sin(11 x/2) / (11 sin(x/2)) with x the coroot coordinate
    xs = np.linspace(1e-3, 2 * np.pi - 1e-3, 400001)
    dense = np.min(np.sin(11 * xs / 2) / (11 * np.sin(xs / 2)))
    assert res.ratio == pytest.approx(dense, abs=1e-8)
    assert res.witness is not None
    assert not res.threshold_passed
