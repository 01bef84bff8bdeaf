from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from asymchar.mittag import (
    MittagError,
    beta_xi,
    central_character,
    central_characters,
    character_coefficient,
    coefficient_finite_n,
    decompose,
    lattice_sum_eval,
    monomial_coefficient,
    support_set,
    twisted_rational_sum,
)
from asymchar.rootsys import build

A1 = build("A", 1)


@pytest.mark.parametrize(
    "k,xi,expected",
    [
        (1, 0, {(0,): Fraction(1)}),
        (1, 1, {(1,): Fraction(1, 2)}),
        (2, 0, {(0,): Fraction(1)}),
        (2, 1, {(1,): Fraction(1, 2)}),
        (3, 0, {(0,): Fraction(5, 8), (2,): Fraction(1, 8)}),
    ],
)
def test_a1_exact(k, xi, expected):
    assert decompose(A1, k, central_character(A1, xi)).coefficients == expected


def test_a1_closed_forms():
    # k = 2, trivial xi: sum_a sin^2(pi y)/(pi^2 (y+a)^2) = 1; nontrivial: cos(pi y)
    xi0, xi1 = central_characters(A1)
    for y in (0.13, 0.37, 0.71):
        assert abs(lattice_sum_eval(A1, 2, xi0, [y]).value - 1) < 1e-12
        assert abs(lattice_sum_eval(A1, 2, xi1, [y]).value - np.cos(np.pi * y)) < 1e-12


def test_center_sizes():
    sizes = {("A", 1): 2, ("A", 2): 3, ("A", 3): 4, ("C", 2): 2, ("B", 3): 2, ("G", 2): 1, ("D", 4): 4, ("E", 6): 3}
    for key, n in sizes.items():
        assert len(central_characters(build(*key))) == n
    with pytest.raises(MittagError):
        central_character(build("G", 2), 1)


@pytest.mark.parametrize("key", [("A", 2), ("B", 2), ("C", 2), ("G", 2)])
@pytest.mark.parametrize("k", [1, 2])
def test_positivity_and_mass(key, k):
    rs = build(*key)
    if key == ("G", 2) and k == 2:
        pytest.skip("covered by the slow test below")
    for xi in central_characters(rs):
        res = decompose(rs, k, xi)
        assert all(c > 0 for c in res.coefficients.values())
        assert res.mass(rs) == 1
        assert sorted(res.coefficients) == support_set(rs, k, xi)


@pytest.mark.slow
def test_g2_k2_mass():
    rs = build("G", 2)
    res = decompose(rs, 2, central_character(rs, 0))
    assert res.mass(rs) == 1 and min(res.coefficients.values()) > 0


def test_b2_c2_isomorphism():
    b, c = build("B", 2), build("C", 2)
    for k in (1, 2):
        for i in range(2):
            cb = decompose(b, k, central_character(b, i)).coefficients
            cc = decompose(c, k, central_character(c, i)).coefficients
            assert {mu[::-1]: v for mu, v in cb.items()} == cc


def test_monomial_is_not_character_coefficient():
    assert monomial_coefficient(A1, 3, (0,)) == Fraction(3, 4)
    assert character_coefficient(A1, 3, (0,)) == Fraction(5, 8)


def test_coefficients_from_tensor_powers():
    # independent route: weight multiplicities of L_{N rho} (x) L_{N rho}, Richardson in 1/N
    rs = build("A", 2)
    for mu in [(1, 1), (0, 0), (3, 0)]:
        a, b = coefficient_finite_n(rs, 2, mu, 16), coefficient_finite_n(rs, 2, mu, 32)
        exact = float(monomial_coefficient(rs, 2, mu))
        assert abs((2 * b - a) - exact) < 0.02 * max(exact, 0.01)


@pytest.mark.parametrize("key", [("A", 2), ("C", 2), ("G", 2), ("A", 3)])
def test_beta_form_of_support(key):
    rs = build(*key)
    for k in (1, 2, 3):
        for xi in central_characters(rs):
            support_set(rs, k, xi)  # raises if the two characterizations disagree
    m, _ = beta_xi(rs, rs.rho)
    assert all(0 < v <= 1 for v in m)


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=2, max_size=3),
    st.sampled_from([0.0, 0.25, 0.7]),
    st.integers(1, 2),
)
def test_twisted_rational_sum_brute_force(poles, theta, k):
    poles = np.array(poles)
    n = np.arange(-200000, 200001)
    if np.min(np.abs(n[:, None] - poles[None, :])) < 0.2:
        return
    if len(poles) > 1 and np.min(np.abs(np.subtract.outer(poles, poles)[~np.eye(len(poles), dtype=bool)])) < 0.2:
        return
    terms = np.exp(2j * np.pi * theta * n) * np.prod((n[:, None] - poles[None, :]) ** (-k), axis=1)
    brute = np.sum(terms)
    exact = twisted_rational_sum(poles[None, :], k, theta)[0]
    # without the twist the truncated tail is about 2 / ((p - 1) N^(p - 1)), p = k J
    p = k * len(poles)
    tail = 2 / ((p - 1) * float(n[-1]) ** (p - 1)) if theta == 0 else 0.0
    assert abs(exact - brute) < 2 * tail + 1e-8 * max(1, abs(brute))


@pytest.mark.parametrize("key,k,xi", [(("A", 2), 1, 1), (("A", 2), 2, 0), (("C", 2), 2, 1), (("G", 2), 1, 0)])
def test_lattice_sum_matches_polynomial(key, k, xi):
    rs = build(*key)
    chi = central_character(rs, xi)
    poly = decompose(rs, k, chi)
    rng = np.random.default_rng(7)
    for y in rng.uniform(0, 1, size=(6, 2)):
        ls = lattice_sum_eval(rs, k, chi, y)
        assert abs(ls.value - poly.evaluate(rs, y)) <= ls.tail_bound


def test_line_and_direct_modes_agree():
    rs = build("A", 2)
    chi = central_character(rs, 1)
    line = lattice_sum_eval(rs, 2, chi, [0.31, 0.47])
    direct = lattice_sum_eval(rs, 2, chi, [0.31, 0.47], mode="direct", truncation_radius=80)
    assert abs(line.value - direct.value) <= line.tail_bound + direct.tail_bound


def test_wall_points():
    rs = build("A", 2)
    chi = central_character(rs, 0)
    poly = decompose(rs, 2, chi)
    for y in ([0.3, 0.7], [0.5, 0.0], [0.25, 0.25]):
        ls = lattice_sum_eval(rs, 2, chi, y)
        assert abs(ls.value - poly.evaluate(rs, y)) <= ls.tail_bound
    assert lattice_sum_eval(rs, 2, chi, [1.0, 2.0]).value == 1
