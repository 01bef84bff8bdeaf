import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from asymchar.boxspline import BoxSpline
from asymchar.dhspline import (
    b_value,
    box_density,
    dh_eval_finite_n,
    dh_rho_convolution_eval,
    dh_second_moment,
    dh_second_moment_exact,
    dh_second_moment_finite_n,
    in_polytope,
    inradius,
    r_g,
    r_g_search,
)
from asymchar.rootsys import build


def test_univariate_cardinal_splines():
    # centered B-splines of order 2 and 3
    hat = BoxSpline([(1,)], (2,))
    assert hat([0]) == 1 and hat([Fraction(1, 2)]) == Fraction(1, 2) and hat([1]) == 0
    quad = BoxSpline([(1,)], (3,))
    assert quad([0]) == Fraction(3, 4)
    assert quad([1]) == Fraction(1, 8)


def test_zwart_powell_center():
    # directions (1,0),(0,1),(1,1),(1,-1); mass is one
    zp = BoxSpline([(1, 0), (0, 1), (1, 1), (1, -1)], (1, 1, 1, 1))
    step = Fraction(1, 8)
    pts = [Fraction(i) * step for i in range(-24, 25)]
    mass = sum(zp([a + step / 2, b + step / 2]) for a in pts for b in pts) * step * step
    assert abs(float(mass) - 1) < 1e-12


@pytest.mark.parametrize("kind,rank,k", [("A", 1, 1), ("A", 2, 1), ("A", 2, 2), ("C", 2, 1), ("G", 2, 1)])
def test_box_density_has_unit_mass(kind, rank, k):
    # midpoint sum over the bounding box of the support, in root coordinates
    rs = build(kind, rank)
    m = 6
    half = [k * sum(abs(c[i]) for c in rs.positive_roots) / 2 for i in range(rank)]
    axes = [[Fraction(2 * j + 1, 2 * m) for j in range(-math.ceil(h * m) - 1, math.ceil(h * m) + 1)] for h in half]
    total = Fraction(0)
    for q in itertools.product(*axes):
        total += box_density(rs, k, rs.root_coords_to_labels(q))
    assert abs(float(total) / m**rank - 1) < 2e-3


def test_a1_box_matches_triangle():
    rs = build("A", 1)
    # DH_rho for A1 is uniform on [-1/2, 1/2] alpha; its square is a hat
    assert box_density(rs, 1, [0]) == 1
    assert box_density(rs, 2, [0]) == 1
    assert box_density(rs, 2, [Fraction(1, 2)]) == Fraction(3, 4)


@pytest.mark.parametrize("kind", ["A", "C", "G"])
def test_box_spline_matches_weight_multiplicities(kind):
    rs = build(kind, 2)
    for mu in ([0, 0], [Fraction(1, 3), Fraction(1, 3)], [Fraction(1, 2), 0]):
        exact = dh_rho_convolution_eval(rs, 1, mu).density
        try:
            res = dh_eval_finite_n(rs, rs.rho, mu, [12, 24, 36])
        except ValueError:
            continue
        assert abs(res.value - exact) < 5e-3 * max(exact, 1)


@pytest.mark.parametrize("kind,rank", [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("C", 2), ("G", 2), ("B", 3)])
def test_second_moment_exact(kind, rank):
    rs = build(kind, rank)
    assert dh_second_moment_exact(rs) == Fraction(1, rs.coxeter_number + 1)


@pytest.mark.parametrize("kind,lam", [("C", (1, 0)), ("C", (0, 1)), ("C", (1, 1)), ("G", (1, 0)), ("A", (2, 1))])
def test_second_moment_any_direction(kind, lam):
    rs = build(kind, 2)
    res = dh_second_moment_finite_n(rs, lam, (8, 16, 24))
    assert abs(res.value - 1 / (rs.coxeter_number + 1)) < 1e-6


def test_second_moment_wrapper():
    rs = build("C", 2)
    assert dh_second_moment(rs) == pytest.approx(0.2)
    assert dh_second_moment(rs, [1, 2]) == pytest.approx(0.2, rel=1e-6)


def test_inradius_and_r_g():
    for kind, rank in [("A", 2), ("C", 2), ("G", 2), ("A", 3)]:
        rs = build(kind, rank)
        best, _ = r_g_search(rs, steps=30 if rank == 2 else 12)
        assert r_g(rs) <= best + 1e-12
        assert best - r_g(rs) < 1e-9
    rs = build("A", 1)
    # Pi_lambda = [-lambda, lambda]: inradius equals |lambda|
    assert inradius(rs, [2.0]) == pytest.approx(2 * math.sqrt(0.125))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=2, max_size=2))
def test_polytope_membership_agrees_with_hull(p):
    from scipy.spatial import Delaunay

    rs = build("C", 2)
    lam = (1, 1)
    hull = Delaunay(np.array([rs.weight_to_euclid(v) for v in rs.weyl_orbit(lam)]))
    p = np.array(p)
    inner = hull.find_simplex(rs.weight_to_euclid(0.999 * p)) >= 0
    outer = hull.find_simplex(rs.weight_to_euclid(1.001 * p)) >= 0
    if inner == outer:
        assert in_polytope(rs, lam, p) == inner


@pytest.mark.parametrize("kind,rank,expected", [("A", 1, 1.0), ("A", 2, 3.627598728468436), ("C", 2, 3.926990816987241)])
def test_b_value_rho(kind, rank, expected):
    assert b_value(build(kind, rank), build(kind, rank).rho) == pytest.approx(expected, rel=1e-12)
