import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize_scalar

from asymchar.bounds import theorem1_lower_bound
from asymchar.dhspline import weight_norm
from asymchar.optimize import (
    Budget,
    decay_rate_fit,
    estimate_cG,
    fold_dominant,
    halton_ball,
    minimize_reX,
)
from asymchar.rootsys import build

# -min sin(u)/u, attained at the first positive root of tan u = u
SINC = minimize_scalar(lambda u: math.sin(u) / u, bounds=(3.5, 5.5), method="bounded", options={"xatol": 1e-12})


def test_a1_against_sinc():
    rs = build("A", 1)
    res = minimize_reX(rs, [1.0], Budget(starts=16))
    assert res.c == pytest.approx(-SINC.fun, abs=1e-9)
    # (lambda, x) in Killing norms: |lambda| |x| = u*
    u = weight_norm(rs, [1.0]) * np.linalg.norm(res.x_star_euclid)
    assert u == pytest.approx(SINC.x, abs=1e-5)


def test_scaling_invariance():
    rs = build("A", 2)
    a = minimize_reX(rs, [0.3, 1.0], Budget(starts=24), seed=3)
    b = minimize_reX(rs, [0.6, 2.0], Budget(starts=24), seed=3)
    assert a.c == pytest.approx(b.c, abs=1e-7)
    assert np.linalg.norm(a.x_star_euclid) == pytest.approx(2 * np.linalg.norm(b.x_star_euclid), rel=1e-4)


def test_deterministic():
    rs = build("G", 2)
    a = minimize_reX(rs, [1.0, 0.5], Budget(starts=8), seed=11)
    b = minimize_reX(rs, [1.0, 0.5], Budget(starts=8), seed=11)
    assert a == b


def test_rejects_zero_lambda():
    with pytest.raises(ValueError):
        minimize_reX(build("A", 2), [0.0, 0.0])


def test_sl3_rho_below_upper_bound():
    rs = build("A", 2)
    res = minimize_reX(rs, [1.0, 1.0], Budget(starts=48))
    assert theorem1_lower_bound(rs.dim) <= res.c <= 4 / math.pi**2


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 200), st.floats(0.1, 30), st.integers(0, 2**16))
def test_halton_ball_inside(r, n, radius, seed):
    pts = halton_ball(r, n, radius, seed)
    assert pts.shape == (n, r)
    assert np.all(np.linalg.norm(pts, axis=1) <= radius * (1 + 1e-12))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=2, max_size=2), st.sampled_from(["A", "C", "G"]))
def test_fold_dominant(xe, kind):
    rs = build(kind, 2)
    xe = np.array(xe)
    f = fold_dominant(rs, xe)[0]
    assert np.linalg.norm(f) == pytest.approx(np.linalg.norm(xe), abs=1e-9)
    # dominant: (alpha_i, x) >= 0, and the labels of alpha_i are the rows of the Cartan matrix
    c = rs.euclid_to_coweight(f)
    assert np.all(np.array(rs.cartan, dtype=float) @ c >= -1e-9)


def test_estimate_cg_a1():
    res = estimate_cG(build("A", 1), Budget(starts=16))
    assert res.c == pytest.approx(-SINC.fun, abs=1e-9)


def test_decay_rates():
    rs = build("A", 2)
    x = [float(v) for v in rs.fundamental_coweights[0]]
    assert decay_rate_fit(rs, [1.0, 0.0], x).exponent == pytest.approx(1.0, abs=0.05)
    rs = build("C", 2)
    x = [float(v) for v in rs.fundamental_coweights[0]]
    assert decay_rate_fit(rs, [1.0, 0.0], x).exponent == pytest.approx(2.0, abs=0.05)
    # regular lambda and generic x: |R+| = 4
    fit = decay_rate_fit(rs, [1.0, 1.0], [0.37, 1.21], t_range=(20, 400))
    assert fit.exponent == pytest.approx(4.0, abs=0.3)


def test_decay_rejects_zero():
    with pytest.raises(ValueError):
        decay_rate_fit(build("A", 2), [0.0, 0.0], [1.0, 0.0])
