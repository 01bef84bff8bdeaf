"""Global minimization of Re X(lambda, .) and empirical decay rates.

x is searched in the Euclidean frame of h (the Killing form is the standard
dot product there).  Re X is W-invariant in x, so starts are folded into the
closed dominant chamber; local descent runs unconstrained, which treats the
walls like any other point.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .asympt import evaluator
from .dhspline import weight_norm
from .rootsys import RootSystem, RootSystemError

# |lambda| |x| beyond which minima are not searched for
SEARCH_RADIUS = 25.0
RESTARTS = 3
SPREAD_TOL = 1e-3


@dataclass
class Budget:
    starts: int | None = None
    max_evals: int = 400

    def resolved_starts(self, rank: int) -> int:
        return self.starts if self.starts is not None else 64 * rank * rank


@dataclass
class MinimizationResult:
    lam: list[float]
    c: float
    x_star: list[float]
    x_star_euclid: list[float]
    radius: float
    starts: int
    evaluations: int
    best_per_start: list[float] = field(repr=False)
    low_confidence: bool = False
    x_star_cartesian: list[float] | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


class Objective:
    """Re X(lambda, x) with x in the Euclidean frame, counting evaluations."""

    def __init__(self, rs: RootSystem, lam: Sequence[float]):
        self.rs = rs
        self.lam = np.asarray(lam, dtype=float)
        self.ev = evaluator(rs)
        self.to_coroot = rs.frame.T  # c = R^T x_e
        self.count = 0

    def coroot(self, xe: np.ndarray) -> np.ndarray:
        return np.asarray(xe) @ self.to_coroot.T

    def batch(self, xes: np.ndarray) -> np.ndarray:
        self.count += len(xes)
        return np.real(self.ev.batch(self.lam, self.coroot(xes)))

    def __call__(self, xe: np.ndarray) -> float:
        self.count += 1
        return float(np.real(self.ev.batch(self.lam, self.coroot(xe)[None, :])[0]))


def fold_dominant(rs: RootSystem, xe: np.ndarray) -> np.ndarray:
    """Reflect Euclidean points of h into the closed dominant chamber."""
    simple = rs.roots_euclid[: rs.rank]
    cos = rs.coroots_euclid[: rs.rank]
    x = np.atleast_2d(np.array(xe, dtype=float))
    for _ in range(10000):
        p = x @ simple.T
        bad = p < -1e-14
        if not bad.any():
            return x
        i = np.argmax(bad, axis=1)
        rows = np.flatnonzero(bad.any(axis=1))
        x[rows] -= p[rows, i[rows]][:, None] * cos[i[rows]]
    raise RuntimeError("folding into the dominant chamber did not terminate")


def halton_ball(r: int, n: int, radius: float, seed: int) -> np.ndarray:
    """n low-discrepancy points in the ball of the given radius."""
    sampler = qmc.Halton(d=r + 1 if r > 1 else 1, scramble=True, seed=seed)
    u = sampler.random(n)
    if r == 1:
        return (2 * u - 1) * radius
    # direction from a normalized Gaussian transform, radius by the volume law
    from scipy.stats import norm

    g = norm.ppf(np.clip(u[:, :r], 1e-12, 1 - 1e-12))
    g /= np.linalg.norm(g, axis=1)[:, None]
    return g * (radius * u[:, r] ** (1 / r))[:, None]


def minimize_reX(
    rs: RootSystem,
    lam: Sequence[float],
    budget: Budget | None = None,
    seed: int = 0,
    radius: float | None = None,
) -> MinimizationResult:
    """c(G, lambda) = -min Re X(lambda, x) by multistart simplex descent."""
    budget = budget or Budget()
    lam = np.asarray(lam, dtype=float)
    norm = weight_norm(rs, lam)
    if norm == 0:
        raise ValueError("lambda must be nonzero")
    r = rs.rank
    radius = radius if radius is not None else SEARCH_RADIUS / norm
    obj = Objective(rs, lam)
    n_starts = budget.resolved_starts(r)

    # screen a larger low-discrepancy cloud, then descend from the best points
    cloud = fold_dominant(rs, halton_ball(r, 8 * n_starts, radius, seed))
    vals = obj.batch(cloud)
    starts = cloud[np.argsort(vals)[:n_starts]]

    best_per_start = []
    best_x, best_val = None, math.inf
    for x0 in starts:
        x, val = x0, math.inf
        step = 0.05 * radius
        for _ in range(RESTARTS + 1):
            simplex = np.vstack([x, x + step * np.eye(r)])
            res = minimize(
                obj,
                x,
                method="Nelder-Mead",
                options={"initial_simplex": simplex, "maxfev": budget.max_evals, "xatol": 1e-9, "fatol": 1e-13},
            )
            if res.fun < val:
                x, val = res.x, float(res.fun)
            step *= 0.5
        best_per_start.append(val)
        if val < best_val:
            best_x, best_val = x, val

    top = sorted(best_per_start)[:5]
    spread = top[-1] - top[0]
    x_e = fold_dominant(rs, best_x)[0]
    x_c = obj.coroot(x_e)
    try:
        cart = [float(v) for v in rs.coweight_to_cartesian(list(x_c))]
    except RootSystemError:
        cart = None
    return MinimizationResult(
        lam=[float(v) for v in lam],
        c=-best_val,
        x_star=[float(v) for v in x_c],
        x_star_euclid=[float(v) for v in x_e],
        radius=float(radius),
        starts=len(starts),
        evaluations=obj.count,
        best_per_start=best_per_start,
        low_confidence=bool(len(top) >= 5 and spread > SPREAD_TOL),
        x_star_cartesian=cart,
    )


# -- infimum over lambda ----------------------------------------------------------------
@dataclass
class CGResult:
    c: float
    lam: list[float]
    grid: list[tuple[list[float], float]] = field(repr=False)
    low_confidence: bool = False


def _simplex_points(r: int, steps: int):
    if r == 1:
        yield (steps,)
        return
    for first in range(steps + 1):
        for rest in _simplex_points(r - 1, steps - first):
            yield (first,) + rest


def estimate_cG(
    rs: RootSystem,
    budget: Budget | None = None,
    step: float | None = None,
    refine: bool = True,
    seed: int = 0,
) -> CGResult:
    """c(G) = min over unit dominant lambda of c(G, lambda): simplex grid then pattern search."""
    if rs.rank > 3:
        raise ValueError("the lambda search is limited to rank <= 3")
    budget = budget or Budget()
    r = rs.rank

    def unit(a: np.ndarray) -> np.ndarray:
        return a / weight_norm(rs, a)

    def c_of(a: np.ndarray) -> tuple[float, bool]:
        res = minimize_reX(rs, unit(a), budget, seed=seed)
        return res.c, res.low_confidence

    if r == 1:
        c, low = c_of(np.array([1.0]))
        return CGResult(c, [1.0], [([1.0], c)], low)

    step = step or (0.02 if r == 2 else 0.1)
    steps = round(1 / step)
    grid = []
    low_any = False
    for comp in _simplex_points(r, steps):
        a = np.array(comp, dtype=float) / steps
        c, low = c_of(a)
        low_any |= low
        grid.append((a.tolist(), c))
    a_best, c_best = min(grid, key=lambda g: g[1])
    a_best = np.array(a_best)
    if refine:
        h = step / 2
        while h > 1e-3:
            moved = False
            for i in range(r):
                for j in range(r):
                    if i == j:
                        continue
                    cand = a_best.copy()
                    cand[i] += h
                    cand[j] -= h
                    if cand[j] < 0:
                        continue
                    c, low = c_of(cand)
                    if c < c_best:
                        a_best, c_best, moved = cand, c, True
                        low_any |= low
            if not moved:
                h /= 2
    return CGResult(c_best, unit(a_best).tolist(), grid, low_any)


# -- decay exponents ------------------------------------------------------------------
class DecayError(ValueError):
    pass


@dataclass
class DecayFit:
    exponent: float
    ts: list[float] = field(repr=False)
    envelope: list[float] = field(repr=False)


def decay_rate_fit(
    rs: RootSystem,
    lam: Sequence[float],
    x: Sequence[float],
    t_range: tuple[float, float] = (20.0, 2000.0),
    samples: int = 200,
) -> DecayFit:
    """Slope of log sup_{s >= t} |X(lambda, s x)| against log t."""
    lam = np.asarray(lam, dtype=float)
    x = np.asarray(x, dtype=float)
    if not lam.any() or not x.any():
        raise ValueError("lambda and x must be nonzero")
    ts = np.geomspace(t_range[0], t_range[1], samples)
    vals = np.abs(evaluator(rs).batch(lam, ts[:, None] * x[None, :]))
    env = np.maximum.accumulate(vals[::-1])[::-1]
    if np.any(env <= 0):
        raise DecayError("envelope vanishes; the input is degenerate")
    slope = np.polyfit(np.log(ts), np.log(env), 1)[0]
    if slope > -0.1:
        raise DecayError(f"envelope does not decay (slope {slope:.3g}); singular input")
    return DecayFit(float(-slope), ts.tolist(), env.tolist())
