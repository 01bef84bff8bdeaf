"""Duistermaat-Heckman densities and the polytope Pi_lambda.

DH_rho is the centered box spline with the positive roots as directions, so
(DH_rho)^{*k} is the box spline with every positive root repeated k times.
Box-spline values are exact rationals with respect to Lebesgue measure in
simple-root coordinates; dividing by the covolume of the root lattice,
sqrt(det gram_root), converts them to densities for the invariant form.

For general rational lambda the density is obtained from weight
multiplicities: N^r dim L_{N lambda}[N mu] / dim L_{N lambda} / covol(Q) tends to
DH_lambda(mu), and the limit is taken by Richardson extrapolation in 1/N.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import linalg as la
from .boxspline import BoxSpline
from .representations import dim_irrep, dominant_multiplicities, weight_diagram
from .rootsys import RootSystem, build


class DHError(ValueError):
    pass


@lru_cache(maxsize=None)
def _spline(kind: str, rank: int, k: int) -> BoxSpline:
    rs = build(kind, rank)
    return BoxSpline(list(rs.positive_roots), (k,) * rs.n_pos)


def covolume(rs: RootSystem) -> float:
    """Volume of a fundamental domain of the root lattice."""
    return math.sqrt(float(la.det(rs.gram_root)))


@dataclass(frozen=True)
class SplineValue:
    """A box-spline value: exact root-coordinate density and the float density."""

    rational: Fraction
    covolume: float

    @property
    def density(self) -> float:
        return float(self.rational) / self.covolume


def box_density(rs: RootSystem, k: int, p_labels: Sequence) -> Fraction:
    """(DH_rho)^{*k}(p) in root coordinates (exact); p given by Dynkin labels."""
    if k < 1:
        raise DHError("k must be positive")
    q = rs.labels_to_root_coords([Fraction(v) for v in p_labels])
    return _spline(rs.kind, rs.rank, k)(q)


def dh_rho_convolution_eval(rs: RootSystem, k: int, p: Sequence, mode: str = "exact"):
    """(DH_rho)^{*k}(p) for p in Dynkin labels.

    ``mode="exact"`` returns a :class:`SplineValue`; ``mode="float"`` returns
    the density with respect to the invariant Lebesgue measure.
    """
    if mode == "float":
        p = [Fraction(float(v)) for v in p]
    val = SplineValue(box_density(rs, k, p), covolume(rs))
    return val if mode == "exact" else val.density


def _richardson(ns: Sequence[int], vals: Sequence[float]) -> tuple[float, float]:
    """Extrapolate vals(N) to N = infinity assuming an expansion in 1/N.

    Returns (value, error estimate from the last two table entries).
    """
    hs = [1.0 / n for n in ns]
    table = [list(vals)]
    for level in range(1, len(ns)):
        prev = table[-1]
        row = []
        for i in range(len(prev) - 1):
            h0, h1 = hs[i], hs[i + level]
            row.append((h0 * prev[i + 1] - h1 * prev[i]) / (h0 - h1))
        table.append(row)
    best = table[-1][0]
    err = abs(best - table[-2][-1]) if len(table) > 1 else float("inf")
    return best, err


@dataclass
class FiniteNResult:
    value: float
    error: float
    samples: list[tuple[int, float]]


def dh_eval_finite_n(rs: RootSystem, lam: Sequence, mu: Sequence, n_list: Sequence[int]) -> FiniteNResult:
    """DH_lambda(mu) from weight multiplicities of L_{N lambda}."""
    lam = [Fraction(v) for v in lam]
    mu = [Fraction(v) for v in mu]
    if any(v <= 0 for v in lam):
        raise DHError("lambda must be regular dominant")
    cov = covolume(rs)
    samples = []
    for n in n_list:
        lam_n = [n * v for v in lam]
        mu_n = [n * v for v in mu]
        if any(v.denominator != 1 for v in lam_n + mu_n):
            raise DHError(f"N={n} does not clear denominators")
        diff = rs.labels_to_root_coords([a - b for a, b in zip(lam_n, mu_n)])
        if any(d.denominator != 1 for d in diff):
            raise DHError(f"N lambda - N mu is not in the root lattice for N={n}")
        lam_i = tuple(int(v) for v in lam_n)
        dom, _ = rs.dominant_representative(tuple(int(v) for v in mu_n))
        m = dominant_multiplicities(rs, lam_i).get(dom, 0)
        samples.append((n, n**rs.rank * m / dim_irrep(rs, lam_i) / cov))
    value, err = _richardson([s[0] for s in samples], [s[1] for s in samples])
    return FiniteNResult(value, err, samples)


def dh_second_moment_exact(rs: RootSystem, k: int = 1) -> Fraction:
    """int |p|^2 of (DH_rho)^{*k}, scaled to |k rho| = 1: k sum (alpha,alpha)/12 / |k rho|^2."""
    total = sum((rs.root_norm2(c) for c in rs.positive_roots), Fraction(0)) * k / 12
    return total / (k * k * rs.norm2(rs.rho))


def dh_second_moment_finite_n(rs: RootSystem, lam: Sequence[int], n_list: Sequence[int]) -> FiniteNResult:
    """sum_mu m(mu) |mu|^2 / (dim |N lambda|^2) over the weight diagram, extrapolated."""
    g = rs.gram_float
    lam = np.asarray(lam, dtype=float)
    norm = float(lam @ g @ lam)
    samples = []
    for n in n_list:
        diag = weight_diagram(rs, tuple(int(n * v) for v in lam))
        w = np.array(list(diag.keys()), dtype=float)
        m = np.array(list(diag.values()), dtype=float)
        second = float(np.sum(m * np.einsum("ij,jk,ik->i", w, g, w)) / m.sum())
        samples.append((n, second / (n * n * norm)))
    value, err = _richardson([s[0] for s in samples], [s[1] for s in samples])
    return FiniteNResult(value, err, samples)


def dh_second_moment(rs: RootSystem, lam_unit: Sequence | None = None, n_list=(8, 16, 24)) -> float:
    """Second moment of DH for unit lambda.

    For lambda proportional to rho (or rank one) this is exact; otherwise the
    finite-N route is used on the rational direction given.
    """
    if lam_unit is None or _proportional_to_rho(lam_unit) or rs.rank == 1:
        return float(dh_second_moment_exact(rs))
    lam = [Fraction(v).limit_denominator(1000) for v in lam_unit]
    den = math.lcm(*(v.denominator for v in lam))
    return dh_second_moment_finite_n(rs, [int(v * den) for v in lam], n_list).value


def _proportional_to_rho(lam: Sequence) -> bool:
    vals = [float(v) for v in lam]
    return all(abs(v - vals[0]) <= 1e-12 * max(1.0, abs(vals[0])) for v in vals) and vals[0] > 0


# -- polytope -------------------------------------------------------------------------
def coweight_norms(rs: RootSystem) -> np.ndarray:
    cw = np.array([[float(v) for v in row] for row in rs.fundamental_coweights])
    return np.linalg.norm(rs.coweight_to_euclid(cw), axis=1)


def weight_norm(rs: RootSystem, lam: Sequence) -> float:
    lam = np.asarray(lam, dtype=float)
    return math.sqrt(float(lam @ rs.gram_float @ lam))


def inradius(rs: RootSystem, lam: Sequence) -> float:
    """Largest R with the ball of radius R inside Pi_lambda."""
    dom, _ = _dominant_float(rs, lam)
    if not np.any(dom):
        raise DHError("lambda must be nonzero")
    pairing = np.array([[float(v) for v in row] for row in rs.cartan_inverse])  # (omega_i, omega_j^vee)
    heights = dom @ pairing
    return float(np.min(heights / coweight_norms(rs)))


def r_g(rs: RootSystem) -> float:
    """min of R(lambda) over unit lambda; attained on an extremal ray of the chamber."""
    pairing = np.array([[float(v) for v in row] for row in rs.cartan_inverse])
    wn = np.array([weight_norm(rs, [int(i == j) for j in range(rs.rank)]) for i in range(rs.rank)])
    ratios = pairing / wn[:, None] / coweight_norms(rs)[None, :]
    return float(ratios.min())


def r_g_search(rs: RootSystem, steps: int = 100) -> tuple[float, np.ndarray]:
    """Grid search of R(lambda)/|lambda| over the simplex of dominant directions."""
    best, arg = math.inf, None
    r = rs.rank
    for comp in _simplex_grid(r, steps):
        lam = np.array(comp, dtype=float) / steps
        val = inradius(rs, lam) / weight_norm(rs, lam)
        if val < best:
            best, arg = val, lam
    return best, arg


def _simplex_grid(r: int, steps: int):
    if r == 1:
        yield (steps,)
        return
    for first in range(steps + 1):
        for rest in _simplex_grid(r - 1, steps - first):
            yield (first,) + rest


def _dominant_float(rs: RootSystem, labels: Sequence) -> tuple[np.ndarray, int]:
    v = np.array(labels, dtype=float)
    cm = np.array(rs.cartan, dtype=float)
    flips = 0
    for _ in range(10000):
        neg = np.flatnonzero(v < -1e-15)
        if len(neg) == 0:
            return np.maximum(v, 0.0), flips
        i = neg[0]
        v = v - v[i] * cm[i]
        flips += 1
    raise RuntimeError("reflection to the dominant chamber did not terminate")


def in_polytope(rs: RootSystem, lam: Sequence, p: Sequence, tol: float = 1e-12) -> bool:
    """p in conv(W lambda) iff lambda - dom(p) is a non-negative combination of simple roots."""
    dl, _ = _dominant_float(rs, lam)
    dp, _ = _dominant_float(rs, p)
    cinv = np.array([[float(v) for v in row] for row in rs.cartan_inverse])
    return bool(np.all((dl - dp) @ cinv >= -tol))


# -- central value ---------------------------------------------------------------------
def b_value(rs: RootSystem, lam: Sequence, n_list=(12, 24, 36)) -> float:
    """B(lambda) = pi^{r/2} / Gamma(r/2 + 1) DH_{lambda/|lambda|}(0)."""
    r = rs.rank
    if _proportional_to_rho(lam) or r == 1:
        # DH_{t rho}(0) = t^{-r} DH_rho(0)
        rho_norm = math.sqrt(float(rs.norm2(rs.rho)))
        dh0 = dh_rho_convolution_eval(rs, 1, [0] * r).density * rho_norm**r
    else:
        lam_q = [Fraction(float(v)).limit_denominator(100) for v in lam]
        if any(v <= 0 for v in lam_q):
            raise DHError("lambda must be regular")
        res = dh_eval_finite_n(rs, lam_q, [0] * r, _admissible_ns(rs, lam_q, n_list))
        dh0 = res.value * weight_norm(rs, [float(v) for v in lam_q]) ** r
    return math.pi ** (r / 2) / math.gamma(r / 2 + 1) * dh0


def _admissible_ns(rs: RootSystem, lam: Sequence[Fraction], wanted: Sequence[int]) -> list[int]:
    den = math.lcm(*(v.denominator for v in lam))
    cinv = rs.cartan_inverse
    # N lambda must lie in the root lattice
    step = den
    while True:
        coords = la.vecmat([step * v for v in lam], cinv)
        if all(c.denominator == 1 for c in coords):
            break
        step += den
    return [step * max(1, round(n / step)) for n in wanted]
