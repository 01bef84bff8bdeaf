"""The asymptotic character X(lambda, x).

X(lambda, x) = i^{-n} delta_*(rho) sum_w det(w) e^{i(lambda, w x)} / (delta(x) delta_*(lambda))

with n = |R+|, delta(x) = prod (alpha, x) and delta_*(lambda) = prod (lambda, alpha^vee).
lambda is given by Dynkin labels and x by coroot coordinates, so every pairing
is an ordinary dot product and W acts by integer matrices.

Away from the walls the alternating sum is evaluated in double precision.
Near a wall (or when |lambda||x| is small) it cancels catastrophically.  X is
entire in (lambda, x), so there it is replaced by its mean over a complex
circle z -> (lambda + z s u, x + z s' v) along fixed generic directions, with
the scales chosen so the phases move by O(1); the trapezoid rule on the circle
is exact up to O(1/K!).  If the circle still passes close to the walls the
value is computed in extended precision at two points displaced by +-h and
averaged, which leaves an O(h^2) error.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .representations import char_eval, dim_irrep
from .rootsys import MAX_MATERIALIZED_W, RootSystem, RootSystemError

PERTURB = 1e-12
# relative size of delta(x) delta_*(lambda) / delta_*(rho) below which the fast path is abandoned
SINGULAR_SCALE = 1e-2
CONTOUR_NODES = 24
CONTOUR_RADII = (1.0, 0.75, 1.3)
# |delta delta_*| / delta_*(rho) needed on the circle, per Weyl group element
CONTOUR_MIN = 3e-3
TINY_PRODUCT = 1e-8


@dataclass(frozen=True, eq=False)
class AsymptoticCharacter:
    rs: RootSystem

    @cached_property
    def weyl_int(self) -> list[tuple[tuple[int, ...], ...]]:
        if self.rs.weyl_order > MAX_MATERIALIZED_W:
            raise RootSystemError(f"alternating sum over W({self.rs.label}) is too large")
        return [w.matrix for w in self.rs.weyl_group]

    @cached_property
    def weyl_float(self) -> np.ndarray:
        return np.array(self.weyl_int, dtype=float)

    @cached_property
    def signs(self) -> np.ndarray:
        return np.array([w.det for w in self.rs.weyl_group], dtype=float)

    @cached_property
    def root_labels(self) -> np.ndarray:
        return np.array(self.rs.positive_root_labels, dtype=float)

    @cached_property
    def coroots_exact(self) -> list[list[Fraction]]:
        rs = self.rs
        out = []
        for c in rs.positive_roots:
            n2 = rs.root_norm2(c)
            out.append([Fraction(ci) * rs.simple_root_norm2[i] / n2 for i, ci in enumerate(c)])
        return out

    @cached_property
    def coroots(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.coroots_exact])

    @cached_property
    def delta_star_rho(self) -> float:
        return float(math.prod(sum(row) for row in self.coroots_exact))

    @cached_property
    def prefactor(self) -> complex:
        return (1j) ** (-self.rs.n_pos) * self.delta_star_rho

    @cached_property
    def threshold(self) -> float:
        return SINGULAR_SCALE * max(1.0, len(self.signs) / 8)

    # -- pieces ---------------------------------------------------------------
    def delta(self, x: np.ndarray) -> np.ndarray:
        return np.prod(np.asarray(x) @ self.root_labels.T, axis=-1)

    def delta_star(self, lam: np.ndarray) -> np.ndarray:
        return np.prod(np.asarray(lam) @ self.coroots.T, axis=-1)

    def alternating_sum(self, lam: np.ndarray, x: np.ndarray) -> np.ndarray:
        """sum_w det(w) e^{i(w lambda, x)} for a batch of x (rows)."""
        wl = self.weyl_float @ np.asarray(lam, dtype=float)  # (|W|, r)
        phases = np.asarray(x) @ wl.T
        return np.exp(1j * phases) @ self.signs

    # -- evaluation -------------------------------------------------------------
    def batch(self, lam: Sequence[float], xs: np.ndarray) -> np.ndarray:
        """X(lambda, x) for every row of ``xs``."""
        lam = np.asarray(lam, dtype=float)
        xs = np.atleast_2d(np.asarray(xs))
        out = np.ones(len(xs), dtype=complex)
        if not np.any(lam):
            return out
        dl = self.delta_star(lam)
        dx = self.delta(xs)
        mag = np.abs(dx * dl) / self.delta_star_rho
        good = mag > self.threshold
        if np.any(good):
            s = self.alternating_sum(lam, xs[good])
            out[good] = self.prefactor * s / (dx[good] * dl)
        for idx in np.flatnonzero(~good):
            val = self.contour(lam, xs[idx])
            out[idx] = self.precise(lam, xs[idx]) if val is None else val
        return out

    def __call__(self, lam: Sequence[float], x: Sequence) -> complex:
        return complex(self.batch(lam, np.asarray(x)[None, :])[0])

    @cached_property
    def _contour_frame(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        r = self.rs.rank
        frame = self.rs.frame
        u = np.array(_generic_direction(r, 0))
        v = np.array(_generic_direction(r, 1))
        u_labels = np.linalg.solve(frame, u / np.linalg.norm(u))
        v_coroot = frame.T @ (v / np.linalg.norm(v))
        ring = np.exp(2j * np.pi * (np.arange(CONTOUR_NODES) + 0.5) / CONTOUR_NODES)
        return frame, u_labels, v_coroot, ring

    def contour(self, lam: np.ndarray, x: np.ndarray) -> complex | None:
        """Mean of X over a complex circle around (lambda, x); None if ill-conditioned."""
        frame, u, v, ring = self._contour_frame
        nl = np.linalg.norm(frame @ lam)
        nx = np.linalg.norm(np.linalg.solve(frame.T, x))
        # X = 1 + O((|lambda||x|)^2): the linear term averages to zero over W
        if nl * nx < TINY_PRODUCT:
            return 1.0 + 0j
        # linear phase shifts a + b and quadratic shift a b / (|lambda||x|) stay below 1/2
        a = 0.5 * min(1.0, math.sqrt(nl * nx))
        sl, sx = a / nx, a / nl
        best = None
        for radius in CONTOUR_RADII:
            z = radius * ring
            lams = lam[None, :] + (z * sl)[:, None] * u[None, :]
            xs = x[None, :] + (z * sx)[:, None] * v[None, :]
            den = self.delta(xs) * np.prod(lams @ self.coroots.T, axis=-1)
            mag = np.min(np.abs(den)) / self.delta_star_rho
            if best is None or mag > best[0]:
                best = (mag, lams, xs, den)
        mag, lams, xs, den = best
        if mag < CONTOUR_MIN * len(self.signs):
            return None
        wl = np.einsum("wij,kj->kwi", self.weyl_float, lams)
        s = np.exp(1j * np.einsum("kwi,ki->kw", wl, xs)) @ self.signs
        return complex(np.mean(self.prefactor * s / den))

    def precise(self, lam: Sequence[float], x: Sequence) -> complex:
        """Extended-precision evaluation valid on and near the walls."""
        lam = [float(v) for v in lam]
        x = [complex(v) for v in x]
        if not any(lam) or not any(x):
            return 1.0 + 0j
        r = self.rs.rank
        sl = max(abs(v) for v in lam)
        sx = max(abs(v) for v in x)
        theta = _generic_direction(r, 0)
        theta2 = _generic_direction(r, 1)
        acc = mpmath.mpc(0)
        for sgn in (1, -1):
            with mpmath.workdps(30):
                lp = [mpmath.mpf(lam[i]) + sgn * PERTURB * sl * theta[i] for i in range(r)]
                xp = [mpmath.mpc(x[i]) + sgn * PERTURB * sx * theta2[i] for i in range(r)]
                mag = abs(self._mp_delta(xp) * self._mp_delta_star(lp)) / self.delta_star_rho
                lost = 0 if mag >= 1 else int(-mpmath.log10(mag)) + 1
            with mpmath.workdps(25 + lost + int(math.log10(len(self.signs)) + 1)):
                lp = [mpmath.mpf(lam[i]) + sgn * PERTURB * sl * theta[i] for i in range(r)]
                xp = [mpmath.mpc(x[i]) + sgn * PERTURB * sx * theta2[i] for i in range(r)]
                s = mpmath.mpc(0)
                for mat, det in zip(self.weyl_int, self.signs):
                    ph = mpmath.fsum(
                        xp[j] * mpmath.fsum(mat[j][k] * lp[k] for k in range(r)) for j in range(r)
                    )
                    s += int(det) * mpmath.expj(ph)
                val = (
                    mpmath.mpc(0, 1) ** (-self.rs.n_pos)
                    * self.delta_star_rho
                    * s
                    / (self._mp_delta(xp) * self._mp_delta_star(lp))
                )
                acc += val
        return complex(acc / 2)

    def _mp_delta(self, x) -> mpmath.mpc:
        out = mpmath.mpc(1)
        for row in self.rs.positive_root_labels:
            out *= mpmath.fsum(a * b for a, b in zip(row, x))
        return out

    def _mp_delta_star(self, lam) -> mpmath.mpf:
        out = mpmath.mpf(1)
        for row in self.coroots_exact:
            out *= mpmath.fsum(mpmath.mpf(a.numerator) / a.denominator * b for a, b in zip(row, lam))
        return out


def _generic_direction(r: int, which: int) -> list[float]:
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53]
    ps = primes[which * 8 : which * 8 + r]
    return [math.sqrt(p) / (i + 1.5) for i, p in enumerate(ps)]


@lru_cache(maxsize=None)
def evaluator(rs: RootSystem) -> AsymptoticCharacter:
    return AsymptoticCharacter(rs)


def x_eval(rs: RootSystem, lam: Sequence[float], x: Sequence) -> complex:
    """X(lambda, x); lambda in Dynkin labels, x in coroot coordinates."""
    return evaluator(rs)(lam, x)


def x_eval_batch(rs: RootSystem, lam: Sequence[float], xs: np.ndarray) -> np.ndarray:
    return evaluator(rs).batch(lam, xs)


# -- characterizations ---------------------------------------------------------------
def char_ratio_convergence(
    rs: RootSystem, lam: Sequence[float], x: Sequence[float], n_list: Iterable[int]
) -> list[tuple[int, float]]:
    """|chi_[N lam](e^{ix/N}) / dim - X(lam, x)| along n_list."""
    if any(v < 0 for v in lam):
        raise ValueError("lambda must have non-negative fundamental coordinates")
    target = x_eval(rs, lam, x)
    out = []
    for n in n_list:
        lam_n = tuple(int(math.floor(n * v)) for v in lam)
        ratio = char_eval(rs, lam_n, np.asarray(x, dtype=float) / n) / dim_irrep(rs, lam_n)
        out.append((n, abs(ratio - target)))
    return out


def _integral_monomial(m: int, t: float) -> complex:
    """int_0^1 p^m e^{ipt} dp."""
    if abs(t) < 1.0 + m / 4:
        term_sum = 0j
        term = 1.0 + 0j
        for j in range(200):
            nxt = term / (m + j + 1)
            term_sum += nxt
            term = term * 1j * t / (j + 1)
            if abs(term) < 1e-18 * abs(term_sum) and j > 5:
                break
        return term_sum
    # integrate by parts repeatedly: closed form via the Taylor polynomial of e^{-it}
    taylor = sum((-1j * t) ** j / math.factorial(j) for j in range(m + 1))
    return math.factorial(m) * (np.exp(-1j * t) - taylor) / (-1j * t) ** (m + 1) * np.exp(1j * t)


def closed_form_sl_n_vector(n: int, t: float) -> complex:
    """X(omega_1, t omega_1^vee) for SL_n.

    (b, omega_1^vee) = |z_1|^2 - 1/n on CP^{n-1}, and |z_1|^2 has density
    (n-1)(1-p)^{n-2}, so X = (n-1) e^{i(n-1)t/n} int_0^1 q^{n-2} e^{-iqt} dq
    = (n-1)! (e^{it} - T_{n-2}(-t)) / (it)^{n-1} e^{-it/n},
    with T_m the degree-m Taylor polynomial of e^{-it}.
    """
    if n < 2:
        raise ValueError("n >= 2 required")
    if t == 0:
        return 1.0 + 0j
    return complex((n - 1) * np.exp(1j * (n - 1) * t / n) * _integral_monomial(n - 2, -t))


def sp4_vector_closed_form(t: float) -> float:
    """X(omega_1, t omega_1^vee) for Sp_4: 6 (t - sin t) / t^3."""
    if abs(t) < 1e-3:
        return 1.0 - t * t / 20
    return 6 * (t - math.sin(t)) / t**3


# -- heat-kernel identity ---------------------------------------------------------------
@dataclass
class HeatResult:
    value: float
    expected: float
    residual: float
    converged: bool
    nodes: int


def heat_identity(rs: RootSystem, lam: Sequence[float], t: float, nodes: int = 48) -> HeatResult:
    """Gaussian average of X(lambda, .) over g_c, reduced to the Cartan.

    int_{g_c} K(x, t) X(lambda, -ix) dx is, by Weyl integration, proportional
    to int_h delta(y)^2 X(lambda, y) e^{-|y|^2/4t} dy; the constant is fixed by
    lambda = 0.  delta(y)^2 X is expanded so nothing is divided by delta(y).
    """
    if t <= 0:
        raise ValueError("t must be positive")
    if rs.rank > 2:
        raise ValueError("tensor quadrature is limited to rank <= 2")
    lam = np.asarray(lam, dtype=float)
    expected = math.exp(-t * float(lam @ rs.gram_float @ lam))

    def run(n: int) -> float:
        u, w = np.polynomial.hermite.hermgauss(n)
        grids = np.meshgrid(*([u] * rs.rank), indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=1)
        wts = np.prod(np.stack(np.meshgrid(*([w] * rs.rank), indexing="ij"), axis=0).reshape(rs.rank, -1), axis=0)
        ye = 2 * math.sqrt(t) * pts
        c = ye @ rs.frame  # coroot coordinates: c = R^T y_e
        ev = evaluator(rs)
        d = ev.delta(c)
        z = np.sum(wts * d * d)
        if not np.any(lam):
            return 1.0
        dl = ev.delta_star(lam)
        if abs(dl) < 1e-12:
            raise ValueError("lambda must be regular for the heat identity")
        s = ev.alternating_sum(lam, c)
        integrand = d * ev.prefactor * s / dl
        return float(np.real(np.sum(wts * integrand)) / z)

    v1 = run(nodes)
    v2 = run(nodes + nodes // 2)
    return HeatResult(v2, expected, abs(v2 - expected), abs(v1 - v2) < 1e-9, nodes + nodes // 2)


def heat_identity_residual(rs: RootSystem, lam: Sequence[float], t: float, nodes: int = 48) -> float:
    res = heat_identity(rs, lam, t, nodes)
    if not res.converged:
        raise RuntimeError("Gauss-Hermite quadrature did not converge")
    return res.residual


# -- output ----------------------------------------------------------------------------
def ray_samples(rs: RootSystem, lam: Sequence[float], x: Sequence[float], ts: Sequence[float]) -> list[tuple]:
    xs = np.outer(np.asarray(ts, dtype=float), np.asarray(x, dtype=float))
    vals = x_eval_batch(rs, lam, xs)
    return [(float(t), float(v.real), float(v.imag)) for t, v in zip(ts, vals)]


def write_ray_csv(path, rows: Iterable[tuple]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "re", "im"])
        for row in rows:
            w.writerow([repr(v) for v in row])
