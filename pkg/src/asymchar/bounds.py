"""Explicit constants: lower bounds for c(G), the chain R_G -> M_G -> D_G -> E_G -> C(G),
the SL_n upper bound and the threshold for large dominant weights.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np
from scipy.optimize import linprog

from .asympt import evaluator
from .dhspline import r_g, weight_norm
from .incgamma import gammaq
from .representations import char_eval, dim_irrep
from .rootsys import RootSystem

GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass
class BoundReport:
    """Named constants with the formula and inputs that produced them."""

    group: str
    entries: dict = field(default_factory=dict)

    def add(self, name: str, value, formula: str, **inputs) -> None:
        self.entries[name] = {"value": value, "formula": formula, "inputs": inputs}

    def __getitem__(self, name: str):
        return self.entries[name]["value"]

    def to_json(self) -> str:
        return json.dumps({"group": self.group, "constants": self.entries}, sort_keys=True, indent=2)


def golden_max(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 500) -> tuple[float, float]:
    """Maximize a unimodal f on [lo, hi]; returns (argmax, max)."""
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) < tol * max(1.0, abs(a) + abs(b)):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


# -- lower bound for c(G) -----------------------------------------------------------
def theorem1_lower_bound(d: int) -> float:
    """e^{-1}(1-e^{-1})^{d/2+1} / ((d/2+1)^{d/2+1} log(d/2+1)^{d/2})."""
    if d < 3:
        raise ValueError("d >= 3 required")
    h = d / 2 + 1
    return math.exp(-1) * (1 - math.exp(-1)) ** h / (h**h * math.log(h) ** (d / 2))


def c_d(d: int, L: float, v: float) -> float:
    """[(1-L)(1-Q) - e^{-L/v}] / Q with Q = Gamma(d/2, dv/2)/Gamma(d/2)."""
    q = gammaq(d / 2, d * v / 2)
    return ((1 - L) * (1 - q) - math.exp(-L / v)) / q


def optimal_l(d: int, v: float) -> float:
    """Stationary point of c_d(., v) in L."""
    q = gammaq(d / 2, d * v / 2)
    p = v * (1 - q)
    return -v * math.log(p) if p > 0 else math.inf


def c_d_optimized(d: int, samples: int = 400) -> tuple[float, float, float]:
    """max over 0 < v < 1 of c_d(L_0(v), v); returns (value, L, v)."""

    def objective(v: float) -> float:
        L = optimal_l(d, v)
        if not 0 < L < 1:
            return -math.inf
        return c_d(d, L, v)

    grid = np.geomspace(1e-4, 1 - 1e-9, samples)
    vals = [objective(v) for v in grid]
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    v, val = golden_max(objective, lo, hi)
    if vals[i] > val:
        v, val = grid[i], vals[i]
    return val, optimal_l(d, v), v


# -- geometric constants -------------------------------------------------------------------
def b0(z: float, tol: float = 1e-15) -> float:
    """Inverse of b -> 1/b + log b - 1 on (0, 1)."""
    if z <= 0:
        raise ValueError("z must be positive")
    lo, hi = 0.0, 1.0
    b = 1 / (z + 1.5)
    for _ in range(200):
        g = 1 / b + math.log(b) - 1 - z
        if g > 0:
            lo = b
        else:
            hi = b
        step = g / ((b - 1) / b**2)
        nb = b - step
        if not lo < nb < hi:
            nb = (lo + hi) / 2
        if abs(nb - b) < tol * b:
            return nb
        b = nb
    return b


def d_g_from_m(m_g: float) -> float:
    """min_b (M/b)^{1/(1-b)} via b_0(log M)."""
    b = b0(math.log(m_g))
    return (m_g / b) ** (1 / (1 - b))


def geometric_constants(rs: RootSystem) -> BoundReport:
    rep = BoundReport(rs.label)
    h = rs.coxeter_number
    rg = r_g(rs)
    m_g = math.sqrt(h + 1) / rg
    z = math.log(m_g)
    b = b0(z)
    d_g = (m_g / b) ** (1 / (1 - b))
    e_g = 1e5 * rs.rank ** (1 / z) * d_g**rs.rank
    rep.add("R_G", rg, "min_{i,j} (omega_i, omega_j^vee)/(|omega_i||omega_j^vee|)", type=rs.label)
    rep.add("M_G", m_g, "sqrt(h+1)/R_G", h=h, R_G=rg)
    rep.add("b0", b, "1/b + log b - 1 = log M_G", z=z)
    rep.add("D_G", d_g, "(M_G/b0)^{1/(1-b0)}", M_G=m_g, b0=b)
    rep.add("E_G", e_g, "1e5 r^{1/log M_G} D_G^r", r=rs.rank, M_G=m_g, D_G=d_g)
    return rep


def theorem35_bracket(rs: RootSystem) -> tuple[float, float]:
    r = rs.rank
    lower = math.exp(-1) * (rs.coxeter_number + 1) ** (r / 2) / (r / 2 + 1)
    return lower, geometric_constants(rs)["E_G"]


# -- Fourier bound for piecewise polynomials -----------------------------------------------------
def _ratio_mp(n: int, x: mpmath.mpf) -> mpmath.mpf:
    """|n! (T_n(x) - e^{-ix}) / x^n|, with T_n the Taylor polynomial of e^{-ix}."""
    if abs(x) < n + 2:
        # tail of the exponential series: avoids the cancellation
        s = mpmath.mpc(0)
        term = mpmath.mpc(1)
        j = 0
        while True:
            j += 1
            term = term * (-1j * x) / j
            if j > n:
                s -= term
                if abs(term) < mpmath.mpf(10) ** (-mpmath.mp.dps) * max(abs(s), 1):
                    break
        return abs(mpmath.factorial(n) * s / x**n)
    taylor = mpmath.fsum((-1j * x) ** j / mpmath.factorial(j) for j in range(n + 1))
    return abs(mpmath.factorial(n) * (taylor - mpmath.expj(-x)) / x**n)


def m_n(n: int) -> float:
    """sup_x |n!(T_n(x) - e^{-ix})/x^n|."""
    if n == 0:
        return 2.0  # |1 - e^{-ix}| reaches 2 at x = pi
    with mpmath.workdps(30):
        xs = np.linspace(0.02, 40 + 4 * n, 4000)
        vals = [float(_ratio_mp(n, mpmath.mpf(x))) for x in xs]
        i = int(np.argmax(vals))
        best = vals[i]
        if 0 < i < len(xs) - 1:
            _, best = golden_max(lambda t: float(_ratio_mp(n, mpmath.mpf(t))), xs[i - 1], xs[i + 1], tol=1e-13)
    # the ratio tends to 1 at infinity
    return max(best, 1.0)


@dataclass
class CNResult:
    value: float
    m: list[float]
    grid_values: list[tuple[int, float]]

    @property
    def convergence_ratio(self) -> float:
        if len(self.grid_values) < 3:
            return float("nan")
        (_, a), (_, b), (_, c) = self.grid_values[-3:]
        return (b - c) / (a - b) if a != b else 0.0


def _cn_on_grid(m: Sequence[float], pts: np.ndarray) -> float:
    n = len(m)
    vander = pts[:, None] ** np.arange(n)[None, :]
    a_ub = np.vstack([vander, -vander])
    b_ub = np.ones(2 * len(pts))
    best = 0.0
    for tail in itertools.product((1, -1), repeat=n - 1):
        s = np.array((1,) + tail, dtype=float)
        bounds = [(0, None) if si > 0 else (None, 0) for si in s]
        res = linprog(-(np.asarray(m) * s), A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
        if res.status != 0:
            raise RuntimeError(f"LP failed: {res.message}")
        best = max(best, -res.fun)
    return best


def cn_constant(n_terms: int, grids: Sequence[int] = (33, 65, 129, 257)) -> CNResult:
    """C_N: max of sum M_n |a_n| over real polynomials of degree < N with |Q| <= 1 on a grid of [0, 1].

    The grids are nested Chebyshev extrema, so the values decrease with the grid
    and each is an admissible constant for polynomials bounded on that grid.
    """
    if n_terms < 1:
        raise ValueError("N must be positive")
    m = [m_n(k) for k in range(n_terms)]
    out = []
    for g in grids:
        pts = (1 - np.cos(np.pi * np.arange(g) / (g - 1))) / 2
        out.append((g, _cn_on_grid(m, pts)))
    return CNResult(out[-1][1], m, out)


def c_of_g(rs: RootSystem, cn: CNResult | None = None) -> float:
    """Gamma(r/2+1)/(sqrt(pi) Gamma((r+1)/2)) C_{|R+|} E_G (|W| - 1)."""
    r = rs.rank
    cn = cn or cn_constant(rs.n_pos)
    e_g = geometric_constants(rs)["E_G"]
    return math.gamma(r / 2 + 1) / (math.sqrt(math.pi) * math.gamma((r + 1) / 2)) * cn.value * e_g * (rs.weyl_order - 1)


def full_report(rs: RootSystem) -> BoundReport:
    rep = geometric_constants(rs)
    d = rs.dim
    rep.add("theorem1_lower_bound", theorem1_lower_bound(d), "closed form in d", d=d)
    val, L, v = c_d_optimized(d)
    rep.add("c_d_optimized", val, "max_v c_d(L_0(v), v)", d=d, L=L, v=v)
    cn = cn_constant(rs.n_pos)
    rep.add("M_n", cn.m, "sup |n!(T_n - e^{-ix})/x^n|", N=rs.n_pos)
    rep.add("C_N", cn.value, "LP on nested Chebyshev grids (admissible on grid)", N=rs.n_pos, grids=cn.grid_values)
    rep.add("C(G)", c_of_g(rs, cn), "Gamma(r/2+1)/(sqrt(pi)Gamma((r+1)/2)) C_N E_G (|W|-1)", W=rs.weyl_order)
    lo, hi = theorem35_bracket(rs)
    rep.add("B_lower", lo, "e^{-1}(h+1)^{r/2}/(r/2+1)", h=rs.coxeter_number, r=rs.rank)
    if rs.kind == "A":
        k, _ = k_constant()
        rep.add("sln_upper", sln_upper(rs.rank + 1), "K^{n-2}", K=k)
    return rep


# -- SL_n upper bound -----------------------------------------------------------------
def k_constant() -> tuple[float, float]:
    """max of sin^2 a / (a (pi - a)) on (0, pi); returns (value, argmax)."""

    def g(a: float) -> float:
        return math.sin(a) ** 2 / (a * (math.pi - a))

    a, val = golden_max(g, 1e-9, math.pi - 1e-9, tol=1e-15)
    return val, a


def sln_upper(n: int) -> float:
    if n < 2:
        raise ValueError("n >= 2 required")
    return k_constant()[0] ** (n - 2)


# -- large dominant weights ---------------------------------------------------------------
@dataclass
class GGRResult:
    threshold: float
    norm: float
    threshold_passed: bool
    witness: list[float] | None
    ratio: float


def character_ratio_batch(rs: RootSystem, lam: Sequence[int], xs: np.ndarray) -> np.ndarray:
    """chi_lam(e^{ix}) / chi_lam(1) as X(lam + rho, x) / X(rho, x)."""
    ev = evaluator(rs)
    lr = np.asarray(lam, dtype=float) + 1
    return ev.batch(lr, xs) / ev.batch(np.ones(rs.rank), xs)


def ggr_check(rs: RootSystem, lam: Sequence[int], c_g: float, big_c: float, grid: int = 160) -> GGRResult:
    """Threshold |lam + rho| > C(G)|rho|/(c(G) sqrt(2d)) and a search for Re chi/dim <= -c(G)."""
    from scipy.optimize import minimize

    lr = [v + 1 for v in lam]
    norm = weight_norm(rs, lr)
    rho_norm = math.sqrt(float(rs.norm2(rs.rho)))
    threshold = big_c * rho_norm / (c_g * math.sqrt(2 * rs.dim))

    # chi(e^{ix}) is periodic under x -> x + 2 pi (coroot lattice)
    axes = [np.linspace(0, 2 * np.pi, grid, endpoint=False) + np.pi / grid] * rs.rank
    pts = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    vals = np.real(character_ratio_batch(rs, lam, pts))
    vals[~np.isfinite(vals)] = np.inf
    order = np.argsort(vals)[:8]
    dim = dim_irrep(rs, lam)

    def f(c):
        return char_eval(rs, lam, c).real / dim

    best_x, best = None, math.inf
    for idx in order:
        res = minimize(f, pts[idx], method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-13})
        if res.fun < best:
            best, best_x = res.fun, res.x
    witness = [float(v) for v in best_x] if best <= -c_g else None
    return GGRResult(threshold, norm, norm > threshold, witness, float(best))
