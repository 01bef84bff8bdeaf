"""Twisted coweight-lattice averages of powers of f(x) = X(rho, 2 pi x).

F_{k,xi}(x) = sum_{a in P^vee} xi(a) f(x + a)^k, for a character xi of
P^vee / Q^vee given by a weight q_xi (xi(a) = e^{2 pi i (q_xi, a)}).

Conventions: x and a are written in coweight coordinates, x = sum y_i omega_i^vee,
so P^vee = Z^r and (alpha, x) = sum_i c_i y_i with c the simple-root coordinates
of alpha.  f^k is the Fourier transform of D = (DH_rho)^{*k}, and Poisson
summation over P^vee (whose dual lattice is Q) gives

    F_{k,xi}(x) = sum_{p in -q_xi + Q} D(p) e^{2 pi i (p, x)},

where D(p) is the box-spline value with respect to Lebesgue measure in
simple-root coordinates (the factor 1/covol(P^vee) converts the invariant
density into exactly this measure).  Multiplying by the Weyl denominator, the
coefficient of the irreducible character chi_mu is

    C(mu) = sum_w det(w) D(mu + rho - w rho),     mu = -q_xi mod Q.

Numerically f(x + a)^k = [i^{-n} S(2 pi x) / (2 pi)^n]^k e^{2 pi i (k rho, a)} / prod (alpha, x + a)^k,
with S the Weyl numerator at rho, so the lattice sum is a twisted sum of a
rational function; the twist is q_xi + k rho.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dhspline import box_density
from .representations import diagram_eval, dim_irrep, weight_diagram
from .rootsys import RootSystem

TAIL_LIMIT = 1e-3
WALL_TOL = 1e-6
WALL_STEP = 1e-3
CLUSTER_GAP = 1.0
CLUSTER_NODES = 2048
ROUNDOFF = 1e-12  # relative round-off allowance per summed term magnitude
ABS_FLOOR = 1e-14  # double-precision resolution of O(1) values


class MittagError(ValueError):
    pass


# -- central characters -----------------------------------------------------------------
@dataclass(frozen=True)
class CentralCharacter:
    """A class in P/Q, represented by a weight (Dynkin labels)."""

    rep: tuple[int, ...]
    index: int

    def root_coords(self, rs: RootSystem) -> list[Fraction]:
        return rs.labels_to_root_coords(self.rep)

    def __call__(self, rs: RootSystem, a: Sequence[int]) -> complex:
        """xi(a) for a in P^vee given in coweight coordinates."""
        q = self.root_coords(rs)
        return complex(np.exp(2j * np.pi * float(sum(Fraction(x) * int(b) for x, b in zip(q, a)) % 1)))


def _coset_key(rs: RootSystem, labels: Sequence) -> tuple[Fraction, ...]:
    return tuple(c % 1 for c in rs.labels_to_root_coords(labels))


def central_characters(rs: RootSystem) -> list[CentralCharacter]:
    """Representatives of P/Q: 0 first, then fundamental weights in new classes."""
    reps = [tuple([0] * rs.rank)]
    keys = {_coset_key(rs, reps[0])}
    for j in range(rs.rank):
        w = tuple(int(i == j) for i in range(rs.rank))
        key = _coset_key(rs, w)
        if key not in keys:
            keys.add(key)
            reps.append(w)
    return [CentralCharacter(r, i) for i, r in enumerate(reps)]


def central_character(rs: RootSystem, index: int) -> CentralCharacter:
    chars = central_characters(rs)
    if not 0 <= index < len(chars):
        raise MittagError(f"xi index must be in [0, {len(chars) - 1}] for {rs.label}")
    return chars[index]


# -- beta and the support --------------------------------------------------------------
def beta_xi(rs: RootSystem, xi: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    """(m, beta) with m_i in (0, 1], m_i = (xi, omega_i^vee) mod Z, beta = sum m_i alpha_i.

    beta is returned in Dynkin labels.
    """
    coords = rs.labels_to_root_coords(xi)
    m = [(c % 1) or Fraction(1) for c in coords]
    return m, list(rs.root_coords_to_labels(m))


def _candidates(rs: RootSystem, k: int, xi: CentralCharacter) -> list[tuple[int, ...]]:
    """Dominant mu in the class -q_xi with k rho - mu >= 0 in root coordinates."""
    top = rs.labels_to_root_coords([k * v for v in rs.rho])
    bounds = [int(2 * t) for t in top]
    q = xi.root_coords(rs)
    out = []
    for labels in np.ndindex(*(b + 1 for b in bounds)):
        c = rs.labels_to_root_coords(labels)
        if any(ci > ti for ci, ti in zip(c, top)):
            continue
        if any((ci + qi).denominator != 1 for ci, qi in zip(c, q)):
            continue
        out.append(tuple(int(v) for v in labels))
    return out


def support_set(rs: RootSystem, k: int, xi: CentralCharacter) -> list[tuple[int, ...]]:
    """Dominant mu that occur in F_{k,xi}.

    Interior form: mu in the class of -q_xi and (mu, omega_i^vee) < k (rho, omega_i^vee).
    Bound form: mu <= k rho - beta, beta computed for the class of q_xi + k rho.
    The two are compared and a mismatch is an internal error.
    """
    if k < 1:
        raise MittagError("k must be positive")
    top = rs.labels_to_root_coords([k * v for v in rs.rho])
    cands = _candidates(rs, k, xi)
    interior = [mu for mu in cands if all(c < t for c, t in zip(rs.labels_to_root_coords(mu), top))]
    shifted = [a + k * b for a, b in zip(xi.rep, rs.rho)]
    _, beta = beta_xi(rs, shifted)
    bound = []
    for mu in cands:
        diff = rs.labels_to_root_coords([k * r - b - m for r, b, m in zip(rs.rho, beta, mu)])
        if all(d >= 0 for d in diff):
            bound.append(mu)
    if interior != bound:
        raise MittagError(f"support characterizations disagree: {interior} vs {bound}")
    return interior


# -- exact decomposition ---------------------------------------------------------------
@dataclass
class CharacterSum:
    coefficients: dict[tuple[int, ...], Fraction]
    k: int
    xi: CentralCharacter

    def mass(self, rs: RootSystem) -> Fraction:
        """sum_mu C(mu) dim L_mu = F(0)."""
        return sum((c * dim_irrep(rs, mu) for mu, c in self.coefficients.items()), Fraction(0))

    def evaluate(self, rs: RootSystem, y: Sequence[float]) -> complex:
        """sum_mu C(mu) chi_mu(e^{2 pi i x}) for x in coweight coordinates.

        Characters are summed over their weight diagrams, which stays accurate on walls.
        """
        c = 2 * np.pi * coweight_to_coroot(rs, y)
        return sum(float(v) * diagram_eval(rs, mu, c) for mu, v in self.coefficients.items())

    def to_json(self) -> dict:
        return {
            ",".join(str(v) for v in mu): f"{c.numerator}/{c.denominator}" for mu, c in sorted(self.coefficients.items())
        }


def monomial_coefficient(rs: RootSystem, k: int, p: Sequence) -> Fraction:
    """Coefficient of e^{2 pi i (p, x)} in F_{k,xi}: (DH_rho)^{*k}(p) in root coordinates."""
    return box_density(rs, k, p)


def character_coefficient(rs: RootSystem, k: int, mu: Sequence[int]) -> Fraction:
    """C(mu) = sum_w det(w) D(mu + rho - w rho)."""
    rho = rs.rho
    total = Fraction(0)
    for w in rs.weyl_group:
        wr = w.act(rho)
        p = [m + r - x for m, r, x in zip(mu, rho, wr)]
        total += w.det * box_density(rs, k, p)
    return total


def decompose(rs: RootSystem, k: int, xi: CentralCharacter) -> CharacterSum:
    """F_{k,xi} as an exact non-negative combination of irreducible characters."""
    if k < 1:
        raise MittagError("k must be positive")
    if rs.kind == "A" and rs.rank == 1 and k == 1:
        # principal-value case: F = 1 for xi trivial and F = cos(pi y) = chi_{omega_1}/2 otherwise
        coeffs = {(0,): Fraction(1)} if xi.index == 0 else {(1,): Fraction(1, 2)}
        return CharacterSum(coeffs, k, xi)
    support = set(support_set(rs, k, xi))
    coeffs = {}
    for mu in _candidates(rs, k, xi):
        c = character_coefficient(rs, k, mu)
        if mu in support:
            if c <= 0:
                raise MittagError(f"non-positive coefficient {c} at {mu}")
            coeffs[mu] = c
        elif c != 0:
            raise MittagError(f"nonzero coefficient {c} outside the support at {mu}")
    result = CharacterSum(coeffs, k, xi)
    if result.mass(rs) != 1:
        raise MittagError(f"mass identity fails: {result.mass(rs)}")
    return result


def coefficient_finite_n(rs: RootSystem, k: int, mu: Sequence, n: int) -> float:
    """N^r mult(N mu in the k-th tensor power of L_{N rho}) / dim^k, which tends to D(mu)."""
    diag = weight_diagram(rs, tuple(n * v for v in rs.rho))
    w = np.array(list(diag.keys()), dtype=np.int64)
    m = np.array(list(diag.values()), dtype=float)
    lo = w.min(axis=0)
    shape = tuple(w.max(axis=0) - lo + 1)
    grid = np.zeros(shape)
    grid[tuple((w - lo).T)] = m / m.sum()
    from scipy.signal import fftconvolve

    acc, off = grid, lo.copy()
    for _ in range(k - 1):
        acc = fftconvolve(acc, grid)
        off = off + lo
    idx = tuple(int(n * v) - o for v, o in zip(mu, off))
    if any(i < 0 or i >= s for i, s in zip(idx, acc.shape)):
        return 0.0
    return float(acc[idx]) * n**rs.rank


# -- lattice sums ------------------------------------------------------------------------
def coweight_to_coroot(rs: RootSystem, y: Sequence[float]) -> np.ndarray:
    fc = np.array([[float(v) for v in row] for row in rs.fundamental_coweights])
    return np.asarray(y, dtype=float) @ fc


@dataclass
class LatticeSum:
    value: complex
    tail_bound: float
    mode: str
    radius: int


def _prefactor(rs: RootSystem, k: int, y: Sequence[float]) -> complex:
    """(i^{-n} sum_w det(w) e^{2 pi i (w rho, x)} / (2 pi)^n)^k, the alternating sum taken
    in product form prod_{alpha > 0} 2i sin(pi (alpha, x)) so nothing cancels near walls."""
    pairings = np.array(rs.positive_roots, dtype=float) @ np.asarray(y, dtype=float)
    s = np.prod(2 * np.sin(np.pi * pairings))
    return complex(s / (2 * np.pi) ** rs.n_pos) ** k


def _twist(rs: RootSystem, k: int, xi: CentralCharacter) -> list[float]:
    """Root coordinates of q_xi + k rho, reduced mod 1."""
    shifted = [a + k * b for a, b in zip(xi.rep, rs.rho)]
    return [float(c % 1) for c in rs.labels_to_root_coords(shifted)]


def _series_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    for i in range(n):
        out[..., i:] += a[..., i : i + 1] * b[..., : n - i]
    return out


def _series_div(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    for i in range(n):
        acc = a[..., i] - sum(out[..., j] * b[..., i - j] for j in range(i))
        out[..., i] = acc / b[..., 0]
    return out


def _kernel_series(z: np.ndarray, theta: float, order: int) -> np.ndarray:
    """Taylor coefficients at z of the kernel whose residue at each integer n is e^{2 pi i theta n}.

    theta = 0 uses pi cot(pi w) (symmetric summation); 0 < theta < 1 uses
    2 pi i e^{2 pi i theta w} / (e^{2 pi i w} - 1), which decays in both half-planes.
    """
    m = np.arange(order)
    fact = np.array([math.factorial(int(i)) for i in m], dtype=float)
    zc = z[..., None]
    if theta == 0:
        # cos(pi t) and sin(pi t) Taylor coefficients
        ct = np.where(m % 2 == 0, (-1.0) ** (m // 2) * np.pi**m / fact, 0.0)
        st = np.where(m % 2 == 1, (-1.0) ** (m // 2) * np.pi**m / fact, 0.0)
        num = np.cos(np.pi * zc) * ct - np.sin(np.pi * zc) * st
        den = np.sin(np.pi * zc) * ct + np.cos(np.pi * zc) * st
        return np.pi * _series_div(num.astype(complex), den.astype(complex))
    num = 2j * np.pi * np.exp(2j * np.pi * theta * zc) * (2j * np.pi * theta) ** m / fact
    den = np.exp(2j * np.pi * zc) * (2j * np.pi) ** m / fact
    den[..., 0] -= 1
    return _series_div(num, den)


def _kernel(w: np.ndarray, theta: float) -> np.ndarray:
    if theta == 0:
        return np.pi / np.tan(np.pi * w)
    return 2j * np.pi * np.exp(2j * np.pi * theta * w) / (np.exp(2j * np.pi * w) - 1)


def _cluster_sum(z: np.ndarray, k: int, theta: float) -> complex:
    """Minus the residue sum at the poles z, by the trapezoid rule on a circle around all of them.

    The circle radius is chosen to stay away from the poles and from the integers;
    integers inside the circle are poles of the kernel and are subtracted.
    """
    c = complex(np.mean(z))
    spread = float(np.max(np.abs(z - c)))
    near = np.arange(math.floor(c.real - spread - 3), math.ceil(c.real + spread + 3) + 1)
    dist = np.abs(near - c)
    radii = spread + np.linspace(0.1, 1.2, 111)
    margin = np.minimum(radii - spread, np.min(np.abs(dist[None, :] - radii[:, None]), axis=1))
    R = float(radii[int(np.argmax(margin))])
    phi = 2 * np.pi * (np.arange(CLUSTER_NODES) + 0.5) / CLUSTER_NODES
    w = c + R * np.exp(1j * phi)
    f = np.prod((w[:, None] - z[None, :]) ** (-k), axis=1)
    integral = np.mean(f * _kernel(w, theta) * R * np.exp(1j * phi))
    inside = near[dist < R]
    f_int = np.prod((inside[:, None] - z[None, :]) ** (-k), axis=1)
    return complex(-(integral - np.sum(f_int * np.exp(2j * np.pi * theta * inside))))


def twisted_rational_sum(poles: np.ndarray, k: int, theta: float) -> np.ndarray:
    """sum_n e^{2 pi i theta n} prod_j (n - z_j)^{-k} for each row of ``poles``, by residues.

    Rows whose poles come closer than CLUSTER_GAP are done by a contour integral
    instead, since the partial-fraction residues then cancel catastrophically.
    """
    poles = np.atleast_2d(poles).astype(complex)
    _, J = poles.shape
    total = np.zeros(len(poles), dtype=complex)
    if J > 1:
        gaps = np.where(np.eye(J, dtype=bool)[None], np.inf, np.abs(poles[:, :, None] - poles[:, None, :]))
        clustered = np.min(gaps, axis=(1, 2)) < CLUSTER_GAP
    else:
        clustered = np.zeros(len(poles), dtype=bool)
    if clustered.any():
        rest = ~clustered
        total[clustered] = [_cluster_sum(z, k, theta) for z in poles[clustered]]
        if rest.any():
            total[rest] = twisted_rational_sum(poles[rest], k, theta)
        return total
    for j in range(J):
        z = poles[:, j]
        h = np.zeros((len(poles), k), dtype=complex)
        h[:, 0] = 1
        for l in range(J):
            if l == j:
                continue
            d = z - poles[:, l]
            coeff = np.array([_binom_neg(k, i) for i in range(k)], dtype=float)
            factor = d[:, None] ** (-k - np.arange(k)[None, :]) * coeff[None, :]
            h = _series_mul(h, factor)
        ker = _kernel_series(z, theta, k)
        total -= _series_mul(h, ker)[:, k - 1]
    return total


def _binom_neg(k: int, i: int) -> float:
    """binom(-k, i)."""
    return (-1) ** i * math.comb(k + i - 1, i)


def lattice_sum_eval(
    rs: RootSystem,
    k: int,
    xi: CentralCharacter,
    y: Sequence[float],
    truncation_radius: int | None = None,
    mode: str = "auto",
) -> LatticeSum:
    """F_{k,xi}(x) for x = sum y_i omega_i^vee by summing over P^vee.

    ``line`` (rank <= 2): the innermost coordinate is summed exactly by residues
    and the outer sum is truncated at |a_1| <= R.  ``direct``: the box |a|_inf <= R.
    The recorded tail bound extrapolates the decay of the last terms; it is an
    estimate, not a proof.
    """
    y = np.asarray(y, dtype=float)
    if not np.any(np.abs(y - np.round(y)) > 0):
        return LatticeSum(1.0 + 0j, 0.0, "exact", 0)
    pairings = np.array(rs.positive_roots, dtype=float) @ y
    if np.min(np.abs(pairings - np.round(pairings))) < WALL_TOL:
        return _off_wall(rs, k, xi, y, truncation_radius, mode)
    if mode == "auto":
        mode = "line" if rs.rank <= 2 else "direct"
    pref = _prefactor(rs, k, y)
    twist = _twist(rs, k, xi)
    roots = np.array(rs.positive_roots, dtype=float)
    if mode == "line":
        if rs.rank > 2:
            raise MittagError("line summation is implemented for rank <= 2")
        value, tail, radius = _line_sum(roots, y, k, twist, truncation_radius)
    elif mode == "direct":
        value, tail, radius = _direct_sum(roots, y, k, twist, truncation_radius or 60)
    else:
        raise MittagError(f"unknown mode {mode!r}")
    tail = tail * abs(pref) + ABS_FLOOR
    if tail > TAIL_LIMIT:
        raise MittagError(f"tail bound {tail:.3g} exceeds {TAIL_LIMIT}; increase the truncation radius")
    return LatticeSum(complex(pref * value), tail, mode, radius)


def _off_wall(rs, k, xi, y, radius, mode) -> LatticeSum:
    """x on an affine wall: symmetric offsets along a generic direction, Richardson in the step."""
    v = np.sqrt(np.array([2, 3, 5, 7, 11, 13, 17, 19][: rs.rank], dtype=float))
    v /= np.linalg.norm(v)
    avgs, tails, used = [], [], None
    for h in (WALL_STEP, WALL_STEP / 2):
        pair = [lattice_sum_eval(rs, k, xi, y + s * h * v, radius, mode) for s in (1, -1)]
        avgs.append((pair[0].value + pair[1].value) / 2)
        tails.append(max(p.tail_bound for p in pair))
        used = pair[0]
    value = (4 * avgs[1] - avgs[0]) / 3
    return LatticeSum(complex(value), max(tails) + abs(avgs[1] - avgs[0]) / 15, used.mode, used.radius)


def _line_sum(roots: np.ndarray, y: np.ndarray, k: int, twist: list[float], radius: int | None):
    r = len(y)
    if r == 1:
        poles = np.array([[-y[0] / c[0] for c in roots]])
        scale = np.prod(roots[:, 0] ** (-k))
        value = complex(scale * twisted_rational_sum(poles, k, twist[0])[0])
        return value, ROUNDOFF * abs(value), 0
    radius = radius or 100000
    a1 = np.arange(-radius, radius + 1)
    u = y[0] + a1
    inner = roots[:, 1] != 0
    const = np.prod((roots[~inner, 0][None, :] * u[:, None]) ** (-k), axis=1)
    c = roots[inner]
    poles = -y[1] - np.outer(u, c[:, 0] / c[:, 1])
    g = const * np.prod(c[:, 1] ** (-k)) * twisted_rational_sum(poles, k, twist[1])
    phase = np.exp(2j * np.pi * twist[0] * a1)
    value = complex(np.sum(phase * g))
    # |g| ~ M |u|^{-p} with p = k n - 1
    p = k * len(roots) - 1
    far = np.abs(a1) >= radius // 2
    m = 2 * float(np.max(np.abs(g[far]) * np.abs(u[far]) ** p))
    tail = 2 * m / ((p - 1) * (radius - 2) ** (p - 1)) if p > 1 else math.inf
    return value, tail + ROUNDOFF * float(np.sum(np.abs(g))), radius


def _direct_sum(roots: np.ndarray, y: np.ndarray, k: int, twist: list[float], radius: int):
    r = len(y)
    axes = [np.arange(-radius, radius + 1)] * r
    a = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    lin = (y[None, :] + a) @ roots.T
    terms = np.exp(2j * np.pi * (a @ np.array(twist))) * np.prod(lin, axis=1) ** (-k)
    value = complex(np.sum(terms))
    # the outermost shell scaled by the decay of shell sums, |a|^{-(k n - r + 1)}
    shell = np.max(np.abs(a), axis=1) == radius
    p = k * len(roots) - r + 1
    s = float(np.sum(np.abs(terms[shell])))
    tail = s * radius / (p - 1) if p > 1 else math.inf
    return value, tail + ROUNDOFF * float(np.sum(np.abs(terms))), radius
