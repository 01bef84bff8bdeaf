"""Finite-dimensional representations: dimensions, weight diagrams, characters.

Weights are Dynkin labels (integer tuples); elements of h are coroot
coordinates, so ``(mu, x) = mu . c``.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .rootsys import RootSystem, build


class RepresentationError(ValueError):
    pass


def _check_dominant_integral(rs: RootSystem, lam: Sequence) -> tuple[int, ...]:
    if len(lam) != rs.rank:
        raise RepresentationError(f"expected {rs.rank} labels, got {len(lam)}")
    out = []
    for v in lam:
        f = Fraction(v)
        if f.denominator != 1 or f < 0:
            raise RepresentationError(f"{tuple(lam)} is not dominant integral")
        out.append(int(f))
    return tuple(out)


@lru_cache(maxsize=None)
def _int_form(kind: str, rank: int) -> tuple[np.ndarray, int]:
    """Integer multiple of the form in the fundamental basis, and the factor."""
    rs = build(kind, rank)
    den = math.lcm(*(v.denominator for row in rs.gram for v in row))
    g = np.array([[int(v * den) for v in row] for row in rs.gram], dtype=object)
    return g, den


def _coroot_scale(rs: RootSystem) -> list[list[Fraction]]:
    """Coroot coordinates of alpha^vee for every positive root."""
    out = []
    for c in rs.positive_roots:
        n2 = rs.root_norm2(c)
        out.append([Fraction(ci) * rs.simple_root_norm2[i] / n2 for i, ci in enumerate(c)])
    return out


def dim_irrep(rs: RootSystem, lam: Sequence) -> int:
    """Weyl dimension formula."""
    lam = _check_dominant_integral(rs, lam)
    num, den = Fraction(1), Fraction(1)
    for cv in _coroot_scale(rs):
        num *= sum(cv[i] * (lam[i] + 1) for i in range(rs.rank))
        den *= sum(cv)
    val = num / den
    assert val.denominator == 1
    return int(val)


def _dominant_weights(rs: RootSystem, lam: tuple[int, ...]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Dominant mu <= lam as (labels, root-coordinate depth) pairs."""
    top = rs.labels_to_root_coords(lam)
    bounds = [int(math.floor(t)) for t in top]
    out = []
    cm = rs.cartan
    for depth in itertools.product(*(range(b + 1) for b in bounds)):
        mu = tuple(lam[j] - sum(depth[i] * cm[i][j] for i in range(rs.rank)) for j in range(rs.rank))
        if all(m >= 0 for m in mu):
            out.append((mu, depth))
    out.sort(key=lambda t: sum(t[1]))
    return out


def dominant_multiplicities(rs: RootSystem, lam: Sequence) -> dict[tuple[int, ...], int]:
    """Freudenthal's recursion, restricted to dominant weights."""
    lam = _check_dominant_integral(rs, lam)
    return dict(_dominant_multiplicities(rs.kind, rs.rank, lam))


@lru_cache(maxsize=256)
def _dominant_multiplicities(kind: str, rank: int, lam: tuple[int, ...]) -> tuple:
    rs = build(kind, rank)
    g, _ = _int_form(kind, rank)
    r = rank
    roots = [tuple(v) for v in rs.positive_root_labels]

    def ip(u, v):
        return sum(u[i] * g[i][j] * v[j] for i in range(r) for j in range(r) if g[i][j])

    lr = tuple(l + 1 for l in lam)
    top = ip(lr, lr)
    mult: dict[tuple[int, ...], int] = {}
    for mu, depth in _dominant_weights(rs, lam):
        if not any(depth):
            mult[mu] = 1
            continue
        acc = 0
        for a in roots:
            k = 1
            while True:
                nu = tuple(m + k * ai for m, ai in zip(mu, a))
                dom, _ = rs.dominant_representative(nu)
                m_nu = mult.get(dom, 0)
                if m_nu == 0:
                    break
                acc += ip(nu, a) * m_nu
                k += 1
        mr = tuple(m + 1 for m in mu)
        gap = top - ip(mr, mr)
        val = Fraction(2 * acc, gap)
        assert val.denominator == 1, (mu, val)
        mult[mu] = int(val)
    return tuple(mult.items())


def weight_diagram(rs: RootSystem, lam: Sequence) -> dict[tuple[int, ...], int]:
    """All weights of L_lam with their multiplicities."""
    lam = _check_dominant_integral(rs, lam)
    return dict(_weight_diagram(rs.kind, rs.rank, lam))


@lru_cache(maxsize=256)
def _weight_diagram(kind: str, rank: int, lam: tuple[int, ...]) -> tuple:
    rs = build(kind, rank)
    out = {}
    for mu, m in _dominant_multiplicities(kind, rank, lam):
        for nu in rs.weyl_orbit(mu):
            out[nu] = m
    return tuple(out.items())


def weight_multiplicity(rs: RootSystem, lam: Sequence, mu: Sequence) -> int:
    lam = _check_dominant_integral(rs, lam)
    mu = tuple(int(Fraction(m)) for m in mu)
    diff = rs.labels_to_root_coords([a - b for a, b in zip(lam, mu)])
    if any(d.denominator != 1 for d in diff):
        return 0
    dom, _ = rs.dominant_representative(mu)
    return dict(_dominant_multiplicities(rs.kind, rs.rank, lam)).get(dom, 0)


# -- Kostant partition function (test oracle) ---------------------------------
def kostant_partition(rs: RootSystem, root_coords: Sequence[int]) -> int:
    """Number of ways to write a root-lattice vector as a sum of positive roots."""
    roots = rs.positive_roots

    @lru_cache(maxsize=None)
    def count(v: tuple[int, ...], start: int) -> int:
        if not any(v):
            return 1
        if any(x < 0 for x in v):
            return 0
        total = 0
        for idx in range(start, len(roots)):
            a = roots[idx]
            w = tuple(x - y for x, y in zip(v, a))
            if all(x >= 0 for x in w):
                total += count(w, idx)
        return total

    return count(tuple(int(x) for x in root_coords), 0)


def kostant_multiplicity(rs: RootSystem, lam: Sequence, mu: Sequence) -> int:
    """Weight multiplicity by Kostant's alternating sum over W."""
    lam = _check_dominant_integral(rs, lam)
    lr = tuple(l + 1 for l in lam)
    mr = tuple(int(m) + 1 for m in mu)
    total = 0
    for w in rs.weyl_group:
        v = w.act(lr)
        diff = rs.labels_to_root_coords([a - b for a, b in zip(v, mr)])
        if any(d.denominator != 1 or d < 0 for d in diff):
            continue
        total += w.det * kostant_partition(rs, [int(d) for d in diff])
    return total


# -- characters -----------------------------------------------------------------
def _weyl_label_matrices(rs: RootSystem) -> tuple[np.ndarray, np.ndarray]:
    mats = np.array([w.matrix for w in rs.weyl_group], dtype=float)
    signs = np.array([w.det for w in rs.weyl_group], dtype=float)
    return mats, signs


def char_eval(rs: RootSystem, lam: Sequence, x: Sequence, rel_tol: float = 1e-8) -> complex:
    """chi_lam(e^{ix}) with x in coroot coordinates.

    The Weyl quotient is used when its round-off, about |W| eps / |denominator|,
    is below rel_tol times the value; otherwise the weight diagram is summed.
    """
    lam = _check_dominant_integral(rs, lam)
    c = np.asarray(x, dtype=complex)
    roots = np.array(rs.positive_root_labels, dtype=float)
    den = complex(np.prod(2j * np.sin(roots @ c / 2)))
    if den != 0:
        mats, signs = _weyl_label_matrices(rs)
        lr = np.array(lam, dtype=float) + 1
        with np.errstate(over="ignore", invalid="ignore"):
            val = complex(np.sum(signs * np.exp(1j * ((mats @ lr) @ c))) / den)
        if np.isfinite(val) and 4e-16 * len(signs) / abs(den) <= rel_tol * max(abs(val), 1.0):
            return val
    return diagram_eval(rs, lam, c)


def diagram_eval(rs: RootSystem, lam: Sequence, x: Sequence) -> complex:
    """sum_mu m_mu e^{i(mu, x)} over the weight diagram."""
    diag = weight_diagram(rs, lam)
    w = np.array(list(diag.keys()), dtype=float)
    m = np.array(list(diag.values()), dtype=float)
    return complex(np.sum(m * np.exp(1j * (w @ np.asarray(x, dtype=complex)))))


# -- tensor products ----------------------------------------------------------------
def _reflect_to_dominant_signed(rs: RootSystem, v: tuple[int, ...]) -> tuple[tuple[int, ...], int] | None:
    """Dominant image of a weight and det(w); None when v lies on a wall."""
    dom, w = rs.dominant_representative(v)
    if any(l == 0 for l in dom):
        return None
    return dom, w.det


def brauer_klimyk(rs: RootSystem, lam: Sequence, diagram: dict) -> Counter:
    """Decompose L_lam (x) V where V has the given weight diagram."""
    lam = _check_dominant_integral(rs, lam)
    out: Counter = Counter()
    for kappa, m in diagram.items():
        v = tuple(a + b + 1 for a, b in zip(lam, kappa))
        res = _reflect_to_dominant_signed(rs, v)
        if res is None:
            continue
        dom, sign = res
        out[tuple(d - 1 for d in dom)] += sign * m
    return Counter({k: v for k, v in out.items() if v})


def tensor_multiplicity(rs: RootSystem, lam: Sequence, mu: Sequence, nu: Sequence) -> int:
    """Multiplicity of L_nu in L_lam (x) L_mu."""
    nu = _check_dominant_integral(rs, nu)
    dec = brauer_klimyk(rs, lam, weight_diagram(rs, mu))
    val = dec.get(nu, 0)
    if val < 0:
        raise RepresentationError("negative tensor multiplicity")
    return val


def tensor_diagram(rs: RootSystem, labels: Iterable[Sequence]) -> dict[tuple[int, ...], int]:
    """Weight diagram of a tensor product of irreducibles."""
    acc: dict[tuple[int, ...], int] = {(0,) * rs.rank: 1}
    for lam in labels:
        d = weight_diagram(rs, lam)
        nxt: dict[tuple[int, ...], int] = defaultdict(int)
        for a, ma in acc.items():
            for b, mb in d.items():
                nxt[tuple(x + y for x, y in zip(a, b))] += ma * mb
        acc = dict(nxt)
    return acc


def decompose_character(rs: RootSystem, mult: dict) -> dict[tuple[int, ...], object]:
    """Irreducible multiplicities of a W-invariant weight function.

    c(lam) = sum_w det(w) D(lam + rho - w rho); works for integer or
    rational coefficient maps.
    """
    rho = rs.rho
    shifts = [(w.det, tuple(a - b for a, b in zip(rho, w.act(rho)))) for w in rs.weyl_group]
    out = {}
    for lam in mult:
        if any(l < 0 for l in lam):
            continue
        val = 0
        for sign, s in shifts:
            val += sign * mult.get(tuple(a + b for a, b in zip(lam, s)), 0)
        if val:
            out[lam] = val
    return out


def contraction_multiplicity(rs: RootSystem, V: Sequence[Sequence], N: int, lam: Sequence) -> int:
    """Multiplicity of chi_lam in chi_{V,N} = sum_mu dim V[N mu] e^mu.

    Computed by extracting the N-divisible weight spaces and decomposing, and
    independently as the multiplicity of L_{N lam + (N-1) rho} in
    V (x) L_{(N-1) rho}.  The two must agree.
    """
    if N < 1:
        raise RepresentationError("N must be positive")
    lam = _check_dominant_integral(rs, lam)
    diag = tensor_diagram(rs, V)

    contracted = {}
    for mu, m in diag.items():
        if all(v % N == 0 for v in mu):
            contracted[tuple(v // N for v in mu)] = m
    rho = rs.rho
    route_a = 0
    for w in rs.weyl_group:
        s = w.act(rho)
        route_a += w.det * contracted.get(tuple(l + r - t for l, r, t in zip(lam, rho, s)), 0)

    # only the terms of V (x) L_{(N-1)rho} that land on the target matter
    target = tuple(N * (l + 1) for l in lam)
    route_b = 0
    for kappa, m in diag.items():
        v = tuple(N + k for k in kappa)
        res = _reflect_to_dominant_signed(rs, v)
        if res is not None and res[0] == target:
            route_b += res[1] * m

    if route_a != route_b:
        raise RepresentationError(f"contraction routes disagree: {route_a} != {route_b}")
    return route_a
