"""mu(G): the fewest positive roots left outside a union of two root hyperplanes.

A hyperplane through the origin is the kernel of a coweight nu, and the roots it
contains are those with (alpha, nu) = 0.  The largest root hyperplanes are the
kernels of W-conjugates of fundamental coweights, so it suffices to fix
mu = omega_i^vee (W acts transitively on pairs up to conjugation) and let nu
range over the orbits W omega_j^vee.

Coweights are stored by their pairings with the simple roots, nu_k = (alpha_k, nu);
the simple reflection s_i acts by nu -> nu - nu_i C[:, i] with C the Cartan
matrix, and (alpha, nu) = sum_k c_k nu_k for alpha = sum_k c_k alpha_k.  For the
crystallographic types everything is an integer; for H3 and H4 the entries lie
in Z[phi] and are stored as integer pairs; the dihedral groups are handled by
angle arithmetic.  All zero tests are exact.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .coxeter import DihedralSystem, ZPhiSystem, zmul
from .rootsys import RootSystem, build

CHUNK = 65536


@dataclass
class CoverWitness:
    i: int
    j: int
    mu: list
    nu: list
    surviving: list[list]

    def to_dict(self) -> dict:
        return {"i": self.i, "j": self.j, "mu": self.mu, "nu": self.nu, "surviving": self.surviving}


# -- orbits ------------------------------------------------------------------------
def coweight_orbit(cartan: np.ndarray, start: np.ndarray) -> np.ndarray:
    """Orbit of a coweight (pairings with the simple roots) under W, layer by layer.

    ``cartan`` has shape (r, r) for integer entries or (r, r, 2) for Z[phi].
    """
    zphi = cartan.ndim == 3
    r = cartan.shape[0]
    dtype = np.int64
    start = np.asarray(start, dtype=dtype)[None, ...]

    def keys(a: np.ndarray) -> np.ndarray:
        flat = np.ascontiguousarray(a.reshape(len(a), -1))
        return flat.view(np.dtype((np.void, flat.dtype.itemsize * flat.shape[1]))).ravel()

    layers = [start]
    seen = set(keys(start).tolist())
    frontier = start
    while len(frontier):
        new = []
        for i in range(r):
            if zphi:
                coeff = frontier[:, i, :]  # (N, 2)
                move = frontier[:, i, 0] != 0
                move |= frontier[:, i, 1] != 0
                cand = frontier[move] - zmul(coeff[move][:, None, :], cartan[None, :, i, :])
            else:
                move = frontier[:, i] != 0
                cand = frontier[move] - frontier[move, i][:, None] * cartan[None, :, i]
            new.append(cand)
        cand = np.concatenate(new) if new else frontier[:0]
        if not len(cand):
            break
        k = keys(cand)
        _, first = np.unique(k, return_index=True)
        cand, k = cand[first], k[first]
        fresh = np.array([key not in seen for key in k.tolist()], dtype=bool)
        frontier = cand[fresh]
        seen.update(k[fresh].tolist())
        if len(frontier):
            layers.append(frontier)
    return np.concatenate(layers)


# -- counting -------------------------------------------------------------------------
def _count_chunk(args) -> tuple[int, int]:
    roots, mask, orbit = args
    pair = orbit @ roots[mask].T  # (N, |mask|)
    counts = np.count_nonzero(pair, axis=1)
    idx = int(np.argmin(counts))
    return int(counts[idx]), idx


def _scan(roots: np.ndarray, mask: np.ndarray, orbit: np.ndarray, pool) -> tuple[int, int]:
    tasks = [(roots, mask, orbit[s : s + CHUNK]) for s in range(0, len(orbit), CHUNK)]
    results = list(pool.map(_count_chunk, tasks)) if pool else [_count_chunk(t) for t in tasks]
    best, where = None, None
    for n, (count, idx) in enumerate(results):
        if best is None or count < best:
            best, where = count, n * CHUNK + idx
    return best, where


def mu_crystallographic(rs: RootSystem, workers: int | None = None) -> tuple[int, CoverWitness]:
    r = rs.rank
    cartan = np.array(rs.cartan, dtype=np.int64)
    roots = np.array(rs.positive_roots, dtype=np.int64)
    orbits = [coweight_orbit(cartan, np.eye(r, dtype=np.int64)[j]) for j in range(r)]
    workers = workers if workers is not None else (os.cpu_count() or 1)
    pool = ProcessPoolExecutor(workers) if workers > 1 and rs.n_pos > 40 else None
    best = None
    try:
        for i in range(r):
            mask = roots[:, i] != 0  # roots not on the hyperplane of omega_i^vee
            for j in range(r):
                count, idx = _scan(roots, mask, orbits[j], pool)
                if best is None or count < best[0]:
                    best = (count, i, j, orbits[j][idx])
    finally:
        if pool:
            pool.shutdown()
    count, i, j, nu = best
    mu = np.eye(r, dtype=np.int64)[i]
    surv = [list(map(int, a)) for a in roots if a[i] != 0 and int(a @ nu) != 0]
    return count, CoverWitness(i, j, mu.tolist(), nu.tolist(), surv)


def _zpair(roots: np.ndarray, nu: np.ndarray) -> np.ndarray:
    """(alpha, nu) in Z[phi] for every root: shape (n, 2)."""
    return zmul(roots, nu[None, :, :]).sum(axis=1)


def mu_zphi(rs: ZPhiSystem) -> tuple[int, CoverWitness]:
    r = rs.rank
    roots = rs.positive_roots  # (n, r, 2)
    orbits = []
    for j in range(r):
        start = np.zeros((r, 2), dtype=np.int64)
        start[j, 0] = 1
        orbits.append(coweight_orbit(rs.cartan, start))
    best = None
    for i in range(r):
        mask = np.any(roots[:, i, :] != 0, axis=1)
        sub = roots[mask]
        for j in range(r):
            orb = orbits[j]
            # pairing of every orbit element with every surviving root: (N, n, 2)
            pair = zmul(orb[:, None, :, :], sub[None, :, :, :]).sum(axis=2)
            counts = np.count_nonzero(np.any(pair != 0, axis=2), axis=1)
            idx = int(np.argmin(counts))
            if best is None or counts[idx] < best[0]:
                best = (int(counts[idx]), i, j, orb[idx])
    count, i, j, nu = best
    mu = np.zeros((r, 2), dtype=np.int64)
    mu[i, 0] = 1
    pr = _zpair(roots, nu)
    surv = [a.tolist() for a, p in zip(roots, pr) if np.any(a[i] != 0) and np.any(p != 0)]
    return count, CoverWitness(i, j, mu.tolist(), nu.tolist(), surv)


def mu_dihedral(rs: DihedralSystem) -> tuple[int, CoverWitness]:
    """Coweights are directions given in units of pi/(2m)."""
    m = rs.m
    angles = rs.fundamental_angles()
    best = None
    for i, j in itertools.product(range(2), repeat=2):
        mu = angles[i]
        for nu in sorted(rs.orbit(angles[j])):
            surv = [k for k in range(m) if not rs.orthogonal(mu, k) and not rs.orthogonal(nu, k)]
            if best is None or len(surv) < best[0]:
                best = (len(surv), i, j, mu, nu, surv)
    count, i, j, mu, nu, surv = best
    return count, CoverWitness(i, j, [mu], [nu], [[rs.root_angle(k)] for k in surv])


def mu(rs, workers: int | None = None) -> tuple[int, CoverWitness]:
    """mu(G) and a witness pair of hyperplanes."""
    if isinstance(rs, DihedralSystem):
        return mu_dihedral(rs)
    if isinstance(rs, ZPhiSystem):
        return mu_zphi(rs)
    return mu_crystallographic(rs, workers)


def verify_witness(rs, w: CoverWitness) -> bool:
    """Every positive root outside the surviving set lies on one of the two hyperplanes."""
    if isinstance(rs, DihedralSystem):
        surv = {a[0] for a in w.surviving}
        for k in range(rs.m):
            on = rs.orthogonal(w.mu[0], k) or rs.orthogonal(w.nu[0], k)
            if on == (rs.root_angle(k) in surv):
                return False
        return True
    if isinstance(rs, ZPhiSystem):
        roots = rs.positive_roots
        p_mu = _zpair(roots, np.array(w.mu))
        p_nu = _zpair(roots, np.array(w.nu))
        surv = {tuple(map(tuple, s)) for s in w.surviving}
        for a, pm, pn in zip(roots, p_mu, p_nu):
            on = not np.any(pm) or not np.any(pn)
            if on == (tuple(map(tuple, a.tolist())) in surv):
                return False
        return True
    roots = np.array(rs.positive_roots, dtype=np.int64)
    surv = {tuple(s) for s in w.surviving}
    for a in roots:
        on = int(a @ np.array(w.mu)) == 0 or int(a @ np.array(w.nu)) == 0
        if on == (tuple(int(v) for v in a) in surv):
            return False
    return True


# -- brute force ----------------------------------------------------------------------
def mu_brute_force(rs: RootSystem) -> int:
    """Minimum over all pairs of hyperplanes spanned by r - 1 independent roots."""
    r = rs.rank
    roots = np.array(rs.positive_roots, dtype=float)
    normals = []
    for subset in itertools.combinations(range(len(roots)), r - 1):
        m = roots[list(subset)]
        if np.linalg.matrix_rank(m) < r - 1:
            continue
        # normal vector in the dual of root coordinates
        _, _, vt = np.linalg.svd(m)
        normals.append(vt[-1])
    on = np.array([np.abs(roots @ n) < 1e-9 for n in normals])
    on = np.unique(on, axis=0)
    best = len(roots)
    for a in range(len(on)):
        covered = on[a] | on
        best = min(best, int(np.min(len(roots) - covered.sum(axis=1))))
    return best


def mu_of_type(kind: str, rank: int, workers: int | None = None) -> tuple[int, CoverWitness]:
    return mu(build(kind, rank), workers)
