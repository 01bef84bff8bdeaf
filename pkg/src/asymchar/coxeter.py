"""Non-crystallographic root data: H3, H4 and the dihedral systems I2(m).

H3 and H4 live over the ring Z[phi], phi = (1 + sqrt 5)/2; an element
``a + b*phi`` is stored as the integer pair ``(a, b)`` on the last axis of an
array, so zero tests and sign tests are exact.

The dihedral system of order 2m is handled through angles: roots sit at
angles ``k*pi/m`` and every vector that occurs is a multiple of ``pi/(2m)``,
so all incidences are integer congruences.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .rootsys import RootSystemError


def zmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Product in Z[phi] (phi^2 = phi + 1), broadcasting over leading axes."""
    a, b = x[..., 0], x[..., 1]
    c, d = y[..., 0], y[..., 1]
    return np.stack([a * c + b * d, a * d + b * c + b * d], axis=-1)


def zsign(x: np.ndarray) -> np.ndarray:
    """Exact sign of a + b*phi."""
    a, b = x[..., 0].astype(object), x[..., 1].astype(object)
    p = 2 * a + b  # 2(a + b phi) = p + b sqrt5
    q = b
    out = np.zeros(np.shape(p), dtype=np.int64)
    p, q = np.asarray(p, dtype=np.int64), np.asarray(q, dtype=np.int64)
    pos = ((p >= 0) & (q >= 0) & ((p > 0) | (q > 0))) | ((p > 0) & (q < 0) & (p * p > 5 * q * q)) | (
        (p < 0) & (q > 0) & (5 * q * q > p * p)
    )
    neg = ((p <= 0) & (q <= 0) & ((p < 0) | (q < 0))) | ((p > 0) & (q < 0) & (p * p < 5 * q * q)) | (
        (p < 0) & (q > 0) & (5 * q * q < p * p)
    )
    out[pos] = 1
    out[neg] = -1
    return out


def zfloat(x: np.ndarray) -> np.ndarray:
    phi = (1 + 5**0.5) / 2
    return x[..., 0] + phi * x[..., 1]


@dataclass(frozen=True, eq=False)
class ZPhiSystem:
    """A finite Coxeter root system with Cartan entries in Z[phi] and unit roots."""

    kind: str
    rank: int
    cartan: np.ndarray  # (r, r, 2): <alpha_i, alpha_j^vee>
    positive_roots: np.ndarray  # (n, r, 2) simple-root coordinates
    weyl_order: int
    is_crystallographic: bool = False

    @property
    def label(self) -> str:
        return f"{self.kind}{self.rank}"

    @property
    def n_pos(self) -> int:
        return len(self.positive_roots)

    @property
    def norm_weights(self) -> np.ndarray:
        # all simple roots have the same length
        return np.tile(np.array([1, 0], dtype=np.int64), (self.rank, 1))


def _zphi_positive_roots(cartan: np.ndarray) -> np.ndarray:
    r = cartan.shape[0]
    simple = []
    for i in range(r):
        v = np.zeros((r, 2), dtype=np.int64)
        v[i, 0] = 1
        simple.append(v)
    seen = {v.tobytes(): v for v in simple}
    queue = deque(simple)
    while queue:
        beta = queue.popleft()
        for j in range(r):
            pairing = zmul(beta, cartan[:, j, :]).sum(axis=0)
            gamma = beta.copy()
            gamma[j] -= pairing
            if np.all(zsign(gamma) >= 0):
                key = gamma.tobytes()
                if key not in seen:
                    seen[key] = gamma
                    queue.append(gamma)
    roots = list(seen.values())
    roots.sort(key=lambda v: float(zfloat(v).sum()))
    return np.array(roots)


def _h_cartan(rank: int) -> np.ndarray:
    c = np.zeros((rank, rank, 2), dtype=np.int64)
    for i in range(rank):
        c[i, i] = (2, 0)
    for i in range(rank - 1):
        entry = (0, -1) if i == 0 else (-1, 0)  # -2cos(pi/5) = -phi, -2cos(pi/3) = -1
        c[i, i + 1] = c[i + 1, i] = entry
    return c


@dataclass(frozen=True)
class DihedralSystem:
    """I2(m): the dihedral group of order 2m acting on the plane."""

    m: int
    kind: str = "I"
    rank: int = 2
    is_crystallographic: bool = False

    @property
    def label(self) -> str:
        return f"I2({self.m})"

    @property
    def weyl_order(self) -> int:
        return 2 * self.m

    @property
    def n_pos(self) -> int:
        return self.m

    @property
    def unit(self) -> int:
        """Number of angle units in a full turn; one unit is pi/(2m)."""
        return 4 * self.m

    def root_angle(self, k: int) -> int:
        return 2 * k  # k*pi/m

    def fundamental_angles(self) -> list[int]:
        """Angles of omega_1, omega_2 (omega_i is orthogonal to the other simple root)."""
        m = self.m
        a1, a2 = 0, 2 * (m - 1)  # alpha_1 at 0, alpha_2 at (m-1)pi/m
        # perpendicular direction with positive pairing against the simple root it is not orthogonal to
        w1 = (a2 - m) % self.unit
        w2 = (a1 + m) % self.unit
        return [w1, w2]

    def reflect(self, phi: int, k: int) -> int:
        """Reflection in the line orthogonal to the root at angle index k."""
        return (2 * self.root_angle(k) + 2 * self.m - phi) % self.unit

    def orbit(self, phi: int) -> set[int]:
        seen = {phi}
        queue = deque([phi])
        while queue:
            v = queue.popleft()
            for k in (0, self.m - 1):
                w = self.reflect(v, k)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen

    def orthogonal(self, phi: int, k: int) -> bool:
        return (phi - self.root_angle(k) - self.m) % (2 * self.m) == 0


def build_noncrystallographic(kind: str, rank: int):
    if kind == "H" and rank in (3, 4):
        cartan = _h_cartan(rank)
        roots = _zphi_positive_roots(cartan)
        expected = {3: 15, 4: 60}[rank]
        if len(roots) != expected:
            raise RuntimeError(f"H{rank}: generated {len(roots)} positive roots")
        return ZPhiSystem("H", rank, cartan, roots, {3: 120, 4: 14400}[rank])
    if kind == "I" and rank >= 3:
        return DihedralSystem(int(rank))
    raise RootSystemError(f"no non-crystallographic system {kind}{rank}")
