"""Root systems of the simple complex Lie algebras.

Conventions used throughout the package:

* weights (elements of h*) are given by Dynkin labels, i.e. coordinates in the
  fundamental-weight basis, ``l_i = (lambda, alpha_i^vee)``;
* roots are usually stored in simple-root coordinates (integer vectors);
* elements of h are given by coroot coordinates ``c_j`` with
  ``x = sum_j c_j alpha_j^vee``, so the natural pairing is ``(lambda, x) = l . c``;
  equivalently ``c_j = (omega_j, x)``;
* the invariant form is the Killing-normalized one: the usual form with long
  roots of squared length 2, divided by ``2 h^vee``.  With it ``(rho, rho) = d/24``.

Floating computations work in an orthonormal ("Euclidean") frame for this form.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import linalg as la

CRYSTALLOGRAPHIC = ("A", "B", "C", "D", "E", "F", "G")

# beyond this the full group is never materialized
MAX_MATERIALIZED_W = 60000


class RootSystemError(ValueError):
    pass


def _dynkin(kind: str, n: int) -> tuple[list[Fraction], list[tuple[int, int]]]:
    """Squared root lengths (long = 2) and the edges of the Dynkin diagram (Bourbaki labels)."""
    one, two = Fraction(1), Fraction(2)
    chain = [(i, i + 1) for i in range(n - 1)]
    if kind == "A" and n >= 1:
        return [two] * n, chain
    if kind == "B" and n >= 2:
        return [two] * (n - 1) + [one], chain
    if kind == "C" and n >= 2:
        return [one] * (n - 1) + [two], chain
    if kind == "D" and n >= 4:
        return [two] * n, [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    if kind == "E" and n in (6, 7, 8):
        edges = [(0, 2), (1, 3), (2, 3)] + [(i, i + 1) for i in range(3, n - 1)]
        return [two] * n, edges
    if kind == "F" and n == 4:
        return [two, two, one, one], chain
    if kind == "G" and n == 2:
        return [Fraction(2, 3), two], chain
    raise RootSystemError(f"no simple root system of type {kind}{n}")


_WEYL_ORDER = {
    "A": lambda n: math.factorial(n + 1),
    "B": lambda n: 2**n * math.factorial(n),
    "C": lambda n: 2**n * math.factorial(n),
    "D": lambda n: 2 ** (n - 1) * math.factorial(n),
    "E": lambda n: {6: 51840, 7: 2903040, 8: 696729600}[n],
    "F": lambda n: 1152,
    "G": lambda n: 12,
}


def _cartesian_simple_roots(kind: str, n: int) -> list[list[Fraction]] | None:
    """Simple roots in the standard e_i coordinates for the classical series."""
    if kind not in "ABCD":
        return None
    dim = n + 1 if kind == "A" else n
    roots = []
    for i in range(n - 1 if kind != "A" else n):
        v = [Fraction(0)] * dim
        v[i], v[i + 1] = Fraction(1), Fraction(-1)
        roots.append(v)
    if kind != "A":
        v = [Fraction(0)] * dim
        if kind == "B":
            v[n - 1] = Fraction(1)
        elif kind == "C":
            v[n - 1] = Fraction(2)
        else:
            v[n - 2] = v[n - 1] = Fraction(1)
        roots.append(v)
    return roots


@dataclass(frozen=True)
class WeylElement:
    """An element of W, acting on Dynkin labels by an integer matrix."""

    matrix: tuple[tuple[int, ...], ...]
    word: tuple[int, ...]

    @property
    def det(self) -> int:
        return -1 if len(self.word) % 2 else 1

    def act(self, labels: Sequence) -> tuple:
        return tuple(sum(a * b for a, b in zip(row, labels)) for row in self.matrix)


@dataclass(frozen=True)
class WeightVector:
    """Coordinates of a weight together with the basis they refer to."""

    coords: tuple
    basis: str = "fundamental"  # or "root"

    def to(self, rs: "RootSystem", basis: str) -> "WeightVector":
        if basis == self.basis:
            return self
        if basis == "root":
            return WeightVector(tuple(rs.labels_to_root_coords(self.coords)), "root")
        return WeightVector(tuple(rs.root_coords_to_labels(self.coords)), "fundamental")


@dataclass(frozen=True, eq=False)
class RootSystem:
    kind: str
    rank: int
    lengths: tuple = field(repr=False)
    edges: tuple = field(repr=False)

    # -- exact data -------------------------------------------------------
    @cached_property
    def label(self) -> str:
        return f"{self.kind}{self.rank}"

    @cached_property
    def form_long2(self) -> la.Matrix:
        """(alpha_i, alpha_j) with long roots of squared length 2."""
        n = self.rank
        b = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            b[i][i] = self.lengths[i]
        for i, j in self.edges:
            b[i][j] = b[j][i] = -max(self.lengths[i], self.lengths[j]) / 2
        return b

    @cached_property
    def cartan(self) -> list[list[int]]:
        """``cartan[i][j] = <alpha_i, alpha_j^vee>``; row i holds the labels of alpha_i."""
        b = self.form_long2
        n = self.rank
        out = [[2 * b[i][j] / b[j][j] for j in range(n)] for i in range(n)]
        assert all(v.denominator == 1 for row in out for v in row)
        return [[int(v) for v in row] for row in out]

    @cached_property
    def cartan_inverse(self) -> la.Matrix:
        return la.inverse(la.fmat(self.cartan))

    @cached_property
    def positive_roots(self) -> list[tuple[int, ...]]:
        """Positive roots in simple-root coordinates, sorted by height."""
        n, cm = self.rank, self.cartan
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        seen = set(simple)
        queue = deque(simple)
        while queue:
            beta = queue.popleft()
            for j in range(n):
                pairing = sum(beta[i] * cm[i][j] for i in range(n))
                gamma = tuple(b - pairing * int(k == j) for k, b in enumerate(beta))
                if all(g >= 0 for g in gamma) and gamma not in seen:
                    seen.add(gamma)
                    queue.append(gamma)
        return sorted(seen, key=lambda c: (sum(c), c))

    @cached_property
    def n_pos(self) -> int:
        return len(self.positive_roots)

    @cached_property
    def dim(self) -> int:
        return self.rank + 2 * self.n_pos

    @cached_property
    def coxeter_number(self) -> int:
        return sum(self.positive_roots[-1]) + 1

    @cached_property
    def dual_coxeter_number(self) -> int:
        theta = self.positive_roots[-1]
        rho2 = [Fraction(sum(c[i] for c in self.positive_roots), 1) for i in range(self.rank)]
        # rho in root coordinates is half the sum; theta is long so theta^vee = theta
        val = la.bilinear(rho2, self.form_long2, theta) / 2
        return int(1 + val)

    @cached_property
    def weyl_order(self) -> int:
        return _WEYL_ORDER[self.kind](self.rank)

    @cached_property
    def gram_root(self) -> la.Matrix:
        """Killing-normalized form in the simple-root basis."""
        s = Fraction(1, 2 * self.dual_coxeter_number)
        return [[v * s for v in row] for row in self.form_long2]

    @cached_property
    def gram(self) -> la.Matrix:
        """Killing-normalized form in the fundamental-weight basis."""
        ci = self.cartan_inverse
        return la.matmul(la.matmul(ci, self.gram_root), la.transpose(ci))

    @cached_property
    def rho(self) -> tuple[int, ...]:
        return (1,) * self.rank

    def labels_to_root_coords(self, labels: Sequence) -> list[Fraction]:
        return la.vecmat(labels, self.cartan_inverse)

    def root_coords_to_labels(self, coords: Sequence) -> list:
        return [sum(c * self.cartan[i][j] for i, c in enumerate(coords)) for j in range(self.rank)]

    @cached_property
    def positive_root_labels(self) -> list[tuple[int, ...]]:
        return [tuple(self.root_coords_to_labels(c)) for c in self.positive_roots]

    def inner(self, u: Sequence, v: Sequence) -> Fraction:
        """Killing inner product of two weights given by Dynkin labels."""
        return la.bilinear(u, self.gram, v)

    def norm2(self, u: Sequence) -> Fraction:
        return self.inner(u, u)

    def root_norm2(self, c: Sequence) -> Fraction:
        return la.bilinear(c, self.gram_root, c)

    @cached_property
    def simple_root_norm2(self) -> list[Fraction]:
        return [self.gram_root[i][i] for i in range(self.rank)]

    def coroot_pairing(self, labels: Sequence, root: Sequence) -> Fraction:
        """``(lambda, alpha^vee)`` for a root given in simple-root coordinates."""
        lam_root = self.inner(labels, self.root_coords_to_labels(root))
        return 2 * lam_root / self.root_norm2(root)

    @cached_property
    def fundamental_coweights(self) -> list[list[Fraction]]:
        """omega_j^vee in coroot coordinates (rows)."""
        # (alpha_i, omega_j^vee) = delta_ij and alpha_i = sum_k cartan[i][k] omega_k
        return la.transpose(la.inverse(la.fmat(self.cartan)))

    def coweight_pairing_matrix(self) -> la.Matrix:
        """``P[i][j] = (omega_i, omega_j^vee)``."""
        return self.fundamental_coweights_pairing

    @cached_property
    def fundamental_coweights_pairing(self) -> la.Matrix:
        # omega_i = sum_k Cinv[i][k] alpha_k and (alpha_k, omega_j^vee) = delta_kj
        return [row[:] for row in self.cartan_inverse]

    @cached_property
    def is_crystallographic(self) -> bool:
        return True

    # -- Weyl group -------------------------------------------------------
    def reflect(self, labels: Sequence, i: int) -> tuple:
        li = labels[i]
        return tuple(l - li * self.cartan[i][k] for k, l in enumerate(labels))

    def is_dominant(self, labels: Sequence) -> bool:
        return all(l >= 0 for l in labels)

    def dominant_representative(self, labels: Sequence) -> tuple[tuple, WeylElement]:
        v = tuple(labels)
        applied: list[int] = []
        while True:
            i = next((k for k, l in enumerate(v) if l < 0), None)
            if i is None:
                break
            v = self.reflect(v, i)
            applied.append(i)
        return v, self._element_from_applied(applied)

    def _simple_matrix(self, i: int) -> list[list[int]]:
        n = self.rank
        return [[int(k == m) - self.cartan[i][k] * int(m == i) for m in range(n)] for k in range(n)]

    def _element_from_applied(self, applied: Sequence[int]) -> WeylElement:
        n = self.rank
        mat = np.eye(n, dtype=np.int64)
        for i in applied:
            mat = np.array(self._simple_matrix(i), dtype=np.int64) @ mat
        return WeylElement(tuple(map(tuple, mat.tolist())), tuple(reversed(applied)))

    def weyl_orbit(self, labels: Sequence) -> set[tuple]:
        """Full W-orbit by closure under simple reflections (never enumerates W)."""
        dom, _ = self.dominant_representative(labels)
        layer = {dom}
        orbit = set(layer)
        while layer:
            nxt = set()
            for v in layer:
                for i, li in enumerate(v):
                    if li > 0:
                        nxt.add(self.reflect(v, i))
            nxt -= orbit
            orbit |= nxt
            layer = nxt
        return orbit

    @cached_property
    def weyl_group(self) -> list[WeylElement]:
        if self.weyl_order > MAX_MATERIALIZED_W:
            raise RootSystemError(f"W({self.label}) has {self.weyl_order} elements; not materialized")
        n = self.rank
        gens = [np.array(self._simple_matrix(i), dtype=np.int64) for i in range(n)]
        start = np.eye(n, dtype=np.int64)
        key0 = start.tobytes()
        seen = {key0: WeylElement(tuple(map(tuple, start.tolist())), ())}
        queue = deque([(start, ())])
        while queue:
            mat, word = queue.popleft()
            for i, g in enumerate(gens):
                new = g @ mat
                key = new.tobytes()
                if key not in seen:
                    w = (i,) + word
                    seen[key] = WeylElement(tuple(map(tuple, new.tolist())), w)
                    queue.append((new, w))
        assert len(seen) == self.weyl_order
        return list(seen.values())

    # -- floating frame ----------------------------------------------------
    @cached_property
    def gram_float(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.gram])

    @cached_property
    def frame(self) -> np.ndarray:
        """Upper-triangular R with R^T R = gram; weight labels l map to R @ l."""
        return np.linalg.cholesky(self.gram_float).T

    def weight_to_euclid(self, labels) -> np.ndarray:
        return np.asarray(labels, dtype=float) @ self.frame.T

    def coweight_to_euclid(self, coroot_coords) -> np.ndarray:
        """Elements of h given by coroot coordinates, mapped to the same frame."""
        rinv_t = np.linalg.inv(self.frame).T
        return np.asarray(coroot_coords, dtype=float) @ rinv_t.T

    def euclid_to_weight(self, e) -> np.ndarray:
        return np.linalg.solve(self.frame, np.asarray(e, dtype=float).T).T

    def euclid_to_coweight(self, e) -> np.ndarray:
        return np.asarray(e, dtype=float) @ self.frame

    @cached_property
    def roots_euclid(self) -> np.ndarray:
        return self.weight_to_euclid(np.array(self.positive_root_labels, dtype=float))

    @cached_property
    def coroots_euclid(self) -> np.ndarray:
        r = self.roots_euclid
        return 2 * r / np.sum(r * r, axis=1)[:, None]

    @cached_property
    def rho_euclid(self) -> np.ndarray:
        return self.weight_to_euclid(self.rho)

    @cached_property
    def weyl_matrices_euclid(self) -> tuple[np.ndarray, np.ndarray]:
        """Orthogonal matrices of all w in the Euclidean frame, and their signs."""
        r = self.frame
        rinv = np.linalg.inv(r)
        mats = np.array([r @ np.array(w.matrix, dtype=float) @ rinv for w in self.weyl_group])
        signs = np.array([w.det for w in self.weyl_group], dtype=float)
        return mats, signs

    # -- Cartesian coordinates for the classical series ----------------------
    @cached_property
    def cartesian_simple_roots(self) -> list[list[Fraction]] | None:
        return _cartesian_simple_roots(self.kind, self.rank)

    def _require_cartesian(self) -> list[list[Fraction]]:
        sr = self.cartesian_simple_roots
        if sr is None:
            raise RootSystemError(f"no Cartesian model for type {self.label}")
        return sr

    def from_cartesian(self, v: Sequence) -> tuple:
        """Dynkin labels of the weight with e-coordinates ``v``."""
        out = []
        for a in self._require_cartesian():
            aa = sum(x * x for x in a)
            out.append(sum(Fraction(x) * y for x, y in zip(a, v)) * 2 / aa)
        return tuple(out)

    @cached_property
    def cartesian_fundamental_weights(self) -> la.Matrix:
        return la.matmul(self.cartan_inverse, self._require_cartesian())

    def coweight_from_cartesian(self, x: Sequence) -> tuple:
        """Coroot coordinates of the element of h with e-coordinates ``x``."""
        return tuple(sum(w * Fraction(xx) for w, xx in zip(row, x)) for row in self.cartesian_fundamental_weights)

    def coweight_to_cartesian(self, c: Sequence) -> list:
        sr = self._require_cartesian()
        out = [Fraction(0)] * len(sr[0])
        for cj, a in zip(c, sr):
            aa = sum(x * x for x in a)
            for k, ak in enumerate(a):
                out[k] += Fraction(cj) * 2 * ak / aa
        return out

    def weight_to_cartesian(self, labels: Sequence) -> list:
        return la.vecmat(labels, self.cartesian_fundamental_weights)

    # -- serialization ---------------------------------------------------------
    def to_json(self) -> dict:
        def rat(m):
            return [[f"{v.numerator}/{v.denominator}" for v in row] for row in m]

        return {
            "type": self.kind,
            "rank": self.rank,
            "dim": self.dim,
            "cartan": self.cartan,
            "gram": rat(self.gram),
            "gram_root": rat(self.gram_root),
            "positive_roots": [list(c) for c in self.positive_roots],
            "coxeter_number": self.coxeter_number,
            "dual_coxeter_number": self.dual_coxeter_number,
            "weyl_order": self.weyl_order,
        }


_CACHE: dict[tuple[str, int], RootSystem] = {}


def build(kind: str, rank: int):
    """Root system of type (kind, rank).

    ``kind`` in A..G gives the crystallographic systems; "H" (rank 3 or 4) and
    "I" (``rank`` = m, the dihedral group of order 2m) return the
    non-crystallographic data used by :mod:`asymchar.mucover`.
    """
    kind = kind.upper()
    if kind in ("H", "I"):
        from .coxeter import build_noncrystallographic

        return build_noncrystallographic(kind, rank)
    if kind not in CRYSTALLOGRAPHIC:
        raise RootSystemError(f"unknown Cartan type {kind!r}")
    key = (kind, int(rank))
    if key not in _CACHE:
        lengths, edges = _dynkin(kind, int(rank))
        _CACHE[key] = RootSystem(kind, int(rank), tuple(lengths), tuple(edges))
    return _CACHE[key]


def parse_type(label: str) -> tuple[str, int]:
    """'E8' -> ('E', 8)."""
    label = label.strip().upper()
    return label[0], int(label[1:])


def fundamental_weight(rs: RootSystem, j: int) -> tuple[int, ...]:
    return tuple(int(i == j) for i in range(rs.rank))


def check_invariants(rs: RootSystem) -> dict[str, bool]:
    """Normalization identities that every constructed system satisfies."""
    rho = rs.rho
    sum_roots = sum((rs.root_norm2(c) for c in rs.positive_roots), Fraction(0))
    pairing_ok = all(
        sum(rs.cartan_inverse[i][k] * rs.cartan[k][j] for k in range(rs.rank)) == int(i == j)
        for i in range(rs.rank)
        for j in range(rs.rank)
    )
    return {
        "n_pos": rs.n_pos == (rs.dim - rs.rank) // 2,
        "strange_formula": rs.norm2(rho) == Fraction(rs.dim, 24),
        "killing_trace": sum_roots == Fraction(rs.rank, 2),
        "coweight_duality": pairing_ok,
        "coxeter": rs.dim == rs.rank * (rs.coxeter_number + 1),
        "positive_definite": all(m > 0 for m in la.leading_minors(rs.gram)),
    }


def iter_types(max_rank: int = 8) -> Iterable[tuple[str, int]]:
    for n in range(1, max_rank + 1):
        yield "A", n
    for n in range(2, max_rank + 1):
        yield "B", n
        yield "C", n
    for n in range(4, max_rank + 1):
        yield "D", n
    yield from [("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]
