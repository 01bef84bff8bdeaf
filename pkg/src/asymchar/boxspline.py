"""Exact evaluation of box splines with integer direction vectors.

The box spline of a direction multiset Xi is the density of sum t_xi xi with
the t_xi independent and uniform on [0, 1].  It is evaluated with the de Boor
and Hoellig recurrence

    (n - r) M_Xi(x) = sum_xi tau_xi M_{Xi - xi}(x) + (1 - tau_xi) M_{Xi - xi}(x - xi),

for any representation x = sum tau_xi xi, in exact rational arithmetic.  The
spline is only piecewise continuous, so every value is taken as a one-sided
limit along a fixed generic direction theta.  Along such a direction all
points are generic, the singular terms of the recurrence (reduced multisets
that no longer span) vanish, and only constant terms are needed.  The
returned value is the average of the limits along +theta and -theta.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg as la

Point = tuple[Fraction, ...]


@dataclass
class BoxSpline:
    """Box spline with distinct directions ``directions`` and multiplicities ``counts``.

    ``centered`` shifts the support so that t ranges over [-1/2, 1/2].
    """

    directions: list[tuple[int, ...]]
    counts: tuple[int, ...]
    centered: bool = True
    _memo: dict = field(default_factory=dict, repr=False)
    _basis: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.directions = [tuple(int(v) for v in d) for d in self.directions]
        self.counts = tuple(int(c) for c in self.counts)
        self.rank = len(self.directions[0])
        if _rank([d for d, c in zip(self.directions, self.counts) if c]) != self.rank:
            raise ValueError("directions do not span")
        self.theta = tuple(Fraction(101) ** i for i in range(self.rank))
        self.center = tuple(
            sum((Fraction(c, 2) * d[i] for d, c in zip(self.directions, self.counts)), Fraction(0))
            for i in range(self.rank)
        )
        self._upper = tuple(
            sum(c * max(d[i], 0) for d, c in zip(self.directions, self.counts)) for i in range(self.rank)
        )
        self._lower = tuple(
            sum(c * min(d[i], 0) for d, c in zip(self.directions, self.counts)) for i in range(self.rank)
        )

    @property
    def n(self) -> int:
        return sum(self.counts)

    # -- public --------------------------------------------------------------
    def __call__(self, p: Sequence) -> Fraction:
        """Value at p (average of the two one-sided limits along theta)."""
        x = tuple(Fraction(v) for v in p)
        if self.centered:
            x = tuple(a + b for a, b in zip(x, self.center))
        plus = self._eval(self.counts, x, 1)
        minus = self._eval(self.counts, x, -1)
        return (plus + minus) / 2

    def limit(self, p: Sequence, sign: int) -> Fraction:
        x = tuple(Fraction(v) for v in p)
        if self.centered:
            x = tuple(a + b for a, b in zip(x, self.center))
        return self._eval(self.counts, x, sign)

    def second_moment_matrix(self) -> list[list[Fraction]]:
        """E[q q^T] of the centered spline: sum_xi c_xi xi xi^T / 12."""
        r = self.rank
        out = [[Fraction(0)] * r for _ in range(r)]
        for d, c in zip(self.directions, self.counts):
            for i in range(r):
                for j in range(r):
                    out[i][j] += Fraction(c * d[i] * d[j], 12)
        return out

    # -- recurrence -------------------------------------------------------------
    def _basis_for(self, counts: tuple[int, ...]):
        key = tuple(c > 0 for c in counts)
        if key not in self._basis:
            chosen: list[int] = []
            for idx, present in enumerate(key):
                if present and _rank([self.directions[i] for i in chosen + [idx]]) == len(chosen) + 1:
                    chosen.append(idx)
                if len(chosen) == self.rank:
                    break
            if len(chosen) < self.rank:
                self._basis[key] = None
            else:
                mat = la.transpose(la.fmat([self.directions[i] for i in chosen]))  # columns are directions
                self._basis[key] = (chosen, la.inverse(mat), abs(la.det(mat)))
        return self._basis[key]

    def _outside(self, counts, x: Point) -> bool:
        for i in range(self.rank):
            hi = sum(c * max(d[i], 0) for d, c in zip(self.directions, counts))
            lo = sum(c * min(d[i], 0) for d, c in zip(self.directions, counts))
            if x[i] > hi or x[i] < lo:
                return True
        return False

    def _eval(self, counts: tuple[int, ...], x: Point, sign: int) -> Fraction:
        key = (counts, x, sign)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        val = self._compute(counts, x, sign)
        self._memo[key] = val
        return val

    def _compute(self, counts: tuple[int, ...], x: Point, sign: int) -> Fraction:
        basis = self._basis_for(counts)
        if basis is None:
            return Fraction(0)  # lower-dimensional support, missed by generic limits
        if self._outside(counts, x):
            return Fraction(0)
        chosen, inv, det = basis
        n = sum(counts)
        tau = la.matvec(inv, x)
        if n == self.rank:
            dtheta = la.matvec(inv, [sign * t for t in self.theta])
            for t, dt in zip(tau, dtheta):
                assert dt != 0, "theta is not generic"
                if not (0 < t < 1 or (t == 0 and dt > 0) or (t == 1 and dt < 0)):
                    return Fraction(0)
            return 1 / det
        total = Fraction(0)
        tau_of = dict(zip(chosen, tau))
        for idx, c in enumerate(counts):
            if not c:
                continue
            reduced = counts[:idx] + (c - 1,) + counts[idx + 1 :]
            if self._basis_for(reduced) is None:
                continue
            d = self.directions[idx]
            shifted = tuple(a - b for a, b in zip(x, d))
            t = tau_of.get(idx, Fraction(0))
            if t:
                total += t * self._eval(reduced, x, sign)
            w = c - t
            if w:
                total += w * self._eval(reduced, shifted, sign)
        return total / (n - self.rank)


def _rank(vectors: Sequence[Sequence[int]]) -> int:
    if not vectors:
        return 0
    return int(np.linalg.matrix_rank(np.array(vectors, dtype=float)))
