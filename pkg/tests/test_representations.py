import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from asymchar.representations import (
    RepresentationError,
    char_eval,
    contraction_multiplicity,
    decompose_character,
    diagram_eval,
    dim_irrep,
    kostant_multiplicity,
    tensor_diagram,
    tensor_multiplicity,
    weight_diagram,
    weight_multiplicity,
)
from asymchar.rootsys import build

# dimensions from the standard tables
DIMS = [
    ("A", 2, (1, 1), 8),
    ("A", 2, (3, 0), 10),
    ("A", 3, (1, 0, 1), 15),
    ("C", 2, (1, 0), 4),
    ("C", 2, (0, 1), 5),
    ("B", 2, (1, 0), 5),
    ("B", 2, (0, 1), 4),
    ("G", 2, (1, 0), 7),
    ("G", 2, (0, 1), 14),
    ("F", 4, (0, 0, 0, 1), 26),
    ("E", 6, (1, 0, 0, 0, 0, 0), 27),
    ("E", 7, (0, 0, 0, 0, 0, 0, 1), 56),
    ("E", 8, (0, 0, 0, 0, 0, 0, 0, 1), 248),
]


@pytest.mark.parametrize("kind,rank,lam,dim", DIMS)
def test_dimensions(kind, rank, lam, dim):
    rs = build(kind, rank)
    assert dim_irrep(rs, lam) == dim


@pytest.mark.parametrize("kind,rank,lam,dim", [d for d in DIMS if d[1] <= 4])
def test_diagram_sums_to_dimension(kind, rank, lam, dim):
    rs = build(kind, rank)
    assert sum(weight_diagram(rs, lam).values()) == dim


@pytest.mark.parametrize(
    "kind,lam",
    [("A", (2, 1)), ("C", (1, 2)), ("B", (2, 1)), ("G", (1, 1))],
)
def test_freudenthal_matches_kostant(kind, lam):
    rs = build(kind, 2)
    for mu in weight_diagram(rs, lam):
        if rs.is_dominant(mu):
            assert weight_multiplicity(rs, lam, mu) == kostant_multiplicity(rs, lam, mu)


def test_adjoint_zero_weight():
    for kind, rank in [("A", 3), ("C", 3), ("G", 2), ("F", 4)]:
        rs = build(kind, rank)
        highest = {("A", 3): (1, 0, 1), ("C", 3): (2, 0, 0), ("G", 2): (0, 1), ("F", 4): (1, 0, 0, 0)}[(kind, rank)]
        assert weight_multiplicity(rs, highest, (0,) * rank) == rank


def test_clebsch_gordan_a1():
    rs = build("A", 1)
    for a, b in itertools.product(range(5), repeat=2):
        for c in range(9):
            expected = int(abs(a - b) <= c <= a + b and (a + b - c) % 2 == 0)
            assert tensor_multiplicity(rs, (a,), (b,), (c,)) == expected


def test_tensor_diagram_decomposes():
    rs = build("A", 2)
    dec = decompose_character(rs, tensor_diagram(rs, [(1, 0), (0, 1)]))
    assert dec == {(1, 1): 1, (0, 0): 1}


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=2, max_size=2), st.sampled_from(["A", "C", "G"]))
def test_weyl_formula_matches_diagram(x, kind):
    rs = build(kind, 2)
    lam = (2, 1)
    a = char_eval(rs, lam, x)
    b = diagram_eval(rs, lam, x)
    assert abs(a - b) < 1e-7 * dim_irrep(rs, lam)


def test_char_at_identity():
    rs = build("C", 2)
    assert abs(char_eval(rs, (2, 1), [0.0, 0.0]) - dim_irrep(rs, (2, 1))) < 1e-9


def test_rejects_non_dominant():
    with pytest.raises(RepresentationError):
        dim_irrep(build("A", 2), (-1, 0))


def _route_b(rs, V, N, lam):
    """Multiplicity of L_{N lam + (N-1) rho} in V (x) L_{(N-1) rho}, by full decomposition."""
    rho = rs.rho
    shift = tuple((N - 1) * r for r in rho)
    dec = decompose_character(rs, tensor_diagram(rs, list(V) + ([shift] if N > 1 else [])))
    return dec.get(tuple(N * l + (N - 1) * r for l, r in zip(lam, rho)), 0)


@pytest.mark.parametrize(
    "kind,rank,V",
    [
        ("A", 1, [(2,), (2,)]),
        ("A", 2, [(1, 1), (1, 1)]),
        ("C", 2, [(1, 0), (0, 1), (1, 0)]),
    ],
)
def test_contraction_against_full_decomposition(kind, rank, V):
    rs = build(kind, rank)
    for N in (1, 2, 3):
        for lam in itertools.product(range(3), repeat=rank):
            assert contraction_multiplicity(rs, V, N, lam) == _route_b(rs, V, N, lam)
