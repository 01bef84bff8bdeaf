import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from asymchar.mucover import coweight_orbit, mu, mu_brute_force, mu_of_type, verify_witness
from asymchar.rootsys import build

# minimal number of positive roots off two root hyperplanes
TABLE = [
    ("A", 2, 1), ("A", 3, 1), ("A", 5, 1),
    ("B", 2, 2), ("B", 3, 2), ("B", 5, 2),
    ("C", 3, 2), ("C", 6, 2),
    ("D", 4, 2), ("D", 6, 2),
    ("G", 2, 4), ("F", 4, 8), ("E", 6, 6),
    ("H", 3, 6),
]


@pytest.mark.parametrize("kind,rank,expected", TABLE)
def test_table(kind, rank, expected):
    n, w = mu_of_type(kind, rank, workers=1)
    assert n == expected
    assert verify_witness(build(kind, rank), w)
    assert len(w.surviving) == n


@pytest.mark.parametrize("kind,rank", [("A", 3), ("B", 3), ("C", 3), ("G", 2), ("D", 4), ("A", 4)])
def test_orbit_reduction_matches_brute_force(kind, rank):
    rs = build(kind, rank)
    assert mu(rs, workers=1)[0] == mu_brute_force(rs)


@settings(max_examples=18, deadline=None)
@given(st.integers(3, 20))
def test_dihedral(m):
    rs = build("I", m)
    n, w = mu(rs)
    # one positive root per line through the origin, so two lines remove two roots
    assert n == m - 2
    assert verify_witness(rs, w)


def test_tampered_witness_fails():
    rs = build("G", 2)
    _, w = mu(rs)
    w.surviving = w.surviving[1:]
    assert not verify_witness(rs, w)


@pytest.mark.parametrize(
    "kind,rank,sizes",
    [
        ("A", 3, {4, 6}),
        ("E", 6, {27, 72, 216, 720}),
        ("H", 3, {12, 20, 30}),
        ("H", 4, {120, 600, 720, 1200}),
    ],
)
def test_orbit_sizes(kind, rank, sizes):
    rs = build(kind, rank)
    cartan = np.asarray(rs.cartan, dtype=np.int64)
    r = rs.rank
    if cartan.ndim == 3:
        starts = []
        for j in range(r):
            s = np.zeros((r, 2), dtype=np.int64)
            s[j, 0] = 1
            starts.append(s)
    else:
        starts = [np.eye(r, dtype=np.int64)[j] for j in range(r)]
    got = {len(coweight_orbit(cartan, s)) for s in starts}
    assert got == sizes
