import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgblock.pg import (
    DegenerateLine,
    EnumerationTooLarge,
    Geometry,
    count_superspaces,
    enumerate_objects,
    gaussian_binomial,
    line_points,
    rank,
    span,
    subspace_ops,
    theta,
)


def brute_subspace_count(n, k, q):
    """Count k-dim subspaces of GF(q)^n (q prime) as distinct sets of vectors spanned by k-tuples."""
    vecs = list(itertools.product(range(q), repeat=n))
    seen = set()
    for basis in itertools.combinations(vecs, k):
        combos = set()
        for coeffs in itertools.product(range(q), repeat=k):
            combos.add(tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) % q for i in range(n)))
        if len(combos) == q**k:
            seen.add(frozenset(combos))
    return len(seen)


def test_theta_examples():
    assert theta(2, 2) == 7
    assert theta(0, 5) == 1
    assert theta(3, 3) == 40
    assert theta(-1, 7) == 0


def test_gaussian_binomial_examples():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(6, 0, 3) == 1
    assert gaussian_binomial(3, 5, 2) == 0


@pytest.mark.parametrize("n,k,q", [(4, 2, 2), (3, 1, 3), (3, 2, 3), (4, 1, 2), (4, 3, 2), (2, 1, 5)])
def test_gaussian_binomial_against_brute_force(n, k, q):
    assert gaussian_binomial(n, k, q) == brute_subspace_count(n, k, q)


def test_superspace_examples():
    g = Geometry(2, 2)
    P = g.point(0)
    through = [L for L in g.lines() if g.contains_point(L, P)]
    assert len(through) == count_superspaces(2, 0, 1, 2) == 3
    g3 = Geometry(3, 2)
    L = g3.lines()[0]
    planes = [H for H in g3.subspaces(2) if g3.contains(H, L)]
    assert len(planes) == count_superspaces(3, 1, 2, 2) == 3
    assert count_superspaces(5, 2, 2, 3) == 1


@pytest.mark.parametrize("N", [1, 2, 3, 4])
@pytest.mark.parametrize("q", [2, 3, 4])
def test_enumeration_counts(N, q):
    g = Geometry(N, q)
    pts = enumerate_objects(g, "points")
    assert len(pts) == len(set(pts)) == theta(N, q)
    assert all(next(x for x in p if x) == 1 for p in pts)
    for d in range(-1, N + 1):
        subs = enumerate_objects(g, "subspaces", d)
        assert len(subs) == len(set(subs)) == gaussian_binomial(N + 1, d + 1, q)
        assert all(s.dim == d for s in subs)


def test_fano_plane():
    g = Geometry(2, 2)
    assert len(enumerate_objects(g, "hyperplanes")) == 7
    assert (g.incidence.sum(axis=1) == 3).all()
    assert len(Geometry(3, 2).lines()) == 35


def test_binary_point_order_is_the_bit_word():
    g = Geometry(4, 2)
    for i in range(g.npoints):
        word = int("".join(map(str, g.point(i))), 2)
        assert word == i + 1


def test_point_lookup_round_trip():
    g = Geometry(3, 3)
    for i in range(g.npoints):
        assert g.index(g.point(i)) == i
        scaled = [(2 * x) % 3 for x in g.point(i)]
        assert g.index(scaled) == i
    assert (g.vector_indices(g.points) == np.arange(g.npoints)).all()


def test_span_examples():
    g = Geometry(2, 2)
    assert span(g, [(1, 0, 0), (0, 1, 0)]).dim == 1
    assert span(g, []).dim == -1
    L = span(g, [(1, 0, 0), (0, 1, 0), (1, 1, 0)])
    assert L.dim == 1 and L == g.line((1, 0, 0), (1, 1, 0))


def test_line_points_examples():
    g = Geometry(2, 2)
    assert set(line_points(g, (1, 0, 0), (0, 1, 0))) == {(1, 0, 0), (0, 1, 0), (1, 1, 0)}
    g3 = Geometry(3, 3)
    for L in g3.lines()[:50]:
        pts = g3.subspace_points(L)
        assert len(pts) == 4
        assert set(pts) == set(line_points(g3, *L.basis))
    with pytest.raises(DegenerateLine):
        line_points(g, (1, 1, 0), (1, 1, 0))


def test_intersection_examples():
    g = Geometry(2, 3)
    lines = g.lines()
    for A, B in itertools.combinations(lines[:8], 2):
        assert subspace_ops(g, "dim", subspace_ops(g, "intersect", A, B)) == 0
    assert g.intersect(lines[0], lines[0]) == lines[0]
    g3 = Geometry(3, 2)
    A = g3.line((1, 0, 0, 0), (0, 1, 0, 0))
    B = g3.line((0, 0, 1, 0), (0, 0, 0, 1))
    assert rank(A.basis + B.basis, g3.field) == 4
    assert g3.intersect(A, B).dim == -1
    assert subspace_ops(g3, "contains_point", A, (1, 1, 0, 0))
    assert not subspace_ops(g3, "contains_point", A, (0, 0, 1, 0))


def test_point_hyperplane_counts():
    for N, q in [(2, 3), (3, 2), (3, 4), (4, 3)]:
        g = Geometry(N, q)
        # every point is on theta(N-1) hyperplanes, and hyperplane h is dual to point h
        assert (g.incidence.sum(axis=0) == theta(N - 1, q)).all()
        for h in range(0, g.npoints, max(1, g.npoints // 7)):
            H = g.hyperplane(h)
            assert H.dim == N - 1
            assert g.dual_vector(H) == g.point(h)
            assert sorted(g.point_indices(H)) == list(np.nonzero(g.incidence[h])[0])


def test_enumeration_cap():
    g = Geometry(3, 2, cap=20)  # 15 points fit, 35 lines do not
    with pytest.raises(EnumerationTooLarge):
        list(g.subspaces(1))


def test_flats_matrix_matches_individual_subspaces():
    g = Geometry(3, 3)
    subs, idx = g.flats(1)
    for s, row in zip(subs[::17], idx[::17]):
        assert list(row) == sorted(g.index(p) for p in g.subspace_points(s))


@st.composite
def subspace_pair(draw):
    q = draw(st.sampled_from([2, 3, 4]))
    N = draw(st.integers(2, 4))
    g = Geometry(N, q)

    def rows():
        k = draw(st.integers(1, N + 1))
        return [[draw(st.integers(0, q - 1)) for _ in range(N + 1)] for _ in range(k)]

    return g, g.subspace(rows()), g.subspace(rows())


@settings(max_examples=150, deadline=None)
@given(subspace_pair())
def test_grassmann_identity(pair):
    g, A, B = pair
    J, M = g.join(A, B), g.intersect(A, B)
    assert J.dim + M.dim == A.dim + B.dim
    assert g.contains(J, A) and g.contains(J, B)
    assert g.contains(A, M) and g.contains(B, M)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([(2, 2), (2, 3), (3, 2), (2, 4), (3, 3)]), st.data())
def test_rref_is_canonical(nq, data):
    N, q = nq
    g = Geometry(N, q)
    S = g.subspace([[data.draw(st.integers(0, q - 1)) for _ in range(N + 1)] for _ in range(2)])
    pts = g.subspace_points(S)
    # the span of any generating subset of its points gives the same basis
    picked = data.draw(st.lists(st.sampled_from(pts), min_size=len(pts) // 2 + 1, unique=True)) if pts else []
    if picked and rank(picked, g.field) == S.dim + 1:
        assert g.span(picked) == S
