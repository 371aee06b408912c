import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgblock import codes
from pgblock.cutcheck import PointSet, is_cutting, lift_to_extension, saturation_degree
from pgblock.pg import Geometry


def fano_six():
    g = Geometry(2, 2)
    return PointSet.from_indices(g, range(1, 7))


def supports_brute(G):
    """Supports of all q^k - 1 nonzero codewords, computed directly from the matrix."""
    q, k = G.q, G.k
    f = G.field
    out = {}
    for u in itertools.product(range(q), repeat=k):
        if any(u):
            c = [0] * G.n
            for i, ui in enumerate(u):
                for j in range(G.n):
                    c[j] = f.add(c[j], f.mul(ui, int(G.entries[i, j])))
            out[u] = frozenset(j for j, x in enumerate(c) if x)
    return out


def test_simplex_code():
    g = Geometry(2, 2)
    G = codes.code_from_pointset(PointSet.whole(g))
    assert (G.k, G.n) == (3, 7) and G.is_projective()
    assert set(codes.weights(G)) == {4}
    for u in codes._projective_vectors(3, 2):
        assert codes.codeword_test(G, u, "minimal", "geometric")
        assert codes.codeword_test(G, u, "minimal", "bruteforce")
    assert codes.is_minimal_code(G) and codes.is_minimal_code(G, "bruteforce")
    rec = codes.check_bounds(G)
    assert rec.min_weight == 4 and rec.passed


def test_cutting_set_code():
    G = codes.code_from_pointset(fano_six())
    assert (G.k, G.n) == (3, 6)
    for u in codes._projective_vectors(3, 2):
        for which in ("minimal", "maximal"):
            assert codes.codeword_test(G, u, which, "geometric")
            assert codes.codeword_test(G, u, which, "bruteforce")
    rec = codes.check_bounds(G)
    assert rec.min_weight >= 3 and rec.n == 6 and rec.passed
    assert codes.pointset_from_generator(G) == fano_six()


def test_rank_deficient():
    g = Geometry(2, 2)
    L = g.lines()[0]
    with pytest.raises(codes.RankDeficient):
        codes.code_from_pointset(PointSet.from_points(g, g.subspace_points(L)))
    with pytest.raises(codes.RankDeficient):
        codes.GeneratorMatrix([[1, 0, 1], [1, 0, 1]], 2)


def test_line_plus_point_has_non_minimal_codeword():
    g = Geometry(2, 2)
    L = g.line((1, 0, 0), (0, 1, 0))
    S = PointSet.from_points(g, g.subspace_points(L) + [(0, 0, 1)])
    G = codes.code_from_pointset(S)
    bad = []
    for u in codes._projective_vectors(3, 2):
        on = [p for p in S.points if sum(a * b for a, b in zip(p, u)) % 2 == 0]
        if len(on) == 1:
            bad.append(u)
            assert not codes.codeword_test(G, u, "minimal", "geometric")
            assert not codes.codeword_test(G, u, "minimal", "bruteforce")
    assert bad
    assert not codes.is_minimal_code(G) and not codes.is_minimal_code(G, "bruteforce")
    with pytest.raises(codes.NotMinimalCode):
        codes.check_bounds(G)


def test_non_cutting_five_points():
    g = Geometry(2, 2)
    G = codes.code_from_pointset(PointSet.from_indices(g, range(2, 7)))
    v = codes.is_minimal_code(G)
    assert not v
    u = v.details["u"]
    assert not codes.codeword_test(G, u, "minimal", "bruteforce")


def test_zero_vector():
    G = codes.code_from_pointset(fano_six())
    with pytest.raises(codes.ZeroVector):
        codes.codeword_test(G, (0, 0, 0))


def test_degenerate_and_repeated_columns():
    G = codes.GeneratorMatrix([[1, 0, 1, 0, 1], [0, 1, 1, 0, 1]], 2)
    assert not G.is_nondegenerate() and not G.is_projective()
    assert len(G.point_set()) == 3
    assert codes.GeneratorMatrix([[1, 0, 1], [0, 1, 1]], 2).is_projective()


@st.composite
def generator(draw):
    k, q = draw(st.sampled_from([(3, 2), (3, 3), (4, 2)]))
    n = draw(st.integers(k, 3 * k * (q + 1) // 2))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    while True:
        m = rng.integers(0, q, size=(k, n))
        try:
            return codes.GeneratorMatrix(m, q)
        except codes.RankDeficient:
            continue


@settings(max_examples=120, deadline=None)
@given(generator())
def test_geometric_and_bruteforce_agree(G):
    brute = supports_brute(G)
    geo_min = codes.is_minimal_code(G)
    assert bool(geo_min) == bool(codes.is_minimal_code(G, "bruteforce"))
    assert bool(geo_min) == bool(is_cutting(G.point_set()))
    for u in codes._projective_vectors(G.k, G.q):
        su = brute[u]
        others = [s for v, s in brute.items() if G.geometry.normalize(v) != u]
        minimal = not any(s <= su for s in others)
        maximal = not any(su <= s for s in others)
        assert codes.codeword_test(G, u, "minimal", "geometric") == minimal
        assert codes.codeword_test(G, u, "minimal", "bruteforce") == minimal
        assert codes.codeword_test(G, u, "maximal", "geometric") == maximal
        assert codes.codeword_test(G, u, "maximal", "bruteforce") == maximal
        for lam in range(2, G.q):
            lu = tuple(G.field.mul(lam, x) for x in u)
            assert codes.codeword_test(G, lu, "minimal") == minimal
    if geo_min:
        assert codes.check_bounds(G).passed


def test_covering_radius_examples():
    g = Geometry(2, 2)
    hamming = np.array(g.points).T
    assert codes.covering_radius(hamming, 2) == 1
    for r, q in [(3, 2), (4, 3), (2, 5)]:
        assert codes.covering_radius(np.eye(r, dtype=int), q) == r
    big = lift_to_extension(fano_six(), 1)
    H = np.array(big.points).T
    assert H.shape == (3, 6)
    assert codes.covering_radius(H, 4) == 2
    with pytest.raises(ValueError):
        codes.covering_radius([[1, 1], [0, 0]], 2)


def brute_covering_radius(H, q):
    """Smallest R with every vector of GF(q)^r a combination of at most R columns (q prime)."""
    r, n = H.shape
    for R in range(r + 1):
        reach = set()
        for cols in itertools.combinations(range(n), R):
            for coeffs in itertools.product(range(q), repeat=R):
                v = tuple(int(sum(c * H[i, j] for c, j in zip(coeffs, cols)) % q) for i in range(r))
                reach.add(v)
        if len(reach) == q**r:
            return R
    return None


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 2), (2, 3), (3, 2)]), st.data())
def test_covering_radius_matches_saturation(shape, data):
    N, q = shape
    g = Geometry(N, q)
    idx = data.draw(st.lists(st.integers(0, g.npoints - 1), min_size=N + 1, max_size=min(g.npoints, 7), unique=True))
    S = PointSet.from_indices(g, idx)
    rho = saturation_degree(S)
    H = np.array(S.points).T
    if rho is None:
        with pytest.raises(ValueError):
            codes.covering_radius(H, q)
        return
    R = codes.covering_radius(H, q)
    assert R == rho + 1
    assert R == brute_covering_radius(H, q)
