import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from pgblock import search
from pgblock.cutcheck import PointSet, is_cutting, is_cutting_t_blocking, is_higgledy_piggledy, meets_hypergraph
from pgblock.pg import Geometry
from pgblock.search import SearchConfig, monte_carlo_search

# upper 0.1% points of chi-square with 12 and 34 degrees of freedom
CHI2_12 = 32.91
CHI2_34 = 65.25


def chi2(counts, cells):
    n = sum(counts.values())
    e = n / cells
    return sum((counts.get(c, 0) - e) ** 2 / e for c in range(cells))


def test_random_points_are_uniform():
    g = Geometry(2, 3)
    rng = np.random.default_rng(1)
    c = Counter(g.index(search.random_object(g, "point", rng)) for _ in range(6500))
    assert chi2(c, 13) < CHI2_12


@pytest.mark.parametrize("how", ["line", "subspace"])
def test_random_lines_are_uniform(how):
    g = Geometry(3, 2)
    subs = g.subspaces(1)
    pos = {s: i for i, s in enumerate(subs)}
    rng = np.random.default_rng(2)
    c = Counter(pos[search.random_object(g, how, rng, d=1)] for _ in range(7000))
    assert len(c) == 35
    assert chi2(c, 35) < CHI2_34


def test_batch_line_sampler_is_uniform():
    g = Geometry(3, 2)
    subs, flats = g.flats(1)
    key = {tuple(row): i for i, row in enumerate(flats)}
    s = search._Sampler(g, "lines", 5, 1, "multiset")
    _, pts = s.draw(np.random.default_rng(3), 2000)
    rows = np.sort(pts.reshape(-1, 3), axis=1)
    c = Counter(key[tuple(r)] for r in rows.tolist())
    assert chi2(c, 35) < CHI2_34


def test_distinct_sampling_has_no_repeats():
    g = Geometry(3, 2)
    idx, _ = search._Sampler(g, "points", 9, 0, "distinct").draw(np.random.default_rng(0), 300)
    assert all(len(set(r)) == 9 for r in idx.tolist())
    _, pts = search._Sampler(g, "lines", 6, 1, "distinct").draw(np.random.default_rng(0), 300)
    for r in pts.reshape(300, 6, 3):
        assert len({tuple(sorted(x)) for x in r.tolist()}) == 6


def test_line_point_indices_match_geometry():
    g = Geometry(2, 4)
    rng = np.random.default_rng(5)
    P = rng.integers(g.npoints, size=40)
    Q = (P + 1 + rng.integers(g.npoints - 1, size=40)) % g.npoints
    rows = search.line_point_indices(g, P, Q)
    for p, q, row in zip(P, Q, rows):
        L = g.line(g.point(int(p)), g.point(int(q)))
        assert sorted(row.tolist()) == sorted(g.point_indices(L))


def test_point_search_examples():
    rep = monte_carlo_search(SearchConfig(2, 2, "points", 6, budget=2000, seed=0))
    assert rep.success and rep.union_size == 6
    assert is_cutting(rep.point_set())
    # below N(q+1) nothing cuts
    assert not monte_carlo_search(SearchConfig(2, 2, "points", 5, budget=500)).success
    rep = monte_carlo_search(SearchConfig(3, 2, "points", 9, budget=20000, seed=1))
    assert rep.success and is_cutting(rep.point_set())


def test_line_search_example():
    rep = monte_carlo_search(SearchConfig(3, 2, "lines", 4, budget=5000, seed=0))
    assert rep.success
    L = rep.line_set()
    assert len(L) == 4 and is_higgledy_piggledy(L)
    assert {c["check"] for c in rep.verification} >= {"containment", "rank", "line count bounds"}


def test_search_is_deterministic_and_prefix_stable():
    cfg = SearchConfig(4, 2, "points", 14, budget=3000, seed=7)
    a, b = monte_carlo_search(cfg), monte_carlo_search(cfg)
    assert a.to_json() == b.to_json()
    assert a.success
    bigger = monte_carlo_search(SearchConfig(4, 2, "points", 14, budget=9000, seed=7))
    assert (bigger.trial, bigger.objects) == (a.trial, a.objects)
    other = monte_carlo_search(SearchConfig(4, 2, "points", 14, budget=3000, seed=8))
    assert other.to_json() != a.to_json()


def test_failed_search_uses_whole_budget():
    rep = monte_carlo_search(SearchConfig(3, 2, "points", 7, budget=700))
    assert not rep.success and rep.trials_used == 700 and rep.point_set() is None


def test_collect_prefers_smaller_unions():
    one = monte_carlo_search(SearchConfig(4, 2, "lines", 6, budget=4000, seed=3))
    many = monte_carlo_search(SearchConfig(4, 2, "lines", 6, budget=4000, seed=3), collect=40)
    assert one.success and many.success
    assert many.union_size <= one.union_size
    assert many.trials_used >= one.trials_used


def test_repair_strategy_output_is_verified():
    base = SearchConfig(5, 2, "points", 17, budget=256, seed=0)
    assert not monte_carlo_search(base).success
    cfg = SearchConfig(5, 2, "points", 17, budget=256, seed=0, strategy="random_with_restarts")
    rep = monte_carlo_search(cfg)
    assert rep.success and rep.repaired
    assert len(rep.objects) == 17 and is_cutting(rep.point_set())


def test_config_validation():
    for bad in [
        SearchConfig(2, 2, "planes", 3),
        SearchConfig(2, 2, "points", 0),
        SearchConfig(3, 2, "subspaces", 3),
        SearchConfig(3, 2, "subspaces", 3, t=1),
        SearchConfig(3, 2, "subspaces", 3, t=2, dim=1),
        SearchConfig(3, 2, "subspaces", 3, t=2, strategy="random_with_restarts"),
        SearchConfig(2, 2, "points", 3, strategy="annealing"),
    ]:
        with pytest.raises(ValueError):
            bad.resolved()


def test_exact_probability_against_enumeration():
    g = Geometry(2, 2)
    lines = g.lines()
    good = 0
    for tup in itertools.product(lines, repeat=3):
        pts = {p for L in tup for p in g.subspace_points(L)}
        good += bool(meets_hypergraph(PointSet.from_points(g, pts)))
    assert search.exact_success_probability(2, 2, 3) == Fraction(good, 343) == Fraction(30, 49)


def test_monte_carlo_estimate_matches_exact():
    exact = float(search.exact_success_probability(2, 2, 3))
    p, se = search.estimate_success_probability(2, 2, 3, 20000, seed=0)
    assert abs(p - exact) <= 3 * se


def test_exhaustive_minima():
    r = search.exhaustive_minimum(Geometry(2, 2), "cutting_point_set")
    assert r.minimum == 6 and r.checked_below == math.comb(7, 5)
    assert is_cutting(PointSet.from_points(Geometry(2, 2), r.example))
    r = search.exhaustive_minimum(Geometry(2, 2), "hp_line_set")
    assert r.minimum == 3
    r = search.exhaustive_minimum(Geometry(2, 3), "cutting_point_set")
    assert r.minimum == 9 and r.checked_below == math.comb(13, 8)
    with pytest.raises(ValueError):
        search.exhaustive_minimum(Geometry(2, 2), "ovals")


def test_subspace_search_planes_in_pg3():
    rep = search.hp_subspace_search(3, 2, 2, 4, budget=5000, seed=0)
    assert rep.success and rep.config.dim == 2
    S = rep.point_set()
    assert is_cutting_t_blocking(S, 2)
    g = rep.geometry
    assert all(g.subspace(b).dim == 2 for b in rep.objects)


def test_subspace_search_with_t_equal_n_is_the_line_search():
    a = search.hp_subspace_search(3, 2, 3, 4, budget=3000, seed=4)
    b = monte_carlo_search(SearchConfig(3, 2, "lines", 4, budget=3000, seed=4))
    assert a.to_json() == b.to_json()


def test_subspace_search_planes_in_pg4():
    assert not search.hp_subspace_search(4, 2, 3, 4, budget=4000).success
    rep = search.hp_subspace_search(4, 2, 3, 5, budget=4000)
    assert rep.success and rep.config.dim == 2
    assert is_cutting_t_blocking(rep.point_set(), 2)


def test_smallest_found_reaches_reference():
    row = search.smallest_found(3, "points", budget=20000)
    assert row.found is not None and row.found <= search.REFERENCE_POINTSETS[3]
    row = search.smallest_found(3, "lines", budget=5000)
    assert row.found is not None and row.found <= search.REFERENCE_HPLINES[3]
