"""Random and exhaustive searches for cutting sets and higgledy-piggledy sets.

Trials run in batches of ``BATCH`` draws.  Batch b draws from
``numpy.random.default_rng([seed, b])``, so any trial can be regenerated
from (seed, trial index) alone and the reported success is always the
lowest successful trial index, however the batches are scheduled.
Every success is re-verified by the rank-based checker and the size
audits before a report is returned.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import bounds
from .cutcheck import (
    LineSet,
    PointSet,
    cutting_lower_bound_audit,
    hp_lower_bound_audit,
    is_cutting_t_blocking,
    is_t_fold_r_blocking,
)
from .kernel import kernel
from .pg import EnumerationTooLarge, Geometry, Subspace, rank

BATCH = 256

#: Smallest sizes found by a plain Monte Carlo search in PG(N, 2), N = 2..10,
#: as published: cutting point sets, higgledy-piggledy line counts, and the
#: sizes of the corresponding line unions.
REFERENCE_POINTSETS = {2: 6, 3: 9, 4: 13, 5: 17, 6: 22, 7: 27, 8: 32, 9: 37, 10: 44}
REFERENCE_HPLINES = {2: 3, 3: 4, 4: 5, 5: 6, 6: 8, 7: 9, 8: 11, 9: 13, 10: 14}
REFERENCE_HPUNIONS = {2: 6, 3: 9, 4: 13, 5: 18, 6: 23, 7: 27, 8: 32, 9: 38, 10: 42}


# --------------------------------------------------------------------------
# sampling


def random_object(g: Geometry, kind: str, rng: np.random.Generator, d: int | None = None):
    """A uniformly random point, line, or d-subspace of g.

    Lines come from two distinct uniform points (each line has (q+1)q
    ordered pairs); d-subspaces are row spaces of uniformly random full-rank
    (d+1) x (N+1) matrices (each subspace has equally many bases).
    """
    if kind == "point":
        return g.point(int(rng.integers(g.npoints)))
    if kind == "line":
        a = int(rng.integers(g.npoints))
        b = int(rng.integers(g.npoints - 1))
        b += b >= a
        return g.line(g.point(a), g.point(b))
    if kind == "subspace":
        if d is None or not 0 <= d <= g.N:
            raise ValueError("subspace sampling needs 0 <= d <= N")
        while True:
            rows = rng.integers(g.q, size=(d + 1, g.N + 1)).tolist()
            if rank(rows, g.field) == d + 1:
                return g.subspace(rows)
    raise ValueError(f"unknown kind {kind!r}")


def line_point_indices(g: Geometry, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Point indices of the lines through index arrays P, Q (same shape); new last axis of size q+1."""
    f = g.field
    pv = g.points[P].astype(np.int64)
    qv = g.points[Q].astype(np.int64)
    lam = np.arange(g.q)[:, None]
    vecs = f.add_table[f.mul_table[lam, pv[..., None, :]], qv[..., None, :]]
    return np.concatenate([P[..., None], g.vector_indices(vecs)], axis=-1)


class _Sampler:
    """Draws a batch of candidate objects and the multiset of their points."""

    def __init__(self, g: Geometry, kind: str, size: int, dim: int, sampling: str):
        self.g, self.kind, self.size, self.dim, self.sampling = g, kind, size, dim, sampling

    def draw(self, rng: np.random.Generator, B: int):
        g, m = self.g, self.size
        if self.kind == "points":
            if self.sampling == "distinct":
                if m > g.npoints:
                    raise ValueError("more points requested than the space has")
                keys = rng.random((B, g.npoints))
                idx = np.sort(np.argpartition(keys, m - 1, axis=1)[:, :m], axis=1)
            else:
                idx = rng.integers(g.npoints, size=(B, m))
            return idx, idx
        if self.dim == 1:
            return self._lines(rng, B)
        return self._subspaces(rng, B)

    def _pairs(self, rng, shape):
        P = rng.integers(self.g.npoints, size=shape)
        Q = rng.integers(self.g.npoints - 1, size=shape)
        Q += Q >= P
        return P, Q

    def _lines(self, rng, B):
        g, m = self.g, self.size
        P, Q = self._pairs(rng, (B, m))
        pts = line_point_indices(g, P, Q)
        if self.sampling == "distinct":
            if m > g.count_subspaces(1):
                raise ValueError("more lines requested than the space has")
            while True:
                s = np.sort(pts, axis=-1)
                key = np.sort(s[..., 0] * g.npoints + s[..., 1], axis=1)
                bad = np.nonzero((key[:, 1:] == key[:, :-1]).any(axis=1))[0]
                if not bad.size:
                    break
                P2, Q2 = self._pairs(rng, (bad.size, m))
                P[bad], Q[bad] = P2, Q2
                pts[bad] = line_point_indices(g, P2, Q2)
        return np.stack([P, Q], axis=-1), pts.reshape(B, -1)

    def _subspaces(self, rng, B):
        g, m, d = self.g, self.size, self.dim
        bases = rng.integers(g.q, size=(B * m, d + 1, g.N + 1))
        pts = g.flats_point_indices(bases)
        while True:
            s = np.sort(pts, axis=1)
            bad = np.nonzero((s[:, 0] < 0) | (s[:, 1:] == s[:, :-1]).any(axis=1))[0]
            if not bad.size:
                break
            bases[bad] = rng.integers(g.q, size=(bad.size, d + 1, g.N + 1))
            pts[bad] = g.flats_point_indices(bases[bad])
        return bases.reshape(B, m, d + 1, g.N + 1), pts.reshape(B, -1)


# --------------------------------------------------------------------------
# configuration and reports


@dataclass(frozen=True)
class SearchConfig:
    """``kind`` is "points", "lines" or "subspaces"; ``size`` is the number of objects.

    ``t`` is the strong-blocking multiplicity: the union must meet every
    (t-1)-subspace in a spanning set.  Lines use t = N, point sets t = N.
    ``sampling`` defaults to "distinct" for points and "multiset" otherwise.
    """

    N: int
    q: int
    kind: str
    size: int
    budget: int = 10**5
    seed: int = 0
    strategy: str = "pure_random"
    sampling: str | None = None
    dim: int | None = None
    t: int | None = None

    def resolved(self) -> SearchConfig:
        if self.kind not in ("points", "lines", "subspaces"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.budget < 1 or self.size < 1:
            raise ValueError("budget and size must be positive")
        if self.strategy not in ("pure_random", "random_with_restarts"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        sampling = self.sampling or ("distinct" if self.kind == "points" else "multiset")
        if sampling not in ("distinct", "multiset"):
            raise ValueError(f"unknown sampling {sampling!r}")
        if self.kind == "points":
            dim, t = 0, self.N
        elif self.kind == "lines":
            dim, t = 1, self.N
        else:
            t = self.t if self.t is not None else (self.N - self.dim + 1 if self.dim is not None else None)
            if t is None or not 2 <= t <= self.N:
                raise ValueError("subspace search needs 2 <= t <= N")
            dim = self.N - t + 1
            if self.dim is not None and self.dim != dim:
                raise ValueError(f"dimension {self.dim} does not match t = {t}")
        if self.strategy == "random_with_restarts" and self.kind == "subspaces":
            raise ValueError("the repair step is only defined for points and lines")
        return SearchConfig(self.N, self.q, self.kind, self.size, self.budget, self.seed, self.strategy, sampling, dim, t)


@dataclass
class SearchReport:
    config: SearchConfig
    success: bool
    trial: int | None  # index of the successful trial
    trials_used: int
    union_size: int | None = None
    objects: list = field(default_factory=list)  # point tuples, or subspace bases
    verification: list = field(default_factory=list)
    repaired: bool = False

    @property
    def geometry(self) -> Geometry:
        return Geometry(self.config.N, self.config.q)

    def point_set(self) -> PointSet | None:
        if not self.success:
            return None
        g = self.geometry
        if self.config.kind == "points":
            return PointSet.from_points(g, self.objects)
        idx = [i for b in self.objects for i in g.point_indices(g.subspace(b))]
        return PointSet.from_indices(g, idx)

    def line_set(self) -> LineSet | None:
        if not self.success or self.config.kind == "points" or self.config.dim != 1:
            return None
        g = self.geometry
        return LineSet(g, tuple(g.subspace(b) for b in self.objects))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["objects"] = [[list(r) for r in o] if self.config.kind != "points" else list(o) for o in self.objects]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


# --------------------------------------------------------------------------
# the search


def _repair(g: Geometry, kern, cfg: SearchConfig, objs, idx: np.ndarray, rng, rounds: int):
    """Local repair: move one element toward a failure witness, up to ``rounds`` times.

    For a witness (flat L, hyperplane H) some point of L off H must be hit.
    Points: the first point outside L is replaced by a random point of
    L - H.  Lines: the line contributing the fewest private points is
    replaced by a random line through a point of L - H.
    """
    member = kern.member
    for _ in range(rounds):
        w = kern.witness(idx)
        if w is None:
            return objs, idx, True
        a, h = w
        target = np.nonzero(member[a] & ~g.incidence[h])[0]
        if cfg.kind == "points":
            pts = list(objs)
            outside = [k for k, p in enumerate(pts) if not member[a, p]]
            k = outside[0] if outside else 0
            choices = [int(x) for x in target if int(x) not in pts]
            if not choices:
                return objs, idx, False
            pts[k] = choices[int(rng.integers(len(choices)))]
            objs = np.array(sorted(pts))
            idx = objs
        else:
            pairs = objs.copy()
            lines = line_point_indices(g, pairs[:, 0], pairs[:, 1])
            counts = np.bincount(lines.ravel(), minlength=g.npoints)
            private = [(int((counts[row] == 1).sum()), j) for j, row in enumerate(lines)]
            j = min(private)[1]
            P = int(target[int(rng.integers(target.size))])
            Q = int(rng.integers(g.npoints - 1))
            Q += Q >= P
            pairs[j] = (P, Q)
            objs = pairs
            idx = line_point_indices(g, pairs[:, 0], pairs[:, 1]).ravel()
    return objs, idx, kern.witness(idx) is None


def _as_objects(g: Geometry, cfg: SearchConfig, raw) -> list:
    if cfg.kind == "points":
        return [g.point(int(i)) for i in sorted(set(int(x) for x in raw))]
    if cfg.dim == 1:
        return [g.line(g.point(int(P)), g.point(int(Q))).basis for P, Q in raw]
    return [g.subspace(b.tolist()).basis for b in raw]


def _reverify(g: Geometry, cfg: SearchConfig, objects: list) -> list[dict]:
    """Independent re-checks of a found object; raises if any fails."""
    if cfg.kind == "points":
        S = PointSet.from_points(g, objects)
    else:
        idx = [i for b in objects for i in g.point_indices(g.subspace(b))]
        S = PointSet.from_indices(g, idx)
    tc = g.N - cfg.t + 1  # cutting index of a t-fold strong blocking set
    chain = [
        {"check": "containment", "passed": bool(is_cutting_t_blocking(S, tc, "containment"))},
        {"check": "rank", "passed": bool(is_cutting_t_blocking(S, tc, "rank"))},
    ]
    if tc == 1:
        chain.append({"check": "cutting size bounds", "passed": not cutting_lower_bound_audit(S)})
        chain.append({"check": "N-fold blocking", "passed": bool(is_t_fold_r_blocking(S, g.N, 1)) if g.N > 1 else True})
    if cfg.kind != "points" and cfg.dim == 1:
        L = LineSet(g, tuple(g.subspace(b) for b in objects))
        chain.append({"check": "line count bounds", "passed": not hp_lower_bound_audit(L)})
    failed = [c["check"] for c in chain if not c["passed"]]
    if failed:
        raise AssertionError(f"found object failed re-verification: {failed}")
    return chain


def monte_carlo_search(cfg: SearchConfig, repair_rounds: int | None = None, collect: int = 1) -> SearchReport:
    """Independent random trials until one succeeds or the budget runs out.

    With ``collect`` > 1 the search continues until that many successes
    (or the budget) and keeps the one with the smallest point union, ties
    going to the earlier trial.
    """
    cfg = cfg.resolved()
    g = Geometry(cfg.N, cfg.q)
    kern = kernel(g, g.N - cfg.t + 1)
    sampler = _Sampler(g, cfg.kind, cfg.size, cfg.dim, cfg.sampling)
    rounds = repair_rounds if repair_rounds is not None else 3 * cfg.size
    found: list[tuple[int, int, object, bool]] = []  # (union size, trial, raw object, repaired)
    used = cfg.budget
    for b in range(math.ceil(cfg.budget / BATCH)):
        rng = np.random.default_rng([cfg.seed, b])
        objs, idx = sampler.draw(rng, BATCH)
        live = min(BATCH, cfg.budget - b * BATCH)
        hits = np.nonzero(~kern.failing(idx[:live]))[0]
        for r in hits:
            found.append((len(set(idx[r].tolist())), b * BATCH + int(r), objs[r], False))
        if not hits.size and cfg.strategy == "random_with_restarts":
            for r in range(live):
                o, i, ok = _repair(g, kern, cfg, objs[r], idx[r], rng, rounds)
                if ok:
                    found.append((len(set(np.asarray(i).tolist())), b * BATCH + r, o, True))
                    break
        if len(found) >= collect:
            found = found[:collect]
            used = max(x[1] for x in found) + 1
            break
    if not found:
        return SearchReport(cfg, False, None, cfg.budget)
    size, trial, raw, repaired = min(found, key=lambda x: (x[0], x[1]))
    objects = _as_objects(g, cfg, raw)
    chain = _reverify(g, cfg, objects)
    return SearchReport(cfg, True, trial, used, size, objects, chain, repaired)


def hp_subspace_search(N: int, q: int, t: int, m: int, budget: int = 10**5, seed: int = 0, sampling: str = "multiset") -> SearchReport:
    """Random (N-t+1)-subspaces whose union is a t-fold strong blocking set.

    For t = N these are lines, drawn exactly as in the line search.
    """
    kind = "lines" if t == N else "subspaces"
    return monte_carlo_search(SearchConfig(N, q, kind, m, budget, seed, sampling=sampling, t=t))


# --------------------------------------------------------------------------
# success probabilities


def estimate_success_probability(N: int, q: int, m: int, trials: int, seed: int = 0, sampling: str = "multiset") -> tuple[float, float]:
    """Fraction of random m-line multisets with cutting union, and its binomial standard error."""
    if trials < 1:
        raise ValueError("trials must be positive")
    g = Geometry(N, q)
    kern = kernel(g, 1)
    sampler = _Sampler(g, "lines", m, 1, sampling)
    good = 0
    for b in range(math.ceil(trials / BATCH)):
        rng = np.random.default_rng([seed, b])
        _, idx = sampler.draw(rng, BATCH)
        live = min(BATCH, trials - b * BATCH)
        good += int((~kern.failing(idx[:live])).sum())
    p = good / trials
    return p, math.sqrt(p * (1 - p) / trials)


def exact_success_probability(N: int, q: int, m: int) -> Fraction:
    """Exact probability over all ordered m-tuples of lines (uniform, repetition allowed)."""
    g = Geometry(N, q)
    _, lines = g.flats(1)
    total = lines.shape[0] ** m
    if total > g.cap:
        raise EnumerationTooLarge(f"{total} ordered line tuples")
    kern = kernel(g, 1)
    good = 0
    tuples = itertools.product(range(lines.shape[0]), repeat=m)
    while True:
        block = np.array(list(itertools.islice(tuples, 4096)), dtype=np.int64)
        if not block.size:
            break
        good += int((~kern.failing(lines[block].reshape(block.shape[0], -1))).sum())
    return Fraction(good, total)


# --------------------------------------------------------------------------
# exhaustive minima


@dataclass
class ExhaustiveResult:
    kind: str
    minimum: int
    example: list
    checked_below: int  # number of candidates of size minimum-1, all failing


def exhaustive_minimum(g: Geometry, kind: str) -> ExhaustiveResult:
    """Exact minimum size of a cutting point set or a higgledy-piggledy line set.

    Candidates are enumerated by increasing size from the known lower bound;
    minimality is certified by exhausting every candidate one size below the
    answer (enough, because failing to cut is inherited by subsets).
    """
    kern = kernel(g, 1)
    if kind == "cutting_point_set":
        universe = np.arange(g.npoints)[:, None]
        start = g.N * (g.q + 1)
    elif kind == "hp_line_set":
        universe = g.flats(1)[1]
        start = bounds.hp_line_lower(g.N, g.q)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    n = universe.shape[0]

    def scan(size: int):
        count = math.comb(n, size)
        if count > g.cap:
            raise EnumerationTooLarge(f"{count} candidates of size {size}")
        combos = itertools.combinations(range(n), size)
        seen = 0
        while True:
            block = np.array(list(itertools.islice(combos, 2048)), dtype=np.int64)
            if not block.size:
                return None, seen
            ok = ~kern.failing(universe[block].reshape(block.shape[0], -1))
            if ok.any():
                return block[int(np.argmax(ok))], seen
            seen += block.shape[0]

    size = max(1, start)
    # walk down if the known bound were ever beaten (it is not, but do not assume it)
    while size > 1:
        hit, _ = scan(size - 1)
        if hit is None:
            break
        size -= 1
    while True:
        hit, _ = scan(size)
        if hit is not None:
            break
        size += 1
        if size > n:
            raise ValueError("no candidate of any size succeeds")
    checked = scan(size - 1)[1] if size > 1 else 0
    if kind == "cutting_point_set":
        example = [g.point(int(i)) for i in hit]
    else:
        subs = g.flats(1)[0]
        example = [subs[int(i)].basis for i in hit]
    return ExhaustiveResult(kind, size, example, checked)


# --------------------------------------------------------------------------
# table reproduction


@dataclass
class TableRow:
    N: int
    found: int | None
    reference: int
    union_size: int | None
    budget: int
    trials: int
    report: SearchReport | None = None


def smallest_found(
    N: int,
    kind: str,
    q: int = 2,
    budget: int = 10**5,
    seed: int = 0,
    start: int | None = None,
    floor: int | None = None,
    collect: int = 1,
) -> TableRow:
    """Smallest size reached by plain random search, walking down from ``start``.

    ``start`` defaults to the published table value; if that fails the walk
    goes up instead (at most five steps).  Sizes below ``floor`` (default:
    the proven lower bound) are never tried.  ``collect`` is passed on to
    :func:`monte_carlo_search` to prefer small unions.
    """
    if kind == "points":
        ref = REFERENCE_POINTSETS.get(N, 0) if q == 2 else 0
        low = N * (q + 1)
    elif kind == "lines":
        ref = REFERENCE_HPLINES.get(N, 0) if q == 2 else 0
        low = bounds.hp_line_lower(N, q)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    floor = low if floor is None else max(floor, low)
    size = start if start is not None else max(ref, floor)
    used = 0

    def attempt(s):
        nonlocal used
        rep = monte_carlo_search(SearchConfig(N, q, kind, s, budget, seed), collect=collect)
        used += rep.trials_used
        return rep

    best = attempt(size)
    tries = 0
    while not best.success and tries < 5:
        size += 1
        tries += 1
        best = attempt(size)
    if not best.success:
        return TableRow(N, None, ref, None, budget, used)
    while size - 1 >= floor:
        rep = attempt(size - 1)
        if not rep.success:
            break
        best, size = rep, size - 1
    return TableRow(N, size, ref, best.union_size, budget, used, best)
