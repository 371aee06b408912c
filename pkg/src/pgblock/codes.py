"""Linear codes through their column point sets.

A full-rank k x n generator matrix G over GF(q) gives the multiset S(G) of
its columns as points of PG(k-1, q).  The codeword uG vanishes exactly on
the columns inside the hyperplane with dual vector u, which turns
minimality questions into blocking-set questions.  Brute-force
counterparts that only look at supports are kept alongside as oracles.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .cutcheck import PointSet, Verdict, is_cutting
from .gf import Field, make_field
from .pg import LOOKUP_CAP, EnumerationTooLarge, Geometry, Point, rank


class RankDeficient(ValueError):
    pass


class ZeroVector(ValueError):
    pass


class NotMinimalCode(ValueError):
    pass


class GeneratorMatrix:
    """A k x n matrix of rank k over GF(q)."""

    def __init__(self, entries, q: int | Field):
        self.field = q if isinstance(q, Field) else make_field(q)
        m = np.array(entries, dtype=np.int64)
        if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
            raise ValueError("generator matrix must be a non-empty 2-d array")
        if m.min() < 0 or m.max() >= self.field.q:
            raise ValueError(f"entries must lie in 0..{self.field.q - 1}")
        if rank(m.tolist(), self.field) < m.shape[0]:
            raise RankDeficient(f"rank below k = {m.shape[0]}")
        m.setflags(write=False)
        self.entries = m
        self.k, self.n = m.shape
        self.q = self.field.q
        self.geometry = Geometry(self.k - 1, self.field)

    def __repr__(self) -> str:
        return f"GeneratorMatrix([{self.n},{self.k}]_{self.q})"

    def columns(self) -> list[Point | None]:
        """Columns as normalised points; None for zero columns."""
        g = self.geometry
        return [g.normalize(c) if any(c) else None for c in self.entries.T.tolist()]

    def is_nondegenerate(self) -> bool:
        return bool(self.entries.any(axis=0).all())

    def is_projective(self) -> bool:
        cols = [c for c in self.columns() if c is not None]
        return self.is_nondegenerate() and len(set(cols)) == len(cols)

    def point_set(self) -> PointSet:
        """The underlying set of S(G); multiplicities and zero columns are dropped."""
        return PointSet.from_points(self.geometry, [c for c in self.columns() if c is not None])

    def encode(self, u: Sequence[int]) -> np.ndarray:
        return self.field.matmul(np.array([u], dtype=np.int64), self.entries)[0]


def code_from_pointset(S: PointSet) -> GeneratorMatrix:
    """Generator matrix whose columns are the points of S in index order."""
    g = S.geometry
    cols = np.array(S.points, dtype=np.int64).reshape(-1, g.N + 1)
    if len(S) == 0 or rank(cols.tolist(), g.field) < g.N + 1:
        raise RankDeficient("the points do not span the whole space")
    return GeneratorMatrix(cols.T, g.field)


def pointset_from_generator(G: GeneratorMatrix) -> PointSet:
    return G.point_set()


def _projective_vectors(k: int, q: int) -> list[tuple[int, ...]]:
    """One vector per projective class: first nonzero entry equal to 1."""
    out = []
    for lead in range(k):
        for tail in itertools.product(range(q), repeat=k - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    return out


def _check_u(G: GeneratorMatrix, u: Sequence[int]) -> tuple[int, ...]:
    u = tuple(int(x) for x in u)
    if len(u) != G.k or any(not 0 <= x < G.q for x in u):
        raise ValueError(f"u must be a vector of GF({G.q})^{G.k}")
    if not any(u):
        raise ZeroVector("u must be nonzero")
    return u


def _supports(G: GeneratorMatrix) -> tuple[list[tuple[int, ...]], np.ndarray]:
    reps = _projective_vectors(G.k, G.q)
    words = G.field.matmul(np.array(reps, dtype=np.int64), G.entries)
    return reps, words != 0


def codeword_test(G: GeneratorMatrix, u: Sequence[int], which: str = "minimal", method: str = "geometric") -> bool:
    """Is uG a minimal (or maximal) codeword?

    Geometric form: with H the hyperplane dual to u, uG is minimal iff
    the columns on H span H, and maximal iff the columns off H meet every
    other hyperplane.  Brute force compares supports against every
    projective codeword.
    """
    u = _check_u(G, u)
    if which not in ("minimal", "maximal"):
        raise ValueError(f"unknown codeword property {which!r}")
    if method == "geometric":
        g = G.geometry
        f = G.field
        cols = [c for c in G.columns() if c is not None]
        on = []
        off = []
        for c in cols:
            acc = 0
            for x, y in zip(c, u):
                acc = f.add(acc, f.mul(x, y))
            (on if acc == 0 else off).append(c)
        if which == "minimal":
            return rank(on, f) == G.k - 1 if on else G.k == 1
        h = g.index(u)
        if not off:
            return False
        hit = g.incidence[:, [g.index(c) for c in off]].any(axis=1)
        hit[h] = True
        return bool(hit.all())
    if method == "bruteforce":
        reps, supp = _supports(G)
        me = supp[reps.index(G.geometry.normalize(u))]
        others = np.array([r != G.geometry.normalize(u) for r in reps])
        if which == "minimal":
            inside = ~(supp & ~me).any(axis=1)  # supp(v) within supp(u)
        else:
            inside = ~(me & ~supp).any(axis=1)  # supp(u) within supp(v)
        return not bool((inside & others).any())
    raise ValueError(f"unknown method {method!r}")


def is_minimal_code(G: GeneratorMatrix, method: str = "geometric") -> Verdict:
    """Every nonzero codeword is minimal.  On failure ``details["u"]`` is a failing message."""
    if method == "geometric":
        v = is_cutting(G.point_set())
        if v:
            return Verdict(True)
        u = G.geometry.dual_vector(v.witness.H)
        return Verdict(False, v.witness, {"u": u})
    if method == "bruteforce":
        reps, supp = _supports(G)
        # contained[i, j]: supp(v_i) is inside supp(v_j)
        contained = (supp.astype(np.int32) @ (~supp).T.astype(np.int32)) == 0
        np.fill_diagonal(contained, False)
        bad = np.nonzero(contained.any(axis=0))[0]
        if bad.size:
            return Verdict(False, details={"u": reps[int(bad[0])]})
        return Verdict(True)
    raise ValueError(f"unknown method {method!r}")


def weights(G: GeneratorMatrix) -> np.ndarray:
    """Weights of the projective codewords, in the order of ``_projective_vectors``."""
    return _supports(G)[1].sum(axis=1)


@dataclass(frozen=True)
class BoundCheckRecord:
    n: int
    k: int
    q: int
    min_weight: int
    weight_ok: bool  # min weight >= (k-1)(q-1)+1
    length_ok: bool  # n >= q(k-1)+1
    length_cutting_ok: bool  # n >= (q+1)(k-1)

    @property
    def passed(self) -> bool:
        return self.weight_ok and self.length_ok and self.length_cutting_ok

    def to_record(self) -> dict:
        return {**self.__dict__, "passed": self.passed}


def check_bounds(G: GeneratorMatrix) -> BoundCheckRecord:
    """Weight and length inequalities that every minimal code satisfies."""
    if not is_minimal_code(G):
        raise NotMinimalCode(f"{G} is not minimal")
    k, n, q = G.k, G.n, G.q
    w = int(weights(G).min())
    return BoundCheckRecord(n, k, q, w, w >= (k - 1) * (q - 1) + 1, n >= q * (k - 1) + 1, n >= (q + 1) * (k - 1))


def covering_radius(H, q: int | Field) -> int:
    """Least R such that every syndrome is a combination of at most R columns of H.

    Breadth-first closure over the q^r syndromes starting from zero.
    """
    f = q if isinstance(q, Field) else make_field(q)
    H = np.array(H, dtype=np.int64)
    r, n = H.shape
    total = f.q**r
    if total > LOOKUP_CAP:
        raise EnumerationTooLarge(f"{total} syndromes")
    w = f.q ** np.arange(r - 1, -1, -1, dtype=np.int64)
    steps = np.array([[f.mul(lam, int(x)) for x in col] for col in H.T for lam in f.nonzero()], dtype=np.int64)
    steps = steps.reshape(-1, r)
    dist = np.full(total, -1, dtype=np.int64)
    dist[0] = 0
    front = np.zeros((1, r), dtype=np.int64)
    R = 0
    while front.size:
        nxt = f.add_table[front[:, None, :], steps[None, :, :]].reshape(-1, r).astype(np.int64)
        codes = nxt @ w
        seen, first = np.unique(codes, return_index=True)
        new = dist[seen] < 0
        if not new.any():
            break
        R += 1
        dist[seen[new]] = R
        front = nxt[first[new]]
    if (dist < 0).any():
        raise ValueError("the columns of H do not span GF(q)^r; covering radius is infinite")
    return R
