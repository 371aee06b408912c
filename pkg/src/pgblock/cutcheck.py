"""Verifiers and constructions for blocking-set variants in PG(N, q).

Every verifier returns a :class:`Verdict`, which is truthy when the
property holds and otherwise carries a :class:`Witness` certifying the
failure.  Witnesses are deterministic: the smallest failing subspace in
the geometry's enumeration order, and within that the smallest
certifying hyperplane.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .gf import FieldTooLarge, MAX_ORDER, make_field, subfield_embedding
from .kernel import kernel
from .pg import Echelon, EnumerationTooLarge, Geometry, Point, Subspace, theta


class NotHiggledyPiggledy(ValueError):
    pass


class NotMinimal(ValueError):
    pass


@dataclass(frozen=True)
class PointSet:
    """A duplicate-free set of points, stored as sorted point indices."""

    geometry: Geometry
    indices: tuple[int, ...]

    @classmethod
    def from_points(cls, g: Geometry, pts: Iterable[Sequence[int]]) -> PointSet:
        return cls(g, tuple(sorted({g.index(p) for p in pts})))

    @classmethod
    def from_indices(cls, g: Geometry, idx: Iterable[int]) -> PointSet:
        idx = sorted({int(i) for i in idx})
        if idx and not 0 <= idx[0] <= idx[-1] < g.npoints:
            raise ValueError("point index out of range")
        return cls(g, tuple(idx))

    @classmethod
    def whole(cls, g: Geometry) -> PointSet:
        return cls(g, tuple(range(g.npoints)))

    @property
    def points(self) -> list[Point]:
        return [self.geometry.point(i) for i in self.indices]

    def mask(self) -> np.ndarray:
        m = np.zeros(self.geometry.npoints, dtype=bool)
        m[list(self.indices)] = True
        return m

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, pt) -> bool:
        return self.geometry.index(pt) in set(self.indices)

    def __or__(self, other: PointSet) -> PointSet:
        return PointSet.from_indices(self.geometry, self.indices + other.indices)


@dataclass(frozen=True)
class LineSet:
    """A multiset of lines; order is kept, repetitions are allowed."""

    geometry: Geometry
    lines: tuple[Subspace, ...]

    def __post_init__(self):
        for L in self.lines:
            if L.dim != 1 or L.N != self.geometry.N:
                raise ValueError(f"{L} is not a line of {self.geometry}")

    @classmethod
    def from_pairs(cls, g: Geometry, pairs: Iterable[tuple[Sequence[int], Sequence[int]]]) -> LineSet:
        return cls(g, tuple(g.line(P, Q) for P, Q in pairs))

    def pairs(self) -> list[tuple[Point, Point]]:
        """A spanning point pair per line (the RREF basis rows)."""
        return [(L.basis[0], L.basis[1]) for L in self.lines]

    def union(self) -> PointSet:
        g = self.geometry
        idx = [i for L in self.lines for i in g.point_indices(L)]
        return PointSet.from_indices(g, idx)

    def without(self, j: int) -> LineSet:
        return LineSet(self.geometry, self.lines[:j] + self.lines[j + 1 :])

    def __len__(self) -> int:
        return len(self.lines)


@dataclass(frozen=True)
class Witness:
    """A certificate of failure.

    ``hyperplane_pair``: hyperplane H and codim-2 subspace Hprime inside H
    with S & (H - Hprime) empty.  ``thin_subspace``: subspace H whose
    intersection with S is too small or lies in the proper subspace Hprime.
    ``unsaturated_point``: a point P not covered.  ``low_dim_transversal``:
    a subspace H meeting every line of a line set.
    """

    kind: str
    H: Subspace | None = None
    Hprime: Subspace | None = None
    P: Point | None = None

    def to_record(self) -> dict:
        rec: dict = {"kind": self.kind}
        if self.H is not None:
            rec["H"] = [list(r) for r in self.H.basis]
        if self.Hprime is not None:
            rec["Hprime"] = [list(r) for r in self.Hprime.basis]
        if self.P is not None:
            rec["P"] = list(self.P)
        return rec


@dataclass
class Verdict:
    holds: bool
    witness: Witness | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds

    def to_record(self, prop: str, sizes: dict | None = None, timing: float | None = None) -> dict:
        rec = {"property": prop, "verdict": self.holds}
        if self.witness is not None:
            rec["witness"] = self.witness.to_record()
        rec["sizes"] = sizes or {}
        rec.update({k: v for k, v in self.details.items() if isinstance(v, (bool, int, float, str))})
        if timing is not None:
            rec["timing"] = timing
        return rec


# --------------------------------------------------------------------------
# blocking and cutting


def is_t_fold_r_blocking(S: PointSet, t: int, r: int) -> Verdict:
    """Every (N-r)-subspace meets S in at least t points."""
    g = S.geometry
    if not 1 <= r < g.N or t < 1:
        raise ValueError("need 1 <= r < N and t >= 1")
    subs, idx = g.flats(g.N - r)
    counts = S.mask()[idx].sum(axis=1)
    bad = np.nonzero(counts < t)[0]
    if bad.size:
        return Verdict(False, Witness("thin_subspace", H=subs[bad[0]]), {"min_intersection": int(counts.min())})
    return Verdict(True, details={"min_intersection": int(counts.min())})


def _hyperplane_pair(g: Geometry, h: int, h2: int) -> Witness:
    H = g.hyperplane(h)
    return Witness("hyperplane_pair", H=H, Hprime=g.intersect(H, g.hyperplane(h2)))


def is_cutting_t_blocking(S: PointSet, t: int = 1, method: str = "containment") -> Verdict:
    """Every (N-t)-subspace L satisfies <S & L> == L.

    ``method="containment"`` uses the batched count kernel;
    ``method="rank"`` runs incremental Gaussian elimination per subspace and
    stops each one as soon as it is spanned.  Both report the same witness.
    """
    g = S.geometry
    if not 1 <= t <= g.N:
        raise ValueError(f"need 1 <= t <= N, got t={t}")
    if method == "containment":
        found = kernel(g, t).witness(S.indices)
        if found is None:
            return Verdict(True)
        a, h2 = found
        if t == 1:
            return Verdict(False, _hyperplane_pair(g, a, h2))
        L = g.flats(g.N - t)[0][a]
        return Verdict(False, Witness("thin_subspace", H=L, Hprime=g.intersect(L, g.hyperplane(h2))))
    if method == "rank":
        return _cutting_by_rank(S, t)
    raise ValueError(f"unknown method {method!r}")


def _cutting_by_rank(S: PointSet, t: int) -> Verdict:
    g, f = S.geometry, S.geometry.field
    need = g.N - t + 1
    pts = dict(zip(S.indices, S.points))
    inc = g.incidence

    def on_hyperplane(i: int, u: Point) -> bool:
        acc = 0
        for x, y in zip(pts[i], u):
            acc = f.add(acc, f.mul(x, y))
        return acc == 0

    if t == 1:
        flats = range(g.npoints)
        members = lambda a: [i for i in S.indices if on_hyperplane(i, g.point(a))]  # noqa: E731
    else:
        subs, idx = g.flats(g.N - t)
        flats = range(len(subs))
        members = lambda a: [int(i) for i in idx[a] if int(i) in pts]  # noqa: E731
    for a in flats:
        sel = members(a)
        ech = Echelon(f, g.N + 1)
        for i in sel:
            ech.add(pts[i])
            if ech.rank == need:
                break
        if ech.rank == need:
            continue
        # smallest hyperplane not containing the flat but containing S & flat
        if t == 1:
            h2 = next(h for h in range(g.npoints) if h != a and inc[h, sel].all())
            return Verdict(False, _hyperplane_pair(g, a, h2))
        h2 = next(h for h in range(g.npoints) if not inc[h, idx[a]].all() and inc[h, sel].all())
        L = subs[a]
        return Verdict(False, Witness("thin_subspace", H=L, Hprime=g.intersect(L, g.hyperplane(h2))))
    return Verdict(True)


def is_cutting(S: PointSet, method: str = "containment") -> Verdict:
    return is_cutting_t_blocking(S, 1, method)


def is_affine_blocking_complement(S: PointSet, H: Subspace) -> bool:
    """S minus the hyperplane H meets every other hyperplane."""
    g = S.geometry
    h = g.index(g.dual_vector(H))
    inc = g.incidence
    rest = [i for i in S.indices if not inc[h, i]]
    if not rest:
        return False
    hits = inc[:, rest].any(axis=1)
    hits[h] = True
    return bool(hits.all())


def meets_hypergraph(S: PointSet) -> Verdict:
    """S meets every set H - H' (H a hyperplane, H' a codim-2 subspace of H).

    Exhaustive over all pairs; independent of the containment kernel.
    """
    g = S.geometry
    inc = g.incidence
    mask = S.mask()
    for h in range(g.npoints):
        in_h = inc[h]
        for h2 in range(g.npoints):
            if h2 == h:
                continue
            T = in_h & ~inc[h2]
            if not (T & mask).any():
                return Verdict(False, _hyperplane_pair(g, h, h2))
    return Verdict(True)


# --------------------------------------------------------------------------
# higgledy-piggledy line sets


def is_higgledy_piggledy(L: LineSet) -> Verdict:
    return is_cutting_t_blocking(L.union(), 1)


def reduce_to_minimal_hp(L: LineSet) -> LineSet:
    """Drop lines in index order while the rest stays higgledy-piggledy.

    One pass suffices: a line that could not be dropped earlier cannot become
    removable after further removals, since sub-unions of non-cutting unions
    are not cutting.
    """
    if not is_higgledy_piggledy(L):
        raise NotHiggledyPiggledy("input line set is not higgledy-piggledy")
    cur = L
    j = 0
    while j < len(cur):
        trial = cur.without(j)
        if len(trial) and is_higgledy_piggledy(trial):
            cur = trial
        else:
            j += 1
    return cur


def find_codim2_transversal(L: LineSet, j: int) -> tuple[Subspace, Subspace]:
    """A codim-2 subspace meeting every line except possibly line j, and a hyperplane on it.

    The hyperplane contains only those other lines that lie inside the
    codim-2 subspace.  Both come from the failure witness of ``L`` without
    line j.
    """
    if not is_higgledy_piggledy(L):
        raise NotHiggledyPiggledy("input line set is not higgledy-piggledy")
    rest = L.without(j)
    v = is_higgledy_piggledy(rest)
    if v:
        raise NotMinimal(f"line {j} can be removed")
    return v.witness.Hprime, v.witness.H


def tetrahedron(N: int, g: Geometry) -> LineSet:
    """The C(N+1, 2) lines joining the standard frame points e_0..e_N."""
    if N != g.N or N < 2:
        raise ValueError("need N >= 2 matching the geometry")
    e = [tuple(int(i == k) for i in range(N + 1)) for k in range(N + 1)]
    return LineSet(g, tuple(g.line(e[a], e[b]) for a, b in itertools.combinations(range(N + 1), 2)))


def hp_lower_bound_audit(L: LineSet) -> list[str]:
    """Violations of the line-count lower bounds for a higgledy-piggledy set (expected: none)."""
    g = L.geometry
    N, q = g.N, g.q
    problems = []
    if len(L) < bounds.hp_line_lower(N, q):
        problems.append(f"|L| = {len(L)} below the global bound {bounds.hp_line_lower(N, q)}")
    inc = g.incidence
    line_pts = [g.point_indices(l) for l in L.lines]
    for h in range(g.npoints):
        t = sum(bool(inc[h, p].all()) for p in line_pts)
        if len(L) < bounds.hp_hyperplane_lower(N, q, t):
            problems.append(f"hyperplane {h} holds {t} lines but |L| = {len(L)}")
    return problems


def cutting_lower_bound_audit(S: PointSet) -> list[str]:
    """Violations of the size bounds every cutting set must satisfy (expected: none)."""
    g = S.geometry
    N, q = g.N, g.q
    problems = []
    if len(S) < N * (q + 1):
        problems.append(f"|S| = {len(S)} < N(q+1) = {N * (q + 1)}")
    outside = len(S) - g.incidence[:, list(S.indices)].sum(axis=1)
    if outside.min() < N * (q - 1) + 1:
        problems.append(f"some affine part has {int(outside.min())} < N(q-1)+1 points")
    if not is_t_fold_r_blocking(S, N, 1):
        problems.append("not an N-fold blocking set")
    return problems


# --------------------------------------------------------------------------
# saturation


def _span_cover(S: PointSet, size: int) -> np.ndarray:
    """Mask of points lying in the span of some ``size``-subset of S."""
    g = S.geometry
    mask = np.zeros(g.npoints, dtype=bool)
    if size <= 0 or len(S) < size:
        return mask
    n_subsets = math.comb(len(S), size)
    if n_subsets * theta(size - 1, g.q) > g.cap:
        raise EnumerationTooLarge(f"{n_subsets} subsets of size {size}")
    pts = np.array(S.points, dtype=np.int64)
    combos = itertools.combinations(range(len(S)), size)
    chunk = max(1, 2**20 // max(1, theta(size - 1, g.q)))
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            break
        idx = g.flats_point_indices(pts[np.array(block)])
        idx = idx[idx >= 0]
        mask[idx] = True
        if mask.all():
            break
    return mask


def saturation_degree(S: PointSet, max_rho: int | None = None) -> int | None:
    """Smallest rho such that the (rho+1)-subsets of S span-cover the space (None if never)."""
    g = S.geometry
    top = g.N if max_rho is None else max_rho
    for rho in range(top + 1):
        if _span_cover(S, rho + 1).all():
            return rho
    return None


def is_rho_saturating(S: PointSet, rho: int) -> Verdict:
    """Spans of (rho+1)-subsets cover all points, and rho is the least such value.

    ``details["covered"]`` reports coverage alone; ``details["minimal"]``
    reports whether a smaller rho already covers.
    """
    if rho < 0:
        raise ValueError("rho must be >= 0")
    cover = _span_cover(S, rho + 1)
    covered = bool(cover.all())
    minimal = not (rho > 0 and _span_cover(S, rho).all())
    details = {"covered": covered, "minimal": minimal}
    if not covered:
        P = S.geometry.point(int(np.argmin(cover)))
        return Verdict(False, Witness("unsaturated_point", P=P), details)
    return Verdict(minimal, None, details)


def lift_to_extension(S: PointSet, rho: int) -> PointSet:
    """View S inside PG(N, q^(rho+1)) through the subfield embedding."""
    g = S.geometry
    Q = g.q ** (rho + 1)
    if Q > MAX_ORDER:
        raise FieldTooLarge(f"q^(rho+1) = {Q} exceeds {MAX_ORDER}")
    big = Geometry(g.N, make_field(Q), cap=g.cap)
    emb = subfield_embedding(g.field, big.field)
    return PointSet.from_points(big, [tuple(emb[x] for x in p) for p in S.points])
