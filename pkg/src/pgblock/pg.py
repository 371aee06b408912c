"""The projective space PG(N, q): points, subspaces, enumeration and counting.

Points are tuples of N+1 field encodings normalised so that the first
nonzero coordinate is 1.  A :class:`Geometry` fixes an enumeration of the
points, ordered lexicographically by coordinates; over GF(2) this makes the
point with index ``i`` the bit word ``i + 1`` (coordinate 0 is the most
significant bit).  Hyperplanes are identified with normalised dual vectors
u, so hyperplane ``i`` is ``{x : x . u_i = 0}`` with ``u_i = point(i)``.

Subspaces are stored by their reduced row-echelon basis, which makes
equality and hashing canonical.  The empty subspace has dimension -1.
"""

from __future__ import annotations

import functools
import itertools
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .gf import Field, make_field

Point = tuple[int, ...]

#: Default upper limit for exhaustive enumerations.
ENUMERATION_CAP = 10**7
#: Largest ambient vector space (q^(N+1)) for which a vector lookup table is built.
LOOKUP_CAP = 2**24


class EnumerationTooLarge(RuntimeError):
    """An exhaustive enumeration would exceed the configured cap."""


class DegenerateLine(ValueError):
    """Two equal points do not span a line."""


def theta(n: int, q: int) -> int:
    """Number of points of PG(n, q); ``theta(-1, q) == 0``."""
    if n < -1:
        raise ValueError("theta is defined for n >= -1")
    return sum(q**t for t in range(n + 1))


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n (zero when k > n)."""
    if n < 0 or k < 0:
        raise ValueError("gaussian_binomial needs n, k >= 0")
    if k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_superspaces(n: int, k: int, m: int, q: int) -> int:
    """Number of m-dimensional subspaces of PG(n, q) through a fixed k-dimensional one."""
    if not -1 <= k <= m <= n:
        raise ValueError("need -1 <= k <= m <= n")
    return gaussian_binomial(n - k, n - m, q)


# --------------------------------------------------------------------------
# linear algebra over GF(q) on small row lists


def rref(rows: Iterable[Sequence[int]], f: Field) -> tuple[tuple[int, ...], ...]:
    """Reduced row-echelon form with zero rows dropped."""
    m = [list(r) for r in rows]
    if not m:
        return ()
    ncols = len(m[0])
    mul, add, neg, inv = f._mul, f._add, f._neg, f._inv
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        s = inv[m[r][c]]
        row = [mul[s][x] for x in m[r]]
        m[r] = row
        for i in range(len(m)):
            if i != r and m[i][c]:
                a = neg[m[i][c]]
                m[i] = [add[x][mul[a][y]] for x, y in zip(m[i], row)]
        r += 1
        if r == len(m):
            break
    return tuple(tuple(x) for x in m[:r])


def rank(rows: Iterable[Sequence[int]], f: Field) -> int:
    return len(rref(rows, f))


def null_space(rows: Sequence[Sequence[int]], f: Field, ncols: int) -> list[tuple[int, ...]]:
    """Basis of ``{x : r . x = 0 for every row r}``."""
    red = rref(rows, f)
    pivots = [next(j for j, x in enumerate(r) if x) for r in red]
    basis = []
    for j in range(ncols):
        if j in pivots:
            continue
        v = [0] * ncols
        v[j] = 1
        for r, pc in zip(red, pivots):
            v[pc] = f.neg(r[j])
        basis.append(tuple(v))
    return basis


class Echelon:
    """Incrementally maintained row-echelon basis; ``add`` reports independence."""

    def __init__(self, f: Field, ncols: int):
        self.f = f
        self.ncols = ncols
        self.rows: dict[int, list[int]] = {}  # pivot column -> row with 1 at pivot
        self._bits: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self._bits) if self.f.q == 2 else len(self.rows)

    def add(self, vec: Sequence[int]) -> bool:
        if self.f.q == 2:
            return self._add_bits(int("".join(map(str, vec)), 2))
        f = self.f
        v = list(vec)
        for c, row in self.rows.items():
            if v[c]:
                a = f._neg[v[c]]
                v = [f._add[x][f._mul[a][y]] for x, y in zip(v, row)]
        lead = next((j for j, x in enumerate(v) if x), None)
        if lead is None:
            return False
        s = f._inv[v[lead]]
        self.rows[lead] = [f._mul[s][x] for x in v]
        return True

    def _add_bits(self, w: int) -> bool:
        while w:
            top = w.bit_length() - 1
            if top not in self._bits:
                self._bits[top] = w
                return True
            w ^= self._bits[top]
        return False


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """A projective subspace of PG(N, q) given by its canonical RREF basis."""

    N: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    def __len__(self) -> int:  # pragma: no cover - convenience
        return len(self.basis)


def _normalized_vectors(n: int, f: Field) -> np.ndarray:
    """All normalised nonzero vectors of GF(q)^(n+1), lexicographically."""
    q = f.q
    rows = []
    for lead in reversed(range(n + 1)):
        tail = n - lead
        for rest in itertools.product(range(q), repeat=tail):
            rows.append((0,) * lead + (1,) + rest)
    return np.array(rows, dtype=np.int64).reshape(len(rows), n + 1)


class Geometry:
    """PG(N, q) with a fixed point enumeration and cached incidence data.

    Immutable after construction; cached arrays are computed on first use.
    ``cap`` bounds every exhaustive enumeration performed through this object.
    """

    def __init__(self, N: int, q: int | Field, cap: int = ENUMERATION_CAP):
        if N < 1:
            raise ValueError("need N >= 1")
        self.field = q if isinstance(q, Field) else make_field(q)
        self.N = N
        self.q = self.field.q
        self.cap = cap
        self.npoints = theta(N, self.q)
        if self.npoints > cap:
            raise EnumerationTooLarge(f"PG({N},{self.q}) has {self.npoints} points")
        self.points = _normalized_vectors(N, self.field)
        self.points.setflags(write=False)
        self._index = {tuple(p): i for i, p in enumerate(self.points.tolist())}
        self._weights = self.q ** np.arange(N, -1, -1, dtype=np.int64)

    def __repr__(self) -> str:
        return f"Geometry(N={self.N}, q={self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Geometry) and (self.N, self.q) == (other.N, other.q)

    def __hash__(self) -> int:
        return hash((self.N, self.q))

    def __reduce__(self):
        return (Geometry, (self.N, self.q, self.cap))

    # ---- points

    def normalize(self, vec: Sequence[int]) -> Point:
        v = tuple(int(x) for x in vec)
        if len(v) != self.N + 1 or any(not 0 <= x < self.q for x in v):
            raise ValueError(f"{vec!r} is not a vector of GF({self.q})^{self.N + 1}")
        lead = next((x for x in v if x), 0)
        if not lead:
            raise ValueError("the zero vector is not a projective point")
        s = self.field.inv(lead)
        return tuple(self.field.mul(s, x) for x in v)

    def index(self, pt: Sequence[int]) -> int:
        return self._index[self.normalize(pt)]

    def point(self, i: int) -> Point:
        return tuple(int(x) for x in self.points[i])

    @functools.cached_property
    def _lookup(self) -> np.ndarray:
        size = self.q ** (self.N + 1)
        if size > LOOKUP_CAP:
            raise EnumerationTooLarge(f"vector lookup table of size {size}")
        table = np.full(size, -1, dtype=np.int64)
        idx = np.arange(self.npoints)
        for lam in self.field.nonzero():
            scaled = self.field.mul_table[lam, self.points].astype(np.int64)
            table[scaled @ self._weights] = idx
        table.setflags(write=False)
        return table

    def vector_indices(self, vecs: np.ndarray) -> np.ndarray:
        """Point indices of an array of vectors (last axis N+1); -1 for zero vectors."""
        return self._lookup[np.asarray(vecs, dtype=np.int64) @ self._weights]

    # ---- incidence

    @functools.cached_property
    def incidence(self) -> np.ndarray:
        """``incidence[h, x]`` is True when point x lies on hyperplane h."""
        if self.npoints**2 > max(self.cap, 64 * 10**6):
            raise EnumerationTooLarge("point-hyperplane incidence matrix too large")
        inc = np.empty((self.npoints, self.npoints), dtype=bool)
        P = self.points
        step = max(1, 2**22 // self.npoints)
        for s in range(0, self.npoints, step):
            inc[s : s + step] = self.field.matmul(P[s : s + step], P.T) == 0
        inc.setflags(write=False)
        return inc

    def hyperplane(self, u: Sequence[int] | int) -> Subspace:
        """The hyperplane with dual vector u (a point or a point index)."""
        u = self.point(u) if isinstance(u, (int, np.integer)) else self.normalize(u)
        return Subspace(self.N, rref(null_space([u], self.field, self.N + 1), self.field))

    def dual_vector(self, H: Subspace) -> Point:
        if H.dim != self.N - 1:
            raise ValueError("not a hyperplane")
        (u,) = null_space(H.basis, self.field, self.N + 1)
        return self.normalize(u)

    # ---- subspaces

    def subspace(self, rows: Iterable[Sequence[int]]) -> Subspace:
        return Subspace(self.N, rref(rows, self.field))

    def span(self, pts: Iterable[Sequence[int]]) -> Subspace:
        return self.subspace(list(pts))

    def join(self, A: Subspace, B: Subspace) -> Subspace:
        return self.subspace(A.basis + B.basis)

    def contains_point(self, S: Subspace, pt: Sequence[int]) -> bool:
        return rank(S.basis + (tuple(pt),), self.field) == S.dim + 1

    def contains(self, A: Subspace, B: Subspace) -> bool:
        """True when B is a subspace of A."""
        return rank(A.basis + B.basis, self.field) == A.dim + 1

    def intersect(self, A: Subspace, B: Subspace) -> Subspace:
        n = self.N + 1
        if A.dim < 0 or B.dim < 0:
            return Subspace(self.N, ())
        ann = null_space(A.basis, self.field, n) + null_space(B.basis, self.field, n)
        if not ann:
            return Subspace(self.N, rref(np.eye(n, dtype=int).tolist(), self.field))
        return self.subspace(null_space(ann, self.field, n))

    def line(self, P: Sequence[int], Q: Sequence[int]) -> Subspace:
        P, Q = self.normalize(P), self.normalize(Q)
        if P == Q:
            raise DegenerateLine("a line needs two distinct points")
        return self.span([P, Q])

    def line_points(self, P: Sequence[int], Q: Sequence[int]) -> list[Point]:
        """The q+1 points of the line PQ: P and Q + lambda P for lambda in GF(q)."""
        P, Q = self.normalize(P), self.normalize(Q)
        if P == Q:
            raise DegenerateLine("a line needs two distinct points")
        f = self.field
        out = [P] + [self.normalize([f.add(y, f.mul(lam, x)) for x, y in zip(P, Q)]) for lam in f.elements()]
        return sorted(out, key=self._index.__getitem__)

    @functools.lru_cache(maxsize=16)
    def _coefficients(self, d: int) -> np.ndarray:
        return _normalized_vectors(d, self.field)

    def point_indices(self, S: Subspace) -> np.ndarray:
        """Sorted indices of the points of S."""
        if S.dim < 0:
            return np.zeros(0, dtype=np.int64)
        vecs = self.field.matmul(self._coefficients(S.dim), np.array(S.basis, dtype=np.int64))
        return np.sort(self.vector_indices(vecs))

    def subspace_points(self, S: Subspace) -> list[Point]:
        return [self.point(i) for i in self.point_indices(S)]

    def flats_point_indices(self, bases: np.ndarray) -> np.ndarray:
        """Point indices of many d-subspaces at once.

        ``bases`` has shape (M, d+1, N+1); the result has shape (M, theta_d).
        Rank-deficient bases are not detected here.
        """
        bases = np.asarray(bases, dtype=np.int64)
        coeffs = self._coefficients(bases.shape[1] - 1)
        if self.field.is_prime:
            vecs = np.einsum("ij,mjk->mik", coeffs, bases) % self.q
        else:
            vecs = np.zeros((bases.shape[0], coeffs.shape[0], self.N + 1), dtype=np.int64)
            for j in range(bases.shape[1]):
                term = self.field.mul_table[coeffs[None, :, j, None], bases[:, None, j, :]]
                vecs = self.field.add_table[vecs, term].astype(np.int64)
        return self.vector_indices(vecs)

    def count_subspaces(self, d: int) -> int:
        return gaussian_binomial(self.N + 1, d + 1, self.q)

    def _check_cap(self, count: int, what: str) -> None:
        if count > self.cap:
            raise EnumerationTooLarge(f"{count} {what} exceed the enumeration cap {self.cap}")

    def subspaces(self, d: int) -> Iterator[Subspace]:
        """All d-dimensional subspaces, in a fixed order (pivot sets, then free entries)."""
        if not -1 <= d <= self.N:
            raise ValueError(f"no {d}-dimensional subspaces in PG({self.N},{self.q})")
        self._check_cap(self.count_subspaces(d), f"{d}-subspaces")
        n = self.N + 1
        if d == -1:
            yield Subspace(self.N, ())
            return
        for pivots in itertools.combinations(range(n), d + 1):
            free = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, n) if j not in pivots]
            for values in itertools.product(range(self.q), repeat=len(free)):
                rows = [[0] * n for _ in pivots]
                for i, c in enumerate(pivots):
                    rows[i][c] = 1
                for (i, j), v in zip(free, values):
                    rows[i][j] = v
                yield Subspace(self.N, tuple(tuple(r) for r in rows))

    def hyperplanes(self) -> list[Point]:
        """Normalised dual vectors of all hyperplanes (same order as the points)."""
        return [self.point(i) for i in range(self.npoints)]

    def lines(self) -> list[Subspace]:
        return list(self.subspaces(1))

    @functools.lru_cache(maxsize=8)
    def flats(self, d: int) -> tuple[list[Subspace], np.ndarray]:
        """All d-subspaces together with their point-index matrix (rows sorted)."""
        subs = list(self.subspaces(d))
        if not subs:
            return subs, np.zeros((0, 0), dtype=np.int64)
        bases = np.array([s.basis for s in subs], dtype=np.int64)
        idx = np.sort(self.flats_point_indices(bases), axis=1)
        idx.setflags(write=False)
        return subs, idx


def enumerate_objects(g: Geometry, kind: str, d: int | None = None) -> list:
    """Enumerate ``points``, ``hyperplanes``, ``lines`` or ``subspaces`` (of dimension d)."""
    if kind == "points":
        return [g.point(i) for i in range(g.npoints)]
    if kind == "hyperplanes":
        return g.hyperplanes()
    if kind == "lines":
        return g.lines()
    if kind == "subspaces":
        if d is None:
            raise ValueError("subspaces enumeration needs d")
        return list(g.subspaces(d))
    raise ValueError(f"unknown kind {kind!r}")


def span(g: Geometry, pts: Iterable[Sequence[int]]) -> Subspace:
    return g.span(pts)


def line_points(g: Geometry, P: Sequence[int], Q: Sequence[int]) -> list[Point]:
    return g.line_points(P, Q)


def subspace_ops(g: Geometry, op: str, a, b=None):
    """Dispatch for ``contains_point``, ``intersect`` and ``dim``."""
    if op == "contains_point":
        return g.contains_point(a, b)
    if op == "intersect":
        return g.intersect(a, b)
    if op == "dim":
        return a.dim
    raise ValueError(f"unknown subspace operation {op!r}")
