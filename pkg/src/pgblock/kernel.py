"""Batched containment test for cutting t-blocking sets.

A point set S fails to be a cutting t-blocking set exactly when some
(N-t)-subspace L has ``S & L`` inside some hyperplane H that does not
contain L: then ``<S & L>`` lies in the proper subspace ``L & H``, and
conversely every proper subspace of L is cut out by such an H.  In terms
of incidence counts, that is ``|S & L & H| == |S & L|``.  Every count
involved comes out of a single float32 matrix product.

This is the fast path used by searches and the default verifier; the
rank-based verifier in :mod:`pgblock.cutcheck` is the independent check.
"""

from __future__ import annotations

import functools

import numpy as np

from .pg import Geometry

#: Rough element budget for one batched product (B * |flats| * |hyperplanes|).
WORK_ELEMENTS = 2**24


class CuttingKernel:
    def __init__(self, g: Geometry, t: int = 1):
        if not 1 <= t <= g.N:
            raise ValueError(f"need 1 <= t <= N, got t={t}")
        self.g, self.t = g, t
        self.need = g.N - t + 1  # points needed to span an (N-t)-subspace
        inc = g.incidence
        self.hyper = inc
        if t == 1:
            self.member = inc
            self.inside = np.eye(g.npoints, dtype=bool)
        else:
            _, idx = g.flats(g.N - t)
            member = np.zeros((idx.shape[0], g.npoints), dtype=bool)
            np.put_along_axis(member, idx, True, axis=1)
            self.member = member
            # flat L lies in hyperplane H iff H contains every point of L
            self.inside = (member.astype(np.float32) @ inc.T.astype(np.float32)) == idx.shape[1]
        self._not_inside = ~self.inside

    @staticmethod
    def _weights(idx: np.ndarray) -> np.ndarray:
        """Zero weight for repeated entries so that counts are over distinct points."""
        s = np.sort(idx, axis=-1)
        w = np.ones(s.shape, dtype=np.float32)
        w[..., 1:][s[..., 1:] == s[..., :-1]] = 0.0
        return s, w

    def failing(self, idx: np.ndarray) -> np.ndarray:
        """``idx`` has shape (B, k): rows of point indices (repeats allowed).

        Returns a (B,) boolean array, True where the row is *not* cutting.
        """
        idx = np.atleast_2d(np.asarray(idx, dtype=np.int64))
        B = idx.shape[0]
        out = np.ones(B, dtype=bool)
        if idx.shape[1] == 0:
            return out
        s, w = self._weights(idx)
        cand = np.ones(B, dtype=bool)
        # cheap necessary condition: every flat holds enough distinct points
        step = max(1, WORK_ELEMENTS // (self.member.shape[0] * idx.shape[1]))
        for a in range(0, B, step):
            Am = self.member[:, s[a : a + step]] * w[a : a + step]
            cand[a : a + step] = Am.sum(-1).min(0) >= self.need
        rows = np.nonzero(cand)[0]
        L, T = self.member.shape[0], self.hyper.shape[0]
        step = max(1, WORK_ELEMENTS // (L * T))
        for a in range(0, len(rows), step):
            r = rows[a : a + step]
            Am = (self.member[:, s[r]] * w[r]).transpose(1, 0, 2)  # (b, L, k)
            Ah = self.hyper[:, s[r]].astype(np.float32).transpose(1, 2, 0)  # (b, k, T)
            inter = Am @ Ah
            cnt = Am.sum(-1)
            bad = (inter == cnt[..., None]) & self._not_inside
            out[r] = bad.reshape(len(r), -1).any(axis=1)
        return out

    def witness(self, idx) -> tuple[int, int] | None:
        """Smallest (flat, hyperplane) index pair certifying failure, or None."""
        idx = np.asarray(sorted(set(int(i) for i in idx)), dtype=np.int64)
        Am = self.member[:, idx].astype(np.float32)
        cnt = Am.sum(-1)
        if idx.size == 0:
            bad = self._not_inside.copy()
        else:
            inter = Am @ self.hyper[:, idx].astype(np.float32).T
            bad = (inter == cnt[:, None]) & self._not_inside
        hits = np.argwhere(bad)
        if hits.size == 0:
            return None
        return int(hits[0, 0]), int(hits[0, 1])


@functools.lru_cache(maxsize=32)
def kernel(g: Geometry, t: int = 1) -> CuttingKernel:
    return CuttingKernel(g, t)
