"""Plain-text formats for point sets, line sets and matrices.

Three formats, each a header line followed by whitespace-separated field
encodings (decimal integers ``0..q-1``)::

    pg N q          one point per line, N+1 coordinates
    lines N q       one line per row, the 2(N+1) coordinates of two spanning points
    mat k n q       k rows of n entries

Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import os
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .gf import NotPrimePower, make_field
from .pg import Geometry, Point


class FormatError(ValueError):
    """Malformed input; ``lineno`` is 1-based (0 when the file is empty)."""

    def __init__(self, message: str, lineno: int = 0):
        super().__init__(f"line {lineno}: {message}" if lineno else message)
        self.lineno = lineno


@dataclass
class Parsed:
    kind: str  # "pg", "lines" or "mat"
    geometry: Geometry | None
    points: list[Point] | None = None
    lines: list[tuple[Point, Point]] | None = None
    matrix: np.ndarray | None = None
    q: int = 0


def _rows(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].split()
        if body:
            out.append((no, body))
    return out


def _ints(tokens: Sequence[str], lineno: int, q: int | None = None) -> list[int]:
    try:
        vals = [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None
    if q is not None and any(not 0 <= v < q for v in vals):
        raise FormatError(f"entries must lie in 0..{q - 1}", lineno)
    return vals


def parse(text: str) -> Parsed:
    rows = _rows(text)
    if not rows:
        raise FormatError("empty input")
    lineno, header = rows[0]
    kind = header[0]
    if kind not in ("pg", "lines", "mat"):
        raise FormatError(f"unknown header {header[0]!r}", lineno)
    expected = 4 if kind == "mat" else 3
    if len(header) != expected:
        raise FormatError(f"header {kind!r} needs {expected - 1} integers", lineno)
    params = _ints(header[1:], lineno)
    q = params[-1]
    try:
        make_field(q)
    except NotPrimePower as exc:
        raise FormatError(str(exc), lineno) from None

    if kind == "mat":
        k, n = params[0], params[1]
        body = rows[1:]
        if len(body) != k:
            raise FormatError(f"expected {k} matrix rows, found {len(body)}", body[-1][0] if body else lineno)
        data = []
        for no, tok in body:
            if len(tok) != n:
                raise FormatError(f"expected {n} entries", no)
            data.append(_ints(tok, no, q))
        return Parsed("mat", None, matrix=np.array(data, dtype=np.int64).reshape(k, n), q=q)

    N = params[0]
    if N < 1:
        raise FormatError("dimension must be at least 1", lineno)
    g = Geometry(N, q)
    width = (N + 1) * (1 if kind == "pg" else 2)
    items = []
    for no, tok in rows[1:]:
        if len(tok) != width:
            raise FormatError(f"expected {width} coordinates", no)
        vals = _ints(tok, no, q)
        try:
            if kind == "pg":
                items.append(g.normalize(vals))
            else:
                P, Q = g.normalize(vals[: N + 1]), g.normalize(vals[N + 1 :])
                if P == Q:
                    raise ValueError("the two points coincide")
                items.append((P, Q))
        except ValueError as exc:
            raise FormatError(str(exc), no) from None
    if kind == "pg":
        return Parsed("pg", g, points=items, q=q)
    return Parsed("lines", g, lines=items, q=q)


def read(path: str | os.PathLike) -> Parsed:
    return parse(Path(path).read_text())


def format_points(g: Geometry, points: Iterable[Sequence[int]]) -> str:
    lines = [f"pg {g.N} {g.q}"]
    lines += [" ".join(map(str, p)) for p in points]
    return "\n".join(lines) + "\n"


def format_lines(g: Geometry, pairs: Iterable[tuple[Sequence[int], Sequence[int]]]) -> str:
    lines = [f"lines {g.N} {g.q}"]
    lines += [" ".join(map(str, tuple(P) + tuple(Q))) for P, Q in pairs]
    return "\n".join(lines) + "\n"


def format_matrix(matrix, q: int) -> str:
    m = np.asarray(matrix)
    lines = [f"mat {m.shape[0]} {m.shape[1]} {q}"]
    lines += [" ".join(str(int(x)) for x in row) for row in m]
    return "\n".join(lines) + "\n"


def write(path: str | os.PathLike, text: str) -> None:
    Path(path).write_text(text)
