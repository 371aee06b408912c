"""Table-based arithmetic in GF(q) for prime powers q <= 1024.

Elements are plain integers ``0 .. q-1``.  For q = p^e the integer ``a`` is
read in base p, digit i being the coefficient of x^i of a polynomial reduced
modulo the field's fixed irreducible modulus.  Prime-field elements (e = 1)
are their residues.  So 0 and 1 are always the additive and multiplicative
identities, and for q = 4 (modulus x^2 + x + 1) the element 2 is x and 3 is
x + 1.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

MAX_ORDER = 1024

#: Smallest monic irreducible polynomial of degree e over GF(p), ordered by
#: the base-p integer of its low coefficients; coefficients low to high.
IRREDUCIBLE_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 1, 0, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 1, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 10): (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 1, 0, 0, 0, 0, 1),
    (5, 2): (2, 0, 1),
    (5, 3): (1, 1, 0, 1),
    (5, 4): (2, 0, 0, 0, 1),
    (7, 2): (1, 0, 1),
    (7, 3): (2, 0, 0, 1),
    (11, 2): (1, 0, 1),
    (13, 2): (2, 0, 1),
    (17, 2): (3, 0, 1),
    (19, 2): (1, 0, 1),
    (23, 2): (1, 0, 1),
    (29, 2): (2, 0, 1),
    (31, 2): (1, 0, 1),
}


class NotPrimePower(ValueError):
    """Raised for field orders that are not a supported prime power."""


class DivisionByZero(ZeroDivisionError):
    pass


class FieldTooLarge(ValueError):
    """Raised when a requested extension field exceeds ``MAX_ORDER``."""


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``, or raise NotPrimePower."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise NotPrimePower(f"{q} has at least two distinct prime factors")
    return p, e


def _poly_rem(a: list[int], b: tuple[int, ...], p: int) -> list[int]:
    a = list(a)
    lead_inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * lead_inv % p
        if c:
            shift = len(a) - len(b)
            for i, bc in enumerate(b):
                a[shift + i] = (a[shift + i] - c * bc) % p
        a.pop()
    return a


def is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    e = len(poly) - 1
    if e == 1:
        return True
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_poly_rem(list(poly), tuple(low) + (1,), p)):
                return False
    return True


class Field:
    """GF(q) with precomputed addition, multiplication, negation and inverse tables.

    Instances are immutable once built; use :func:`make_field`, which
    caches one instance per order.  Scalar methods take and return ints,
    while the ``*_table`` arrays support vectorised numpy indexing
    (``field.mul_table[a, b]`` for integer arrays ``a``, ``b``).
    """

    def __init__(self, q: int):
        p, e = factor_prime_power(q)
        if q > MAX_ORDER:
            raise NotPrimePower(f"q = {q} exceeds the supported maximum {MAX_ORDER}")
        self.q, self.p, self.e = q, p, e
        self.modulus: tuple[int, ...] = (0, 1) if e == 1 else IRREDUCIBLE_MODULI[(p, e)]
        if not is_irreducible(self.modulus, p):
            raise ValueError(f"tabulated modulus for GF({q}) is reducible")

        r = np.arange(q, dtype=np.int64)
        add = np.zeros((q, q), dtype=np.int64)
        neg = np.zeros(q, dtype=np.int64)
        for i in range(e):
            d = (r // p**i) % p
            add += ((d[:, None] + d[None, :]) % p) * p**i
            neg += ((-d) % p) * p**i

        if e == 1:
            mul = np.outer(r, r) % p
        else:
            self._exp, self._log = self._log_tables()
            logs = self._log
            mul = np.zeros((q, q), dtype=np.int64)
            nz = np.arange(1, q)
            mul[1:, 1:] = self._exp[(logs[nz][:, None] + logs[nz][None, :]) % (q - 1)]
        inv = np.zeros(q, dtype=np.int64)
        rows, cols = np.nonzero(mul == 1)
        inv[rows] = cols

        dtype = np.int16 if q <= 2**15 else np.int64
        self.add_table = add.astype(dtype)
        self.mul_table = mul.astype(dtype)
        self.neg_table = neg.astype(dtype)
        self.inv_table = inv.astype(dtype)
        self.sub_table = self.add_table[:, self.neg_table]
        for t in (self.add_table, self.mul_table, self.neg_table, self.inv_table, self.sub_table):
            t.setflags(write=False)
        # nested lists are much faster than numpy for scalar lookups
        self._add = add.tolist()
        self._mul = mul.tolist()
        self._neg = neg.tolist()
        self._inv = inv.tolist()

    def _poly_mul_x(self, a: int) -> int:
        p, e, mod = self.p, self.e, self.modulus
        coeffs = [0] + [(a // p**i) % p for i in range(e)]
        top = coeffs.pop()
        coeffs = [(c - top * m) % p for c, m in zip(coeffs, mod)]
        return sum(c * p**i for i, c in enumerate(coeffs))

    def _slow_mul(self, a: int, b: int) -> int:
        # schoolbook multiply a * b via repeated multiplication by x
        p, e = self.p, self.e
        acc, base = 0, a
        for i in range(e):
            bi = (b // p**i) % p
            for _ in range(bi):
                acc = self._digit_add(acc, base)
            base = self._poly_mul_x(base)
        return acc

    def _digit_add(self, a: int, b: int) -> int:
        p = self.p
        return sum((((a // p**i) + (b // p**i)) % p) * p**i for i in range(self.e))

    def _log_tables(self) -> tuple[np.ndarray, np.ndarray]:
        q = self.q
        for g in range(2, q):
            exp = [1]
            for _ in range(q - 2):
                exp.append(self._slow_mul(exp[-1], g))
            if len(set(exp)) == q - 1:
                log = np.zeros(q, dtype=np.int64)
                log[exp] = np.arange(q - 1)
                return np.array(exp, dtype=np.int64), log
        raise AssertionError("no primitive element found")  # pragma: no cover

    @property
    def is_prime(self) -> bool:
        return self.e == 1

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no multiplicative inverse")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self._mul[a][self.inv(b)]

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        out = 1
        while n:
            if n & 1:
                out = self._mul[out][a]
            a = self._mul[a][a]
            n >>= 1
        return out

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product over the field for integer-encoded arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a @ b) % self.p
        out = np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
        for i in range(a.shape[-1]):
            term = self.mul_table[a[..., i, None], b[i]]
            out = self.add_table[out, term]
        return out.astype(np.int64)

    def __repr__(self) -> str:
        return f"Field(q={self.q}, p={self.p}, e={self.e})"

    def __reduce__(self):
        return (make_field, (self.q,))


@functools.lru_cache(maxsize=None)
def make_field(q: int) -> Field:
    """Return the (cached) field of order q, ``2 <= q <= 1024``."""
    if q > MAX_ORDER:
        factor_prime_power(q)
        raise NotPrimePower(f"q = {q} exceeds the supported maximum {MAX_ORDER}")
    return Field(q)


def field_arith(f: Field, op: str, a: int, b: int | None = None) -> int:
    """Apply ``op`` in {'add', 'mul', 'neg', 'inv'} to encoded elements."""
    for x in (a, b):
        if x is not None and not 0 <= x < f.q:
            raise ValueError(f"{x} is not an element of GF({f.q})")
    if op == "add":
        return f.add(a, b)
    if op == "mul":
        return f.mul(a, b)
    if op == "neg":
        return f.neg(a)
    if op == "inv":
        return f.inv(a)
    raise ValueError(f"unknown field operation {op!r}")


def subfield_embedding(small: Field, big: Field) -> list[int]:
    """Encodings in ``big`` of the elements ``0..small.q-1`` of ``small``.

    The map fixes the prime field and sends the generator x of ``small``
    to the smallest-encoded root of ``small.modulus`` in ``big``, so it is
    deterministic given the modulus table.
    """
    if small.p != big.p or big.e % small.e:
        raise ValueError(f"GF({small.q}) is not a subfield of GF({big.q})")
    if small.e == 1:
        return list(range(small.q))
    mod = small.modulus

    def evaluate(beta: int) -> int:
        acc = 0
        for c in reversed(mod):
            acc = big.add(big.mul(acc, beta), c)
        return acc

    beta = next(b for b in big.nonzero() if evaluate(b) == 0)
    powers = [big.pow(beta, i) for i in range(small.e)]
    image = []
    for a in range(small.q):
        acc = 0
        for i in range(small.e):
            c = (a // small.p**i) % small.p
            acc = big.add(acc, big.mul(c, powers[i]))
        image.append(acc)
    return image
