import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgblock.gf import (
    IRREDUCIBLE_MODULI,
    DivisionByZero,
    NotPrimePower,
    factor_prime_power,
    field_arith,
    make_field,
    subfield_embedding,
)

SMALL = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def _prime_divisors(n):
    return {p for p in range(2, n + 1) if n % p == 0 and all(p % d for d in range(2, p))}


PRIME_POWERS = [q for q in range(2, 1025) if len(_prime_divisors(q)) == 1]


def naive_mul(a, b, p, e, modulus):
    """Schoolbook polynomial product reduced by the monic modulus (low-degree-first coefficients)."""
    da = [(a // p**i) % p for i in range(e)]
    db = [(b // p**i) % p for i in range(e)]
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for i in range(e + 1):
                prod[k - e + i] = (prod[k - e + i] - c * modulus[i]) % p
    return sum(c * p**i for i, c in enumerate(prod[:e]))


def test_prime_power_detection():
    assert factor_prime_power(1024) == (2, 10)
    assert factor_prime_power(729) == (3, 6)
    for bad in (1, 6, 12, 100, 1000):
        with pytest.raises(NotPrimePower):
            make_field(bad)
    with pytest.raises((NotPrimePower, ValueError)):
        make_field(2048)


def test_examples():
    f5 = make_field(5)
    assert (f5.p, f5.e) == (5, 1)
    f4 = make_field(4)
    assert (f4.p, f4.e) == (2, 2)
    assert tuple(f4.modulus) == (1, 1, 1)  # x^2 + x + 1
    assert field_arith(f5, "mul", 2, 3) == 1
    assert field_arith(f4, "mul", 2, 2) == 3
    assert field_arith(make_field(3), "inv", 2) == 2
    with pytest.raises(DivisionByZero):
        field_arith(f5, "inv", 0)


def test_every_prime_power_up_to_1024_has_a_table_entry():
    for q in PRIME_POWERS:
        p, e = factor_prime_power(q)
        if e > 1:
            assert (p, e) in IRREDUCIBLE_MODULI


@pytest.mark.parametrize("pe", sorted(k for k in IRREDUCIBLE_MODULI if k[0] ** k[1] <= 64))
def test_moduli_have_no_factor_by_brute_force(pe):
    """Multiply every pair of monic polynomials of complementary degrees; none may equal the modulus."""
    p, e = pe
    target = tuple(IRREDUCIBLE_MODULI[pe])
    for d in range(1, e // 2 + 1):
        for a in itertools.product(range(p), repeat=d):
            for b in itertools.product(range(p), repeat=e - d):
                A, B = list(a) + [1], list(b) + [1]
                prod = [0] * (e + 1)
                for i, x in enumerate(A):
                    for j, y in enumerate(B):
                        prod[i + j] = (prod[i + j] + x * y) % p
                assert tuple(prod) != target


@pytest.mark.parametrize("q", SMALL)
def test_axioms_exhaustive(q):
    f = make_field(q)
    els = range(q)
    for a in els:
        assert f.add(a, 0) == a and f.mul(a, 1) == a and f.mul(a, 0) == 0
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
    for a, b in itertools.product(els, repeat=2):
        assert f.add(a, b) == f.add(b, a)
        assert f.mul(a, b) == f.mul(b, a)
    for a, b, c in itertools.product(els, repeat=3):
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27, 32, 49])
def test_multiplication_matches_schoolbook(q):
    f = make_field(q)
    for a, b in itertools.product(range(q), repeat=2):
        assert f.mul(a, b) == naive_mul(a, b, f.p, f.e, f.modulus)


@pytest.mark.parametrize("q", [3, 4, 8, 9, 25, 27])
def test_frobenius_is_additive(q):
    f = make_field(q)
    for a, b in itertools.product(range(q), repeat=2):
        assert f.pow(f.add(a, b), f.p) == f.add(f.pow(a, f.p), f.pow(b, f.p))


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([64, 81, 125, 243, 256, 343, 512, 625, 729, 1024, 1021]), st.data())
def test_axioms_random_large_fields(q, data):
    f = make_field(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    expected = naive_mul(a, b, f.p, f.e, f.modulus) if f.e > 1 else (a * b) % q
    assert f.mul(a, b) == expected
    if a:
        assert f.mul(a, f.inv(a)) == 1
    assert f.pow(f.add(a, b), f.p) == f.add(f.pow(a, f.p), f.pow(b, f.p))


def test_tables_are_read_only_and_consistent():
    f = make_field(9)
    with pytest.raises(ValueError):
        f.mul_table[1, 1] = 0
    a = np.arange(9)
    assert (f.mul_table[a[:, None], a[None, :]] == f.mul_table).all()


@pytest.mark.parametrize("small,big", [(2, 4), (2, 8), (3, 9), (2, 16), (4, 16), (3, 27), (2, 1024)])
def test_subfield_embedding_is_a_ring_homomorphism(small, big):
    fs, fb = make_field(small), make_field(big)
    emb = subfield_embedding(fs, fb)
    assert emb[0] == 0 and emb[1] == 1
    assert len(set(emb)) == small
    for a, b in itertools.product(range(small), repeat=2):
        assert emb[fs.add(a, b)] == fb.add(emb[a], emb[b])
        assert emb[fs.mul(a, b)] == fb.mul(emb[a], emb[b])
    # prime-field elements keep their encodings
    for a in range(fs.p):
        assert emb[a] == a
