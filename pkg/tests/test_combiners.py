import random

import pytest
from hypothesis import given, strategies as st

from incmerkle.combiners import CountingCombiner, combiner_by_id, digest_combiner, toy_combiner

# SHA-256 of 64 zero bytes, computed with `openssl dgst -sha256` before any code existed.
SHA256_ZERO64 = "f5a5fd42d16a20302798ef6ed309979b43003d2320d9f0e8ea9831a92759fb4b"


@pytest.mark.parametrize("x, y, expected", [(3, 6, -4), (0, 0, -1), (-8, 3, -12)])
def test_toy_combiner_examples(x, y, expected):
    assert toy_combiner().combine(x, y) == expected


def test_toy_default_leaf():
    assert toy_combiner().default_leaf == 0


@given(st.integers(), st.integers())
def test_toy_closed_form(x, y):
    assert toy_combiner().combine(x, y) + y + 1 == x


def test_toy_is_big_int():
    big = 2**200
    assert toy_combiner().combine(big, -big) == 2**201 - 1


def test_digest_zero_pair_golden():
    z = bytes(32)
    c = digest_combiner()
    assert c.default_leaf == z
    assert c.combine(z, z).hex() == SHA256_ZERO64


def test_digest_not_commutative():
    rng = random.Random(7)
    c = digest_combiner()
    for _ in range(50):
        a, b = rng.randbytes(32), rng.randbytes(32)
        assert a != b
        assert c.combine(a, b) != c.combine(b, a)


@given(st.binary(min_size=32, max_size=32), st.binary(min_size=32, max_size=32))
def test_digest_output_size(a, b):
    assert len(digest_combiner().combine(a, b)) == 32


def test_determinism_1000_pairs():
    rng = random.Random(1)
    toy, dig = toy_combiner(), digest_combiner()
    for _ in range(1000):
        x, y = rng.randint(-10**12, 10**12), rng.randint(-10**12, 10**12)
        assert toy.combine(x, y) == toy.combine(x, y)
        a, b = rng.randbytes(32), rng.randbytes(32)
        assert dig.combine(a, b) == dig.combine(a, b)


def test_digest_rejects_wrong_length():
    with pytest.raises(ValueError):
        digest_combiner().combine(b"short", bytes(32))
    with pytest.raises(ValueError):
        digest_combiner().check_value(bytes(31))


def test_check_value_types():
    with pytest.raises(TypeError):
        toy_combiner().check_value(b"x" * 32)
    with pytest.raises(TypeError):
        toy_combiner().check_value(True)
    with pytest.raises(TypeError):
        digest_combiner().check_value(5)


def test_combiner_by_id():
    assert combiner_by_id("toy").name == "toy"
    assert combiner_by_id("sha256").is_digest
    with pytest.raises(ValueError):
        combiner_by_id("keccak")


def test_counting_combiner():
    c = CountingCombiner(toy_combiner())
    assert c.combine(3, 6) == -4
    assert c(1, 1) == -1
    assert c.calls == 2
    assert c.reset() == 2
    assert c.calls == 0
