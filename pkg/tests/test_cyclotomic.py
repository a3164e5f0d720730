import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freysieve.cyclotomic import (
    CUBIC,
    FULL,
    GENERATOR,
    ONE_MINUS_ZETA,
    QUADRATIC,
    SQRT13,
    SUBFIELD_DEGREE,
    CyclotomicInt,
    ResidueField,
    find_sieve_primes,
    is_seventh_power,
    multiplicative_order,
    reduce_mod_prime,
    reduction_map,
    split_prime,
)

import oracles

coords = st.lists(st.integers(min_value=-50, max_value=50), min_size=12, max_size=12)


# ---------------------------------------------------------------------------
# ring structure


@settings(max_examples=60)
@given(coords, coords, coords)
def test_ring_laws(xc, yc, zc):
    x, y, z = CyclotomicInt(xc), CyclotomicInt(yc), CyclotomicInt(zc)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)


def test_power_basis_relations():
    z = CyclotomicInt.zeta_power(1)
    assert z**13 == CyclotomicInt.from_int(1)
    total = sum((CyclotomicInt.zeta_power(j) for j in range(12)), CyclotomicInt.from_int(0))
    assert CyclotomicInt.zeta_power(12) == -total


@settings(max_examples=30)
@given(coords, st.integers(min_value=1, max_value=12), st.integers(min_value=1, max_value=12))
def test_galois_composition(xc, j, k):
    x = CyclotomicInt(xc)
    assert x.galois(j).galois(k) == x.galois((j * k) % 13)


def test_galois_is_ring_map():
    rng = random.Random(7)
    for _ in range(20):
        x = CyclotomicInt([rng.randrange(-9, 10) for _ in range(12)])
        y = CyclotomicInt([rng.randrange(-9, 10) for _ in range(12)])
        j = rng.choice(range(1, 13))
        assert (x * y).galois(j) == x.galois(j) * y.galois(j)


def test_norms():
    assert ONE_MINUS_ZETA.norm() == 13
    assert CyclotomicInt.from_int(2).norm() == 2**12
    assert (SQRT13 * SQRT13) == CyclotomicInt.from_int(13)


def test_subfield_generators():
    g = GENERATOR[QUADRATIC]
    assert g * g - g - CyclotomicInt.from_int(3) == CyclotomicInt.from_int(0)
    assert g.is_fixed_by(QUADRATIC)
    assert not g.is_fixed_by(CUBIC)
    e = GENERATOR[CUBIC]
    assert e**3 + e * e - 4 * e + CyclotomicInt.from_int(1) == CyclotomicInt.from_int(0)
    assert e.is_fixed_by(CUBIC)
    assert not e.is_fixed_by(QUADRATIC)


def test_serialization_round_trip():
    x = CyclotomicInt(range(-5, 7))
    assert CyclotomicInt.deserialize(x.serialize()) == x


# ---------------------------------------------------------------------------
# prime splitting


def test_split_full_field_examples():
    # residue degree is the multiplicative order mod 13
    assert oracles.multiplicative_order(2, 13) == 12
    s = split_prime(2, FULL)
    assert (s.f, s.g) == (12, 1)

    assert oracles.multiplicative_order(5, 13) == 4
    s = split_prime(5, FULL)
    assert (s.f, s.g) == (4, 3)
    assert s.labels == ("5.1", "5.2", "5.3")


def test_split_cubic_examples():
    s = split_prime(2, CUBIC)
    assert (s.f, s.g) == (3, 1)
    rf = ResidueField(2, s.factors[0])
    assert rf.order == 8  # multiplicative group of order 7
    for q in (5, 83):
        s = split_prime(q, CUBIC)
        assert (s.f, s.g) == (1, 3)
    assert split_prime(3, CUBIC).g == 1


def test_split_ramified_13():
    s = split_prime(13, FULL)
    assert s.ramified and s.g == 1 and s.labels == ("13.1",)
    # Phi_13 = (x-1)^12 mod 13
    assert s.factors[0] == (12, 1)
    assert split_prime(13, CUBIC).ramified
    assert split_prime(13, QUADRATIC).ramified


def test_split_rejects_non_primes():
    with pytest.raises(ValueError):
        split_prime(6, FULL)
    with pytest.raises(ValueError):
        split_prime(1, CUBIC)


@pytest.mark.parametrize("subfield", [FULL, QUADRATIC, CUBIC])
@pytest.mark.parametrize("q", [2, 3, 5, 7, 11, 17, 19, 23, 29, 31, 53, 83, 89])
def test_factorization_invariants(q, subfield):
    s = split_prime(q, subfield)
    assert s.f * s.g == SUBFIELD_DEGREE[subfield]
    assert len(set(s.factors)) == s.g
    assert list(s.factors) == sorted(s.factors)
    # product of the factors recovers the model polynomial mod q
    prod = [1]
    for fac in s.factors:
        out = [0] * (len(prod) + len(fac) - 1)
        for i, a in enumerate(prod):
            for j, b in enumerate(fac):
                out[i + j] = (out[i + j] + a * b) % q
        prod = out
    from freysieve.cyclotomic import MIN_POLY

    assert prod == [c % q for c in MIN_POLY[subfield]]


def test_quadratic_at_two_is_inert():
    s = split_prime(2, QUADRATIC)
    assert (s.f, s.g) == (2, 1)
    assert not s.ramified


# ---------------------------------------------------------------------------
# reduction


def test_reduce_13_above_13():
    rm = reduction_map(13, FULL, "13.1")
    assert rm.rf.is_zero(rm.reduce(CyclotomicInt.from_int(13)))


def test_reduce_one_plus_zeta_at_3():
    assert oracles.multiplicative_order(3, 13) == 3
    rm = reduction_map(3, FULL, "3.1")
    x = CyclotomicInt.from_int(1) + CyclotomicInt.zeta_power(1)
    val = rm.reduce(x)
    # matches direct polynomial evaluation of 1 + t against the model
    direct = rm.rf.add(rm.rf.one(), rm.rf.gen())
    assert val == direct
    # ring-map law
    assert rm.reduce(x * x) == rm.rf.mul(val, val)


def test_reduce_is_ring_hom_randomized():
    rng = random.Random(11)
    for q, label in [(3, "3.1"), (5, "5.2"), (23, "23.1")]:
        rm = reduction_map(q, FULL, label)
        for _ in range(333):
            x = CyclotomicInt([rng.randrange(-100, 100) for _ in range(12)])
            y = CyclotomicInt([rng.randrange(-100, 100) for _ in range(12)])
            assert rm.reduce(x + y) == rm.rf.add(rm.reduce(x), rm.reduce(y))
            assert rm.reduce(x * y) == rm.rf.mul(rm.reduce(x), rm.reduce(y))


def test_reduce_unknown_label():
    with pytest.raises(KeyError):
        reduce_mod_prime(CyclotomicInt.from_int(1), 5, "5.4")


def test_subfield_reduction_routes_and_rejects():
    g = GENERATOR[QUADRATIC]
    val = reduce_mod_prime(g, 23, "23.1", QUADRATIC)
    rm = reduction_map(23, QUADRATIC, "23.1")
    # the generator must reduce to a root of its labelled factor
    fac = split_prime(23, QUADRATIC).factor_for("23.1")
    acc = rm.rf.zero()
    p = rm.rf.one()
    for c in fac:
        acc = rm.rf.add(acc, tuple((c * t) % 23 for t in p))
        p = rm.rf.mul(p, val)
    assert rm.rf.is_zero(acc)
    # an element outside the subfield is rejected
    with pytest.raises(ValueError):
        reduce_mod_prime(CyclotomicInt.zeta_power(1), 23, "23.1", QUADRATIC)


def test_galois_coherence_multiset():
    # at a fully split prime the residues at all primes above q form the
    # same multiset as the residues of all conjugates at a fixed prime
    q = 53
    assert multiplicative_order(q, 13) == 1
    s = split_prime(q, FULL)
    assert s.g == 12
    rng = random.Random(5)
    for _ in range(5):
        x = CyclotomicInt([rng.randrange(-40, 40) for _ in range(12)])
        left = sorted(reduce_mod_prime(x, q, lab)[0] for lab in s.labels)
        rm1 = reduction_map(q, FULL, "53.1")
        right = sorted(rm1.reduce(x.galois(j))[0] for j in range(1, 13))
        assert left == right


# ---------------------------------------------------------------------------
# 7th powers


def test_seventh_power_order7_group():
    rm = reduction_map(2, CUBIC, "2.1")
    rf = rm.rf
    assert rf.order == 8
    for x in rf.elements():
        if rf.is_zero(x):
            continue
        assert is_seventh_power(rf, x) is (x == rf.one())


def test_seventh_power_f29():
    assert oracles.seventh_powers(29) == {1, 12, 17, 28}
    rf = ResidueField(29, (0, 1))  # modulus x: the prime field itself
    rf = ResidueField(29, (-1, 1))
    assert is_seventh_power(rf, rf.element(12))
    assert not is_seventh_power(rf, rf.element(2))


def test_seventh_power_trivial_when_coprime():
    rf = ResidueField(5, (-2, 1))
    for c in range(1, 5):
        assert is_seventh_power(rf, rf.element(c))


def test_seventh_power_zero_rejected():
    rf = ResidueField(29, (-1, 1))
    with pytest.raises(ValueError):
        is_seventh_power(rf, rf.zero())


def test_seventh_power_invariance_under_seventh_powers():
    rm = reduction_map(29, FULL, "29.1")
    rf = rm.rf
    rng = random.Random(3)
    for _ in range(40):
        x = tuple(rng.randrange(29) for _ in range(rf.f))
        y = tuple(rng.randrange(29) for _ in range(rf.f))
        if rf.is_zero(x) or rf.is_zero(y):
            continue
        assert is_seventh_power(rf, rf.mul(x, rf.pow(y, 7))) == is_seventh_power(rf, x)


def test_find_sieve_primes():
    out = find_sieve_primes(83)
    assert {2, 11, 19, 23, 83} <= set(out)
    assert 5 not in out  # 7 does not divide 5^4 - 1 = 624
    assert (5**4 - 1) % 7 != 0
    assert 29 in out
    assert (29**3 - 1) % 7 == 0
    for q in out:
        f = oracles.multiplicative_order(q, 13)
        assert (q**f - 1) % 7 == 0
    assert 13 not in find_sieve_primes(200)
