import random

import pytest

from freysieve.bipoly import BiPoly
from freysieve.cyclotomic import CUBIC, QUADRATIC, CyclotomicInt, ResidueField, split_prime
from freysieve.freycurves import (
    ADDITIVE,
    GOOD,
    MULTIPLICATIVE,
    CurveModelError,
    FreyCurveModel,
    ReducedCurve,
    TableTarget,
    TraceTarget,
    count_points,
    load_curve_model,
    local_constraint,
    specialize_and_reduce,
    trace_of_frobenius,
)
from freysieve.models import build_model_e, build_model_f

import oracles


@pytest.fixture(scope="module")
def model_e():
    return build_model_e()


@pytest.fixture(scope="module")
def model_f():
    return build_model_f()


def _prime_curve(q, a4, a6):
    """A good-reduction y^2 = x^3 + a4 x + a6 over F_q, built directly."""
    rf = ResidueField(q, (0, 1))
    coeffs = {1: rf.zero(), 2: rf.zero(), 3: rf.zero(), 4: rf.element(a4), 6: rf.element(a6)}
    disc = (-16 * (4 * a4**3 + 27 * a6**2)) % q
    rtype = GOOD if disc else (MULTIPLICATIVE if (a4 % q) else ADDITIVE)
    return ReducedCurve(q, f"{q}.1", "test", rf, coeffs, rtype)


# ---------------------------------------------------------------------------
# model files


def test_round_trip(model_e, model_f, tmp_path):
    for m in (model_e, model_f):
        p = tmp_path / f"{m.name}.model"
        m.save(p)
        again = load_curve_model(p)
        assert again.name == m.name
        assert again.field_tag == m.field_tag
        assert again.coeffs == m.coeffs
        assert again.to_text() == m.to_text()


def test_model_fields(model_e, model_f):
    assert model_e.field_tag == QUADRATIC
    assert model_f.field_tag == CUBIC


def test_rejects_non_invariant_coefficient():
    # zeta itself is not fixed by the cubic field's group
    with pytest.raises(CurveModelError, match="Galois-fixed"):
        FreyCurveModel("bad", CUBIC, {4: BiPoly.constant(CyclotomicInt.zeta_power(1))})


def test_parser_errors():
    with pytest.raises(CurveModelError, match="line 1"):
        FreyCurveModel.from_text("a4 + (0,0) [1,0,0,0,0,0,0,0,0,0,0,0]\n")
    with pytest.raises(CurveModelError, match="name and field"):
        FreyCurveModel.from_text("field = cubic\n")
    with pytest.raises(CurveModelError, match="unknown header"):
        FreyCurveModel.from_text("nome = X\nfield = cubic\n")
    with pytest.raises(CurveModelError, match="line 3"):
        FreyCurveModel.from_text("name = X\nfield = full\na4 += (0, 0) [1,2]\n")
    with pytest.raises(CurveModelError, match="a5"):
        FreyCurveModel.from_text(
            "name = X\nfield = full\na5 += (0, 0) [1,0,0,0,0,0,0,0,0,0,0,0]\n"
        )


def test_coefficient_lines_accumulate():
    base = "name = X\nfield = full\n"
    one = "a4 += (0, 0) [1,0,0,0,0,0,0,0,0,0,0,0]\n"
    m = FreyCurveModel.from_text(base + one + one)
    assert m.coeffs[4] == BiPoly.constant(CyclotomicInt.from_int(2))


def test_comments_and_whitespace():
    text = "# curve\nname = X\n\nfield   =   full\na6 += ( 1 , 2 ) [ 1,0,0,0,0,0,0,0,0,0,0,0 ]  # term\n"
    m = FreyCurveModel.from_text(text)
    assert m.coeffs[6] == BiPoly.monomial(1, 2, 1)


# ---------------------------------------------------------------------------
# specialization and classification


def test_specialize_classification_examples(model_e):
    rc = specialize_and_reduce(model_e, (1, -1), 11, "11.1")
    assert rc.reduction_type == GOOD
    assert rc.norm == 121


def test_f_multiplicative_on_diagonal(model_f):
    spl = split_prime(5, CUBIC)
    for label in spl.labels:
        for a in range(1, 5):
            for b in range(5):
                if (a + b) % 5 == 0:
                    rc = specialize_and_reduce(model_f, (a, b), 5, label)
                    assert rc.reduction_type == MULTIPLICATIVE


def test_specialize_rejects_zero_pair(model_e):
    with pytest.raises(ValueError):
        specialize_and_reduce(model_e, (0, 0), 11, "11.1")


def test_e_reduction_types(model_e):
    # away from q = 1 mod 13 no rational pair can kill the discriminant
    # (its zeros are ratios of 13th roots of unity), so everything is good
    types = {
        specialize_and_reduce(model_e, (a, b), 11, "11.1").reduction_type
        for a in range(11)
        for b in range(11)
        if (a, b) != (0, 0)
    }
    assert types == {GOOD}
    # at 53 = 1 mod 13 the multiplicative locus is rational: 6 ratios per label
    mult = [
        (a, b)
        for a in range(53)
        for b in range(53)
        if (a, b) != (0, 0)
        and specialize_and_reduce(model_e, (a, b), 53, "53.1").reduction_type == MULTIPLICATIVE
    ]
    assert len(mult) == 6 * 52


# ---------------------------------------------------------------------------
# point counting and traces


def test_trace_fixed_curves():
    assert oracles.count_points_short_prime(5, 1, 0) == 4
    c5 = _prime_curve(5, 1, 0)
    assert count_points(c5) == 4
    assert trace_of_frobenius(c5) == 2

    assert oracles.count_points_short_prime(7, 1, 0) == 8
    c7 = _prime_curve(7, 1, 0)
    assert trace_of_frobenius(c7) == 0


def test_trace_requires_good_reduction():
    bad = _prime_curve(5, 2, 2)  # disc = -16(32+108) = 0 mod 5, a4 != 0
    assert bad.reduction_type == MULTIPLICATIVE
    with pytest.raises(ValueError):
        trace_of_frobenius(bad)


def test_count_against_oracle_random_prime_fields():
    rng = random.Random(23)
    checked = 0
    while checked < 60:
        q = rng.choice([5, 7, 11, 13, 17, 19])
        a4, a6 = rng.randrange(q), rng.randrange(q)
        if (-16 * (4 * a4**3 + 27 * a6**2)) % q == 0:
            continue
        c = _prime_curve(q, a4, a6)
        rf = c.rf
        expected = oracles.count_points_long(
            rf, rf.zero(), rf.zero(), rf.zero(), rf.element(a4), rf.element(a6)
        )
        assert count_points(c) == expected
        checked += 1


def test_count_against_oracle_extension_fields():
    rng = random.Random(29)
    fields = [
        ResidueField(5, (2, 0, 1)),  # F_25, t^2 = -2
        ResidueField(3, (1, 0, 1)),  # F_9, t^2 = -1
        ResidueField(3, (1, 2, 0, 1)),  # F_27
        ResidueField(2, (1, 1, 0, 1)),  # F_8
    ]
    for rf in fields:
        checked = 0
        while checked < 8:
            a = {i: tuple(rng.randrange(rf.q) for _ in range(rf.f)) for i in (1, 2, 3, 4, 6)}
            c = ReducedCurve(rf.q, "x.1", "test", rf, a, GOOD)
            expected = oracles.count_points_long(rf, a[1], a[2], a[3], a[4], a[6])
            assert count_points(c) == expected
            checked += 1


def test_frobenius_base_change_identity():
    # #E(F_{q^2}) = q^2 + 1 - (a^2 - 2q) for a curve over F_q with trace a
    rng = random.Random(31)
    non_residues = {5: 2, 7: 3, 11: 2, 13: 2}
    for _ in range(20):
        q = rng.choice([5, 7, 11, 13])
        a4, a6 = rng.randrange(q), rng.randrange(q)
        if (-16 * (4 * a4**3 + 27 * a6**2)) % q == 0:
            continue
        a = trace_of_frobenius(_prime_curve(q, a4, a6))
        # modulus t^2 - d with d a non-residue is irreducible
        rf2 = ResidueField(q, ((-non_residues[q]) % q, 0, 1))
        coeffs = {i: rf2.zero() for i in (1, 2, 3)}
        coeffs[4] = rf2.element(a4)
        coeffs[6] = rf2.element(a6)
        c2 = ReducedCurve(q, f"{q}.1", "test", rf2, coeffs, GOOD)
        assert count_points(c2) == q * q + 1 - (a * a - 2 * q)


def test_hasse_bound_sample():
    rng = random.Random(37)
    for _ in range(50):
        q = rng.choice([5, 7, 11, 13, 17])
        a4, a6 = rng.randrange(q), rng.randrange(q)
        if (-16 * (4 * a4**3 + 27 * a6**2)) % q == 0:
            continue
        a = trace_of_frobenius(_prime_curve(q, a4, a6))
        assert a * a <= 4 * q


def test_rational_curve_trace_agrees_at_conjugate_primes():
    # a model with rational coefficients base-changed to the quadratic
    # field: split primes carry conjugate reductions with equal traces
    m = FreyCurveModel("rat", QUADRATIC, {4: BiPoly.constant(1), 6: BiPoly.constant(1)})
    for q in (17, 23, 29, 43):
        spl = split_prime(q, QUADRATIC)
        assert spl.g == 2
        traces = [
            trace_of_frobenius(specialize_and_reduce(m, (1, 1), q, lab)) for lab in spl.labels
        ]
        assert traces[0] == traces[1]


def test_counting_is_deterministic(model_e):
    rc = specialize_and_reduce(model_e, (2, 7), 19, "19.1")
    assert count_points(rc) == count_points(rc)


# ---------------------------------------------------------------------------
# local constraints


def test_local_constraint_self_congruence(model_e):
    target = TraceTarget(model_e, (1, -1))
    for q, label in [(11, "11.1"), (17, "17.1"), (17, "17.2"), (23, "23.2")]:
        assert local_constraint(model_e, target, (1, -1), q, label)
        # scaling the pair gives an isomorphic curve
        assert local_constraint(model_e, target, (2, -2), q, label)


def test_local_constraint_multiplicative_branch(model_e):
    target = TraceTarget(model_e, (1, -1))
    q, label = 53, "53.1"
    found = 0
    for a in range(q):
        for b in range(1, q):
            rc = specialize_and_reduce(model_e, (a, b), q, label)
            if rc.reduction_type != MULTIPLICATIVE:
                continue
            found += 1
            pm = (rc.norm + 1) % 7
            expect = target.value_mod7(q, label) in (pm, (-pm) % 7)
            assert local_constraint(model_e, target, (a, b), q, label) == expect
            if found >= 20:
                return
    assert found > 0


def test_table_target_missing_label(model_e):
    tgt = TableTarget({"11.1": 3})
    assert isinstance(local_constraint(model_e, tgt, (1, 0), 11, "11.1"), bool)
    with pytest.raises(KeyError):
        tgt.value_mod7(19, "19.1")
