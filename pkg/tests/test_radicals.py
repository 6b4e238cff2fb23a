import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_contains, brute_nth_power, group_closure_order, torsion_by_probing
from unigraded.config import InvariantViolation
from unigraded.radicals import (MINUS_FOUR, Answer, MinusFourIsFourthPower, NotInGroup, OddRootOfUnity,
                                RadicalUnit as R, UnitGroup, abs_cogalois_decide, class_of, cogalois_decide,
                                contains, is_essential, is_nth_power, kneser_decide, presentation,
                                root_of_unity_in_field, same_group, sqrt_in_field, torsion_order, unit_inv,
                                unit_mul, unit_pow)

W8 = R.make(F(1, 8), {2: F(1, 2)})          # zeta_8 * sqrt 2
W32 = R.make(F(1, 32), {2: F(1, 8)})
G1 = R.make(0, {2: F(1, 2), 3: F(1, 4)})
G2 = R.make(0, {2: F(1, 3), 3: F(1, 2)})
X12 = R.make(0, {2: F(1, 6), 3: F(1, 4)})


def rad(p, e):
    return R.radical(p, F(e))


@st.composite
def units(draw, primes=(2, 3, 5), maxden=6, angles=True):
    exps = {p: F(draw(st.integers(-6, 6)), draw(st.integers(1, maxden))) for p in primes
            if draw(st.booleans())}
    angle = F(draw(st.integers(0, 11)), draw(st.sampled_from([1, 2, 3, 4, 6, 8, 12]))) if angles else 0
    return R.make(angle, exps)


def test_unit_operations():
    sq = unit_mul(W8, W8)
    assert sq.angle.value == F(1, 4) and sq.exp_dict == {2: 1}
    assert unit_pow(W8, 4) == R.from_rational(-4)
    assert unit_inv(rad(3, F(1, 3))).exp_dict == {3: F(-1, 3)}
    assert unit_pow(W8, 4).rational_value == -4


@given(units(), units(), st.integers(-5, 5))
def test_unit_group_laws(a, b, n):
    assert a * b == b * a
    assert (a * b) ** n == a ** n * b ** n
    assert a * a.inverse() == R.one()
    assert abs(a.to_complex() * b.to_complex() - (a * b).to_complex()) < 1e-9 * (1 + abs((a * b).to_complex()))


def test_rational_units():
    assert R.from_rational(F(-12, 5)).exp_dict == {2: 2, 3: 1, 5: -1}
    assert R.from_rational(F(-12, 5)).rational_value == F(-12, 5)
    assert not R.sqrt_of(2).is_rational
    assert R.sqrt_of(-3) == R.make(F(1, 4), {3: F(1, 2)})
    assert str(R.make(F(5, 12), {2: F(1, 2), 3: F(-2, 3)})) == "zeta(5/12)*2^(1/2)*3^(-2/3)"
    assert str(R.from_rational(-2)) == "-2"
    assert str(R.one()) == "1"


def test_text_form_round_trip():
    rng = random.Random(5)
    for _ in range(100):
        u = R.make(F(rng.randrange(24), 24), {p: F(rng.randint(-7, 7), rng.randint(1, 5)) for p in (2, 3, 7)})
        assert R.parse(str(u)) == u


def test_contains_examples():
    U = UnitGroup([G1, G2])
    cert = contains(U, X12)
    assert cert is not None and cert.reconstruct(U) == X12
    # the certificate is x = (g1 g2^2)/6 up to the choice of exponents
    assert (G1 * G2 ** 2 / R.from_rational(6)) == X12
    V = UnitGroup([R.sqrt_of(-3), rad(3, F(1, 3))])
    assert contains(V, R.zeta(3)) is None
    assert not brute_contains(V, R.zeta(3))
    c = contains(V, R.from_rational(-6))
    assert c is not None and c.reconstruct(V) == R.from_rational(-6)


def test_same_group():
    assert same_group(UnitGroup([G1, G2]), UnitGroup([X12]))
    assert not same_group(UnitGroup([G1]), UnitGroup([X12]))


@settings(max_examples=60, deadline=None)
@given(st.lists(units(maxden=4), min_size=1, max_size=2), units(maxden=4))
def test_contains_matches_brute_force(gens, x):
    U = UnitGroup(gens)
    cert = contains(U, x)
    assert (cert is not None) == brute_contains(U, x)
    if cert:
        assert cert.reconstruct(U) == x


@settings(max_examples=40, deadline=None)
@given(st.lists(units(maxden=4), min_size=1, max_size=2))
def test_products_of_generators_are_members(gens):
    U = UnitGroup(gens)
    u = gens[0] ** 3 * R.from_rational(F(-7, 3))
    if len(gens) > 1:
        u = u * gens[1] ** -2
    assert contains(U, u).reconstruct(U) == u


def test_is_nth_power_examples():
    assert is_nth_power(UnitGroup([W8]), MINUS_FOUR, 4) == W8
    assert is_nth_power(UnitGroup([R.sqrt_of(2)]), MINUS_FOUR, 4) is None
    assert not brute_nth_power(UnitGroup([R.sqrt_of(2)]), MINUS_FOUR, 4)
    assert is_nth_power(UnitGroup([R.sqrt_of(5)]), R.from_rational(16), 4) == R.from_rational(2)


@settings(max_examples=40, deadline=None)
@given(st.lists(units(maxden=4), min_size=1, max_size=2), units(maxden=2), st.integers(1, 4))
def test_is_nth_power_matches_brute_force(gens, target, n):
    U = UnitGroup(gens)
    u = is_nth_power(U, target, n)
    assert (u is not None) == brute_nth_power(U, target, n)
    if u is not None:
        assert u ** n == target and contains(U, u) is not None


TORSION_GROUPS = [
    ([W8], 4), ([R.sqrt_of(2)], 2), ([R.zeta(3)], 6), ([W32], 4), ([R.zeta(5)], 10),
    ([R.sqrt_of(-3)], 2), ([R.sqrt_of(-1)], 4), ([R.sqrt_of(-3), R.sqrt_of(-1)], 4),
    ([R.make(F(1, 4), {2: F(1, 4)})], 2), ([R.make(F(1, 12), {5: F(1, 2)}), R.sqrt_of(5)], 12),
]


@pytest.mark.parametrize("gens,m", TORSION_GROUPS)
def test_torsion_order(gens, m):
    U = UnitGroup(gens)
    assert torsion_order(U) == m
    assert torsion_by_probing(U, contains, R.zeta) == m


@settings(max_examples=40, deadline=None)
@given(st.lists(units(maxden=4), min_size=1, max_size=2))
def test_torsion_matches_probing(gens):
    U = UnitGroup(gens)
    m = torsion_order(U)
    assert m == torsion_by_probing(U, contains, R.zeta)
    ok, w = is_essential(U)
    assert ok == (m & (m - 1) == 0)
    if not ok:
        assert w.certificate.reconstruct(U) == R.zeta(w.p)


def test_is_essential_examples():
    ok, w = is_essential(UnitGroup([R.zeta(3)]))
    assert not ok and w.p == 3
    assert is_essential(UnitGroup([W8]))[0]
    assert is_essential(UnitGroup([R.sqrt_of(2), rad(3, F(1, 5))]))[0]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("a", [2, 3, 5, 6, 7, 10])
def test_capelli(p, a):
    U = UnitGroup([R.make(0, {q: F(m, p) for q, m in R.from_rational(a).exps})])
    assert kneser_decide(U).is_field


def test_kneser_examples():
    v = kneser_decide(UnitGroup([W8]))
    assert not v.is_field and isinstance(v.reason, MinusFourIsFourthPower)
    assert v.reason.u ** 4 == MINUS_FOUR
    v = kneser_decide(UnitGroup([W32]))
    assert not v.is_field and v.reason.u == W32 ** 4
    assert v.reason.certificate.reconstruct(UnitGroup([W32])) == v.reason.u
    v = kneser_decide(UnitGroup([R.zeta(3)]))
    assert not v.is_field and isinstance(v.reason, OddRootOfUnity) and v.reason.p == 3
    assert kneser_decide(UnitGroup([R.zeta(8)])).is_field  # Q(zeta_8) has no u with u^4 = -4 in <zeta_8>
    assert not kneser_decide(UnitGroup([R.zeta(8), R.sqrt_of(2)])).is_field


def test_presentation_examples():
    assert presentation(UnitGroup([R.sqrt_of(2), R.sqrt_of(3)])).invariant_factors == (2, 2)
    assert presentation(UnitGroup([W8])).invariant_factors == (4,)
    assert presentation(UnitGroup([G1, G2])).invariant_factors == (12,)
    assert presentation(UnitGroup([W32])).order == 16


@settings(max_examples=40, deadline=None)
@given(st.lists(units(maxden=4), min_size=1, max_size=3))
def test_presentation_invariants(gens):
    U = UnitGroup(gens)
    P = U.presentation
    if P.order > 64:
        return
    assert P.order == group_closure_order(U)
    for u, m, r in zip(P.basis_units, P.invariant_factors, P.rational_powers):
        assert (u ** m).rational_value == r
        assert all(not (u ** k).is_rational for k in range(1, m))
    for d in P.classes():
        assert class_of(U, P.section(d)) == tuple(d)


@settings(max_examples=40, deadline=None)
@given(st.lists(units(maxden=4), min_size=1, max_size=2), st.integers(-4, 4), st.integers(-4, 4))
def test_class_of_homomorphism(gens, a, b):
    U = UnitGroup(gens)
    x = gens[0] ** a * R.from_rational(3)
    y = gens[-1] ** b
    mods = U.presentation.invariant_factors
    cx, cy, cxy = class_of(U, x), class_of(U, y), class_of(U, x * y)
    assert cxy == tuple((s + t) % m for s, t, m in zip(cx, cy, mods))
    assert (not any(cx)) == x.is_rational


def test_class_of_examples():
    assert class_of(UnitGroup([R.sqrt_of(2)]), R.from_rational(F(-5, 7))) == (0,)
    assert class_of(UnitGroup([R.sqrt_of(2)]), R.sqrt_of(2) * R.from_rational(3)) == (1,)
    U = UnitGroup([G1, G2])
    c = class_of(U, X12)
    assert next(k for k in range(1, 13) if (X12 ** k).is_rational) == 12
    assert len({tuple((k * x) % 12 for x in c) for k in range(12)}) == 12
    with pytest.raises(NotInGroup):
        class_of(UnitGroup([R.sqrt_of(2)]), R.sqrt_of(3))


def test_cogalois_examples():
    assert cogalois_decide(UnitGroup([R.sqrt_of(-3)])).answer is Answer.YES
    assert cogalois_decide(UnitGroup([G1, G2])).answer is Answer.YES
    assert cogalois_decide(UnitGroup([W8])).answer is Answer.NO
    assert cogalois_decide(UnitGroup([R.zeta(8)])).answer is Answer.NO
    assert cogalois_decide(UnitGroup([R.sqrt_of(-1)])).answer is Answer.YES
    assert cogalois_decide(UnitGroup([R.sqrt_of(-3), R.sqrt_of(2)])).answer is Answer.YES


def test_abs_cogalois_examples():
    assert abs_cogalois_decide(UnitGroup([R.sqrt_of(-3)])).answer is Answer.NO
    assert abs_cogalois_decide(UnitGroup([R.sqrt_of(2), rad(5, F(1, 3))])).answer is Answer.YES
    assert abs_cogalois_decide(UnitGroup([W8])).answer is Answer.NO
    assert abs_cogalois_decide(UnitGroup([R.sqrt_of(-1)])).answer is Answer.NO
    # Q(i 2^(1/4)) is isomorphic to a real field and contains neither i nor zeta_3
    assert abs_cogalois_decide(UnitGroup([R.make(F(1, 4), {2: F(1, 4)})])).answer is Answer.YES


def test_unknown_verdicts():
    # (i 5^(1/4))^2 = -sqrt 5, so sqrt 5 lies in L and zeta_5 cannot be excluded by the sub-criteria
    u = R.make(F(1, 4), {5: F(1, 4)})
    assert abs_cogalois_decide(UnitGroup([u])).answer is Answer.UNKNOWN
    assert cogalois_decide(UnitGroup([u])).answer is Answer.YES  # only p | |D| = 4 matter
    assert cogalois_decide(UnitGroup([u, rad(2, F(1, 5))])).answer is Answer.UNKNOWN


def test_quadratic_subfield_test():
    U = UnitGroup([R.sqrt_of(2), R.sqrt_of(3)])
    assert sqrt_in_field(U, 6) and sqrt_in_field(U, 8) and not sqrt_in_field(U, 5)
    assert not sqrt_in_field(U, -1)
    V = UnitGroup([R.make(F(1, 8), {2: F(1, 4)})])  # zeta_8 2^(1/4): field containing i sqrt 2?
    assert kneser_decide(V).is_field
    # (zeta_8 2^(1/4))^2 = i sqrt 2, so sqrt(-2) lies in L
    assert sqrt_in_field(V, -2)
    assert root_of_unity_in_field(UnitGroup([R.sqrt_of(-3)]), 3) is True
    assert root_of_unity_in_field(UnitGroup([R.sqrt_of(-1)]), 3) is False


def test_invariant_violation_type():
    assert issubclass(InvariantViolation, AssertionError)
