import random
from fractions import Fraction as F

import pytest
from mpmath import mp

from unigraded.algebra import build, complex_eval
from unigraded.expr import ParseError, ast_value, format_terms, normalize, parse, parse_terms, parse_unit, terms_value
from unigraded.radicals import RadicalUnit as R, UnitGroup


def test_degree_twelve_element():
    terms = parse_terms("2^(1/2)*3^(1/4) + 2^(1/3)*3^(1/2)")
    assert len(terms) == 2 and all(c == 1 for c, _ in terms)
    assert {u for _, u in terms} == {R.make(0, {2: F(1, 2), 3: F(1, 4)}), R.make(0, {2: F(1, 3), 3: F(1, 2)})}


@pytest.mark.parametrize("text,unit", [
    ("zeta(8)*2^(1/2)", R.make(F(1, 8), {2: F(1, 2)})),
    ("sqrt(-3)", R.make(F(1, 4), {3: F(1, 2)})),
    ("root(3, -5)", R.make(F(1, 2), {5: F(1, 3)})),
    ("sqrt(8)", R.make(0, {2: F(3, 2)})),
    ("zeta(3/8)", R.make(F(3, 8))),
    ("i", R.make(F(1, 4))),
    ("sqrt(4)", R.from_rational(2)),
    ("root(4, 1/16)", R.from_rational(F(1, 2))),
    ("2^(-1/3)", R.make(0, {2: F(-1, 3)})),
    ("zeta(1)", R.one()),
])
def test_normalization_examples(text, unit):
    assert parse_unit(text) == unit


def test_terms_merge_and_drop():
    assert parse_terms("sqrt(2) + sqrt(2) - 2*sqrt(2)") == []
    assert parse_terms("sqrt(8) - 2*sqrt(2)") == [(F(-2), R.sqrt_of(2)), (F(1), R.make(0, {2: F(3, 2)}))]
    assert parse_terms("i^2 + 1") == []
    assert parse_terms("(1 + sqrt(2))*(1 - sqrt(2))") == [(F(-1), R.one())]
    assert parse_terms("3/4") == [(F(3, 4), R.one())]
    assert parse_terms("-sqrt(3)") == [(F(-1), R.sqrt_of(3))]


def test_whitespace_insensitive():
    assert parse_terms(" 2 ^ ( 1 / 2 ) *3^(1/4)+ 1 ") == parse_terms("2^(1/2)*3^(1/4)+1")


@pytest.mark.parametrize("text,pos", [
    ("4^(1/2)", 0), ("sqrt(2", 6), ("2^(1/0)", 5), ("root(2, -3)", 0), ("0^-1", 2),
    ("foo(2)", 0), ("2 $ 3", 2), ("", 0), ("2 +", 3), ("zeta(0)", 0), ("(1/0)", 3),
])
def test_parse_errors(text, pos):
    with pytest.raises(ParseError) as ei:
        parse_terms(text)
    assert ei.value.pos == pos
    assert str(ei.value).startswith(f"at position {pos}:")


def test_negative_power_of_sum_rejected():
    with pytest.raises(ValueError):
        parse_terms("(1 + sqrt(2))^-1")
    # atoms stay literal: no rewriting of 2^(-1/2) into 2^(1/2)/2
    assert parse_terms("(2*sqrt(2))^-1") == [(F(1, 2), R.make(0, {2: F(-1, 2)}))]


def _random_expr(rng, depth=0):
    atoms = [
        lambda: str(rng.randint(1, 9)),
        lambda: f"{rng.randint(1, 9)}/{rng.randint(2, 7)}",
        lambda: "i",
        lambda: f"zeta({rng.choice([1, 2, 3, 4, 6, 8, 12])})",
        lambda: f"zeta({rng.randint(1, 7)}/{rng.choice([3, 8, 12])})",
        lambda: f"sqrt({rng.choice([-1, 1])*rng.randint(1, 12)})",
        lambda: f"root({rng.choice([3, 5])}, {rng.choice(['-', ''])}{rng.randint(2, 10)})",
        lambda: f"root(4, {rng.randint(2, 6)}/{rng.randint(1, 5)})",
        lambda: f"{rng.choice([2, 3, 5, 7])}^({rng.randint(-5, 5)}/{rng.randint(1, 6)})",
    ]
    if depth < 2 and rng.random() < 0.3:
        inner = _random_expr(rng, depth + 1)
        base = f"({inner})"
        if rng.random() < 0.5:
            base = f"{base}^{rng.randint(0, 3)}"
    else:
        base = rng.choice(atoms)()
        if rng.random() < 0.15:
            base = f"({base})^{rng.randint(-2, 3)}" if "+" not in base else base
    term = base
    for _ in range(rng.randint(0, 2)):
        term += "*" + rng.choice(atoms)()
    if rng.random() < 0.5 and depth < 3:
        term += rng.choice([" + ", " - "]) + _random_expr(rng, depth + 1)
    return term


def _corpus(n=200, seed=11):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        s = _random_expr(rng)
        try:
            parse_terms(s)
        except (ParseError, ValueError):
            continue
        out.append(s)
    return out


CORPUS = _corpus()


def test_round_trip_corpus():
    for s in CORPUS:
        node = parse(s)
        assert normalize(parse(str(node))) == normalize(node), s
        terms = normalize(node)
        assert parse_terms(format_terms(terms)) == terms, s


def test_numeric_agreement_corpus():
    tol = mp.mpf(2) ** -100
    for s in CORPUS:
        node = parse(s)
        terms = normalize(node)
        with mp.workprec(128):
            direct = mp.mpc(ast_value(node, mp))
            viaterms = terms_value(terms, mp)
            scale = max(mp.mpf(1), abs(direct))
            assert abs(direct - viaterms) <= tol * scale, s
        units = [u for _, u in terms if not u.is_rational]
        if units:
            U = UnitGroup(units)
            if U.presentation.order <= 256:
                A = build(U)
                iv = complex_eval(A, A.from_terms(terms), 128)
                with mp.workprec(128):
                    re, im = iv.midpoint()
                    assert abs(mp.mpc(re, im) - direct) <= tol * scale, s


def test_unit_text_round_trip():
    rng = random.Random(12)
    for _ in range(100):
        u = R.make(F(rng.randrange(30), 30), {p: F(rng.randint(-9, 9), rng.randint(1, 7)) for p in (2, 5, 11)})
        assert parse_unit(str(u)) == u
        assert parse_terms(format_terms([(F(-3, 4), u)])) == ([(F(-3, 4), u)] if not u.is_rational
                                                              else [(F(-3, 4) * u.rational_value, R.one())])
