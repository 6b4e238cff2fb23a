"""Recursive-descent parser for sums of radical terms.

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' '(' signed-rat ')' | '^' ['-'] INT)?
    base   := INT ['/' INT] | 'i' | 'zeta' '(' INT ['/' INT] ')'
            | 'sqrt' '(' signed-rat ')' | 'root' '(' INT ',' signed-rat ')'
            | '(' expr ')'

``zeta(n)`` is exp(2 pi i/n) and ``zeta(k/n)`` is exp(2 pi i k/n).  A
parenthesized exponent on a prime makes a radical atom ``p^(a/b)``; any
other power is ordinary repeated multiplication.  Normalization expands
everything into terms (coefficient, RadicalUnit).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .radicals import RadicalUnit
from .rational import factorize, fmt_rat, is_prime


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"at position {pos}: {message}")
        self.pos = pos
        self.message = message


# -- AST ------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction

    def __str__(self):
        return fmt_rat(self.value) if self.value >= 0 else f"({fmt_rat(self.value)})"


@dataclass(frozen=True)
class Imag:
    def __str__(self):
        return "i"


@dataclass(frozen=True)
class Zeta:
    angle: Fraction  # as written, k/n

    def __str__(self):
        a = self.angle
        return f"zeta({a.denominator})" if a.numerator == 1 else f"zeta({a.numerator}/{a.denominator})"


@dataclass(frozen=True)
class Root:
    k: int
    arg: Fraction

    def __str__(self):
        return f"sqrt({fmt_rat(self.arg)})" if self.k == 2 else f"root({self.k}, {fmt_rat(self.arg)})"


@dataclass(frozen=True)
class Power:
    base: "Node"
    exp: Fraction
    atom: bool  # prime^(rational) radical atom

    def __str__(self):
        b = str(self.base)
        if isinstance(self.base, (Sum, Product, Power)) or (isinstance(self.base, Num) and self.base.value.denominator != 1):
            b = f"({b})"
        if self.atom or self.exp.denominator != 1:
            return f"{b}^({fmt_rat(self.exp)})"
        return f"{b}^{self.exp.numerator}"


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __str__(self):
        return "*".join(f"({f})" if isinstance(f, Sum) else str(f) for f in self.factors)


@dataclass(frozen=True)
class Sum:
    terms: tuple  # of (sign, node), sign in {+1, -1}

    def __str__(self):
        out = []
        for k, (s, t) in enumerate(self.terms):
            body = f"({t})" if isinstance(t, Sum) else str(t)
            if k == 0:
                out.append(body if s > 0 else f"-{body}")
            else:
                out.append(f"{'+' if s > 0 else '-'} {body}")
        return " ".join(out)


Node = Union[Num, Imag, Zeta, Root, Power, Product, Sum]


# -- lexer and parser -----------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    text = text.replace("−", "-")
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == m.start() or not m.group(0).strip():
            break
        if m.group(1):
            out.append(("INT", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("NAME", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in "+-*/^(),":
                raise ParseError(f"unexpected character {ch!r}", m.start(3))
            out.append((ch, ch, m.start(3)))
        pos = m.end()
    out.append(("END", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def eat(self, kind: str):
        t = self.tok
        if t[0] != kind:
            want = "end of input" if kind == "END" else repr(kind)
            got = "end of input" if t[0] == "END" else repr(t[1])
            raise ParseError(f"expected {want}, got {got}", t[2])
        self.i += 1
        return t

    def accept(self, kind: str) -> bool:
        if self.tok[0] == kind:
            self.i += 1
            return True
        return False

    def parse(self) -> Node:
        node = self.expr()
        self.eat("END")
        return node

    def expr(self) -> Node:
        terms = []
        sign = 1
        if self.tok[0] in ("+", "-"):
            sign = -1 if self.eat(self.tok[0])[0] == "-" else 1
        terms.append((sign, self.term()))
        while self.tok[0] in ("+", "-"):
            sign = 1 if self.eat(self.tok[0])[0] == "+" else -1
            terms.append((sign, self.term()))
        return terms[0][1] if len(terms) == 1 and terms[0][0] == 1 else Sum(tuple(terms))

    def term(self) -> Node:
        factors = [self.factor()]
        while self.accept("*"):
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def integer(self) -> int:
        return int(self.eat("INT")[1])

    def rational(self, signed: bool) -> Fraction:
        neg = False
        if signed and self.tok[0] in ("+", "-"):
            neg = self.eat(self.tok[0])[0] == "-"
        num = self.integer()
        den = 1
        if self.tok[0] == "/":
            pos = self.eat("/")[2]
            den = self.integer()
            if den == 0:
                raise ParseError("zero denominator", pos + 1)
        r = Fraction(num, den)
        return -r if neg else r

    def factor(self) -> Node:
        start = self.tok[2]
        base = self.base()
        if not self.accept("^"):
            return base
        pos = self.tok[2]
        if self.accept("("):
            e = self.rational(signed=True)
            self.eat(")")
            paren = True
        else:
            neg = self.accept("-")
            e = Fraction(-self.integer() if neg else self.integer())
            paren = False
        prime_base = isinstance(base, Num) and base.value.denominator == 1 and is_prime(base.value.numerator)
        if e.denominator != 1 and not prime_base:
            raise ParseError("a fractional exponent needs a prime integer base (use sqrt or root)", start)
        if e < 0 and isinstance(base, Num) and base.value == 0:
            raise ParseError("zero to a negative power", pos)
        return Power(base, e, paren and prime_base)

    def base(self) -> Node:
        kind, val, pos = self.tok
        if kind == "INT":
            return Num(self.rational(signed=False))
        if kind == "(":
            self.eat("(")
            node = self.expr()
            self.eat(")")
            return node
        if kind == "NAME":
            self.i += 1
            if val == "i":
                return Imag()
            if val == "zeta":
                self.eat("(")
                a = self.rational(signed=False)
                self.eat(")")
                if a.numerator == 0:
                    raise ParseError("zeta needs a positive order", pos)
                # zeta(n) is an order-n root; zeta(k/n) is the angle k/n
                return Zeta(Fraction(1, int(a)) if a.denominator == 1 else a)
            if val == "sqrt":
                self.eat("(")
                r = self.rational(signed=True)
                self.eat(")")
                return Root(2, r)
            if val == "root":
                self.eat("(")
                k = self.integer()
                self.eat(",")
                r = self.rational(signed=True)
                self.eat(")")
                if k < 1:
                    raise ParseError("root index must be positive", pos)
                if r < 0 and k % 2 == 0:
                    raise ParseError("even root of a negative number", pos)
                return Root(k, r)
            raise ParseError(f"unknown name {val!r}", pos)
        if kind == "END":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {val!r}", pos)


def parse(text: str) -> Node:
    return _Parser(text).parse()


# -- normalization --------------------------------------------------------

Terms = dict  # RadicalUnit -> Fraction


def _radical_of(r: Fraction, k: int) -> Terms:
    """root(k, r) as a single radical atom (sign folded into the angle)."""
    if r == 0:
        return {}
    exps: dict[int, Fraction] = {}
    for p, m in factorize(r.numerator) if abs(r.numerator) > 1 else []:
        exps[p] = Fraction(m, k)
    for p, m in factorize(r.denominator) if r.denominator > 1 else []:
        exps[p] = Fraction(-m, k)
    angle = Fraction(0)
    if r < 0:
        angle = Fraction(1, 4) if k == 2 else Fraction(1, 2)
    return {RadicalUnit.make(angle, exps): Fraction(1)}


def _mul(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    for u, c in a.items():
        for v, d in b.items():
            w = u * v
            out[w] = out.get(w, 0) + c * d
    return {u: c for u, c in out.items() if c}


def _eval(node: Node) -> Terms:
    one = RadicalUnit.one()
    if isinstance(node, Num):
        return {one: node.value} if node.value else {}
    if isinstance(node, Imag):
        return {RadicalUnit.make(Fraction(1, 4)): Fraction(1)}
    if isinstance(node, Zeta):
        return {RadicalUnit.make(node.angle): Fraction(1)}
    if isinstance(node, Root):
        return _radical_of(node.arg, node.k)
    if isinstance(node, Power):
        if node.atom or node.exp.denominator != 1:
            return {RadicalUnit.radical(node.base.value.numerator, node.exp): Fraction(1)}
        base = _eval(node.base)
        n = node.exp.numerator
        if n < 0:
            if len(base) != 1:
                raise ValueError("negative powers are only allowed on single terms")
            (u, c), = base.items()
            base, n = {u.inverse(): 1 / c}, -n
        out: Terms = {one: Fraction(1)}
        for _ in range(n):
            out = _mul(out, base)
        return out
    if isinstance(node, Product):
        out = {one: Fraction(1)}
        for f in node.factors:
            out = _mul(out, _eval(f))
        return out
    if isinstance(node, Sum):
        out: Terms = {}
        for s, t in node.terms:
            for u, c in _eval(t).items():
                out[u] = out.get(u, 0) + s * c
        return {u: c for u, c in out.items() if c}
    raise TypeError(node)


def normalize(node: Node) -> list[tuple[Fraction, RadicalUnit]]:
    """Canonical term list: rational units folded into coefficients, like units merged, sorted."""
    merged: Terms = {}
    for u, c in _eval(node).items():
        if u.is_rational:
            c, u = c * u.rational_value, RadicalUnit.one()
        merged[u] = merged.get(u, 0) + c
    return [(c, u) for u, c in sorted(merged.items(), key=lambda t: t[0].sort_key()) if c]


def parse_terms(text: str) -> list[tuple[Fraction, RadicalUnit]]:
    return normalize(parse(text))


def parse_unit(text: str) -> RadicalUnit:
    """A single-term expression as one unit, its coefficient absorbed."""
    terms = parse_terms(text)
    if len(terms) != 1:
        raise ParseError(f"expected a single nonzero term, got {len(terms)} terms", 0)
    c, u = terms[0]
    return RadicalUnit.from_rational(c) * u


def unit_text(u: RadicalUnit) -> str:
    """Unit as expression text: zeta(k/n) for any nonzero angle, p^(e) for every prime."""
    parts = [f"zeta({u.angle.value.numerator}/{u.angle.value.denominator})"] if u.angle else []
    parts += [f"{p}^({fmt_rat(e)})" for p, e in u.exps]
    return "*".join(parts)


def format_terms(terms) -> str:
    """Expression text that parses back to the same term list."""
    if not terms:
        return "0"
    out = []
    for k, (c, u) in enumerate(terms):
        body = unit_text(u)
        mag = abs(c)
        if not body:
            text = fmt_rat(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{fmt_rat(mag)}*{body}"
        sign = "-" if c < 0 else "+"
        out.append(("-" if c < 0 else "") + text if k == 0 else f"{sign} {text}")
    return " ".join(out)


# -- numerics -------------------------------------------------------------

def ast_value(node: Node, mp):
    """Direct numerical value of the AST in the given mpmath context."""
    if isinstance(node, Num):
        return mp.mpf(node.value.numerator) / node.value.denominator
    if isinstance(node, Imag):
        return mp.mpc(0, 1)
    if isinstance(node, Zeta):
        return mp.expjpi(2 * mp.mpf(node.angle.numerator) / node.angle.denominator)
    if isinstance(node, Root):
        r = mp.mpf(node.arg.numerator) / node.arg.denominator
        if r >= 0:
            return mp.root(r, node.k)
        if node.k == 2:
            return mp.mpc(0, 1) * mp.sqrt(-r)
        return -mp.root(-r, node.k)
    if isinstance(node, Power):
        if node.atom or node.exp.denominator != 1:
            return mp.power(node.base.value.numerator, mp.mpf(node.exp.numerator) / node.exp.denominator)
        return ast_value(node.base, mp) ** node.exp.numerator
    if isinstance(node, Product):
        v = mp.mpf(1)
        for f in node.factors:
            v = v * ast_value(f, mp)
        return v
    if isinstance(node, Sum):
        return mp.fsum(s * ast_value(t, mp) for s, t in node.terms)
    raise TypeError(node)


def terms_value(terms, mp):
    total = mp.mpc(0)
    for c, u in terms:
        v = mp.mpf(c.numerator) / c.denominator
        for p, e in u.exps:
            v *= mp.power(p, mp.mpf(e.numerator) / e.denominator)
        total += v * mp.expjpi(2 * mp.mpf(u.angle.value.numerator) / u.angle.value.denominator)
    return total
