"""Exact arithmetic in the graded algebra Q<U> = sum over d in D of Q x_d.

Representatives x_d come from the section of the quotient presentation:
x_d = prod u_i^(k_i) with 0 <= k_i < m_i.  Multiplying two of them only
produces carries, and each carry in coordinate i contributes the rational
number r_i = u_i^(m_i).  So Q<U> is the tensor product of the truncated
algebras Q[X_i]/(X_i^(m_i) - r_i), and elements are sparse maps from
coordinate tuples to Fractions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .config import CAPS, CapExceeded, InvariantViolation
from .radicals import (Answer, KneserVerdict, MinusFourIsFourthPower, OddRootOfUnity, RadicalUnit,
                       UnitGroup, class_of, cogalois_decide, contains)
from .rational import as_rat, fmt_rat
from .zlattice import quotient_structure

Poly = list  # dense list of Fractions, constant term first


class AlgebraElement:
    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: "GradedAlgebra", coeffs: dict):
        self.algebra = algebra
        self.coeffs = {d: c for d, c in coeffs.items() if c != 0}

    @property
    def support(self) -> list[tuple[int, ...]]:
        return sorted(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_homogeneous(self) -> bool:
        return len(self.coeffs) == 1

    def coefficient(self, d) -> Fraction:
        return self.coeffs.get(tuple(d), Fraction(0))

    def _lift(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            return other
        return self.algebra.scalar(other)

    def __add__(self, other) -> "AlgebraElement":
        other = self._lift(other)
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out.get(d, 0) + c
        return AlgebraElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {d: -c for d, c in self.coeffs.items()})

    def __sub__(self, other) -> "AlgebraElement":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "AlgebraElement":
        return self._lift(other) - self

    def __mul__(self, other) -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            c = as_rat(other)
            return AlgebraElement(self.algebra, {d: c * a for d, a in self.coeffs.items()})
        return self.algebra.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "AlgebraElement":
        return self * (1 / as_rat(c))

    def __pow__(self, n: int) -> "AlgebraElement":
        if n < 0:
            inv = invert(self.algebra, self)
            if inv is None:
                raise ZeroDivisionError("element is a zero divisor")
            return inv ** -n
        result, base = self.algebra.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgebraElement):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == self.algebra.scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{fmt_rat(c)}*x{list(d)}" for d, c in sorted(self.coeffs.items()))


class GradedAlgebra:
    """Q<U> for a unit group U, with lazily memoized cocycle values."""

    def __init__(self, group: UnitGroup):
        pres = group.presentation
        if pres.order > CAPS.algebra_dim:
            raise CapExceeded(f"|D| = {pres.order} exceeds the algebra dimension cap {CAPS.algebra_dim}")
        self.group = group
        self.pres = pres
        self.moduli: tuple[int, ...] = pres.invariant_factors
        self.dimension: int = pres.order
        self._cocycle: dict = {}

    @property
    def zero_class(self) -> tuple[int, ...]:
        return (0,) * len(self.moduli)

    def classes(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(m) for m in self.moduli)))

    def add_classes(self, d, e) -> tuple[int, ...]:
        return tuple((a + b) % m for a, b, m in zip(d, e, self.moduli))

    def cocycle(self, d, e) -> Fraction:
        """a_{d,e} with x_d x_e = a_{d,e} x_{d+e}."""
        key = (d, e)
        v = self._cocycle.get(key)
        if v is None:
            v = Fraction(1)
            for a, b, m, r in zip(d, e, self.moduli, self.pres.rational_powers):
                if a + b >= m:
                    v *= r
            self._cocycle[key] = v
        return v

    def scalar(self, c) -> AlgebraElement:
        return AlgebraElement(self, {self.zero_class: as_rat(c)})

    def one(self) -> AlgebraElement:
        return self.scalar(1)

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def basis_element(self, d) -> AlgebraElement:
        return AlgebraElement(self, {tuple(d): Fraction(1)})

    def representative(self, d) -> RadicalUnit:
        return self.pres.section(d)

    def embed(self, unit: RadicalUnit) -> AlgebraElement:
        """The homogeneous element of Q<U> given by a unit of U."""
        d = class_of(self.group, unit)
        a = (unit / self.representative(d)).rational_value
        return AlgebraElement(self, {d: a})

    def from_terms(self, terms: Iterable[tuple[Fraction, RadicalUnit]]) -> AlgebraElement:
        out = self.zero()
        for c, u in terms:
            out = out + self.embed(u) * c
        return out

    def mul(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        out: dict = {}
        for d, a in x.coeffs.items():
            for e, b in y.coeffs.items():
                k = self.add_classes(d, e)
                out[k] = out.get(k, 0) + a * b * self.cocycle(d, e)
        return AlgebraElement(self, out)

    @cached_property
    def cogalois(self):
        return cogalois_decide(self.group)

    def random_element(self, rng: random.Random, terms: int = 3, bound: int = 5) -> AlgebraElement:
        classes = self.classes()
        out = {}
        for d in rng.sample(classes, min(terms, len(classes))):
            c = 0
            while c == 0:
                c = rng.randint(-bound, bound)
            out[d] = Fraction(c, rng.randint(1, 3))
        return AlgebraElement(self, out)


def build(U: UnitGroup) -> GradedAlgebra:
    return GradedAlgebra(U)


def mul(A: GradedAlgebra, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return A.mul(x, y)


def add(A: GradedAlgebra, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x + y


def negate(A: GradedAlgebra, x: AlgebraElement) -> AlgebraElement:
    return -x


# -- polynomials ----------------------------------------------------------

def poly_eval(A: GradedAlgebra, poly: Sequence, x: AlgebraElement) -> AlgebraElement:
    """Horner evaluation of a dense coefficient list at x."""
    out = A.zero()
    for c in reversed(poly):
        out = out * x + A.scalar(c)
    return out


def poly_str(poly: Sequence) -> str:
    parts = []
    for k in range(len(poly) - 1, -1, -1):
        c = as_rat(poly[k])
        if c == 0:
            continue
        mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
        if mono and abs(c) == 1:
            s = mono
        else:
            s = fmt_rat(abs(c)) + ("*" + mono if mono else "")
        sign = "-" if c < 0 else "+"
        parts.append((sign, s))
    if not parts:
        return "0"
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return " ".join([head] + [f"{sg} {s}" for sg, s in parts[1:]])


def min_poly(A: GradedAlgebra, x: AlgebraElement) -> Poly:
    """Monic minimal polynomial of x, constant term first.

    Powers 1, x, x^2, ... are reduced one at a time against the rows found
    so far, each row remembering which combination of powers it is.  The
    first power that reduces to zero gives the least-degree relation.
    """
    rows: list[tuple[tuple, dict, list]] = []  # (pivot, vector, combination)
    power = A.one()
    for k in range(A.dimension + 1):
        vec = dict(power.coeffs)
        comb = [Fraction(0)] * k + [Fraction(1)]
        for piv, rvec, rcomb in rows:
            c = vec.get(piv)
            if c:
                for d, a in rvec.items():
                    v = vec.get(d, 0) - c * a
                    if v:
                        vec[d] = v
                    else:
                        vec.pop(d, None)
                for j, a in enumerate(rcomb):
                    comb[j] -= c * a
        if not vec:
            return comb
        piv = min(vec)
        inv = 1 / vec[piv]
        rows.append((piv, {d: a * inv for d, a in vec.items()}, [a * inv for a in comb]))
        power = power * x
    raise InvariantViolation("power sequence did not become dependent within dim + 1 steps")


def invert(A: GradedAlgebra, x: AlgebraElement) -> Optional[AlgebraElement]:
    """x^{-1}, or None when x is a zero divisor.

    With m(X) = X*g(X) + m(0) the minimal polynomial, x*g(x) = -m(0); if
    m(0) = 0 then g(x) is a nonzero annihilator of x.
    """
    if x.is_zero():
        raise ZeroDivisionError("cannot invert 0")
    m = min_poly(A, x)
    if m[0] == 0:
        return None
    y = poly_eval(A, m[1:], x) * (-1 / m[0])
    if A.mul(x, y) != A.one():
        raise InvariantViolation("inverse check failed")
    return y


def annihilator(A: GradedAlgebra, x: AlgebraElement) -> Optional[AlgebraElement]:
    """A nonzero y with x*y = 0 if x is a zero divisor, else None."""
    m = min_poly(A, x)
    if m[0] != 0:
        return None
    return poly_eval(A, m[1:], x)


# -- witnesses ------------------------------------------------------------

def zero_divisor_witness(A: GradedAlgebra, verdict) -> tuple[AlgebraElement, AlgebraElement]:
    """Nonzero a, b in Q<U> with a*b = 0, built from a NotField reason."""
    reason = verdict.reason if isinstance(verdict, KneserVerdict) else verdict
    if isinstance(verdict, KneserVerdict) and verdict.is_field:
        raise ValueError("the algebra is a field; no zero divisors exist")
    if isinstance(reason, OddRootOfUnity):
        z = A.embed(RadicalUnit.zeta(reason.p))
        a = A.one() - z
        b, zk = A.zero(), A.one()
        for _ in range(reason.p):
            b = b + zk
            zk = zk * z
    elif isinstance(reason, MinusFourIsFourthPower):
        u = A.embed(reason.u)
        u2 = u * u
        a = u2 - u * 2 + 2
        b = u2 + u * 2 + 2
    else:
        raise ValueError(f"not a NotField reason: {reason!r}")
    if a.is_zero() or b.is_zero() or not A.mul(a, b).is_zero():
        raise InvariantViolation("zero-divisor witness does not validate")
    return a, b


def idempotent_split_check(A: GradedAlgebra, u: RadicalUnit) -> AlgebraElement:
    """e = (u + 2)(u^2 - 2u + 2)/8 for u in U with u^4 = -4; checks e^2 = e."""
    if u ** 4 != RadicalUnit.from_rational(-4) or contains(A.group, u) is None:
        raise ValueError(f"{u} is not a fourth root of -4 in U")
    x = A.embed(u)
    e = (x + 2) * (x * x - x * 2 + 2) / 8
    if e * e != e or e.is_zero() or e == A.one():
        raise InvariantViolation("idempotent split failed")
    return e


# -- degrees and subfields ------------------------------------------------

@dataclass(frozen=True)
class DegreeResult:
    degree: int
    method: str  # "SupportFormula" or "MinPoly"


def support_order(A: GradedAlgebra, x: AlgebraElement) -> int:
    """Order of the subgroup of D generated by supp x."""
    vecs = [tuple(Fraction(k, m) for k, m in zip(d, A.moduli)) for d in x.support]
    return quotient_structure(vecs, len(A.moduli)).order if vecs else 1


def degree_of(A: GradedAlgebra, x: AlgebraElement) -> DegreeResult:
    """[Q[x]:Q], by the support formula when U is certified co-Galois."""
    if A.cogalois.answer is Answer.YES:
        return DegreeResult(support_order(A, x), "SupportFormula")
    return DegreeResult(len(min_poly(A, x)) - 1, "MinPoly")


@dataclass(frozen=True)
class Subgroup:
    generators: tuple[tuple[int, ...], ...]
    order: int


def _in_triangular(rows: list[list[int]], v: list[int]) -> bool:
    # rows are upper triangular with positive pivots on their leading column
    v = list(v)
    for r in rows:
        j = next(i for i, a in enumerate(r) if a)
        if v[j] % r[j]:
            return False
        c = v[j] // r[j]
        if c:
            v = [a - c * b for a, b in zip(v, r)]
    return not any(v)


def subgroups(moduli: Sequence[int]) -> list[Subgroup]:
    """All subgroups of Z/m_1 + ... + Z/m_t.

    Subgroups correspond to lattices between diag(m) Z^t and Z^t; each is
    listed once through its Hermite normal form, built from the last row up.
    """
    t = len(moduli)
    total = 1
    for m in moduli:
        total *= m
    out: list[Subgroup] = []

    def rec(i: int, rows: list[list[int]]):
        if i < 0:
            gens = []
            for r in rows:
                g = tuple(a % m for a, m in zip(r, moduli))
                if any(g):
                    gens.append(g)
            idx = 1
            for r, j in zip(rows, range(t)):
                idx *= r[j]
            out.append(Subgroup(tuple(gens), total // idx))
            return
        m = moduli[i]
        for h in (d for d in range(1, m + 1) if m % d == 0):
            ranges = [range(rows[k][i + 1 + k]) for k in range(len(rows))]
            for tail in itertools.product(*ranges):
                row = [0] * i + [h] + list(tail)
                # m e_i must lie in the lattice spanned by this row and those below
                c = m // h
                rest = [-c * a for a in row]
                rest[i] += m
                if _in_triangular(rows, rest):
                    rec(i - 1, [row] + rows)

    rec(t - 1, [])
    return out


def subfield_lattice(A: GradedAlgebra) -> list[Subgroup]:
    if A.dimension > CAPS.subgroup_enum:
        raise CapExceeded(f"|D| = {A.dimension} exceeds the subgroup enumeration cap {CAPS.subgroup_enum}")
    return subgroups(A.moduli)


# -- numerics -------------------------------------------------------------

@dataclass(frozen=True)
class ComplexInterval:
    """Rectangular enclosure; endpoints are mpmath mpf at the working precision."""

    re_lo: object
    re_hi: object
    im_lo: object
    im_hi: object
    precision: int

    @property
    def mid(self) -> complex:
        return complex(float((self.re_lo + self.re_hi) / 2), float((self.im_lo + self.im_hi) / 2))

    def midpoint(self):
        """(re, im) midpoints as mpf, at the enclosure's precision."""
        from mpmath import mp
        with mp.workprec(self.precision):
            return (self.re_lo + self.re_hi) / 2, (self.im_lo + self.im_hi) / 2

    @property
    def radius(self):
        from mpmath import mp
        with mp.workprec(self.precision):
            return max(self.re_hi - self.re_lo, self.im_hi - self.im_lo) / 2

    def contains(self, z, slack=0) -> bool:
        from mpmath import mp
        with mp.workprec(self.precision):
            z = mp.mpc(z)
            return (self.re_lo - slack <= z.real <= self.re_hi + slack
                    and self.im_lo - slack <= z.imag <= self.im_hi + slack)


def _iv_unit(iv, unit: RadicalUnit):
    mag = iv.mpf(1)
    for p, e in unit.exps:
        mag *= iv.exp(iv.log(iv.mpf(p)) * iv.mpf(e.numerator) / e.denominator)
    theta = 2 * iv.pi * iv.mpf(unit.angle.value.numerator) / unit.angle.value.denominator
    return mag * iv.cos(theta), mag * iv.sin(theta)


def complex_eval(A: GradedAlgebra, x: AlgebraElement, precision: int = 64) -> ComplexInterval:
    """Enclosure of x under the standard embedding p^(a/b) -> exp((a/b) ln p).

    Interval arithmetic runs 16 guard bits above ``precision``, so every
    term's enclosure is far tighter than 2^(1 - precision).
    """
    from mpmath import iv, mp
    work = precision + 16
    old = iv.prec
    iv.prec = work
    try:
        re, im = iv.mpf(0), iv.mpf(0)
        for d, c in x.coeffs.items():
            ur, ui = _iv_unit(iv, A.representative(d))
            cf = iv.mpf(c.numerator) / c.denominator
            re += cf * ur
            im += cf * ui
    finally:
        iv.prec = old
    with mp.workprec(work):
        return ComplexInterval(mp.mpf(re.a), mp.mpf(re.b), mp.mpf(im.a), mp.mpf(im.b), work)


def _mp_unit(mp, unit: RadicalUnit):
    v = mp.mpf(1)
    for p, e in unit.exps:
        v *= mp.power(p, mp.mpf(e.numerator) / e.denominator)
    return v * mp.expjpi(2 * mp.mpf(unit.angle.value.numerator) / unit.angle.value.denominator)


def conjugate_matrix(A: GradedAlgebra, precision: int = 128):
    """|D| x |D| matrix M[chi][d] = chi(d) * x_d evaluated numerically.

    The rows are the |D| algebra maps Q<U> -> C sending u_i to the other
    m_i-th roots of r_i; row 0 is the standard embedding.
    """
    from mpmath import mp
    classes = A.classes()
    with mp.workprec(precision):
        vals = [_mp_unit(mp, A.representative(d)) for d in classes]
        M = mp.matrix(len(classes), len(classes))
        for r, chi in enumerate(classes):
            for c, d in enumerate(classes):
                s = sum(Fraction(a * b, m) for a, b, m in zip(chi, d, A.moduli))
                M[r, c] = mp.expjpi(2 * mp.mpf(s.numerator) / s.denominator) * vals[c]
    return M


def smallest_singular_value(A: GradedAlgebra, precision: int = 128):
    from mpmath import mp
    with mp.workprec(precision):
        M = conjugate_matrix(A, precision)
        S = mp.svd_c(M, compute_uv=False)
        return min(S[i] for i in range(S.rows))


def integer_relation(A: GradedAlgebra, precision: int = 128, maxcoeff: int = 10**4):
    """PSLQ search for an integer relation among the real values x_d.

    A candidate is kept only if it still vanishes at four times the
    precision; PSLQ near its precision limit returns spurious relations.
    Returns the relation or None.
    """
    from mpmath import mp
    classes = A.classes()
    if len(classes) < 2:
        return None
    with mp.workprec(precision):
        vals = [mp.re(_mp_unit(mp, A.representative(d))) for d in classes]
        tiny = mp.mpf(2) ** (-precision // 2)
        zero = next((k for k, v in enumerate(vals) if abs(v) < tiny), None)
        if zero is not None:
            rel = [int(k == zero) for k in range(len(vals))]
        else:
            rel = mp.pslq(vals, maxcoeff=maxcoeff, maxsteps=10**5)
    if rel is None:
        return None
    with mp.workprec(4 * precision):
        vals = [mp.re(_mp_unit(mp, A.representative(d))) for d in classes]
        resid = abs(mp.fsum(c * v for c, v in zip(rel, vals)))
        if resid > mp.mpf(2) ** (-3 * precision):
            return None
    return rel
