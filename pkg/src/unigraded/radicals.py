"""Radical units in C^x and finitely generated groups Q^x <= U of them.

A radical unit is ``exp(2 pi i t) * prod p^(e_p)`` with rational t and
e_p.  Since Q_+^x is free on the primes, every question about a group
U = Q^x <g_1, ..., g_s> (membership, n-th powers, roots of unity, the
quotient D = U/Q^x) reduces to integer linear algebra in ``zlattice``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .config import InvariantViolation
from .rational import Angle, as_rat, divisors, factorize, fmt_rat, is_prime, lcm, prime_factors
from .zlattice import GroupStructure, congruence_kernel, quotient_structure, solve_diophantine


class NotInGroup(ValueError):
    pass


@dataclass(frozen=True)
class RadicalUnit:
    angle: Angle
    exps: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def make(cls, angle=0, exps: Optional[dict] = None) -> "RadicalUnit":
        a = angle if isinstance(angle, Angle) else Angle(angle)
        items = tuple(sorted((int(p), as_rat(e)) for p, e in (exps or {}).items() if e != 0))
        return cls(a, items)

    @classmethod
    def one(cls) -> "RadicalUnit":
        return cls.make()

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "RadicalUnit":
        """exp(2 pi i k / n)."""
        return cls.make(Fraction(k, n))

    @classmethod
    def radical(cls, p: int, e) -> "RadicalUnit":
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        return cls.make(0, {p: as_rat(e)})

    @classmethod
    def from_rational(cls, q) -> "RadicalUnit":
        q = as_rat(q)
        if q == 0:
            raise ValueError("0 is not a unit")
        exps: dict[int, Fraction] = {}
        for p, m in factorize(q.numerator) if abs(q.numerator) > 1 else []:
            exps[p] = Fraction(m)
        for p, m in factorize(q.denominator) if q.denominator > 1 else []:
            exps[p] = Fraction(-m)
        return cls.make(Fraction(1, 2) if q < 0 else 0, exps)

    @classmethod
    def sqrt_of(cls, q) -> "RadicalUnit":
        """The principal square root of a nonzero rational (i*sqrt|q| if q < 0)."""
        q = as_rat(q)
        base = cls.from_rational(abs(q))
        unit = cls.make(0, {p: e / 2 for p, e in base.exps})
        return unit * cls.make(Fraction(1, 4)) if q < 0 else unit

    @classmethod
    def parse(cls, text: str) -> "RadicalUnit":
        from .expr import parse_unit
        return parse_unit(text)

    @property
    def exp_dict(self) -> dict[int, Fraction]:
        return dict(self.exps)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.exps]

    def __mul__(self, other: "RadicalUnit") -> "RadicalUnit":
        e = self.exp_dict
        for p, x in other.exps:
            e[p] = e.get(p, 0) + x
        return RadicalUnit.make(self.angle + other.angle, e)

    def __truediv__(self, other: "RadicalUnit") -> "RadicalUnit":
        return self * other.inverse()

    def __pow__(self, n: int) -> "RadicalUnit":
        return RadicalUnit.make(self.angle * n, {p: e * n for p, e in self.exps})

    def inverse(self) -> "RadicalUnit":
        return self ** -1

    @property
    def is_real(self) -> bool:
        return self.angle.value in (0, Fraction(1, 2))

    @property
    def is_rational(self) -> bool:
        return self.is_real and all(e.denominator == 1 for _, e in self.exps)

    @property
    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        v = Fraction(1)
        for p, e in self.exps:
            v *= Fraction(p) ** int(e)
        return -v if self.angle.value else v

    def to_complex(self) -> complex:
        import cmath
        mag = math.prod(p ** float(e) for p, e in self.exps)
        return mag * cmath.exp(2j * math.pi * float(self.angle.value))

    def sort_key(self):
        return (self.angle.value, self.exps)

    def __str__(self) -> str:
        """Interchange form ``zeta(k/n)*p^(a/b)*...``; ``-`` for angle 1/2."""
        parts = [f"{p}^({fmt_rat(e)})" if e.denominator != 1 or e < 0 else
                 (f"{p}^{e.numerator}" if e != 1 else str(p)) for p, e in self.exps]
        body = "*".join(parts)
        if self.angle.value == Fraction(1, 2):
            return "-" + (body or "1")
        if self.angle:
            return "*".join([f"zeta({self.angle})"] + parts)
        return body or "1"

    def __repr__(self) -> str:
        return f"RadicalUnit({self})"


def unit_mul(a: RadicalUnit, b: RadicalUnit) -> RadicalUnit:
    return a * b


def unit_pow(a: RadicalUnit, n: int) -> RadicalUnit:
    return a ** n


def unit_inv(a: RadicalUnit) -> RadicalUnit:
    return a.inverse()


# -- groups ---------------------------------------------------------------

@dataclass(frozen=True)
class MembershipCertificate:
    """x = (-1)^half_turns * prod p^prime_exponents[p] * prod g_j^generator_exponents[j]."""

    generator_exponents: tuple[int, ...]
    prime_exponents: tuple[tuple[int, int], ...]
    half_turns: int

    def rational_part(self) -> Fraction:
        v = Fraction(-1 if self.half_turns % 2 else 1)
        for p, z in self.prime_exponents:
            v *= Fraction(p) ** z
        return v

    def reconstruct(self, group: "UnitGroup") -> RadicalUnit:
        u = RadicalUnit.make(Fraction(self.half_turns % 2, 2), dict(self.prime_exponents))
        for g, n in zip(group.generators, self.generator_exponents):
            u = u * g ** n
        return u


@dataclass(frozen=True)
class QuotientPresentation:
    """D = U/Q^x as invariant factors with basis units and a section."""

    structure: GroupStructure
    basis_units: tuple[RadicalUnit, ...]
    rational_powers: tuple[Fraction, ...]

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.structure.invariant_factors

    @property
    def order(self) -> int:
        return self.structure.order

    def section(self, coords: Sequence[int]) -> RadicalUnit:
        u = RadicalUnit.one()
        for b, k in zip(self.basis_units, coords):
            u = u * b ** k
        return u

    def classes(self):
        from itertools import product
        return product(*(range(m) for m in self.invariant_factors))


class UnitGroup:
    """U = Q^x * <generators> inside C^x, stored by its generators."""

    def __init__(self, generators: Sequence[RadicalUnit]):
        gens = {g for g in generators}
        self.generators: tuple[RadicalUnit, ...] = tuple(sorted(gens, key=RadicalUnit.sort_key))
        self.primes: tuple[int, ...] = tuple(sorted({p for g in self.generators for p in g.primes}))

    @classmethod
    def parse(cls, texts) -> "UnitGroup":
        if isinstance(texts, str):
            texts = [t for t in texts.split(";") if t.strip()]
        return cls([RadicalUnit.parse(t) for t in texts])

    def adjoin(self, *units: RadicalUnit) -> "UnitGroup":
        return UnitGroup(self.generators + tuple(units))

    def __repr__(self) -> str:
        return "UnitGroup<Q^x, " + ", ".join(map(str, self.generators)) + ">"

    @property
    def is_real(self) -> bool:
        return all(g.is_real for g in self.generators)

    def _quotient_vectors(self) -> list[tuple[Fraction, ...]]:
        # class of g in D sits in (Q/Z)^primes x (Q / (1/2)Z); the last
        # coordinate is doubled to land in Q/Z
        return [tuple(g.exp_dict.get(p, Fraction(0)) for p in self.primes) + (2 * g.angle.value,)
                for g in self.generators]

    @cached_property
    def presentation(self) -> QuotientPresentation:
        st = quotient_structure(self._quotient_vectors(), len(self.primes) + 1)
        units, powers = [], []
        for combo, m in zip(st.basis, st.invariant_factors):
            u = RadicalUnit.one()
            for g, n in zip(self.generators, combo):
                u = u * g ** n
            um = u ** m
            if not um.is_rational:
                raise InvariantViolation(f"basis unit {u} has irrational power {um}")
            units.append(u)
            powers.append(um.rational_value)
        return QuotientPresentation(st, tuple(units), tuple(powers))

    @cached_property
    def torsion_order(self) -> int:
        s = len(self.generators)
        if s == 0:
            return 2
        M = lcm(1, *(e.denominator for g in self.generators for _, e in g.exps))
        W = [[int(g.exp_dict.get(p, 0) * M) for p in self.primes] for g in self.generators]
        kernel = congruence_kernel(W, M, s)
        m = 2
        for n in kernel:
            a = Angle(sum(nj * g.angle.value for nj, g in zip(n, self.generators)))
            m = lcm(m, a.order)
        return m

    def contains(self, x: RadicalUnit) -> Optional[MembershipCertificate]:
        return contains(self, x)


def _class_order(g: RadicalUnit) -> int:
    """Least m > 0 with g^m rational."""
    d = g.angle.value.denominator
    return lcm(d // math.gcd(2, d), *(e.denominator for _, e in g.exps))


def contains(U: UnitGroup, x: RadicalUnit) -> Optional[MembershipCertificate]:
    """Decide x in U; on success return an exactly re-verified certificate."""
    primes = sorted(set(U.primes) | set(x.primes))
    s, k = len(U.generators), len(primes)
    dens = [e.denominator for g in U.generators for _, e in g.exps]
    dens += [g.angle.value.denominator for g in U.generators]
    dens += [e.denominator for _, e in x.exps] + [x.angle.value.denominator]
    M = lcm(2, *dens)
    # unknowns: n_1..n_s, z_p (p in primes), h  -- h counts half turns
    A, b = [], []
    xe = x.exp_dict
    for i, p in enumerate(primes):
        row = [int(g.exp_dict.get(p, 0) * M) for g in U.generators]
        row += [M if j == i else 0 for j in range(k)] + [0]
        A.append(row)
        b.append(int(xe.get(p, 0) * M))
    A.append([int(g.angle.value * M) for g in U.generators] + [0] * k + [M // 2])
    b.append(int(x.angle.value * M))
    sol = solve_diophantine(A, b, ncols=s + k + 1)
    if sol is None:
        return None
    # shrink n_j modulo the class order of g_j; the change is absorbed by the rational part
    ns = [n % _class_order(g) for n, g in zip(sol[0][:s], U.generators)]
    rest = x
    for g, n in zip(U.generators, ns):
        rest = rest / g ** n
    if not rest.is_rational:
        raise InvariantViolation(f"membership of {x} solved but the remainder {rest} is irrational")
    cert = MembershipCertificate(
        generator_exponents=tuple(ns),
        prime_exponents=tuple((p, int(e)) for p, e in rest.exps),
        half_turns=1 if rest.angle.value else 0,
    )
    if cert.reconstruct(U) != x:
        raise InvariantViolation(f"membership certificate for {x} does not reconstruct")
    return cert


def same_group(U: UnitGroup, V: UnitGroup) -> bool:
    return (all(contains(V, g) is not None for g in U.generators)
            and all(contains(U, g) is not None for g in V.generators))


def is_nth_power(U: UnitGroup, target: RadicalUnit, n: int) -> Optional[RadicalUnit]:
    """A u in U with u^n = target, or None.

    The positive real part of u is forced (|u| = |target|^(1/n)); only the
    n candidate angles (t + k)/n remain, each tested for membership.
    """
    if n < 1:
        raise ValueError("n must be positive")
    exps = {p: e / n for p, e in target.exps}
    for k in range(n):
        cand = RadicalUnit.make((target.angle.value + k) / n, exps)
        if contains(U, cand) is not None:
            return cand
    return None


def torsion_order(U: UnitGroup) -> int:
    """m with U n mu_infinity = mu_m (always even since -1 is in Q^x)."""
    return U.torsion_order


def presentation(U: UnitGroup) -> QuotientPresentation:
    return U.presentation


def class_of(U: UnitGroup, x: RadicalUnit) -> tuple[int, ...]:
    cert = contains(U, x)
    if cert is None:
        raise NotInGroup(f"{x} is not in {U}")
    return U.presentation.structure.coordinates(cert.generator_exponents)


# -- decisions ------------------------------------------------------------

@dataclass(frozen=True)
class OddRootOfUnity:
    p: int
    certificate: MembershipCertificate

    def describe(self) -> str:
        return f"zeta_{self.p} lies in U but not in Q^x (extension not essential)"


@dataclass(frozen=True)
class MinusFourIsFourthPower:
    u: RadicalUnit
    certificate: MembershipCertificate

    def describe(self) -> str:
        return f"i lies in U and u = {self.u} in U has u^4 = -4"


@dataclass(frozen=True)
class KneserVerdict:
    is_field: bool
    reason: OddRootOfUnity | MinusFourIsFourthPower | None = None

    def __str__(self) -> str:
        return "Field" if self.is_field else f"NotField({self.reason.describe()})"


def is_essential(U: UnitGroup) -> tuple[bool, Optional[OddRootOfUnity]]:
    """Q^x <= U is essential iff the roots of unity in U form a 2-group."""
    m = U.torsion_order
    odd = [p for p in prime_factors(m) if p != 2] if m > 1 else []
    if not odd:
        return True, None
    p = odd[0]
    cert = contains(U, RadicalUnit.zeta(p))
    if cert is None:
        raise InvariantViolation(f"torsion order {m} but zeta_{p} not found")
    return False, OddRootOfUnity(p, cert)


MINUS_FOUR = RadicalUnit.from_rational(-4)


def kneser_decide(U: UnitGroup) -> KneserVerdict:
    """Q<U> is a field iff Q^x <= U is essential and, when i is in U,
    -4 is not a fourth power in U."""
    ok, witness = is_essential(U)
    if not ok:
        return KneserVerdict(False, witness)
    if U.torsion_order % 4 == 0:
        u = is_nth_power(U, MINUS_FOUR, 4)
        if u is not None:
            return KneserVerdict(False, MinusFourIsFourthPower(u, contains(U, u)))
    return KneserVerdict(True)


def sqrt_in_field(U: UnitGroup, a) -> bool:
    """Whether sqrt(a) lies in the field Q<U> (which must be a field).

    If sqrt(a) is not already in U, Q<U, sqrt(a)> = Q<U>[X]/(X^2 - a), which
    is a field exactly when sqrt(a) is not in Q<U>; the Kneser test decides it.
    """
    a = as_rat(a)
    r = RadicalUnit.sqrt_of(a)
    if contains(U, r) is not None:
        return True
    return not kneser_decide(U.adjoin(r)).is_field


def _pstar(p: int) -> int:
    return p if p % 4 == 1 else -p


def root_of_unity_in_field(U: UnitGroup, p: int) -> Optional[bool]:
    """Whether zeta_p (p odd prime) lies in the field Q<U>; None if undecided."""
    if U.torsion_order % p == 0:
        return True
    if U.is_real:
        return False
    if U.presentation.order % (p - 1):
        return False
    if p == 3:
        return sqrt_in_field(U, -3)
    if not sqrt_in_field(U, _pstar(p)):
        return False
    return None


class Answer(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TriVerdict:
    answer: Answer
    reason: str
    details: dict = field(default_factory=dict)

    def __str__(self) -> str:
        return f"{self.answer.value}: {self.reason}"


def cogalois_decide(U: UnitGroup) -> TriVerdict:
    """Three-valued co-Galois decision for Q^x <= U."""
    kv = kneser_decide(U)
    if not kv.is_field:
        return TriVerdict(Answer.NO, "Q<U> is not a field", {"kneser": kv})
    D = U.presentation
    if D.structure.exponent % 4 == 0:
        if U.torsion_order % 4 == 0:
            return TriVerdict(Answer.NO, "i lies in U while 4 divides exp(D)")
        if not U.is_real and sqrt_in_field(U, -1):
            return TriVerdict(Answer.NO, "i lies in Q<U> while 4 divides exp(D)")
    undecided = []
    for p in prime_factors(D.order) if D.order > 1 else []:
        if p == 2:
            continue
        st = root_of_unity_in_field(U, p)
        if st:
            return TriVerdict(Answer.NO, f"zeta_{p} lies in Q<U> while {p} divides |D|", {"p": p})
        if st is None:
            undecided.append(p)
    if undecided:
        return TriVerdict(Answer.UNKNOWN, "cannot decide zeta_p in Q<U> for p in "
                          + ", ".join(map(str, undecided)), {"primes": undecided})
    return TriVerdict(Answer.YES, "real radical group" if U.is_real else "all criterion conditions certified")


def abs_cogalois_decide(U: UnitGroup) -> TriVerdict:
    """Three-valued decision whether the field Q<U> is absolutely co-Galois over Q."""
    kv = kneser_decide(U)
    if not kv.is_field:
        return TriVerdict(Answer.NO, "Q<U> is not a field", {"kneser": kv})
    if U.is_real:
        return TriVerdict(Answer.YES, "real radical group")
    if U.torsion_order % 4 == 0:
        return TriVerdict(Answer.NO, "i lies in U but not in Q")
    if sqrt_in_field(U, -1):
        return TriVerdict(Answer.NO, "i lies in Q<U> but not in Q")
    n = U.presentation.order
    undecided = []
    for d in divisors(n):
        p = d + 1
        if p == 2 or not is_prime(p):
            continue
        st = root_of_unity_in_field(U, p)
        if st:
            return TriVerdict(Answer.NO, f"zeta_{p} lies in Q<U>, so Tor(L^x|Q^x) is not essential", {"p": p})
        if st is None:
            undecided.append(p)
    if undecided:
        return TriVerdict(Answer.UNKNOWN, "cannot decide zeta_p in Q<U> for p in "
                          + ", ".join(map(str, undecided)), {"primes": undecided})
    return TriVerdict(Answer.YES, "no odd roots of unity and no i in Q<U>")
