"""Exact rationals, angles in Q/Z and elementary number theory.

Python integers are already arbitrary precision and ``fractions.Fraction``
keeps rationals reduced with a positive denominator, so ``Rat`` is simply
an alias.  ``Angle`` adds the reduction modulo 1 used for roots of unity.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import reduce
from typing import Iterable

from .config import CAPS, CapExceeded

Rat = Fraction


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.replace("−", "-"))
    return Fraction(x)


def fmt_rat(x: Fraction) -> str:
    """Decimal-free text form: ``-3/4``, ``5``, ``0``."""
    x = as_rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def lcm(*xs: int) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b) if a and b else 0, xs, 1)


def gcd_rat(xs: Iterable) -> Fraction:
    """Nonnegative generator of the additive subgroup of Q spanned by ``xs``.

    >>> gcd_rat([Fraction(1, 3), Fraction(1, 4)])
    Fraction(1, 12)
    """
    g = Fraction(0)
    for x in xs:
        x = as_rat(x)
        if x == 0:
            continue
        if g == 0:
            g = abs(x)
            continue
        # gcd(a/b, c/d) = gcd(ad, cb) / (bd)
        num = math.gcd(g.numerator * x.denominator, x.numerator * g.denominator)
        g = Fraction(num, g.denominator * x.denominator)
    return g


class Angle:
    """An element of Q/Z, stored as its representative in [0, 1)."""

    __slots__ = ("value",)

    def __init__(self, value=0):
        v = as_rat(value)
        self.value = v - math.floor(v)

    @classmethod
    def root(cls, n: int, k: int = 1) -> "Angle":
        """The angle of exp(2 pi i k / n)."""
        return cls(Fraction(k, n))

    def __add__(self, other) -> "Angle":
        other = other.value if isinstance(other, Angle) else as_rat(other)
        return Angle(self.value + other)

    __radd__ = __add__

    def __neg__(self) -> "Angle":
        return Angle(-self.value)

    def __sub__(self, other) -> "Angle":
        other = other.value if isinstance(other, Angle) else as_rat(other)
        return Angle(self.value - other)

    def __mul__(self, n: int) -> "Angle":
        return Angle(self.value * n)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, Angle):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == Angle(other).value
        return NotImplemented

    def __lt__(self, other: "Angle") -> bool:
        return self.value < other.value

    def __hash__(self) -> int:
        return hash(("angle", self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    @property
    def order(self) -> int:
        return self.value.denominator

    def __repr__(self) -> str:
        return f"Angle({fmt_rat(self.value)})"

    def __str__(self) -> str:
        return fmt_rat(self.value)


# -- primes and factorization ----------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 3.3e24 with the fixed base set."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 64
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of |n| as ``[(p, m), ...]`` with p increasing.

    Trial division by small primes, then Pollard-Brent on a composite
    cofactor.  Every reported prime passes ``is_prime``.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    if n >= CAPS.factor_bound:
        raise CapExceeded(f"|n| = {n} exceeds the factorization bound")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    # wheel over 6k +- 1
    p, step = 7, 4
    while p * p <= n and p < 10**5:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    stack = [n] if n > 1 else []
    rng = random.Random(n)
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_brent(m, rng)
        stack += [d, m // d]
    return sorted(out.items())


def prime_factors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, m in factorize(n):
        divs = [d * p**k for d in divs for k in range(m + 1)]
    return sorted(divs)


def red(n: int) -> int:
    """Product of the distinct primes dividing n (red(1) = 1)."""
    if n < 1:
        raise ValueError("red needs n >= 1")
    return math.prod(prime_factors(n)) if n > 1 else 1


def ered(n: int) -> int:
    """Extended reduction: red(n), doubled when 4 divides n."""
    r = red(n)
    return 2 * r if n % 4 == 0 else r


def cyclotomic_has_unitary_grading(n: int) -> bool:
    """True iff Q(zeta_n)|Q admits a unitary grading: n = 2^a * 3^b, b <= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    while n % 2 == 0:
        n //= 2
    return n in (1, 3)


def multiplicative_order(a: int, n: int) -> int:
    if math.gcd(a, n) != 1:
        raise ValueError("a must be a unit mod n")
    order = n - 1 if is_prime(n) else _euler_phi(n)
    for p, _ in factorize(order):
        while order % p == 0 and pow(a, order // p, n) == 1:
            order //= p
    return order


def _euler_phi(n: int) -> int:
    phi = n
    for p, _ in factorize(n):
        phi -= phi // p
    return phi
