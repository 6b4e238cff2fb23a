"""Prime fields F_q, their extensions L = F_(q^n), and unitary gradings of L|F_q.

Everything is computed with actual field elements (coefficient tuples
modulo a fixed irreducible polynomial).  Cyclic-group facts are used only
to locate generators of small subgroups; the subgroups themselves are
enumerated element by element.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .config import CAPS, CapExceeded
from .rational import ered, factorize, is_prime, prime_factors


class HypothesisViolation(ValueError):
    pass


# -- polynomials over F_p -------------------------------------------------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


class FFPoly:
    """Dense polynomial over F_p, constant term first."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence[int]):
        self.p = p
        self.coeffs = tuple(_trim([c % p for c in coeffs]))

    @classmethod
    def x(cls, p: int) -> "FFPoly":
        return cls(p, [0, 1])

    @classmethod
    def const(cls, p: int, c: int) -> "FFPoly":
        return cls(p, [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def monic(self) -> "FFPoly":
        inv = pow(self.coeffs[-1], -1, self.p)
        return FFPoly(self.p, [c * inv for c in self.coeffs])

    def __add__(self, other: "FFPoly") -> "FFPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return FFPoly(self.p, [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def __neg__(self) -> "FFPoly":
        return FFPoly(self.p, [-c for c in self.coeffs])

    def __sub__(self, other: "FFPoly") -> "FFPoly":
        return self + (-other)

    def __mul__(self, other: "FFPoly") -> "FFPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return FFPoly(self.p, [])
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return FFPoly(self.p, out)

    def __divmod__(self, other: "FFPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        r = list(self.coeffs)
        d = other.degree
        inv = pow(other.coeffs[-1], -1, p)
        q = [0] * max(len(r) - d, 0)
        for k in range(len(r) - 1 - d, -1, -1):
            c = r[k + d] * inv % p
            if c:
                q[k] = c
                for j, b in enumerate(other.coeffs):
                    r[k + j] = (r[k + j] - c * b) % p
        return FFPoly(p, q), FFPoly(p, r)

    def __mod__(self, other: "FFPoly") -> "FFPoly":
        return divmod(self, other)[1]

    def __eq__(self, other) -> bool:
        return isinstance(other, FFPoly) and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __call__(self, x: int) -> int:
        v = 0
        for c in reversed(self.coeffs):
            v = (v * x + c) % self.p
        return v

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            terms.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(terms)


def poly_gcd(a: FFPoly, b: FFPoly) -> FFPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def poly_powmod(base: FFPoly, e: int, mod: FFPoly) -> FFPoly:
    result = FFPoly.const(base.p, 1) % mod
    base = base % mod
    while e:
        if e & 1:
            result = result * base % mod
        base = base * base % mod
        e >>= 1
    return result


def irreducible_test(f: FFPoly) -> bool:
    """Rabin's test: X^(p^n) = X mod f and gcd(X^(p^(n/l)) - X, f) = 1 for primes l | n."""
    n, p = f.degree, f.p
    if n < 1:
        raise ValueError("degree must be at least 1")
    if n == 1:
        return True
    f = f.monic()
    X = FFPoly.x(p)

    def frob_iter(k: int) -> FFPoly:
        y = X
        for _ in range(k):
            y = poly_powmod(y, p, f)
        return y

    for l in prime_factors(n):
        if poly_gcd((frob_iter(n // l) - X) % f, f).degree > 0:
            return False
    return frob_iter(n) == X % f


def first_irreducible(p: int, k: int) -> FFPoly:
    """First monic irreducible of degree k, scanning lower coefficients as base-p integers."""
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        f = FFPoly(p, low + [1])
        if irreducible_test(f):
            return f
    raise AssertionError("no irreducible polynomial found")  # impossible for prime p


# -- the field F_(p^k) ----------------------------------------------------

Elem = tuple  # coefficients, length k


class FiniteField:
    def __init__(self, p: int, k: int, modulus: Optional[FFPoly] = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p, self.k = p, k
        self.modulus = modulus if modulus is not None else first_irreducible(p, k)
        if self.modulus.degree != k or not irreducible_test(self.modulus):
            raise ValueError("modulus must be irreducible of degree k")
        self.modulus = self.modulus.monic()
        self.size = p ** k
        self.order = self.size - 1
        self._red = [(-c) % p for c in self.modulus.coeffs[:k]]

    def elem(self, coeffs: Sequence[int]) -> Elem:
        c = [x % self.p for x in coeffs] + [0] * (self.k - len(coeffs))
        return tuple(c[:self.k])

    def const(self, a: int) -> Elem:
        return self.elem([a])

    def zero(self) -> Elem:
        return (0,) * self.k

    def one(self) -> Elem:
        return self.const(1)

    def from_code(self, code: int) -> Elem:
        return tuple((code // self.p ** i) % self.p for i in range(self.k))

    def add(self, a: Elem, b: Elem) -> Elem:
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a: Elem, b: Elem) -> Elem:
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def scale(self, c: int, a: Elem) -> Elem:
        return tuple(c * x % self.p for x in a)

    def mul(self, a: Elem, b: Elem) -> Elem:
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        red = self._red
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % p
            if c:
                base = d - k
                for j in range(k):
                    prod[base + j] += c * red[j]
        return tuple(x % p for x in prod[:k])

    def pow(self, a: Elem, e: int) -> Elem:
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one()
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: Elem) -> Elem:
        if not any(a):
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.order - 1)

    def frobenius(self, a: Elem, times: int = 1) -> Elem:
        return self.pow(a, self.p ** times)

    def in_prime_field(self, a: Elem) -> bool:
        return not any(a[1:])

    def element_order(self, a: Elem) -> int:
        n = self.order
        for l, _ in factorize(n) if n > 1 else []:
            while n % l == 0 and self.pow(a, n // l) == self.one():
                n //= l
        return n

    @property
    def generator(self) -> Elem:
        """First element (ascending code order) of multiplicative order p^k - 1."""
        if not hasattr(self, "_gen"):
            for code in range(1, self.size):
                g = self.from_code(code)
                if self.element_order(g) == self.order:
                    self._gen = g
                    break
        return self._gen

    def cyclic_subgroup(self, g: Elem) -> list[Elem]:
        out, x = [self.one()], g
        while x != self.one():
            out.append(x)
            x = self.mul(x, g)
        return out

    def subgroup_of_order(self, m: int) -> list[Elem]:
        """All m-th roots of unity when m divides p^k - 1."""
        if self.order % m:
            raise ValueError(f"{m} does not divide {self.order}")
        return self.cyclic_subgroup(self.pow(self.generator, self.order // m))

    def norm(self, a: Elem, n: Optional[int] = None) -> Elem:
        """Norm to the prime field: product of the Frobenius orbit."""
        out, y = self.one(), a
        for _ in range(n or self.k):
            out = self.mul(out, y)
            y = self.pow(y, self.p)
        return out

    def prime_field_log(self, a: Elem) -> int:
        """log_g a for a in F_p^x, stepping through the order-(p-1) subgroup."""
        if not self.in_prime_field(a) or not any(a):
            raise ValueError("not a nonzero prime-field element")
        step = self.order // (self.p - 1)
        h = self.pow(self.generator, step)
        x = self.one()
        for t in range(self.p - 1):
            if x == a:
                return t * step
            x = self.mul(x, h)
        raise AssertionError("prime field element not found in its subgroup")


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    m = [list(r) for r in rows]
    rank, cols = 0, len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c] % p:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def nullspace_mod_p(rows: list[list[int]], p: int) -> list[list[int]]:
    """Basis of {v : rows * v = 0} over F_p."""
    m = [list(r) for r in rows]
    ncols = len(m[0]) if m else 0
    pivots, rank = [], 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c] % p:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[rank])]
        pivots.append(c)
        rank += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [0] * ncols
        v[free] = 1
        for r, c in enumerate(pivots):
            v[c] = -m[r][free] % p
        basis.append(v)
    return basis


# -- gradings of F_(q^n) | F_q ---------------------------------------------

def check_caps(q: int, n: int) -> None:
    if not is_prime(q):
        raise ValueError(f"q = {q} must be prime")
    if n < 1:
        raise ValueError("n must be positive")
    if q > CAPS.ff_qmax or n > CAPS.ff_nmax or q ** n > CAPS.ff_size:
        raise CapExceeded(f"(q, n) = ({q}, {n}) outside the configured caps")


@lru_cache(maxsize=None)
def extension(q: int, n: int) -> FiniteField:
    check_caps(q, n)
    return FiniteField(q, n)


def grading_exists(q: int, n: int) -> bool:
    """L|F_q of degree n has a unitary grading iff q = 1 mod ered(n)."""
    check_caps(q, n)
    return q % ered(n) == 1 % ered(n)


def binomial(q: int, n: int, a: int) -> FFPoly:
    return FFPoly(q, [-a] + [0] * (n - 1) + [1])


def irreducible_binomials(q: int, n: int) -> list[int]:
    """All a in F_q^x with X^n - a irreducible (exhaustive scan)."""
    return [a for a in range(1, q) if irreducible_test(binomial(q, n, a))]


@dataclass(frozen=True)
class GradingWitness:
    q: int
    n: int
    a: int
    x: Elem
    components: tuple  # component k is the line F_q * x^k, given by x^k

    def verify(self, L: FiniteField) -> None:
        q, n = self.q, self.n
        if L.pow(self.x, n) != L.const(self.a):
            raise AssertionError("x^n != a")
        if self.components[0] != L.one():
            raise AssertionError("L_0 is not F_q")
        if rank_mod_p([list(c) for c in self.components], q) != n:
            raise AssertionError("components are not independent")
        for j, xj in enumerate(self.components):
            for k, xk in enumerate(self.components):
                s = (j + k) % n
                prod = L.mul(xj, xk)
                # prod must be an F_q-multiple of x^s
                if rank_mod_p([list(prod), list(self.components[s])], q) != 1:
                    raise AssertionError(f"L_{j} * L_{k} not inside L_{s}")


def construct_grading(q: int, n: int) -> Optional[GradingWitness]:
    """Ascending scan for a with X^n - a irreducible; builds the grading of L by x with x^n = a."""
    check_caps(q, n)
    a = next((a for a in range(1, q) if irreducible_test(binomial(q, n, a))), None)
    if a is None:
        return None
    L = extension(q, n)
    N = L.order
    t = L.prime_field_log(L.const(a))
    # solve n*j = t mod N
    g = math.gcd(n, N)
    if t % g:
        raise AssertionError("a is not an n-th power in L although X^n - a is irreducible")
    j = (t // g) * pow(n // g, -1, N // g) % (N // g)
    x = L.pow(L.generator, j)
    comps = tuple(L.pow(x, k) for k in range(n))
    w = GradingWitness(q, n, a, x, comps)
    w.verify(L)
    return w


def kummer_eigenspaces(q: int, n: int) -> dict[int, Elem]:
    """For n | q - 1: zeta in mu_n(F_q) -> basis vector of {x : x^q = zeta x}.

    Each eigenspace of the Frobenius is found as the F_q-nullspace of
    Frob - zeta on L = F_(q^n); the lines are checked to be one-dimensional,
    independent, and multiplicative.
    """
    check_caps(q, n)
    if (q - 1) % n:
        raise ValueError(f"n = {n} must divide q - 1 = {q - 1}")
    L = extension(q, n)
    basis = [L.elem([0] * i + [1]) for i in range(n)]
    frob_cols = [L.frobenius(b) for b in basis]
    zetas = [z for z in range(1, q) if pow(z, n, q) == 1]
    lines: dict[int, Elem] = {}
    for z in zetas:
        rows = [[(frob_cols[c][r] - (z if r == c else 0)) % q for c in range(n)] for r in range(n)]
        ns = nullspace_mod_p(rows, q)
        if len(ns) != 1:
            raise AssertionError(f"eigenspace for {z} has dimension {len(ns)}")
        lines[z] = tuple(ns[0])
    if rank_mod_p([list(v) for v in lines.values()], q) != n:
        raise AssertionError("eigenlines do not decompose L")
    for z1, v1 in lines.items():
        for z2, v2 in lines.items():
            prod = L.mul(v1, v2)
            if L.frobenius(prod) != L.scale(z1 * z2 % q, prod):
                raise AssertionError("character product rule fails")
    return lines


# -- cohomology of mu_n(L) under gal(L|K) -------------------------------

def mu_n_L(q: int, n: int) -> list[Elem]:
    L = extension(q, n)
    return L.subgroup_of_order(math.gcd(n, L.order))


def mu_n_K(q: int, n: int) -> list[int]:
    return [a for a in range(1, q) if pow(a, n, q) == 1]


def norm_one_check(q: int, n: int) -> bool:
    """Every zeta in mu_n(L) has norm 1 to F_q."""
    check_caps(q, n)
    L = extension(q, n)
    return all(L.norm(z) == L.one() for z in mu_n_L(q, n))


def _cohomology(q: int, n: int):
    L = extension(q, n)
    mu = mu_n_L(q, n)
    sig_over_id = {L.pow(z, q - 1) for z in mu}
    norms = {L.norm(z) for z in mu}
    ker_norm = [z for z in mu if L.norm(z) == L.one()]
    fixed = [z for z in mu if L.frobenius(z) == z]
    h1 = len(ker_norm) // len(sig_over_id)
    h0 = len(fixed) // len(norms)
    if len(ker_norm) % len(sig_over_id) or len(fixed) % len(norms):
        raise AssertionError("subgroup sizes do not divide")
    return h0, h1


def h1_cyclic(q: int, n: int) -> int:
    """|ker(Norm) / im(sigma/id)| on mu_n(L)."""
    check_caps(q, n)
    return _cohomology(q, n)[1]


def herbrand_check(q: int, n: int) -> tuple[int, int]:
    """(|H^0|, |H^1|) of the Tate cohomology of mu_n(L)."""
    check_caps(q, n)
    return _cohomology(q, n)


def h1_classical(q: int, n: int) -> int:
    """|(L^(x n) n K^x) / K^(x n)| by enumerating K^x."""
    check_caps(q, n)
    L = extension(q, n)
    w = math.gcd(n, L.order)
    # cyclic L^x: y is an n-th power iff y^((q^n - 1)/w) = 1
    powers_in_L = [a for a in range(1, q) if L.pow(L.const(a), L.order // w) == L.one()]
    powers_in_K = {pow(a, n, q) for a in range(1, q)}
    return len(powers_in_L) // len(powers_in_K)


def h1_classical_check(q: int, n: int) -> bool:
    return h1_classical(q, n) == h1_cyclic(q, n)


@dataclass(frozen=True)
class UPrimeReport:
    q: int
    n: int
    index: int          # |U'/K^x|
    mu_n_L: int
    mu_n_K: int
    h1: int
    hypotheses_hold: bool
    sequence_ok: bool   # index = |mu_n(L)/mu_n(K)| * h1
    index_equals_n: bool


def uprime_index(q: int, n: int) -> int:
    """|U'/K^x| for U' = {x in L^x : x^(q-1) in mu_n(L)}.

    With L^x = <g> of order N, x = g^k lies in U' iff N | k (q-1) w, where
    w = |mu_n(L)|; the exponents are counted directly.
    """
    import numpy as np
    L = extension(q, n)
    N = L.order
    w = math.gcd(n, N)
    k = np.arange(N, dtype=np.int64)
    size = int(np.count_nonzero((k * ((q - 1) * w)) % N == 0))
    # with actual field elements: g^(N/size) generates U'
    u = L.pow(L.generator, N // size)
    if L.pow(L.pow(u, q - 1), w) != L.one():
        raise AssertionError("generator of U' fails the defining property")
    if size % (q - 1):
        raise AssertionError("K^x is not inside U'")
    return size // (q - 1)


def kneser_subgroup(q: int, n: int, strict: bool = False) -> UPrimeReport:
    check_caps(q, n)
    L = extension(q, n)
    e = ered(n)
    w = math.gcd(n, L.order)
    mk = len(mu_n_K(q, n))
    hyp = w == n and (q - 1) % e == 0
    if strict and not hyp:
        raise HypothesisViolation(f"(q, n) = ({q}, {n}): need |mu_n(L)| = n and ered(n) | q - 1")
    idx = uprime_index(q, n)
    h1 = h1_cyclic(q, n)
    return UPrimeReport(q, n, idx, w, mk, h1, hyp, idx * mk == w * h1, idx == n)


# -- sweep ----------------------------------------------------------------

@dataclass(frozen=True)
class SweepRecord:
    q: int
    n: int
    ered: int
    grading_exists: bool
    witness_a: Optional[int]
    mu_n_L: int
    mu_n_K: int
    h1: int
    h0: int
    uprime_index: int

    def as_dict(self) -> dict:
        return asdict(self)


def sweep_domain(qmax: int = 31, nmax: int = 8, size: int = 10**7) -> list[tuple[int, int]]:
    return [(q, n) for q in range(2, qmax + 1) if is_prime(q)
            for n in range(1, nmax + 1) if q ** n <= size]


def sweep_cell(qn: tuple[int, int]) -> SweepRecord:
    q, n = qn
    w = construct_grading(q, n)
    h0, h1 = herbrand_check(q, n)
    return SweepRecord(q, n, ered(n), grading_exists(q, n), w.a if w else None,
                       len(mu_n_L(q, n)), len(mu_n_K(q, n)), h1, h0, uprime_index(q, n))


def sweep(qmax: int = 31, nmax: int = 8, jobs: int = 1) -> list[SweepRecord]:
    cells = sweep_domain(qmax, nmax, CAPS.ff_size)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as ex:
            return list(ex.map(sweep_cell, cells))
    return [sweep_cell(c) for c in cells]
