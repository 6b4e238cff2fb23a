"""Independent brute-force oracles shared by the tests.

None of these use the code under test beyond plain data types.
"""

import itertools
import math
from fractions import Fraction


def closure_order(vectors, k=None):
    """Order of the subgroup of (Q/Z)^k generated by ``vectors``, by BFS.

    Coordinates are scaled to integers modulo the common denominator.
    """
    if not vectors:
        return 1
    k = k or len(vectors[0])
    L = 1
    for v in vectors:
        for x in v:
            L = L * Fraction(x).denominator // math.gcd(L, Fraction(x).denominator)
    gens = [tuple(int(Fraction(x) * L) % L for x in v) for v in vectors]
    zero = (0,) * k
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % L for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


def primary_closure_order(vectors, k=None):
    """closure_order computed one p-primary component at a time.

    With common denominator L = p^a * m, the m-multiples of the generators
    generate the p-part; the order is the product over p (CRT).
    """
    if not vectors:
        return 1
    L = 1
    for v in vectors:
        for x in v:
            L = L * Fraction(x).denominator // math.gcd(L, Fraction(x).denominator)
    total, rest, p = 1, L, 2
    while rest > 1:
        if rest % p == 0:
            pa = 1
            while rest % p == 0:
                rest //= p
                pa *= p
            m = L // pa
            total *= closure_order([tuple(Fraction(x) * m for x in v) for v in vectors], k)
        p += 1
    return total


def unit_class_vector(unit, primes):
    return tuple(unit.exp_dict.get(p, Fraction(0)) % 1 for p in primes) + ((2 * unit.angle.value) % 1,)


def group_closure_order(U):
    primes = sorted({p for g in U.generators for p in g.primes})
    return closure_order([unit_class_vector(g, primes) for g in U.generators], len(primes) + 1)


def torsion_by_probing(U, contains, zeta):
    """lcm of all t dividing 2*exp(D) with zeta_t in U."""
    bound = 2 * max(1, closure_exponent(U))
    m = 1
    for t in range(1, bound + 1):
        if bound % t == 0 and contains(U, zeta(t)) is not None:
            m = m * t // math.gcd(m, t)
    return m


def closure_exponent(U):
    primes = sorted({p for g in U.generators for p in g.primes})
    e = 1
    for g in U.generators:
        v = unit_class_vector(g, primes)
        o = 1
        for x in v:
            o = o * x.denominator // math.gcd(o, x.denominator)
        e = e * o // math.gcd(e, o)
    return e


# -- exact linear algebra over Q --------------------------------------------

def rank_q(rows):
    m = [list(map(Fraction, r)) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def solve_q(cols, rhs):
    """Solve sum_j c_j cols[j] = rhs exactly (cols independent); returns c."""
    n = len(cols)
    dim = len(rhs)
    aug = [[Fraction(cols[j][i]) for j in range(n)] + [Fraction(rhs[i])] for i in range(dim)]
    row = 0
    piv_cols = []
    for c in range(n):
        piv = next((i for i in range(row, dim) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        p = aug[row][c]
        aug[row] = [a / p for a in aug[row]]
        for i in range(dim):
            if i != row and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
        piv_cols.append(c)
        row += 1
    sol = [Fraction(0)] * n
    for r, c in enumerate(piv_cols):
        sol[c] = aug[r][n]
    return sol


def min_poly_oracle(A, x):
    """Minimal polynomial from the Krylov block 1, x, ..., x^dim.

    The degree is the rank of the whole block (powers independent up to the
    first dependence, dependent afterwards); one exact solve gives the rest.
    """
    classes = A.classes()
    vec = lambda e: [e.coefficient(d) for d in classes]
    powers = [A.one()]
    for _ in range(A.dimension):
        powers.append(powers[-1] * x)
    k = rank_q([vec(p) for p in powers])
    c = solve_q([vec(p) for p in powers[:k]], vec(powers[k]))
    return [-a for a in c] + [Fraction(1)]


# -- finite fields ------------------------------------------------------------

def poly_mod_p(a, b, p):
    """Remainder of a by b over F_p (lists, constant first)."""
    a = [x % p for x in a]
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b) and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) < len(b):
            break
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def brute_irreducible(coeffs, p):
    """Irreducible iff no monic factor of degree 1..deg/2 divides it."""
    n = len(coeffs) - 1
    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not poly_mod_p(list(coeffs), list(low) + [1], p):
                return False
    return True


def binomial_criterion(q, n, a):
    """Classical test for X^n - a over F_q (a != 0)."""
    o = 1
    while pow(a, o, q) != 1:
        o += 1
    for l in {d for d in range(2, n + 1) if n % d == 0 and all(d % e for e in range(2, d))}:
        if o % l or ((q - 1) // o) % l == 0:
            return False
    if n % 4 == 0 and q % 4 != 1:
        return False
    return True


class BruteField:
    """F_(q^n) with every element enumerated; for small q^n only."""

    def __init__(self, F):
        self.F = F
        self.elems = [F.from_code(c) for c in range(1, F.size)]

    def mu(self, n):
        return [x for x in self.elems if self.F.pow(x, n) == self.F.one()]

    def norm(self, x):
        F, out, y = self.F, self.F.one(), x
        for _ in range(F.k):
            out = F.mul(out, y)
            y = F.pow(y, F.p)
        return out

    def uprime(self, n):
        mu = set(self.mu(n))
        return [x for x in self.elems if self.F.pow(x, self.F.p - 1) in mu]

    def nth_powers(self, n):
        return {self.F.pow(x, n) for x in self.elems}


# -- radical groups -------------------------------------------------------------

def _class_orders(U):
    primes = sorted({p for g in U.generators for p in g.primes})
    out = []
    for g in U.generators:
        v = unit_class_vector(g, primes)
        o = 1
        for x in v:
            o = o * x.denominator // math.gcd(o, x.denominator)
        out.append(o)
    return out


def _products(U):
    from unigraded.radicals import RadicalUnit
    ranges = [range(o) for o in _class_orders(U)]
    for ns in itertools.product(*ranges):
        u = RadicalUnit.one()
        for g, n in zip(U.generators, ns):
            u = u * g ** n
        yield ns, u


def brute_contains(U, x):
    """x in U iff x / prod g_j^n_j is rational for some residues n_j."""
    return any((x / u).is_rational for _, u in _products(U))


def _rational_nth_root_exists(w, n):
    if w.angle.value not in (0, Fraction(1, 2)):
        return False
    if any(e.denominator != 1 or int(e) % n for _, e in w.exps):
        return False
    return w.angle.value == 0 or n % 2 == 1


def brute_nth_power(U, target, n):
    """Some u in U with u^n = target: u = r * prod g^n_j with r rational."""
    return any(_rational_nth_root_exists(target / u ** n, n) for _, u in _products(U))
