"""Integer matrices: Hermite and Smith normal forms, Diophantine systems,
and the structure of finitely generated subgroups of (Q/Z)^k.

Matrices are plain lists of row lists of Python ints.  Everything here is
exact; sizes are desk scale, so the classical gcd-elimination algorithms
are used without modular tricks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .config import CAPS, CapExceeded
from .rational import as_rat, gcd_rat, lcm

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def copy(A) -> Matrix:
    return [list(row) for row in A]


def transpose(A, ncols: Optional[int] = None) -> Matrix:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def matmul(A, B) -> Matrix:
    if not A:
        return []
    inner = len(B)
    ncols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(ncols)]
            for i in range(len(A))]


def matvec(A, x) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def det(A) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    n = len(A)
    if n == 0:
        return Fraction(1)
    M = [[as_rat(v) for v in row] for row in A]
    sign, result = 1, Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            sign = -sign
        piv = M[c][c]
        result *= piv
        for r in range(c + 1, n):
            f = M[r][c] / piv
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return sign * result


def inverse_unimodular(A) -> Matrix:
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [v / piv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    inv = [row[n:] for row in M]
    if any(v.denominator != 1 for row in inv for v in row):
        raise ValueError("matrix is not unimodular")
    return [[int(v) for v in row] for row in inv]


# -- row operations that keep a transform in sync --------------------------

def _row_sub(M, T, i, j, q):
    """row_i -= q * row_j in both M and T."""
    if q:
        M[i] = [a - q * b for a, b in zip(M[i], M[j])]
        T[i] = [a - q * b for a, b in zip(T[i], T[j])]


def _col_sub(M, T, i, j, q):
    """col_i -= q * col_j in both M and T."""
    if q:
        for row in M:
            row[i] -= q * row[j]
        for row in T:
            row[i] -= q * row[j]


def _swap_rows(M, T, i, j):
    if i != j:
        M[i], M[j] = M[j], M[i]
        T[i], T[j] = T[j], T[i]


def _swap_cols(M, T, i, j):
    if i != j:
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in T:
            row[i], row[j] = row[j], row[i]


# -- Hermite normal form ---------------------------------------------------

def hnf_with_transform(A) -> tuple[Matrix, Matrix]:
    """Row-style HNF ``H = T A`` with ``T`` unimodular.

    H is upper echelon with positive pivots; entries above a pivot lie in
    [0, pivot).  Zero rows collect at the bottom, so H has A's shape.
    """
    H = copy(A)
    m = len(H)
    n = len(H[0]) if m else 0
    T = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(H[i][c]), i))
            _swap_rows(H, T, r, i0)
            for i in range(r + 1, m):
                if H[i][c]:
                    _row_sub(H, T, i, r, H[i][c] // H[r][c])
            if all(H[i][c] == 0 for i in range(r + 1, m)):
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-v for v in H[r]]
            T[r] = [-v for v in T[r]]
        for i in range(r):
            _row_sub(H, T, i, r, H[i][c] // H[r][c])
        r += 1
    return H, T


def hnf(A) -> Matrix:
    return hnf_with_transform(A)[0]


def row_basis(rows, ncols: int) -> Matrix:
    """HNF basis (nonzero rows only) of the lattice spanned by ``rows``."""
    if not rows:
        return []
    return [row for row in hnf([list(r) for r in rows]) if any(row)]


def in_row_lattice(basis: Matrix, v) -> bool:
    """Membership of ``v`` in the span of an HNF basis (nonzero rows)."""
    v = list(v)
    for row in basis:
        c = next((j for j, x in enumerate(row) if x), None)
        if c is None:
            continue
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


# -- Smith normal form -----------------------------------------------------

@dataclass
class SNFResult:
    S: Matrix
    U: Matrix
    V: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i][i] for i in range(min(len(self.S), len(self.V)))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _nearest(a: int, p: int) -> int:
    """Quotient q with |a - q p| <= |p|/2."""
    q, r = divmod(a, p)
    if 2 * abs(r) > abs(p):
        q += 1
    return q


def snf(A) -> SNFResult:
    """Smith normal form with transforms: ``U A V = S``.

    The diagonal satisfies d1 | d2 | ... and is nonnegative; U and V are
    unimodular.
    """
    S = copy(A)
    m = len(S)
    n = len(S[0]) if m else 0
    U, V = identity(m), identity(n)
    for t in range(min(m, n)):
        if not any(S[i][j] for i in range(t, m) for j in range(t, n)):
            break
        while True:
            # pivot: smallest nonzero entry in row t / column t, or anywhere if both are zero
            cand = [(i, t) for i in range(t, m) if S[i][t]] + [(t, j) for j in range(t + 1, n) if S[t][j]]
            if not cand:
                cand = [(i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
            i0, j0 = min(cand, key=lambda ij: abs(S[ij[0]][ij[1]]))
            _swap_rows(S, U, t, i0)
            _swap_cols(S, V, t, j0)
            p = S[t][t]
            for i in range(t + 1, m):
                _row_sub(S, U, i, t, _nearest(S[i][t], p))
            for j in range(t + 1, n):
                _col_sub(S, V, j, t, _nearest(S[t][j], p))
            if any(S[i][t] for i in range(t + 1, m)) or any(S[t][j] for j in range(t + 1, n)):
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p), None)
            if bad is None:
                break
            S[t] = [a + b for a, b in zip(S[t], S[bad])]
            U[t] = [a + b for a, b in zip(U[t], U[bad])]
        if S[t][t] < 0:
            S[t] = [-v for v in S[t]]
            U[t] = [-v for v in U[t]]
    return SNFResult(S, U, V)


# -- linear Diophantine systems ---------------------------------------------

def integer_kernel(A, ncols: Optional[int] = None) -> Matrix:
    """HNF basis of {x in Z^n : A x = 0}."""
    n = len(A[0]) if A else (ncols or 0)
    if not A:
        return identity(n)
    res = snf(A)
    r = res.rank
    cols = [[res.V[i][j] for i in range(n)] for j in range(r, n)]
    return row_basis(cols, n)


def solve_diophantine(A, b, ncols: Optional[int] = None):
    """Integer solutions of ``A x = b``.

    Returns ``(x, kernel_basis)`` or ``None`` when no integer solution
    exists.  ``ncols`` is needed only when A has no rows.
    """
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    b = [int(v) for v in b]
    if m == 0:
        return [0] * n, identity(n)
    res = snf(A)
    c = matvec(res.U, b)
    y = [0] * n
    for i in range(m):
        d = res.S[i][i] if i < n else 0
        if d == 0:
            if c[i]:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    x = matvec(res.V, y)
    r = res.rank
    kernel = row_basis([[res.V[i][j] for i in range(n)] for j in range(r, n)], n)
    return x, kernel


def congruence_kernel(W, M: int, s: Optional[int] = None) -> Matrix:
    """HNF basis of {n in Z^s : sum_j n_j W[j] = 0 (mod M)} for W of shape s x k."""
    s = len(W) if s is None else s
    k = len(W[0]) if W else 0
    if k == 0 or M == 1:
        return identity(s)
    A = [[W[j][p] for j in range(s)] + [M if q == p else 0 for q in range(k)]
         for p in range(k)]
    kern = integer_kernel(A)
    return row_basis([row[:s] for row in kern], s)


# -- finite subgroups of (Q/Z)^k -------------------------------------------

@dataclass(frozen=True)
class GroupStructure:
    """Structure of the subgroup of (Q/Z)^k generated by ``gens``.

    ``basis[i]`` is an integer combination of the generators whose class
    has exact order ``invariant_factors[i]``; ``coordinates`` maps any
    integer combination of generators to its invariant-factor coordinates.
    """

    invariant_factors: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]
    gens: tuple[tuple[Fraction, ...], ...]
    dimension: int
    _V: tuple[tuple[int, ...], ...]
    _cols: tuple[int, ...]
    _M: int

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def coordinates(self, combo: Sequence[int]) -> tuple[int, ...]:
        s = len(self.gens)
        return tuple(
            sum(combo[j] * self._V[j][c] for j in range(s)) % m
            for c, m in zip(self._cols, self.invariant_factors))

    @property
    def generator_coordinates(self) -> list[tuple[int, ...]]:
        s = len(self.gens)
        return [self.coordinates([int(i == j) for i in range(s)]) for j in range(s)]

    def express(self, vec) -> Optional[list[int]]:
        """An integer combination of generators equal to ``vec`` mod Z^k."""
        s, k = len(self.gens), self.dimension
        vec = [as_rat(v) for v in vec]
        M = lcm(self._M, *(v.denominator for v in vec))
        W = [[int(g[p] * M) for p in range(k)] for g in self.gens]
        A = [[W[j][p] for j in range(s)] + [M if q == p else 0 for q in range(k)]
             for p in range(k)]
        sol = solve_diophantine(A, [int(v * M) for v in vec], ncols=s + k)
        if sol is None:
            return None
        return sol[0][:s]

    def locate(self, vec) -> Optional[tuple[int, ...]]:
        combo = self.express(vec)
        return None if combo is None else self.coordinates(combo)


def _mod1(x) -> Fraction:
    x = as_rat(getattr(x, "value", x))
    return x - math.floor(x)


def quotient_structure(gens, dimension: Optional[int] = None) -> GroupStructure:
    """Invariant factors of the subgroup of (Q/Z)^k generated by ``gens``.

    Denominators are cleared by their lcm M; the relation lattice
    {n : sum n_j M g_j = 0 mod M} is computed as an integer kernel and its
    Smith form gives the cyclic decomposition.
    """
    gens = tuple(tuple(_mod1(x) for x in g) for g in gens)
    k = dimension if dimension is not None else (len(gens[0]) if gens else 0)
    s = len(gens)
    M = lcm(1, *(x.denominator for g in gens for x in g))
    if s == 0:
        return GroupStructure((), (), gens, k, (), (), M)
    W = [[int(x * M) for x in g] for g in gens]
    R = congruence_kernel(W, M, s)
    res = snf(R)
    V = res.V
    Vinv = inverse_unimodular(V)
    diag = [res.S[i][i] for i in range(s)]
    cols = tuple(i for i, d in enumerate(diag) if d > 1)
    return GroupStructure(
        invariant_factors=tuple(diag[i] for i in cols),
        basis=tuple(tuple(Vinv[i]) for i in cols),
        gens=gens,
        dimension=k,
        _V=tuple(tuple(row) for row in V),
        _cols=cols,
        _M=M,
    )


def rational_minors_gcd(M) -> Fraction:
    """gcd of all square minors of a rational matrix, the empty minor = 1 included."""
    rows = [[as_rat(v) for v in row] for row in M]
    r = len(rows)
    s = len(rows[0]) if r else 0
    if max(r, s) > CAPS.minor_dim:
        raise CapExceeded(f"{r}x{s} matrix exceeds the minor-enumeration cap")
    minors = [Fraction(1)]
    for k in range(1, min(r, s) + 1):
        for ri in itertools.combinations(range(r), k):
            for ci in itertools.combinations(range(s), k):
                minors.append(det([[rows[i][j] for j in ci] for i in ri]))
    return gcd_rat(minors)
