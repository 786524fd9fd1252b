"""Exact integer and mod-p linear algebra.

Matrices are plain tuples of row tuples holding Python ints, so entries never
overflow. Everything here is a pure function of its inputs.

The routines are written for desk-scale problems (a handful of rows, a few
dozen columns); none of them aims at asymptotic efficiency.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

IntMatrix = tuple[tuple[int, ...], ...]
IntVector = tuple[int, ...]

#: Exhaustive subspace search is used while ``p ** dim`` stays below this.
EXHAUSTIVE_LIMIT = 10**7
#: Number of seeded random trials once the exhaustive limit is exceeded.
RANDOM_TRIALS = 10**5


class UndecidedError(RuntimeError):
    """A bounded search ran out of budget without reaching a conclusion."""


class RelationAbsentError(ValueError):
    """No strictly positive integer relation exists among the columns."""


def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if m and len({len(r) for r in m}) != 1:
        raise ValueError("ragged matrix")
    return m


def shape(M: Sequence[Sequence[int]]) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(M: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(zip(*M)) if M else ()


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A: Sequence[Sequence[int]], x: Sequence[int]) -> IntVector:
    return tuple(sum(a * b for a, b in zip(row, x)) for row in A)


def columns_to_matrix(vectors: Sequence[Sequence[int]], dim: int) -> IntMatrix:
    """Matrix whose columns are ``vectors`` (``dim`` rows even if empty)."""
    return tuple(tuple(v[i] for v in vectors) for i in range(dim))


def det(M: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % f for f in range(3, math.isqrt(p) + 1, 2))


def require_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"characteristic must be a prime, got {p!r}")


def primitive(v: Sequence[int]) -> IntVector:
    g = math.gcd(*v)
    if g == 0:
        raise ValueError("zero vector has no primitive generator")
    return tuple(x // g for x in v)


# --------------------------------------------------------------------------
# Smith and Hermite normal forms


@dataclass(frozen=True)
class SmithDecomposition:
    """Unimodular ``U``, ``V`` and diagonal ``D`` with ``U @ M @ V == D``."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> IntVector:
        return tuple(self.D[i][i] for i in range(min(shape(self.D))))

    @property
    def elementary_divisors(self) -> IntVector:
        return tuple(d for d in self.diagonal if d != 0)

    @property
    def rank(self) -> int:
        return len(self.elementary_divisors)


def snf(M: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Smith normal form with full transform tracking."""
    m, n = shape(M)
    if m == 0 or n == 0:
        raise ValueError("snf needs a nonempty matrix")
    A = [list(r) for r in M]
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for X in (A, V):
            for row in X:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        for X in (A, U):
            rs, rd = X[src], X[dst]
            for k in range(len(rd)):
                rd[k] += q * rs[k]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for X in (A, V):
            for row in X:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            for X in (A, U):
                X[t] = [-x for x in X[t]]
    return SmithDecomposition(as_matrix(U), as_matrix(A), as_matrix(V))


def hnf_rows(rows: Sequence[Sequence[int]]) -> IntMatrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows: echelon, positive pivots, and entries above each
    pivot reduced into ``[0, pivot)``.
    """
    A = [list(r) for r in rows if any(r)]
    if not A:
        return ()
    n = len(A[0])
    r = 0
    pivots = []
    for col in range(n):
        if r == len(A):
            break
        for i in range(r + 1, len(A)):
            a, b = A[r][col], A[i][col]
            if b == 0:
                continue
            g, s, t = _xgcd(a, b)
            ra, rb = A[r], A[i]
            A[r] = [s * x + t * y for x, y in zip(ra, rb)]
            A[i] = [(a // g) * y - (b // g) * x for x, y in zip(ra, rb)]
        if A[r][col] == 0:
            continue
        if A[r][col] < 0:
            A[r] = [-x for x in A[r]]
        pivots.append(col)
        r += 1
    A = A[:r]
    for k, col in enumerate(pivots):
        piv = A[k][col]
        for i in range(k):
            q = A[i][col] // piv
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[k])]
    return as_matrix(A)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, (a, b) = a // b, (b, a % b)
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


# --------------------------------------------------------------------------
# Kernels, ranks, sublattice indices


def integer_kernel(M: Sequence[Sequence[int]]) -> list[IntVector]:
    """Saturated Z-basis of ``{x : M x = 0}``, in Hermite normal form."""
    m, n = shape(M)
    if m == 0 or n == 0:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    dec = snf(M)
    cols = transpose(dec.V)[dec.rank:]
    return [tuple(r) for r in hnf_rows(cols)]


def rank(M: Sequence[Sequence[int]]) -> int:
    m, n = shape(M)
    if m == 0 or n == 0:
        return 0
    return snf(M).rank


def elementary_divisors_of_sublattice(
    generators: Sequence[Sequence[int]], ambient_rank: int
) -> tuple[int, IntVector]:
    """Rank and nonzero elementary divisors of ``span(generators) ⊂ Z^d``."""
    for g in generators:
        if len(g) != ambient_rank:
            raise ValueError(f"generator {tuple(g)} does not have length {ambient_rank}")
    if not generators or ambient_rank == 0:
        return 0, ()
    dec = snf(columns_to_matrix(generators, ambient_rank))
    return dec.rank, dec.elementary_divisors


def solve_rational(A: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[tuple[Fraction, ...]]:
    """Exact solution of a square nonsingular system, ``None`` if singular."""
    n = len(A)
    aug = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return tuple(row[n] for row in aug)


# --------------------------------------------------------------------------
# Linear algebra over F_p


@dataclass(frozen=True)
class ModPBasis:
    """Ordered F_p-linearly independent vectors with reduced coordinates."""

    p: int
    vectors: tuple[IntVector, ...]

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


def reduce_mod(M: Sequence[Sequence[int]], p: int) -> IntMatrix:
    return tuple(tuple(x % p for x in row) for row in M)


def rref_mod_p(M: Sequence[Sequence[int]], p: int) -> tuple[IntMatrix, tuple[int, ...]]:
    """Reduced row echelon form over F_p and the pivot columns."""
    A = [list(r) for r in reduce_mod(M, p)]
    m, n = shape(A)
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return as_matrix(A[:r]), tuple(pivots)


def rank_mod_p(M: Sequence[Sequence[int]], p: int) -> int:
    return len(rref_mod_p(M, p)[1]) if M and M[0] else 0


def modp_kernel(M: Sequence[Sequence[int]], p: int) -> ModPBasis:
    """Basis of ``ker(M mod p)``, one vector per free column (set to 1)."""
    require_prime(p)
    n = shape(M)[1]
    R, pivots = rref_mod_p(M, p) if M else ((), ())
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [0] * n
        v[free] = 1
        for row, pc in zip(R, pivots):
            v[pc] = -row[free] % p
        basis.append(tuple(v))
    return ModPBasis(p, tuple(basis))


def solve_mod_p(A: Sequence[Sequence[int]], b: Sequence[int], p: int) -> Optional[IntVector]:
    """One solution of ``A x = b`` over F_p (free variables zero), else ``None``."""
    n = shape(A)[1]
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref_mod_p(aug, p)
    if n in pivots:
        return None
    x = [0] * n
    for row, pc in zip(R, pivots):
        x[pc] = row[n]
    return tuple(x)


def column_space_basis_mod_p(M: Sequence[Sequence[int]], p: int) -> ModPBasis:
    """Pivot columns of ``M mod p``, which form a basis of its image."""
    _, pivots = rref_mod_p(M, p)
    cols = transpose(reduce_mod(M, p))
    return ModPBasis(p, tuple(cols[c] for c in pivots))


def find_all_nonzero_in_span(
    basis: ModPBasis,
    d: int,
    *,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
    trials: int = RANDOM_TRIALS,
    seed: int = 0,
) -> Optional[IntVector]:
    """A vector of ``span(basis)`` with no zero coordinate.

    Coefficient tuples are scanned in lexicographic order and the first hit is
    returned. When ``p ** len(basis)`` exceeds ``exhaustive_limit`` the search
    switches to ``trials`` seeded random combinations and raises
    :class:`UndecidedError` if none of them works, since a miss then proves
    nothing.
    """
    p = basis.p
    vecs = basis.vectors
    for v in vecs:
        if len(v) != d:
            raise ValueError(f"basis vector {v} does not live in F_{p}^{d}")
    if d == 0:
        return ()

    def combine(coeffs):
        return tuple(sum(c * v[i] for c, v in zip(coeffs, vecs)) % p for i in range(d))

    if p ** len(vecs) <= exhaustive_limit:
        for coeffs in itertools.product(range(p), repeat=len(vecs)):
            w = combine(coeffs)
            if all(w):
                return w
        return None
    rng = random.Random(seed)
    for _ in range(trials):
        w = combine([rng.randrange(p) for _ in vecs])
        if all(w):
            return w
    raise UndecidedError(
        f"no all-nonzero vector found in {trials} random trials "
        f"(span of dimension {len(vecs)} over F_{p})"
    )


# --------------------------------------------------------------------------
# Positive relations and kernel lifting


def positive_relation(M: Sequence[Sequence[int]]) -> IntVector:
    """Primitive integer relation ``M c = 0`` with every ``c_i >= 1``.

    For each column ``ρ_j`` the point ``-ρ_j`` is written as a nonnegative
    combination of ``rank`` independent columns (the first such subset in
    lexicographic order). Each of those gives a nonnegative relation with a
    positive entry at ``j``; their sum, cleared of denominators and divided by
    its content, is strictly positive.
    """
    d, n = shape(M)
    cols = transpose(M)
    if n == 0:
        raise RelationAbsentError("no columns")
    if rank(M) != d:
        raise RelationAbsentError("columns do not span the ambient space: fan not complete")
    total = [Fraction(0)] * n
    for j in range(n):
        target = tuple(-x for x in cols[j])
        for subset in itertools.combinations(range(n), d):
            B = columns_to_matrix([cols[i] for i in subset], d)
            lam = solve_rational(B, target)
            if lam is None or any(x < 0 for x in lam):
                continue
            total[j] += 1
            for i, x in zip(subset, lam):
                total[i] += x
            break
        else:
            raise RelationAbsentError(
                f"-column {j} is not in the cone over the columns: fan not complete / relation absent"
            )
    denom = math.lcm(*(x.denominator for x in total))
    c = [int(x * denom) for x in total]
    g = math.gcd(*c)
    c = tuple(x // g for x in c)
    assert all(x >= 1 for x in c) and not any(matvec(M, c))
    return c


def lift_modp_kernel_vector(
    M: Sequence[Sequence[int]], ybar: Sequence[int], p: int
) -> IntVector:
    """Integer kernel vector of ``M`` congruent to ``ybar`` modulo ``p``.

    Works through the Smith form ``U M V = D``: with every nonzero ``d_i``
    prime to ``p``, ``z = V^{-1} y`` must vanish mod ``p`` in the first
    ``rank`` coordinates; lifting the rest into ``[0, p)`` and mapping back
    through ``V`` lands in the integer kernel.
    """
    require_prime(p)
    dec = snf(M)
    if any(d % p == 0 for d in dec.elementary_divisors):
        raise ValueError(f"p={p} divides an elementary divisor {dec.elementary_divisors}")
    if any(matvec(reduce_mod(M, p), ybar)[i] % p for i in range(len(M))):
        raise ValueError("ybar is not in the mod-p kernel")
    zbar = solve_mod_p(dec.V, ybar, p)
    assert zbar is not None  # V is unimodular, hence invertible mod p
    r = dec.rank
    assert all(z == 0 for z in zbar[:r])
    z = (0,) * r + tuple(zbar[r:])
    y = matvec(dec.V, z)
    assert not any(matvec(M, y))
    return y
