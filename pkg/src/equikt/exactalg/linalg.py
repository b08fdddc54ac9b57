"""Fraction-free (Bareiss) linear algebra over Laurent polynomial domains.

Matrices are lists of rows of ``LaurentPoly`` sharing one ring without
tautological variables.  Rows are first multiplied by monomials so every
entry is an honest polynomial; since monomials are units this changes
neither kernels nor ranks.
"""

from __future__ import annotations

import random
from typing import Sequence

from equikt.errors import DomainError, NotDivisible, RaggedMatrix
from equikt.exactalg.laurent import LaurentPoly, RingSpec, exact_div

Matrix = list[list[LaurentPoly]]


def _shape(M: Sequence[Sequence[LaurentPoly]]) -> tuple[int, int]:
    if not M:
        return 0, 0
    n = len(M[0])
    for row in M:
        if len(row) != n:
            raise RaggedMatrix("rows of different lengths")
    return len(M), n


def _ring_of(M) -> RingSpec | None:
    for row in M:
        for x in row:
            return x.ring
    return None


def clear_row_negatives(row: Sequence[LaurentPoly]) -> tuple[list[LaurentPoly], tuple[int, ...]]:
    """Multiply a row by the smallest monomial making all exponents >= 0.

    Returns the shifted row and the (scaled) shift exponent used.
    """
    nz = [x for x in row if x.terms]
    if not nz:
        return list(row), ()
    n = nz[0].ring.nvars
    lo = [0] * n
    for x in nz:
        for e in x.terms:
            for i, v in enumerate(e):
                if v < lo[i]:
                    lo[i] = v
    shift = tuple(-v for v in lo)
    if not any(shift):
        return list(row), shift
    return [x.shift(shift) if x.terms else x for x in row], shift


def _check_domain(ring: RingSpec | None):
    if ring is not None and ring.has_taut():
        for i in range(ring.nvars):
            if not ring.is_torus(i):
                raise DomainError("linear algebra needs a base ring without tautological variables")


def bareiss_rref(M: Sequence[Sequence[LaurentPoly]]):
    """Fraction-free Gauss-Jordan elimination.

    Returns ``(E, pivots, d)`` where ``pivots`` lists the pivot column of each
    leading row, every pivot entry of ``E`` equals ``d`` (the last pivot,
    a rank-sized minor of the row-shifted input) and ``E == d * RREF``.
    Pivot choice: columns left to right, first nonzero row in order.
    """
    m, n = _shape(M)
    ring = _ring_of(M)
    _check_domain(ring)
    if ring is None:
        return [list(r) for r in M], [], None
    A = [clear_row_negatives(list(r))[0] for r in M]
    one = ring.one()
    prev = one
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        piv = next((i for i in range(r, m) if A[i][c].terms), None)
        if piv is None:
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        for i in range(m):
            if i == r:
                continue
            a = A[i][c]
            rowi = A[i]
            rowr = A[r]
            if not a.terms:
                # entries still need the p/prev rescaling for Gauss-Jordan
                for j in range(n):
                    if j == c or not rowi[j].terms:
                        continue
                    x = p * rowi[j]
                    rowi[j] = x if prev is one else exact_div(x, prev)
                continue
            for j in range(n):
                if j == c:
                    continue
                x = p * rowi[j] - a * rowr[j]
                rowi[j] = x if (prev is one or not x.terms) else exact_div(x, prev)
            rowi[c] = ring.zero()
        pivots.append(c)
        prev = p
        r += 1
    return A, pivots, prev


def rank(M: Sequence[Sequence[LaurentPoly]]) -> int:
    _, pivots, _ = bareiss_rref(M)
    return len(pivots)


def normalize_vector(v: Sequence[LaurentPoly]) -> list[LaurentPoly]:
    """Strip the common monomial factor and the scalar content; make the
    leading coefficient of the first nonzero entry positive (or 1 over GF(p))."""
    nz = [x for x in v if x.terms]
    if not nz:
        return list(v)
    ring = nz[0].ring
    K = ring.coeffs
    n = ring.nvars
    lo = [min(e[i] for x in nz for e in x.terms) for i in range(n)]
    shift = tuple(-a for a in lo)
    w = [x.shift(shift) if x.terms else x for x in v]
    coeffs = [c for x in w for c in x.terms.values()]
    g = K.content_gcd(coeffs)
    lead = next(x for x in w if x.terms).leading()[1]
    if K.kind == "GF":
        g = lead
    elif lead < 0:
        g = -g
    if g != 1:
        inv = K.inv(g) if K.is_field else None
        if inv is not None:
            w = [x.scale(inv) for x in w]
        else:
            w = [x / g for x in w]
    return w


def bareiss_kernel(M: Sequence[Sequence[LaurentPoly]], ring: RingSpec | None = None) -> list[list[LaurentPoly]]:
    """A basis of the right kernel of ``M`` over the fraction field, with
    polynomial entries and normalized content.  One vector per non-pivot
    column, in column order."""
    m, n = _shape(M)
    ring = ring or _ring_of(M)
    if ring is None:
        raise DomainError("cannot infer ring of an empty matrix")
    if m == 0:
        return [[ring.one() if j == i else ring.zero() for j in range(n)] for i in range(n)]
    E, pivots, d = bareiss_rref(M)
    if d is None:
        d = ring.one()
    pivset = set(pivots)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [ring.zero()] * n
        v[f] = d
        for i, pc in enumerate(pivots):
            v[pc] = -E[i][f]
        basis.append(normalize_vector(v))
    for v in basis:
        for row in M:
            s = ring.zero()
            for x, y in zip(row, v):
                if x.terms and y.terms:
                    s = s + x * y
            if s.terms:
                raise AssertionError("kernel vector failed exact annihilation")
    return basis


def solve_exact(M: Sequence[Sequence[LaurentPoly]], b: Sequence[LaurentPoly]) -> list[LaurentPoly] | None:
    """Solve ``M x = b`` with ``x`` over the base ring (not its fraction field).

    Free variables are set to zero.  Returns ``None`` when no solution exists
    over the fraction field or when the solution is not integral.  For ``M``
    of full column rank the solution is unique, so ``None`` then certifies
    that ``b`` is not in the base-ring span of the columns.
    """
    m, n = _shape(M)
    if len(b) != m:
        raise RaggedMatrix("right-hand side has the wrong length")
    ring = _ring_of(M) or _ring_of([b])
    aug = [list(M[i]) + [b[i]] for i in range(m)]
    E, pivots, d = bareiss_rref(aug)
    if n in pivots:
        return None
    x = [ring.zero()] * n
    for i, pc in enumerate(pivots):
        num = E[i][n]
        if not num.terms:
            continue
        try:
            x[pc] = exact_div(num, d)
        except NotDivisible:
            return None
    return x


def mat_vec(M: Sequence[Sequence[LaurentPoly]], v: Sequence[LaurentPoly]) -> list[LaurentPoly]:
    out = []
    for row in M:
        s = None
        for x, y in zip(row, v):
            if x.terms and y.terms:
                s = x * y if s is None else s + x * y
        out.append(s if s is not None else (v[0].ring.zero() if v else row[0].ring.zero()))
    return out


# ---------------------------------------------------------------------------
# specialization at finite-field points


def _rank_mod(rows: list[list[int]], q: int) -> int:
    rows = [r[:] for r in rows]
    rk = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][c] % q), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = pow(rows[rk][c], -1, q)
        pr = rows[rk]
        for i in range(len(rows)):
            if i != rk and rows[i][c] % q:
                f = rows[i][c] * inv % q
                ri = rows[i]
                for j in range(c, ncols):
                    ri[j] = (ri[j] - f * pr[j]) % q
        rk += 1
    return rk


def eval_mod(f: LaurentPoly, point: Sequence[int], q: int) -> int:
    """Evaluate a base-ring polynomial with integer/rational coefficients at a
    point of GF(q)^n (entries nonzero)."""
    from fractions import Fraction

    d = f.ring.denom
    total = 0
    for e, c in f.terms.items():
        c = Fraction(c)
        v = c.numerator * pow(c.denominator, -1, q) % q
        for x, k in zip(point, e):
            if k:
                k = k // d if f.ring.coeffs.kind != "GF" else k
                v = v * pow(x, k, q) % q if k > 0 else v * pow(pow(x, -1, q), -k, q) % q
        total = (total + v) % q
    return total


def specialize(M: Sequence[Sequence[LaurentPoly]], point: Sequence[int], q: int) -> list[list[int]]:
    return [[eval_mod(x, point, q) for x in row] for row in M]


def rank_mod(M: Sequence[Sequence[LaurentPoly]], point: Sequence[int], q: int) -> int:
    return _rank_mod(specialize(M, point, q), q)


DEFAULT_PRIME = 1_000_003


def random_point(nvars: int, rng: random.Random, q: int = DEFAULT_PRIME) -> list[int]:
    return [rng.randrange(1, q) for _ in range(nvars)]


def generic_rank(M: Sequence[Sequence[LaurentPoly]], rng: random.Random, trials: int = 3, q: int = DEFAULT_PRIME) -> int:
    """Rank over the fraction field estimated by specialization (a lower bound
    that is exact with high probability); the max over ``trials`` points."""
    ring = _ring_of(M)
    if ring is None:
        return 0
    return max(rank_mod(M, random_point(ring.nvars, rng, q), q) for _ in range(trials))
