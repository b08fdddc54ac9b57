"""Mayer-Vietoris bookkeeping for abstract blowup squares.

For a square with ``f: Y -> X`` proper, ``Z`` closed in ``X`` and ``E`` the
preimage of ``Z``, degree zero and minus one of the long exact sequence read

    K_0(X) -> K_0(Y) + K_0(Z) -> K_0(E) -> K_{-1}(X) -> K_{-1}(Y) + K_{-1}(Z)

so ``K_0(X)`` is the equalizer of the two restrictions and, when ``Y`` and
``Z`` have no negative K-theory, ``K_{-1}(X)`` is the cokernel of the
difference map ``(y, z) -> y|_E - z|_E``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from equikt.errors import DomainError, RingMismatch
from equikt.exactalg.linalg import rank as poly_rank
from equikt.exactalg.linalg import solve_exact
from equikt.tower import AlgebraHom, KernelModule, hom_matrix, kernel_subalgebra

# ---------------------------------------------------------------------------
# Smith normal form over Z


def smith_normal_form(A: Sequence[Sequence[int]]):
    """Return ``(D, U, V)`` with ``U A V = D`` diagonal, ``U, V`` unimodular
    and the diagonal entries non-negative with ``d_i | d_{i+1}``."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [[int(x) for x in row] for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]

    def add_row(M, src, dst, k):  # row dst += k * row src
        M[dst] = [a + k * b for a, b in zip(M[dst], M[src])]

    def add_col(M, src, dst, k):
        for row in M:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        # pick the smallest nonzero entry in the remaining block as pivot
        entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        swap_rows(D, t, pi)
        swap_rows(U, t, pi)
        swap_cols(D, t, pj)
        swap_cols(V, t, pj)
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(D, t, i, -q)
                    add_row(U, t, i, -q)
                    if D[i][t]:
                        swap_rows(D, t, i)
                        swap_rows(U, t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(D, t, j, -q)
                    add_col(V, t, j, -q)
                    if D[t][j]:
                        swap_cols(D, t, j)
                        swap_cols(V, t, j)
                        done = False
            if done:
                # divisibility: fold in any entry not divisible by the pivot
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]), None)
                if bad is not None:
                    add_row(D, bad[0], t, 1)
                    add_row(U, bad[0], t, 1)
                    done = False
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return D, U, V


def invariant_factors(A: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith form (length ``min(m, n)``)."""
    D, _, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def cokernel_invariants(A: Sequence[Sequence[int]], nrows: int | None = None) -> list[int]:
    """``Z^m / im(A)`` as a list of invariant factors: ``0`` for each free
    summand, ``d > 1`` for each ``Z/d``; units are dropped."""
    m = len(A) if A else (nrows or 0)
    if not A or not A[0]:
        return [0] * m
    diag = invariant_factors(A)
    out = [d for d in diag if d != 1 and d != 0]
    out = sorted(out) + [0] * (m - sum(1 for d in diag if d))
    return out


def integer_kernel(A: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """A Z-basis of ``{x : A x = 0}``."""
    if not A:
        n = ncols or 0
        return [[int(i == j) for j in range(n)] for i in range(n)]
    D, _, V = smith_normal_form(A)
    n = len(A[0])
    r = sum(1 for i in range(min(len(D), n)) if D[i][i])
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


def describe_group(invariants: Sequence[int]) -> str:
    if not invariants:
        return "0"
    parts = ["Z" if d == 0 else f"Z/{d}" for d in invariants]
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# squares


@dataclass
class BlowupSquare:
    """Either four tower presentations with two homs into ``A_E``, or four
    free abelian groups given by ranks with integer restriction matrices
    (rows indexed by the basis of ``K_0(E)``)."""

    name: str
    kind: str  # "tower" or "abelian"
    phi_Y: AlgebraHom | None = None
    phi_Z: AlgebraHom | None = None
    ranks: tuple[int, int, int] | None = None  # (Y, Z, E) for abelian squares
    HY: list[list[int]] | None = None
    HZ: list[list[int]] | None = None
    note: str = ""

    def __post_init__(self):
        if self.kind == "tower":
            if self.phi_Y is None or self.phi_Z is None:
                raise DomainError("tower square needs both homomorphisms")
            if self.phi_Y.target != self.phi_Z.target:
                raise RingMismatch("the two homomorphisms must share the target")
            if self.phi_Y.source.base != self.phi_Z.source.base:
                raise RingMismatch("inconsistent bases")
        elif self.kind == "abelian":
            rY, rZ, rE = self.ranks
            for H, r in ((self.HY, rY), (self.HZ, rZ)):
                if len(H) != rE or any(len(row) != r for row in H):
                    raise DomainError("restriction matrix has the wrong shape")
        else:
            raise DomainError(f"unknown square kind {self.kind!r}")

    def difference_matrix(self):
        if self.kind == "abelian":
            return [list(a) + [-x for x in b] for a, b in zip(self.HY, self.HZ)]
        HY = hom_matrix(self.phi_Y).matrix
        HZ = hom_matrix(self.phi_Z).matrix
        return [list(a) + [-x for x in b] for a, b in zip(HY, HZ)]

    @property
    def constituent_ranks(self) -> tuple[int, int, int]:
        if self.kind == "abelian":
            return self.ranks
        return (self.phi_Y.source.rank, self.phi_Z.source.rank, self.phi_Y.target.rank)


@dataclass
class MVResult:
    square: str
    kernel_rank: int
    kernel_basis: list
    kneg1: list[int] | None  # invariant factors; None when only module-level data exist
    split: bool
    ranks: tuple[int, int, int]
    image_rank: int
    exact: bool
    kernel: KernelModule | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "square": self.square,
            "K0_rank": self.kernel_rank,
            "K-1": describe_group(self.kneg1) if self.kneg1 is not None else None,
            "K-1_invariant_factors": self.kneg1,
            "split": self.split,
            "ranks": {"Y": self.ranks[0], "Z": self.ranks[1], "E": self.ranks[2], "image": self.image_rank},
            "exact": self.exact,
            "kernel_y_elements": [str(y) for y in self.kernel.y_elements] if self.kernel else None,
            "kernel_basis": None if self.kernel else self.kernel_basis,
            "notes": self.notes,
        }


def mv_solve(sq: BlowupSquare) -> MVResult:
    """K_0 of the base as the equalizer, K_{-1} as the cokernel."""
    rY, rZ, rE = sq.constituent_ranks
    if sq.kind == "abelian":
        D = sq.difference_matrix()
        ker = integer_kernel(D, rY + rZ) if rE else [[int(i == j) for j in range(rY + rZ)] for i in range(rY + rZ)]
        coker = cokernel_invariants(D, rE) if rE else []
        img = sum(1 for d in invariant_factors(D) if d) if rE else 0
        exact = all(
            sum(D[i][j] * v[j] for j in range(rY + rZ)) == 0 for v in ker for i in range(rE)
        )
        return MVResult(sq.name, len(ker), ker, coker, not coker, (rY, rZ, rE), img,
                        exact and len(ker) == rY + rZ - img)
    km = kernel_subalgebra(sq.phi_Y, sq.phi_Z)
    D = sq.difference_matrix()
    split = _surjective(D, sq.phi_Y.source.base)
    exact = all(sq.phi_Y.apply(y) == sq.phi_Z.apply(z) for y, z in zip(km.y_elements, km.z_elements))
    notes = []
    if split:
        kneg1 = []
    else:
        kneg1 = None
        notes.append("difference map not shown surjective: only module-level data reported")
    return MVResult(sq.name, km.rank, km.vectors, kneg1, split, (rY, rZ, rE), km.image_rank,
                    exact and km.consistent(), kernel=km, notes=notes)


def _surjective(D, base) -> bool:
    """Every basis vector of the target has a preimage over the base ring."""
    m = len(D)
    if m == 0:
        return True
    if poly_rank(D) != m:
        return False
    for i in range(m):
        e = [base.one() if j == i else base.zero() for j in range(m)]
        x = solve_exact(D, e)
        if x is None:
            return False
    return True


@dataclass
class AuditReport:
    passed: bool
    expected: int
    actual: int
    ranks: tuple[int, int, int]
    image_rank: int

    @property
    def delta(self) -> int:
        return self.actual - self.expected

    def to_json(self) -> dict:
        return {"passed": self.passed, "expected": self.expected, "actual": self.actual, "delta": self.delta,
                "Y": self.ranks[0], "Z": self.ranks[1], "E": self.ranks[2], "image": self.image_rank}


def rank_audit(res: MVResult, expected: int) -> AuditReport:
    return AuditReport(res.kernel_rank == expected, expected, res.kernel_rank, res.ranks, res.image_rank)


# ---------------------------------------------------------------------------
# catalogue


def nodal_cubic_square() -> BlowupSquare:
    """Y = A^1, Z = pt, E = pt + pt; both restrictions are the diagonal."""
    return BlowupSquare("nodal-cubic", "abelian", ranks=(1, 1, 2), HY=[[1], [1]], HZ=[[1], [1]],
                        note="affine nodal cubic resolved by the affine line")


def identity_square(rank_Y: int = 1) -> BlowupSquare:
    """f = identity, Z = E = empty."""
    return BlowupSquare("identity", "abelian", ranks=(rank_Y, 0, 0), HY=[], HZ=[])


def gl2_adjoint_blowup() -> BlowupSquare:
    from equikt.schubert import gl2_adjoint_square

    _, _, _, phi_Y, phi_Z = gl2_adjoint_square()
    return BlowupSquare("gl2-adjoint", "tower", phi_Y, phi_Z)


def gl3_adjoint_blowup() -> BlowupSquare:
    from equikt.schubert import gl3_adjoint_square

    _, _, _, phi_Y, phi_Z = gl3_adjoint_square()
    return BlowupSquare("gl3-adjoint", "tower", phi_Y, phi_Z)


SQUARES = {
    "nodal-cubic": nodal_cubic_square,
    "identity": identity_square,
    "gl2-adjoint": gl2_adjoint_blowup,
    "gl3-adjoint": gl3_adjoint_blowup,
}
