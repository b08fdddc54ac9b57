"""Fans, fixed loci of one-parameter subgroups and the piecewise-character
model of equivariant K_0 for toric varieties.

A direction ``V`` (rational subspace) stands for a torus element whose
cocharacter spans it.  The orbit of a cone ``tau`` is fixed exactly when
``span(tau)`` contains ``V``; fixed orbits of dimension one are curves whose
closures meet at the torus-fixed points of the maximal cones around them.
"""

from __future__ import annotations

import itertools
import json
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

from equikt.errors import DomainError, FanError, NotDivisible
from equikt.exactalg.laurent import LaurentPoly, RingSpec, exact_div
from equikt.exactalg.linalg import rank as poly_rank
from equikt.exactalg.scalars import QQ, CoeffRing

# ---------------------------------------------------------------------------
# rational linear algebra on small integer vectors


def _rref(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    A = [[Fraction(x) for x in r] for r in rows]
    ncols = len(A[0]) if A else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        A[r] = [x / p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        r += 1
    return A[:r]


def qrank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(_rref(rows))


def in_span(v: Sequence, rows: Sequence[Sequence]) -> bool:
    return qrank(list(rows) + [list(v)]) == qrank(rows)


def span_contains(big: Sequence[Sequence], small: Sequence[Sequence]) -> bool:
    return all(in_span(v, big) for v in small) if small else True


def orthogonal_complement(rows: Sequence[Sequence], d: int) -> list[list[int]]:
    """Integer basis (primitive vectors) of the orthogonal complement."""
    if not rows:
        return [[int(i == j) for j in range(d)] for i in range(d)]
    R = _rref(rows)
    pivots = []
    for row in R:
        pivots.append(next(j for j, x in enumerate(row) if x != 0))
    free = [j for j in range(d) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * d
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(_primitive(v))
    return basis


def _primitive(v: Sequence) -> list[int]:
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    iv = [int(Fraction(x) * den) for x in v]
    g = reduce(gcd, iv, 0)
    return [x // g for x in iv] if g else iv


def _det(M: Sequence[Sequence[int]]) -> Fraction:
    A = [[Fraction(x) for x in r] for r in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return det


# ---------------------------------------------------------------------------
# fans


Cone = frozenset


@dataclass
class Fan:
    dim: int
    rays: list[tuple[int, ...]]
    cones: list[frozenset]  # maximal cones as sets of ray indices

    def __post_init__(self):
        self.rays = [tuple(int(x) for x in r) for r in self.rays]
        self.cones = [frozenset(c) for c in self.cones]
        for r in self.rays:
            if len(r) != self.dim:
                raise FanError(f"ray {r} has wrong dimension")
            if not any(r):
                raise FanError("zero ray")
            if reduce(gcd, r, 0) != 1:
                raise FanError(f"ray {r} is not primitive")
        for c in self.cones:
            if not c:
                raise FanError("empty maximal cone")
            for i in c:
                if not 0 <= i < len(self.rays):
                    raise FanError(f"cone refers to missing ray {i}")
        self._faces: dict[frozenset, list[frozenset]] = {}

    # -- serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        return {"dim": self.dim, "rays": [list(r) for r in self.rays], "cones": [sorted(c) for c in self.cones]}

    @classmethod
    def from_json(cls, d) -> "Fan":
        if isinstance(d, str):
            d = json.loads(d)
        try:
            return cls(int(d["dim"]), [tuple(r) for r in d["rays"]], [frozenset(c) for c in d["cones"]])
        except (KeyError, TypeError) as exc:
            raise FanError(f"malformed fan description: {exc}") from None

    # -- cone geometry ------------------------------------------------------------

    def vectors(self, cone: Iterable[int]) -> list[tuple[int, ...]]:
        return [self.rays[i] for i in sorted(cone)]

    def cone_dim(self, cone: Iterable[int]) -> int:
        return qrank(self.vectors(cone))

    def facets(self, cone: frozenset) -> list[frozenset]:
        """Facets of a (possibly non-simplicial) cone, by supporting
        hyperplanes through rank-deficient ray subsets."""
        if cone in self._faces:
            return self._faces[cone]
        vecs = {i: self.rays[i] for i in cone}
        k = self.cone_dim(cone)
        out: set[frozenset] = set()
        if k == 1:
            out.add(frozenset())
        else:
            span_basis = _rref(list(vecs.values()))
            for sub in itertools.combinations(sorted(cone), k - 1):
                S = [vecs[i] for i in sub]
                if qrank(S) != k - 1:
                    continue
                # functional on span(cone) vanishing on S, written inside the span
                coords = _coords_in_basis(span_basis, S)
                normals = orthogonal_complement(coords, k)
                if len(normals) != 1:
                    continue
                u = normals[0]
                vals = {i: sum(a * b for a, b in zip(u, _coords_in_basis(span_basis, [v])[0])) for i, v in vecs.items()}
                if all(x >= 0 for x in vals.values()) or all(x <= 0 for x in vals.values()):
                    out.add(frozenset(i for i, x in vals.items() if x == 0))
        res = sorted(out, key=lambda c: sorted(c))
        self._faces[cone] = res
        return res

    def faces(self, cone: frozenset) -> set[frozenset]:
        seen = {cone}
        stack = [cone]
        while stack:
            c = stack.pop()
            if not c:
                continue
            for f in self.facets(c):
                if f not in seen:
                    seen.add(f)
                    stack.append(f)
        return seen

    def all_cones(self) -> list[frozenset]:
        cones = set()
        for c in self.cones:
            cones |= self.faces(c)
        return sorted(cones, key=lambda c: (len(c), sorted(c)))

    def is_simplicial_cone(self, cone) -> bool:
        return self.cone_dim(cone) == len(cone)

    def is_smooth_cone(self, cone) -> bool:
        if not self.is_simplicial_cone(cone):
            return False
        vecs = self.vectors(cone)
        k = len(vecs)
        g = 0
        for cols in itertools.combinations(range(self.dim), k):
            g = gcd(g, int(_det([[v[c] for c in cols] for v in vecs])))
        return g == 1

    def walls(self) -> dict[frozenset, list[int]]:
        """Codimension-one faces of maximal cones -> indices of maximal cones
        containing them (as faces)."""
        out: dict[frozenset, list[int]] = {}
        for idx, c in enumerate(self.cones):
            if self.cone_dim(c) != self.dim:
                continue
            for f in self.facets(c):
                out.setdefault(f, []).append(idx)
        return out


@dataclass
class FanReport:
    simplicial: bool
    smooth: bool
    complete: bool
    full_dimensional: bool
    boundary_walls: int

    def to_json(self) -> dict:
        return {
            "simplicial": self.simplicial,
            "smooth": self.smooth,
            "wall_complete": self.complete,
            "full_dimensional": self.full_dimensional,
            "boundary_walls": self.boundary_walls,
        }


def fan_validate(F: Fan, assert_simplicial: bool = False) -> FanReport:
    """Compute the simplicial / smooth / wall-complete flags of a fan."""
    simplicial = all(F.is_simplicial_cone(c) for c in F.cones)
    if assert_simplicial and not simplicial:
        bad = next(sorted(c) for c in F.cones if not F.is_simplicial_cone(c))
        raise FanError(f"cone {bad} has linearly dependent rays")
    smooth = simplicial and all(F.is_smooth_cone(c) for c in F.cones)
    full = all(F.cone_dim(c) == F.dim for c in F.cones)
    walls = F.walls()
    bad_walls = sum(1 for w, owners in walls.items() if len(owners) != 2)
    complete = full and bad_walls == 0
    return FanReport(simplicial, smooth, complete, full, bad_walls)


def _coords_in_basis(basis: list[list[Fraction]], vecs) -> list[list[Fraction]]:
    """Coordinates of vectors lying in the row space of an RREF basis."""
    pivots = [next(j for j, x in enumerate(row) if x != 0) for row in basis]
    return [[Fraction(v[p]) for p in pivots] for v in vecs]


# ---------------------------------------------------------------------------
# directions and fixed loci


@dataclass(frozen=True)
class SubtorusDirection:
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_vectors(cls, vecs: Sequence[Sequence]) -> "SubtorusDirection":
        vecs = [list(v) for v in vecs if any(v)]
        if not vecs:
            raise DomainError("direction must be nonzero")
        rows = _rref(vecs)
        return cls(tuple(tuple(_primitive(r)) for r in rows))

    @classmethod
    def from_json(cls, d) -> "SubtorusDirection":
        if isinstance(d, str):
            d = json.loads(d)
        return cls.from_vectors(d["span"])

    def to_json(self) -> dict:
        return {"span": [list(v) for v in self.basis]}

    @property
    def dim(self) -> int:
        return len(self.basis)


def _as_direction(V) -> SubtorusDirection:
    if isinstance(V, SubtorusDirection):
        return V
    V = list(V)
    if V and not isinstance(V[0], (list, tuple)):
        V = [V]
    return SubtorusDirection.from_vectors(V)


def fixed_cones(F: Fan, V) -> list[frozenset]:
    """Cones of ``F`` (all faces) whose linear span contains ``V``."""
    V = _as_direction(V)
    if any(len(v) != F.dim for v in V.basis):
        raise DomainError("direction lives in the wrong dimension")
    return [c for c in F.all_cones() if c and span_contains(F.vectors(c), V.basis)]


@dataclass
class CurveConfig:
    """Rational curves (nodes) glued at points (edges)."""

    nodes: list
    edges: list[tuple[int, int]]

    def __post_init__(self):
        n = len(self.nodes)
        for a, b in self.edges:
            if not (0 <= a < n and 0 <= b < n):
                raise DomainError(f"edge ({a}, {b}) refers to a missing node")
            if a == b:
                raise DomainError("loop edges (self-intersections) are not supported")

    def describe(self) -> str:
        n, e = len(self.nodes), len(self.edges)
        deg = [0] * n
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        h0, h1 = curve_config_cohomology(self)
        if h0 == 1 and e == n and n >= 2 and all(x == 2 for x in deg):
            return f"cycle({n})"
        if h0 == 1 and h1 == 0 and all(x <= 2 for x in deg):
            return f"chain({n})"
        return f"curves(nodes={n}, edges={e})"


def curve_config_cohomology(C: CurveConfig) -> tuple[int, int]:
    """``(h0, h1)`` of the structure sheaf: Betti numbers of the graph."""
    n = len(C.nodes)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in C.edges:
        if a == b:
            raise DomainError("loop edges (self-intersections) are not supported")
        parent[find(a)] = find(b)
    h0 = len({find(i) for i in range(n)})
    return h0, len(C.edges) - n + h0


@dataclass
class FixComponent:
    kind: str  # "point", "curves" or "higher"
    cones: list[frozenset]
    dimension: int
    config: CurveConfig | None = None
    simplicial: bool = True

    def describe(self) -> str:
        if self.kind == "point":
            return "point"
        if self.kind == "curves":
            return self.config.describe()
        return f"higher(dim={self.dimension})"

    def to_json(self) -> dict:
        out = {"kind": self.kind, "describe": self.describe(), "dimension": self.dimension,
               "cones": [sorted(c) for c in self.cones]}
        if self.config is not None:
            h0, h1 = curve_config_cohomology(self.config)
            out.update({"nodes": [sorted(c) for c in self.config.nodes], "edges": [list(e) for e in self.config.edges],
                        "h0": h0, "h1": h1})
        return out


def fix_components(F: Fan, V) -> list[FixComponent]:
    """Connected components of the fixed locus, classified by dimension.

    Two fixed cones are linked when one is a face of the other.  A
    component's dimension is ``d - min dim`` of its cones.  In dimension one
    the nodes are the fixed walls and a maximal cone meeting ``k`` of them
    glues them along a chain of ``k - 1`` edges (one point, ``k`` branches).
    """
    fixed = fixed_cones(F, V)
    idx = {c: i for i, c in enumerate(fixed)}
    parent = list(range(len(fixed)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in itertools.combinations(fixed, 2):
        if a < b or b < a:
            parent[find(idx[a])] = find(idx[b])
    groups: dict[int, list[frozenset]] = {}
    for c in fixed:
        groups.setdefault(find(idx[c]), []).append(c)
    dims = {c: F.cone_dim(c) for c in fixed}
    comps = []
    for members in groups.values():
        members.sort(key=lambda c: (dims[c], sorted(c)))
        cdim = F.dim - min(dims[c] for c in members)
        simp = all(F.is_simplicial_cone(c) for c in members)
        if cdim == 0:
            comps.append(FixComponent("point", members, 0, simplicial=simp))
        elif cdim == 1:
            walls = [c for c in members if dims[c] == F.dim - 1]
            edges = []
            for top in members:
                if dims[top] != F.dim:
                    continue
                inside = [i for i, w in enumerate(walls) if w < top]
                edges.extend(zip(inside, inside[1:]))
            comps.append(FixComponent("curves", members, 1, CurveConfig(walls, edges), simp))
        else:
            comps.append(FixComponent("higher", members, cdim, simplicial=simp))
    order = {"curves": 0, "higher": 1, "point": 2}
    comps.sort(key=lambda c: (order[c.kind], c.describe(), [sorted(x) for x in c.cones]))
    return comps


@dataclass
class WitnessResult:
    witness: bool
    bound: int
    inconclusive: bool
    components: list[FixComponent]

    def to_json(self) -> dict:
        return {
            "witness": self.witness,
            "h1_lower_bound": self.bound,
            "inconclusive": self.inconclusive,
            "components": [c.describe() for c in self.components],
        }


def negative_k_witness(F: Fan, V) -> WitnessResult:
    """Detect H^1(Fix, O) != 0 on the fixed locus of ``V``.

    Curve components contribute their graph h1; simplicial higher-dimensional
    components contribute nothing; non-simplicial ones make the answer
    inconclusive (a positive witness elsewhere still stands).
    """
    rep = fan_validate(F)
    if not rep.complete:
        raise FanError("negative_k_witness needs a wall-complete fan")
    comps = fix_components(F, V)
    bound = 0
    inconclusive = False
    for c in comps:
        if c.kind == "curves":
            bound += curve_config_cohomology(c.config)[1]
        elif c.kind == "higher" and not c.simplicial:
            inconclusive = True
    return WitnessResult(bound > 0, bound, inconclusive and bound == 0, comps)


# ---------------------------------------------------------------------------
# piecewise characters


class VVRing:
    """Tuples of Laurent polynomials, one per maximal cone, subject to the
    wall congruences ``f_s = f_t mod (1 - t^m)``."""

    def __init__(self, F: Fan, coeffs: CoeffRing = QQ):
        rep = fan_validate(F)
        if not rep.smooth:
            raise FanError("the piecewise-character model is only used for smooth fans")
        if not rep.complete:
            raise FanError("the piecewise-character model needs a wall-complete fan")
        self.fan = F
        self.base = RingSpec.torus(F.dim, coeffs)
        self.walls = []
        for wall, (s, t) in sorted(F.walls().items(), key=lambda kv: sorted(kv[0])):
            normals = orthogonal_complement(F.vectors(wall), F.dim)
            m = normals[0]
            # sign: non-negative on cone s
            other = next(i for i in F.cones[s] if i not in wall)
            if sum(a * b for a, b in zip(m, F.rays[other])) < 0:
                m = [-x for x in m]
            self.walls.append((s, t, tuple(m)))

    @property
    def ncones(self) -> int:
        return len(self.fan.cones)

    def character(self, m: Sequence[int]) -> LaurentPoly:
        return self.base.monomial(list(m))

    def congruence_modulus(self, m) -> LaurentPoly:
        return self.base.one() - self.character(m)

    def is_member(self, f: Sequence[LaurentPoly]) -> bool:
        if len(f) != self.ncones:
            raise DomainError(f"expected {self.ncones} entries, got {len(f)}")
        for s, t, m in self.walls:
            diff = f[s] - f[t]
            if diff.is_zero():
                continue
            try:
                exact_div(diff, self.congruence_modulus(m))
            except NotDivisible:
                return False
        return True

    def constant(self, c) -> tuple[LaurentPoly, ...]:
        x = c if isinstance(c, LaurentPoly) else self.base.const(c)
        return tuple(x for _ in range(self.ncones))

    def mul(self, f, g):
        return tuple(a * b for a, b in zip(f, g))

    def add(self, f, g):
        return tuple(a + b for a, b in zip(f, g))

    def line_bundle_classes(self) -> list[tuple[LaurentPoly, ...]]:
        """For each ray, the piecewise character equal to the dual-basis
        character of that ray on cones containing it and 1 elsewhere."""
        F = self.fan
        out = []
        for rho in range(len(F.rays)):
            f = []
            for cone in F.cones:
                if rho not in cone:
                    f.append(self.base.one())
                    continue
                rays = sorted(cone)
                M = [list(F.rays[i]) for i in rays]
                # dual basis: m with <m, ray_rho> = 1, <m, other rays> = 0
                m = _solve_dual(M, rays.index(rho))
                f.append(self.character(m))
            out.append(tuple(f))
        return out

    def random_member(self, rng: random.Random, terms: int = 3, bound: int = 3):
        gens = self.line_bundle_classes()
        total = self.constant(0)
        for _ in range(terms):
            c = self.base.monomial([rng.randint(-1, 1) for _ in range(self.fan.dim)], rng.randint(-bound, bound) or 1)
            prod = self.constant(c)
            for _ in range(rng.randint(0, 2)):
                prod = self.mul(prod, rng.choice(gens))
            total = self.add(total, prod)
        return total

    def rank(self) -> int:
        """Fraction-field rank of the span of products of line-bundle classes
        (equals the number of maximal cones for a smooth complete fan)."""
        gens = self.line_bundle_classes()
        vecs = [self.constant(1)]
        frontier = list(vecs)
        for _ in range(self.fan.dim):
            nxt = [self.mul(v, g) for v in frontier for g in gens]
            vecs.extend(nxt)
            frontier = nxt
        return poly_rank([list(v) for v in vecs])


def _solve_dual(M: list[list[int]], k: int) -> list[int]:
    """Integer m with M m = e_k for a unimodular square M."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == k))] for i, row in enumerate(M)]
    R = _rref(A)
    sol = [R[i][-1] for i in range(n)]
    if any(x.denominator != 1 for x in sol):
        raise FanError("cone is not unimodular")
    return [int(x) for x in sol]


def vv_ring(F: Fan, coeffs: CoeffRing = QQ) -> VVRing:
    return VVRing(F, coeffs)


# ---------------------------------------------------------------------------
# catalogue


def p1_fan() -> Fan:
    return Fan(1, [(1,), (-1,)], [{0}, {1}])


def p1xp1_fan() -> Fan:
    rays = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    return Fan(2, rays, [{0, 1}, {1, 2}, {2, 3}, {3, 0}])


def p2_fan() -> Fan:
    return Fan(2, [(1, 0), (0, 1), (-1, -1)], [{0, 1}, {1, 2}, {2, 0}])


def frustum_fan() -> Fan:
    """Face fan of the frustum with vertices (±2,±2,-1), (±1,±1,1):
    four lateral quadrilateral cones and two caps."""
    bottom = [(2, 2, -1), (-2, 2, -1), (-2, -2, -1), (2, -2, -1)]
    top = [(1, 1, 1), (-1, 1, 1), (-1, -1, 1), (1, -1, 1)]
    rays = bottom + top
    sides = [{i, (i + 1) % 4, 4 + i, 4 + (i + 1) % 4} for i in range(4)]
    caps = [{0, 1, 2, 3}, {4, 5, 6, 7}]
    return Fan(3, rays, sides + caps)


FANS = {"p1": p1_fan, "p1xp1": p1xp1_fan, "p2": p2_fan, "frustum": frustum_fan, "note76": frustum_fan}


def load_fan(spec: str) -> Fan:
    """A catalogued fan name or a path to a fan JSON file.

    A missing file whose stem is a catalogue name (``note76.json``) falls
    back to the catalogue.
    """
    if spec in FANS:
        return FANS[spec]()
    stem = os.path.basename(spec).removesuffix(".json")
    if not os.path.exists(spec) and stem in FANS:
        return FANS[stem]()
    try:
        with open(spec) as fh:
            return Fan.from_json(json.load(fh))
    except OSError as exc:
        raise FanError(f"cannot read fan {spec!r}: {exc}") from None
