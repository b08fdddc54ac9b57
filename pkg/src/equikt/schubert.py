"""Affine Schubert varieties for GL_n: coweights, torus-fixed lattices,
Demazure convolution rings and presentations of equivariant K_0.

A torus-fixed lattice ``t^a1 e1 + ... + t^an en`` is recorded by its
exponent vector ``a``; it lies in ``X_{<=mu}`` iff ``sorted(-a)`` is dominant,
below ``mu`` in dominance order and has the same sum.

Classes are localized to the fixed points: a class is determined by its
values (characters, i.e. Laurent polynomials in the ``t_i``) there.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

from equikt.errors import DomainError, NotImplementedCase, UnknownVariable
from equikt.exactalg.laurent import LaurentPoly, RingSpec
from equikt.exactalg.linalg import generic_rank, rank, solve_exact
from equikt.exactalg.scalars import QQ, CoeffRing
from equikt.tower import (
    AlgebraHom,
    RelationSearch,
    TowerPresentation,
    bundle_presentation,
    eliminate_generators,
    equalizer_module,
    kernel_subalgebra,
    localized_relations,
    subalgebra_relations,
)

# ---------------------------------------------------------------------------
# coweights


def is_dominant(mu: Sequence[int]) -> bool:
    return all(mu[i] >= mu[i + 1] for i in range(len(mu) - 1))


def dominance_leq(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """``lam <= mu`` in dominance order (partial sums bounded by those of mu)."""
    lam, mu = list(lam), list(mu)
    if len(lam) != len(mu):
        raise DomainError("coweights of different lengths")
    if sum(lam) != sum(mu):
        raise DomainError(f"dominance needs equal sums, got {sum(lam)} and {sum(mu)}")
    if not (is_dominant(lam) and is_dominant(mu)):
        raise DomainError("dominance order is defined on dominant coweights")
    s = t = 0
    for a, b in zip(lam, mu):
        s += a
        t += b
        if s > t:
            return False
    return True


def fundamental(n: int, j: int) -> tuple[int, ...]:
    if not 1 <= j <= n:
        raise DomainError(f"omega_{j} does not exist for GL_{n}")
    return (1,) * j + (0,) * (n - j)


def dominant_below(mu: Sequence[int]) -> list[tuple[int, ...]]:
    """All dominant coweights ``lam <= mu``."""
    mu = tuple(mu)
    n = len(mu)
    if not is_dominant(mu):
        raise DomainError(f"{mu} is not dominant")
    out = []

    def rec(prefix, remaining, psum, tsum):
        i = len(prefix)
        if i == n:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        hi = prefix[-1] if prefix else mu[0]
        lo = mu[-1]
        for v in range(hi, lo - 1, -1):
            if psum + v > tsum + mu[i]:
                continue
            rec(prefix + [v], remaining - v, psum + v, tsum + mu[i])

    rec([], sum(mu), 0, 0)
    return [lam for lam in out if dominance_leq(lam, mu)]


def schubert_fixed_points(n: int, mu: Sequence[int]) -> list[tuple[int, ...]]:
    """Torus-fixed lattices of ``X_{<=mu}`` in lex order."""
    mu = tuple(mu)
    if len(mu) != n:
        raise DomainError(f"coweight {mu} has length {len(mu)}, expected {n}")
    pts = set()
    for lam in dominant_below(mu):
        for perm in set(itertools.permutations(lam)):
            pts.add(tuple(-x for x in perm))
    return sorted(pts)


def lg(mu: Sequence[int]) -> int:
    """Number of fundamental coweights in ``mu - mu_n * (1,...,1)``."""
    if not is_dominant(mu):
        raise DomainError(f"{mu} is not dominant")
    return mu[0] - mu[-1]


def fundamental_word(mu: Sequence[int]) -> tuple[int, ...]:
    """Decompose ``mu - mu_n(1..1)`` as a sum of fundamental coweights,
    largest index first: (2,1,0) -> (2, 1)."""
    mu = tuple(mu)
    if not is_dominant(mu):
        raise DomainError(f"{mu} is not dominant")
    shifted = [x - mu[-1] for x in mu]
    word = []
    for j in range(len(mu) - 1, 0, -1):
        word.extend([j] * (shifted[j - 1] - shifted[j]))
    return tuple(word)


# ---------------------------------------------------------------------------
# presentations with localization data


Point = Hashable


@dataclass
class SchubertPresentation:
    """An algebra over ``Z[t^±]``-type base given by generators, relations
    and standard monomials, together with the value of every generator at
    every torus-fixed point."""

    base: RingSpec
    names: tuple[str, ...]
    weights: tuple[int, ...]
    relations: list[LaurentPoly]
    standard: list[tuple[int, ...]]
    points: list[Point]
    values: list[dict[str, LaurentPoly]]
    label: str = ""
    tower: TowerPresentation | None = None
    ambient: TowerPresentation | None = None
    embedding: dict[str, LaurentPoly] = field(default_factory=dict)
    unit_leading: list[bool] = field(default_factory=list)
    eliminated: dict[str, LaurentPoly] = field(default_factory=dict)
    certificates: dict[str, object] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.standard)

    @property
    def ring(self) -> RingSpec:
        return self.base.extend(self.names)

    @property
    def free(self) -> bool:
        return all(self.unit_leading) if self.unit_leading else True

    def monomial(self, exps: Sequence[int]) -> LaurentPoly:
        ring = self.ring
        d = ring.denom
        nb = self.base.nvars
        return LaurentPoly._make(ring, {(0,) * nb + tuple(a * d for a in exps): 1})

    def element(self, x) -> LaurentPoly:
        if isinstance(x, str):
            return self.ring.parse(x)
        if isinstance(x, LaurentPoly):
            missing = x.variables() - set(self.ring.names)
            if missing:
                raise UnknownVariable(f"variables {sorted(missing)} not in the presentation")
            return x.change_ring(self.ring)
        return self.ring.const(x)

    def point_index(self, x: Point) -> int:
        key = tuple(x) if isinstance(x, list) else x
        try:
            return self.points.index(key)
        except ValueError:
            raise DomainError(f"unknown fixed point {x!r}") from None

    def trace(self, cls, x: Point) -> LaurentPoly:
        i = self.point_index(x)
        return self.element(cls).substitute(self.values[i], self.base)

    def localization_matrix(self) -> list[list[LaurentPoly]]:
        """Rows: standard monomials; columns: fixed points."""
        return [[self.trace(self.monomial(m), p) for p in self.points] for m in self.standard]

    def localization_injective(self, rng: random.Random | None = None) -> bool:
        M = self.localization_matrix()
        exact = rank(M) == self.rank
        if rng is None:
            return exact
        return exact and generic_rank(M, rng) == self.rank

    # -- output ---------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "base": self.base.to_json(),
            "generators": [{"name": n, "weight": w} for n, w in zip(self.names, self.weights)],
            "relations": [r.to_json() for r in self.relations],
            "relations_text": [str(r) for r in self.relations],
            "standard_monomials": [list(m) for m in self.standard],
            "rank": self.rank,
            "free": self.free,
            "eliminated": {k: str(v) for k, v in self.eliminated.items()},
            "tower": self.tower.to_json() if self.tower is not None else None,
            "fixed_points": [
                {"a": list(p) if isinstance(p, tuple) else p, "values": {k: v.to_json() for k, v in vals.items()}}
                for p, vals in zip(self.points, self.values)
            ],
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "SchubertPresentation":
        base = RingSpec.from_json(d["base"])
        names = tuple(g["name"] for g in d["generators"])
        weights = tuple(int(g["weight"]) for g in d["generators"])
        ring = base.extend(names)
        rels = [LaurentPoly.from_json(ring, r) for r in d["relations"]]
        pts, vals = [], []
        for fp in d["fixed_points"]:
            a = fp["a"]
            pts.append(tuple(_tuplify(a)) if isinstance(a, list) else a)
            vals.append({k: LaurentPoly.from_json(base, v) for k, v in fp["values"].items()})
        tower = TowerPresentation.from_json(d["tower"]) if d.get("tower") else None
        std = [tuple(m) for m in d["standard_monomials"]]
        return cls(
            base, names, weights, rels, std, pts, vals, label=d.get("label", ""), tower=tower,
            unit_leading=[True] * len(rels) if d.get("free", True) else [False] * len(rels),
            eliminated={k: ring.parse(v) for k, v in d.get("eliminated", {}).items()},
        )


def _tuplify(x):
    return tuple(_tuplify(y) if isinstance(y, list) else y for y in x)


def trace_at_fixed_point(pres: SchubertPresentation, cls, x: Point) -> LaurentPoly:
    """Value of a class at a fixed point (substitute the generator values)."""
    return pres.trace(cls, x)


# ---------------------------------------------------------------------------
# Demazure rings


@dataclass(frozen=True)
class DemazureWord:
    n: int
    word: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("group rank must be >= 1")
        for j in self.word:
            if not 1 <= j <= self.n:
                raise DomainError(f"omega_{j} does not exist for GL_{self.n}")

    @property
    def total(self) -> tuple[int, ...]:
        out = [0] * self.n
        for j in self.word:
            for i in range(j):
                out[i] += 1
        return tuple(out)


def _gen_prefix(n: int) -> str:
    return "xi" if n <= 2 else "chi"


def demazure_ring(word: DemazureWord, coeffs: CoeffRing = QQ, level: int = 0) -> SchubertPresentation:
    """The K-ring of the convolution space for a word of fundamental coweights.

    Each factor ``omega_1`` (or ``omega_{n-1}``) contributes a projective
    space ``P^{n-1}`` with a generator ``x`` and relation
    ``prod (x - t_k)``; ``omega_n`` contributes a point.  Fixed points are
    choice sequences: an ``omega_1`` step choosing ``c`` moves the lattice by
    ``-e_c`` (value ``x = t_c``); an ``omega_{n-1}`` step choosing ``c`` drops
    every coordinate but ``c`` (value ``x = t_c``).
    """
    n = word.n
    base = RingSpec.torus(n, coeffs, level)
    ts = list(base.gens())
    pres = TowerPresentation.point(base)
    steps = []
    prefix = _gen_prefix(n)
    for i, j in enumerate(word.word):
        if j == n:
            steps.append(("det", None))
            continue
        if j == 1:
            kind = "w1"
        elif j == n - 1:
            kind = "wn1"
        else:
            raise NotImplementedCase(
                f"omega_{j} for GL_{n} needs a Grassmannian factor; only omega_1, omega_(n-1), omega_n are supported"
            )
        name = f"{prefix}{i}"
        pres = bundle_presentation(pres, ts, name=name)
        steps.append((kind, name))
    points, values = [], []
    choice_ranges = [range(n) if kind != "det" else [None] for kind, _ in steps]
    for choice in itertools.product(*choice_ranges):
        a = [0] * n
        vals = {}
        for (kind, name), c in zip(steps, choice):
            if kind == "det":
                a = [x - 1 for x in a]
                continue
            if kind == "w1":
                a[c] -= 1
            else:
                a = [x - 1 for x in a]
                a[c] += 1
            vals[name] = ts[c]
        points.append(tuple(c for c in choice if c is not None))
        values.append(vals)
    names = pres.gen_names
    return SchubertPresentation(
        base, names, tuple(1 for _ in names), list(pres.relations), pres.basis_exponents(),
        points, values, label=f"Demazure GL{n} word {list(word.word)}", tower=pres,
        unit_leading=[True] * len(names),
    )


def chain_endpoint(word: DemazureWord, choice: Sequence[int]) -> tuple[int, ...]:
    """The lattice reached by a fixed chain (the image under convolution)."""
    n = word.n
    a = [0] * n
    it = iter(choice)
    for j in word.word:
        if j == n:
            a = [x - 1 for x in a]
            continue
        c = next(it)
        if j == 1:
            a[c] -= 1
        else:
            a = [x - 1 for x in a]
            a[c] += 1
    return tuple(a)


# ---------------------------------------------------------------------------
# GL_2: the recursion over mu = a*omega_1


def _elementary_values(a: int, base: RingSpec) -> list[list[LaurentPoly]]:
    """Values of e_1..e_a at the fixed points of X_{<=a*omega_1} (lex order):
    at ``(-k, -(a-k))`` the quotient lattice has weights t1 (k times) and t2."""
    t1, t2 = base.gens()
    pts = [(-k, -(a - k)) for k in range(a, -1, -1)]
    out = []
    for j in range(1, a + 1):
        row = []
        for p in pts:
            k = -p[0]
            row.append(_esym_multiset(j, k, a - k, t1, t2, base))
        out.append(row)
    return out


def _esym_multiset(j, k, l, t1, t2, base):
    from math import comb

    total = base.zero()
    for i in range(0, j + 1):
        if i <= k and j - i <= l:
            total = total + (t1 ** i) * (t2 ** (j - i)) * comb(k, i) * comb(l, j - i)
    return total


@dataclass
class GL2Stage:
    """K_0 of X_{<=a omega_1} as value vectors on its fixed points."""

    a: int
    points: list[tuple[int, int]]
    basis: list[list[LaurentPoly]]
    equalizer_rank: int
    search: RelationSearch | None = None
    certificates: dict = field(default_factory=dict)


def _in_span(basis: list[list[LaurentPoly]], v: list[LaurentPoly]) -> bool:
    if not basis:
        return all(not x.terms for x in v)
    M = [[b[i] for b in basis] for i in range(len(v))]
    x = solve_exact(M, v)
    if x is None:
        return False
    for i in range(len(v)):
        s = v[i].ring.zero()
        for c, b in zip(x, basis):
            s = s + c * b[i]
        if s != v[i]:
            return False
    return True


def gl2_recursion(a_max: int, coeffs: CoeffRing = QQ, level: int = 0, rng: random.Random | None = None) -> list[GL2Stage]:
    """Run the blowup-square recursion for X_{<=a omega_1}, a = 0..a_max.

    Step a -> a+1 uses Y = P^1-bundle over X_a (fixed points ``(b, c)``
    lying over ``b - e_c``), Z = X_{<=(a, 1)}, a translate of X_{a-1}, and
    the exceptional fibre E, whose classes are compared through their
    values at ``E^T = {(b, c) : b - e_c in Z}``.  K_0(X_{a+1}) is the
    equalizer of K(Y) and K(Z) there.  An R-basis is then taken from the
    standard monomials in e_1..e_{a+1}; it is certified to lie in the
    equalizer (exact membership) and to contain the fraction-field kernel
    basis in its R-span.
    """
    if a_max < 0:
        raise DomainError("a must be >= 0")
    base = RingSpec.torus(2, coeffs, level)
    t1, t2 = base.gens()
    one = base.one()
    rng = rng or random.Random(0)
    stages = [GL2Stage(0, [(0, 0)], [[one]], 1)]
    if a_max >= 1:
        stages.append(GL2Stage(1, [(-1, 0), (0, -1)], [[one, one], [t1, t2]], 2))
    for a in range(1, a_max):
        X, Xm = stages[a], stages[a - 1]
        new_pts = [(-k, -(a + 1 - k)) for k in range(a + 1, -1, -1)]
        z_pts = [(p[0] - 1, p[1] - 1) for p in Xm.points]
        z_index = {p: i for i, p in enumerate(z_pts)}
        y_pts = [(b, c) for b in X.points for c in (0, 1)]
        tc = (t1, t2)
        y_basis = []
        for u in X.basis:
            y_basis.append([u[X.points.index(b)] for b, c in y_pts])
            y_basis.append([u[X.points.index(b)] * tc[c] for b, c in y_pts])
        target = lambda b, c: (b[0] - (c == 0), b[1] - (c == 1))
        e_rows = [i for i, (b, c) in enumerate(y_pts) if target(b, c) in z_index]
        HY = [[yb[i] for yb in y_basis] for i in e_rows]
        HZ = [[zb[z_index[target(*y_pts[i])]] for zb in Xm.basis] for i in e_rows]
        km = equalizer_module(HY, HZ, base)
        rk = km.rank

        # function on new points from an equalizer vector
        def as_function(vec):
            ny = len(y_basis)
            out = []
            for p in new_pts:
                if p in z_index:
                    zi = z_index[p]
                    out.append(_combine_vals(vec[ny:], [zb[zi] for zb in Xm.basis], base))
                else:
                    i = next(i for i, (b, c) in enumerate(y_pts) if target(b, c) == p)
                    out.append(_combine_vals(vec[:ny], [yb[i] for yb in y_basis], base))
            return out

        kernel_funcs = [as_function(v) for v in km.vectors]
        evals = _elementary_values(a + 1, base)
        names = [f"e{j}" for j in range(1, a + 2)]
        search = localized_relations(base, evals, max_deg=4 * (a + 1) + 4, names=names,
                                     weights=list(range(1, a + 2)), rank_hint=rk)
        basis = search.standard_elements

        def member(f):
            ys = [f[new_pts.index(target(b, c))] for b, c in y_pts]
            zs = [f[new_pts.index(p)] for p in z_pts]
            return _in_span(y_basis, ys) and _in_span(Xm.basis, zs)

        certs = {
            "equalizer_rank": rk,
            "rank_bookkeeping": rk == len(y_basis) + len(Xm.basis) - km.image_rank,
            "standard_in_equalizer": all(member(f) for f in basis),
            "kernel_in_span": all(_in_span(basis, f) for f in kernel_funcs),
            "standard_count": len(basis) == rk,
            "generic_rank": generic_rank([list(f) for f in basis], rng) == rk if basis else rk == 0,
        }
        stages.append(GL2Stage(a + 1, new_pts, basis, rk, search, certs))
    return stages


def _combine_vals(coeffs, vals, base):
    s = base.zero()
    for c, v in zip(coeffs, vals):
        if c.terms and v.terms:
            s = s + c * v
    return s


def _gl2_presentation(mu, coeffs, level, rng, max_deg=None, eliminate=True) -> SchubertPresentation:
    m1, m2 = mu
    a = m1 - m2
    stages = gl2_recursion(a, coeffs, level, rng)
    st = stages[a]
    base = RingSpec.torus(2, coeffs, level)
    shift = lambda p: (p[0] - m2, p[1] - m2)
    points = [shift(p) for p in st.points]
    if a == 0:
        return SchubertPresentation(base, (), (), [], [()], points, [{}], label=f"GL2 mu={list(mu)}",
                                    certificates={"equalizer_rank": 1})
    evals = _elementary_values(a, base)
    names = [f"e{j}" for j in range(1, a + 1)]
    weights = list(range(1, a + 1))
    deg = max_deg or 4 * a + 4

    def rerun(kept):
        return localized_relations(base, [evals[i] for i in kept], deg, [names[i] for i in kept],
                                   [weights[i] for i in kept], rank_hint=st.equalizer_rank)

    search = rerun(list(range(a)))
    kept = tuple(range(a))
    eliminated = {}
    if eliminate:
        el = eliminate_generators(search, rerun)
        search, kept, eliminated = el.search, el.kept, el.eliminated
    values = [{names[i]: evals[i][p] for i in kept} for p in range(len(points))]
    certs = dict(st.certificates)
    certs["equalizer_rank"] = st.equalizer_rank
    certs["fixed_points"] = len(points)
    if a == 1:
        certs.update({"rank_bookkeeping": True, "standard_in_equalizer": True, "kernel_in_span": True})
    pres = SchubertPresentation(
        base, search.names, search.weights, search.relations, search.standard, points, values,
        label=f"GL2 mu={list(mu)}", unit_leading=list(search.unit_leading), eliminated=eliminated,
        certificates=certs,
    )
    return pres


# ---------------------------------------------------------------------------
# GL_3: the catalogued square for mu = omega_2 + omega_1


def gl3_adjoint_square(coeffs: CoeffRing = QQ, level: int = 0):
    """Y = Demazure ring of the word (2, 1), Z = point, E = P^2 embedded
    diagonally: chi0, chi1 -> chi."""
    Yd = demazure_ring(DemazureWord(3, (2, 1)), coeffs, level)
    Y = Yd.tower
    base = Y.base
    pt = TowerPresentation.point(base)
    E = bundle_presentation(pt, list(base.gens()), name="chi")
    phi_Y = AlgebraHom(Y, E, {"chi0": "chi", "chi1": "chi"})
    phi_Z = AlgebraHom(pt, E, {})
    return Yd, pt, E, phi_Y, phi_Z


def gl2_adjoint_square(coeffs: CoeffRing = QQ, level: int = 0):
    """Y = Demazure ring of (1, 1), Z = point, E = P^1 with
    xi0 -> xi, xi1 -> t1 + t2 - xi."""
    Yd = demazure_ring(DemazureWord(2, (1, 1)), coeffs, level)
    Y = Yd.tower
    base = Y.base
    pt = TowerPresentation.point(base)
    E = bundle_presentation(pt, list(base.gens()), name="xi")
    phi_Y = AlgebraHom(Y, E, {"xi0": "xi", "xi1": "t1 + t2 - xi"})
    phi_Z = AlgebraHom(pt, E, {})
    return Yd, pt, E, phi_Y, phi_Z


def _gl3_adjoint_presentation(coeffs, level, rng, max_deg=None) -> SchubertPresentation:
    Yd, pt, E, phi_Y, phi_Z = gl3_adjoint_square(coeffs, level)
    Y = Yd.tower
    km = kernel_subalgebra(phi_Y, phi_Z)
    m1 = Y.element("chi0 - chi1")
    m2 = Y.element("chi0^2 - chi1^2")
    search = subalgebra_relations(Y, [m1, m2], max_deg or 8, names=["m1", "m2"], weights=[1, 2],
                                  rank_hint=km.rank)
    word = DemazureWord(3, (2, 1))
    base = Y.base
    points, values = [], []
    seen = {}
    for choice, vals in zip(Yd.points, Yd.values):
        p = chain_endpoint(word, choice)
        v = {
            "m1": vals["chi0"] - vals["chi1"],
            "m2": vals["chi0"] ** 2 - vals["chi1"] ** 2,
        }
        if p in seen:
            if seen[p] != v:
                raise AssertionError("generator values disagree on a fibre")
            continue
        seen[p] = v
    points = sorted(seen)
    values = [seen[p] for p in points]
    rng = rng or random.Random(0)
    # every kernel y-element must lie in the R-span of the standard monomials
    std_coords = [Y.coordinates(e) for e in search.standard_elements]
    in_span = all(_in_span(std_coords, Y.coordinates(y)) for y in km.y_elements)
    certs = {
        "equalizer_rank": km.rank,
        "rank_bookkeeping": km.consistent(),
        "kernel_in_span": in_span,
        "standard_in_equalizer": all(_in_image_of_point(phi_Y.apply(e)) for e in search.standard_elements),
        "generic_rank": generic_rank(std_coords, rng) == km.rank,
        "fixed_points": len(points),
    }
    return SchubertPresentation(
        base, search.names, search.weights, search.relations, search.standard, points, values,
        label="GL3 mu=[2, 1, 0]", ambient=Y, embedding={"m1": m1, "m2": m2},
        unit_leading=list(search.unit_leading), certificates=certs,
    )


def _in_image_of_point(x: LaurentPoly) -> bool:
    # an element of K(E) comes from K(pt) iff it is a base constant
    return not (x.variables() - set(x.ring.base().names))


# ---------------------------------------------------------------------------
# dispatcher


def _minuscule(n: int, mu: tuple[int, ...], coeffs, level) -> SchubertPresentation | None:
    word = fundamental_word(mu)
    if len(word) > 1:
        return None
    shift = mu[-1]
    base = RingSpec.torus(n, coeffs, level)
    if not word:
        pt = tuple(-shift for _ in range(n))
        return SchubertPresentation(base, (), (), [], [()], [pt], [{}], label=f"GL{n} mu={list(mu)}",
                                    certificates={"equalizer_rank": 1, "fixed_points": 1})
    j = word[0]
    if j not in (1, n - 1):
        raise NotImplementedCase(f"Grassmannian Gr({j},{n}) cells are not implemented")
    d = demazure_ring(DemazureWord(n, (j,)), coeffs, level)
    pts = [tuple(x - shift for x in chain_endpoint(DemazureWord(n, (j,)), c)) for c in d.points]
    order = sorted(range(len(pts)), key=lambda i: pts[i])
    return SchubertPresentation(
        base, d.names, d.weights, d.relations, d.standard, [pts[i] for i in order],
        [d.values[i] for i in order], label=f"GL{n} mu={list(mu)}", tower=d.tower,
        unit_leading=[True], certificates={"equalizer_rank": n, "fixed_points": n},
    )


def schubert_presentation(
    n: int,
    mu: Sequence[int],
    coeffs: CoeffRing = QQ,
    level: int = 0,
    rng: random.Random | None = None,
    max_deg: int | None = None,
    eliminate: bool = True,
) -> SchubertPresentation:
    """Presentation of K_0^T(X_{<=mu}).

    Supported: every mu for GL_2 (the recursion), minuscule mu for any n
    with a projective-space cell, and mu = (2,1,0) + const for GL_3 (the
    catalogued square).  Other cases raise ``NotImplementedCase``.
    """
    mu = tuple(int(x) for x in mu)
    if len(mu) != n:
        raise DomainError(f"coweight {mu} has length {len(mu)}, expected {n}")
    if not is_dominant(mu):
        raise DomainError(f"{mu} is not dominant")
    if n == 2:
        pres = _gl2_presentation(mu, coeffs, level, rng, max_deg, eliminate)
    else:
        pres = _minuscule(n, mu, coeffs, level)
        if pres is None:
            if n == 3 and tuple(x - mu[-1] for x in mu) == (2, 1, 0):
                pres = _gl3_adjoint_presentation(coeffs, level, rng, max_deg)
                if mu[-1]:
                    pres.points = [tuple(x - mu[-1] for x in p) for p in pres.points]
                    pres.label = f"GL3 mu={list(mu)}"
            else:
                raise NotImplementedCase(
                    f"GL_{n} with mu={list(mu)}: only GL_2, minuscule cells and the GL_3 adjoint square are automated"
                )
    expected = len(schubert_fixed_points(n, mu))
    if pres.rank != expected:
        raise AssertionError(f"rank {pres.rank} differs from the {expected} fixed points")
    if sorted(pres.points) != schubert_fixed_points(n, mu):
        raise AssertionError("localization table does not match the fixed points")
    return pres


# ---------------------------------------------------------------------------
# eigenvalue partitions


def eig_partitions(roots: Sequence, mu: Sequence[int]) -> list[tuple[tuple, ...]]:
    """Ordered decompositions of the multiset ``roots`` into sub-multisets
    of sizes ``mu``; duplicates (from repeated roots) are removed."""
    mu = [int(x) for x in mu]
    if any(x < 0 for x in mu) or sum(mu) != len(roots):
        raise DomainError(f"block sizes {mu} do not add up to {len(roots)}")
    items = sorted(roots, key=repr)
    counts: dict = {}
    for r in items:
        counts[r] = counts.get(r, 0) + 1
    keys = sorted(counts, key=repr)
    out = []

    def rec(i, remaining, acc):
        if i == len(mu):
            out.append(tuple(acc))
            return
        for block in _sub_multisets(keys, remaining, mu[i]):
            rest = dict(remaining)
            for r in block:
                rest[r] -= 1
            acc.append(block)
            rec(i + 1, rest, acc)
            acc.pop()

    rec(0, counts, [])
    return out


def _sub_multisets(keys, counts, size):
    def rec(j, left, acc):
        if left == 0:
            yield tuple(acc)
            return
        if j == len(keys):
            return
        k = keys[j]
        for take in range(min(counts[k], left), -1, -1):
            yield from rec(j + 1, left - take, acc + [k] * take)

    yield from rec(0, size, [])
