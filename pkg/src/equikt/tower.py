"""Finite free algebras presented as towers of monic relations.

A tower over a Laurent base ``R`` is ``R[xi_1..xi_k]/(r_1..r_k)`` where
``r_i`` is monic in ``xi_i`` of degree ``d_i`` and only involves ``xi_j`` for
``j < i``.  Such an algebra is free over ``R`` with basis the monomials
``xi^a`` with ``0 <= a_i < d_i``; normal forms are computed by reducing the
last generator first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Mapping, Sequence

from equikt.errors import DegreeOverflow, DomainError, InvalidHom, RingMismatch, UnknownVariable
from equikt.exactalg.laurent import LaurentPoly, RingSpec
from equikt.exactalg.linalg import bareiss_kernel, bareiss_rref, rank, solve_exact


@dataclass(frozen=True)
class TowerGen:
    name: str
    degree: int
    invertible: bool = False


class TowerPresentation:
    """``base[gens]/(relations)`` with triangular monic relations."""

    def __init__(self, base: RingSpec, gens: Sequence[TowerGen] = (), relations: Sequence[LaurentPoly] = ()):
        if base.has_taut():
            raise DomainError("tower base must only contain torus variables")
        if len(gens) != len(relations):
            raise DomainError("one relation per generator")
        self.base = base
        self.gens = tuple(gens)
        self.ring = base.extend([g.name for g in gens])
        rels = []
        for i, (g, r) in enumerate(zip(self.gens, relations)):
            r = _into(r, self.ring)
            allowed = set(base.names) | {h.name for h in self.gens[: i + 1]}
            extra = r.variables() - allowed
            if extra:
                raise DomainError(f"relation for {g.name} uses later/unknown variables {sorted(extra)}")
            if r.degree(g.name) != g.degree or g.degree < 1:
                raise DomainError(f"relation for {g.name} must have degree {g.degree} in it")
            lead = r.coefficients_in(g.name)[g.degree]
            if lead != self.ring.one():
                raise DomainError(f"relation for {g.name} is not monic")
            if g.invertible:
                c0 = r.coefficients_in(g.name).get(0)
                if c0 is None or not c0.is_unit():
                    raise DomainError(f"{g.name} flagged invertible but the constant term is not a unit")
            rels.append(r)
        self.relations = tuple(rels)
        self._nbase = base.nvars
        self._pow_cache: dict[tuple[int, int], LaurentPoly] = {}
        self._basis_index = {a: j for j, a in enumerate(self.basis_exponents())}

    # -- basic data ---------------------------------------------------------------

    @classmethod
    def point(cls, base: RingSpec) -> "TowerPresentation":
        return cls(base)

    @property
    def gen_names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.gens)

    @property
    def rank(self) -> int:
        r = 1
        for g in self.gens:
            r *= g.degree
        return r

    def basis_exponents(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*[range(g.degree) for g in self.gens]))

    def basis(self) -> list[LaurentPoly]:
        d = self.ring.denom
        nb = self._nbase
        return [
            LaurentPoly._make(self.ring, {(0,) * nb + tuple(x * d for x in a): 1})
            for a in self.basis_exponents()
        ]

    def var(self, name: str) -> LaurentPoly:
        return self.ring.var(name)

    def element(self, x) -> LaurentPoly:
        if isinstance(x, str):
            return self.normal_form(self.ring.parse(x))
        if isinstance(x, LaurentPoly):
            return self.normal_form(x)
        return self.ring.const(x)

    def lift_base(self, f: LaurentPoly) -> LaurentPoly:
        return _into(f, self.ring)

    def __eq__(self, other):
        return (
            isinstance(other, TowerPresentation)
            and self.base == other.base
            and self.gens == other.gens
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.base, self.gens))

    def __repr__(self):
        return f"TowerPresentation(rank={self.rank}, gens={list(self.gen_names)})"

    # -- normal form ----------------------------------------------------------------

    def _reduced_power(self, i: int, k: int) -> LaurentPoly:
        """xi_i^k reduced in xi_i only (lower generators untouched)."""
        key = (i, k)
        hit = self._pow_cache.get(key)
        if hit is not None:
            return hit
        g = self.gens[i]
        x = self.ring.var(g.name)
        if k < g.degree:
            val = x ** k
        else:
            prev = self._reduced_power(i, k - 1) * x
            parts = prev.coefficients_in(g.name)
            top = parts.get(g.degree)
            if top is None:
                val = prev
            else:
                tail = x ** g.degree - self.relations[i]
                val = prev - top * x ** g.degree + top * tail
        self._pow_cache[key] = val
        return val

    def normal_form(self, x: LaurentPoly) -> LaurentPoly:
        """Remainder of ``x`` modulo the relations, supported on the monomial basis."""
        x = _into(x, self.ring)
        ring = self.ring
        d = ring.denom
        K = ring.coeffs
        terms = dict(x.terms)
        for i in range(len(self.gens) - 1, -1, -1):
            g = self.gens[i]
            idx = self._nbase + i
            limit = g.degree * d
            if all(e[idx] < limit for e in terms):
                continue
            out: dict = {}
            for e, c in terms.items():
                if e[idx] < limit:
                    out[e] = K.norm(out.get(e, 0) + c)
                    continue
                rest = e[:idx] + (0,) + e[idx + 1:]
                rep = self._reduced_power(i, e[idx] // d)
                for re, rc in rep.terms.items():
                    ee = tuple(a + b for a, b in zip(rest, re))
                    out[ee] = K.norm(out.get(ee, 0) + c * rc)
            terms = {e: c for e, c in out.items() if c != 0}
        return LaurentPoly._make(ring, terms)

    def coordinates(self, x: LaurentPoly, normalized: bool = False) -> list[LaurentPoly]:
        """Coordinates of ``x`` in the monomial basis, as base-ring elements."""
        nf = x if normalized else self.normal_form(x)
        nb = self._nbase
        d = self.ring.denom
        buckets: list[dict] = [dict() for _ in range(self.rank)]
        for e, c in nf.terms.items():
            a = tuple(v // d for v in e[nb:])
            buckets[self._basis_index[a]][e[:nb]] = c
        return [LaurentPoly._make(self.base, b) for b in buckets]

    def from_coordinates(self, coords: Sequence[LaurentPoly]) -> LaurentPoly:
        total = self.ring.zero()
        for c, b in zip(coords, self.basis()):
            if c.terms:
                total = total + _into(c, self.ring) * b
        return total

    def is_zero(self, x: LaurentPoly) -> bool:
        return self.normal_form(x).is_zero()

    # -- serialization --------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "gens": [{"name": g.name, "degree": g.degree, "invertible": g.invertible} for g in self.gens],
            "relations": [r.to_json() for r in self.relations],
            "rank": self.rank,
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "TowerPresentation":
        base = RingSpec.from_json(d["base"])
        gens = [TowerGen(g["name"], int(g["degree"]), bool(g.get("invertible", False))) for g in d["gens"]]
        ring = base.extend([g.name for g in gens])
        rels = [LaurentPoly.from_json(ring, r) for r in d["relations"]]
        pres = cls(base, gens, rels)
        if "rank" in d and int(d["rank"]) != pres.rank:
            raise DomainError("serialized rank disagrees with the generator degrees")
        return pres

    def describe(self) -> str:
        base = _base_text(self.base)
        if not self.gens:
            return base
        rels = ", ".join(str(r) for r in self.relations)
        return f"{base}[{', '.join(self.gen_names)}] / ({rels})"


def _base_text(base: RingSpec) -> str:
    k = str(base.coeffs).replace("QQ", "Q").replace("ZZ", "Z")
    if base.level:
        inner = ", ".join(f"{n}^(±1/{base.denom})" for n in base.names)
    else:
        inner = ", ".join(f"{n}^±1" for n in base.names)
    return f"{k}[{inner}]"


def _into(x: LaurentPoly, ring: RingSpec) -> LaurentPoly:
    """Move ``x`` into ``ring`` by variable name."""
    if x.ring is ring or x.ring == ring:
        return x
    if x.ring.coeffs != ring.coeffs:
        raise RingMismatch(f"coefficient rings differ: {x.ring.coeffs} vs {ring.coeffs}")
    missing = x.variables() - set(ring.names)
    if missing:
        raise UnknownVariable(f"variables {sorted(missing)} not in {ring.names}")
    if x.ring.level > ring.level:
        raise RingMismatch("element lives at a higher perfection level")
    return x.change_ring(ring)


# ---------------------------------------------------------------------------
# constructions


def _is_character(w: LaurentPoly) -> bool:
    return w.is_monomial() and w.is_unit()


def bundle_presentation(
    base: TowerPresentation,
    weights: Sequence[LaurentPoly],
    name: str | None = None,
    perfect_reduce: bool = False,
) -> TowerPresentation:
    """Adjoin the class of the tautological line of a split bundle with the
    given characters: a new generator ``xi`` with relation ``prod (xi - w)``.

    With ``perfect_reduce`` repeated weights are dropped (perfection kills
    the nilpotents that multiplicities would contribute).
    """
    if not weights:
        raise DomainError("bundle needs at least one weight")
    ws = []
    for w in weights:
        if isinstance(w, int):
            w = base.base.const(w)
        w = _into(w, base.base)
        if not _is_character(w):
            raise DomainError(f"weight {w} is not a character (unit monomial)")
        if perfect_reduce and w in ws:
            continue
        ws.append(w)
    if name is None:
        name = f"xi{len(base.gens)}"
    if name in base.ring.names:
        raise DomainError(f"generator name {name!r} already used")
    ring = base.ring.extend([name])
    x = ring.var(name)
    rel = ring.one()
    for w in ws:
        rel = rel * (x - _into(w, ring))
    gen = TowerGen(name, len(ws), invertible=True)
    return TowerPresentation(base.base, base.gens + (gen,), base.relations + (rel,))


def tensor_over_base(A: TowerPresentation, B: TowerPresentation) -> TowerPresentation:
    """Concatenate the towers of ``A`` and ``B``; clashing names in ``B`` get
    the smallest free suffix ``_1``, ``_2``, ..."""
    if A.base != B.base:
        raise RingMismatch("tensor product needs a common base")
    used = set(A.ring.names)
    renames = {}
    for g in B.gens:
        new = g.name
        j = 1
        while new in used:
            new = f"{g.name}_{j}"
            j += 1
        used.add(new)
        renames[g.name] = new
    gens = A.gens + tuple(TowerGen(renames[g.name], g.degree, g.invertible) for g in B.gens)
    ring = A.base.extend([g.name for g in gens])
    imgs = {old: ring.var(new) for old, new in renames.items()}
    rels = A.relations + tuple(r.substitute(imgs, ring) for r in B.relations)
    return TowerPresentation(A.base, gens, rels)


# ---------------------------------------------------------------------------
# homomorphisms


class AlgebraHom:
    """Base-linear algebra map given by images of the source generators."""

    def __init__(self, source: TowerPresentation, target: TowerPresentation, images: Mapping[str, object]):
        if source.base != target.base:
            raise RingMismatch("homomorphism needs a shared base")
        self.source = source
        self.target = target
        imgs = {}
        for g in source.gens:
            if g.name not in images:
                raise InvalidHom(f"no image given for {g.name}")
            imgs[g.name] = target.element(images[g.name])
        extra = set(images) - set(source.gen_names)
        if extra:
            raise InvalidHom(f"images given for unknown generators {sorted(extra)}")
        self.images = imgs
        for r in source.relations:
            if not self.apply(r).is_zero():
                raise InvalidHom(f"relation {r} does not map to zero")

    def apply(self, x: LaurentPoly) -> LaurentPoly:
        x = _into(x, self.source.ring)
        return self.target.normal_form(x.substitute(self.images, self.target.ring))

    __call__ = apply

    def to_json(self) -> dict:
        return {name: img.to_json() for name, img in self.images.items()}

    @classmethod
    def identity(cls, A: TowerPresentation) -> "AlgebraHom":
        return cls(A, A, {g.name: A.var(g.name) for g in A.gens})

    @classmethod
    def structure_map(cls, base: TowerPresentation, A: TowerPresentation) -> "AlgebraHom":
        """The inclusion of the base (a point presentation) into ``A``."""
        if base.gens:
            raise DomainError("structure_map expects the point presentation as source")
        return cls(base, A, {})


@dataclass
class FreeModuleMap:
    """Matrix of a base-linear map between free modules (rows = target basis)."""

    matrix: list[list[LaurentPoly]]
    source_rank: int
    target_rank: int

    def apply(self, coords: Sequence[LaurentPoly]) -> list[LaurentPoly]:
        out = []
        for row in self.matrix:
            s = None
            for a, b in zip(row, coords):
                if a.terms and b.terms:
                    s = a * b if s is None else s + a * b
            out.append(s if s is not None else coords[0].ring.zero())
        return out

    def rank(self) -> int:
        if not self.matrix or self.source_rank == 0:
            return 0
        return rank(self.matrix)


def hom_matrix(phi: AlgebraHom) -> FreeModuleMap:
    cols = [phi.target.coordinates(phi.apply(b)) for b in phi.source.basis()]
    m = phi.target.rank
    matrix = [[cols[j][i] for j in range(len(cols))] for i in range(m)]
    return FreeModuleMap(matrix, phi.source.rank, m)


# ---------------------------------------------------------------------------
# equalizers


@dataclass
class KernelModule:
    """Basis (over the fraction field, polynomial entries) of the equalizer
    ``{(y, z) : phi_Y(y) = phi_Z(z)}`` with the components as elements."""

    vectors: list[list[LaurentPoly]]
    y_elements: list[LaurentPoly]
    z_elements: list[LaurentPoly]
    rank_Y: int
    rank_Z: int
    image_rank: int

    @property
    def rank(self) -> int:
        return len(self.vectors)

    def consistent(self) -> bool:
        return self.rank == self.rank_Y + self.rank_Z - self.image_rank


def equalizer_module(
    HY: Sequence[Sequence[LaurentPoly]],
    HZ: Sequence[Sequence[LaurentPoly]],
    base: RingSpec,
    y_basis: Sequence[LaurentPoly] | None = None,
    z_basis: Sequence[LaurentPoly] | None = None,
) -> KernelModule:
    """Kernel of ``[HY | -HZ]`` for two maps into a common free module."""
    ny = len(HY[0]) if HY else len(y_basis or [])
    nz = len(HZ[0]) if HZ else len(z_basis or [])
    rows = max(len(HY), len(HZ))
    if HY and HZ and len(HY) != len(HZ):
        raise RingMismatch("maps have different targets")
    D = []
    for i in range(rows):
        left = list(HY[i]) if HY else []
        right = [-x for x in HZ[i]] if HZ else []
        D.append(left + right)
    if rows == 0:
        vecs = [[base.one() if j == i else base.zero() for j in range(ny + nz)] for i in range(ny + nz)]
        img = 0
    else:
        vecs = bareiss_kernel(D, base)
        _, piv, _ = bareiss_rref(D)
        img = len(piv)
    ys, zs = [], []
    for v in vecs:
        if y_basis is not None:
            ys.append(_combine(v[:ny], y_basis))
        if z_basis is not None:
            zs.append(_combine(v[ny:], z_basis))
    return KernelModule(vecs, ys, zs, ny, nz, img)


def _combine(coeffs, basis):
    total = None
    for c, b in zip(coeffs, basis):
        if c.terms:
            t = _into(c, b.ring) * b
            total = t if total is None else total + t
    return total if total is not None else basis[0].ring.zero()


def kernel_subalgebra(phi_Y: AlgebraHom, phi_Z: AlgebraHom) -> KernelModule:
    """Module basis of the equalizer of ``phi_Y: A_Y -> A_E`` and
    ``phi_Z: A_Z -> A_E``; the ``y_elements`` span the image of the
    equalizer in ``A_Y``."""
    if phi_Y.target != phi_Z.target:
        raise RingMismatch("equalizer needs a shared target")
    HY = hom_matrix(phi_Y).matrix
    HZ = hom_matrix(phi_Z).matrix
    km = equalizer_module(HY, HZ, phi_Y.source.base, phi_Y.source.basis(), phi_Z.source.basis())
    for y, z in zip(km.y_elements, km.z_elements):
        if phi_Y.apply(y) != phi_Z.apply(z):
            raise AssertionError("equalizer element does not equalize")
    return km


# ---------------------------------------------------------------------------
# relations among chosen generators


def _order_key(exps: Sequence[int], weights: Sequence[int]):
    # weighted degree, then lex with the last generator most significant
    return (sum(a * w for a, w in zip(exps, weights)), tuple(reversed(exps)))


def _monomials_of_degree(deg: int, weights: Sequence[int]) -> list[tuple[int, ...]]:
    out = []

    def rec(i, left, acc):
        if i == len(weights):
            if left == 0:
                out.append(tuple(acc))
            return
        for a in range(left // weights[i] + 1):
            acc.append(a)
            rec(i + 1, left - a * weights[i], acc)
            acc.pop()

    rec(0, deg, [])
    out.sort(key=lambda m: _order_key(m, weights))
    return out


def _divides(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass
class RelationSearch:
    """Outcome of ``subalgebra_relations``."""

    names: tuple[str, ...]
    weights: tuple[int, ...]
    ring: RingSpec
    relations: list[LaurentPoly]
    leading: list[tuple[int, ...]]
    unit_leading: list[bool]
    standard: list[tuple[int, ...]]
    standard_elements: list
    max_deg: int

    @property
    def rank(self) -> int:
        return len(self.standard)

    @property
    def monic(self) -> bool:
        """True when every relation has a unit leading coefficient, so the
        standard monomials form a base-ring basis of the generated algebra."""
        return all(self.unit_leading)

    def monomial(self, exps: Sequence[int]) -> LaurentPoly:
        d = self.ring.denom
        nb = self.ring.nvars - len(self.names)
        return LaurentPoly._make(self.ring, {(0,) * nb + tuple(a * d for a in exps): 1})


def relation_search(
    base: RingSpec,
    names: Sequence[str],
    weights: Sequence[int],
    max_deg: int,
    vector: Callable[[tuple[int, ...]], list[LaurentPoly]],
    rank_hint: int | None = None,
    degree_cap: int = 40,
) -> RelationSearch:
    """Relation discovery driven by a coordinate map on generator monomials.

    ``vector(m)`` must return coordinates of the monomial ``g^m`` in some
    base-linear embedding (tower coordinates or fixed-point values).
    Monomials are visited in (weighted degree, lex) order, skipping
    multiples of unit-leading monomials already found.  A monomial is
    standard if independent of the earlier standard ones over the fraction
    field; otherwise it yields one relation with it as leading monomial.
    With ``rank_hint`` the search stops once the standard set is complete
    and one more full weight band has been scanned.
    """
    if max_deg < 1:
        raise DomainError("max_deg must be >= 1")
    if max_deg > degree_cap:
        raise DegreeOverflow(f"max_deg {max_deg} exceeds the cap {degree_cap}")
    names = tuple(names)
    weights = tuple(int(w) for w in weights)
    if len(names) != len(weights) or any(w < 1 for w in weights):
        raise DomainError("one positive weight per generator")
    gring = base.extend(names)
    std: list[tuple[int, ...]] = []
    std_vecs: list[list[LaurentPoly]] = []
    pivot_rows: list[int] = []
    rels, leads, units = [], [], []
    max_w = max(weights) if weights else 1
    last_std_deg = 0
    for deg in range(max_deg + 1):
        if rank_hint is not None and len(std) == rank_hint and deg > last_std_deg + max_w:
            break
        for m in _monomials_of_degree(deg, weights):
            if any(_divides(l, m) for l, u in zip(leads, units) if u):
                continue
            v = vector(m)
            dep = _dependency(std_vecs, pivot_rows, v, base)
            if dep is None:
                std.append(m)
                std_vecs.append(v)
                pivot_rows = _pivot_rows(std_vecs)
                last_std_deg = deg
                continue
            coeffs, lead_coeff = dep
            rels.append(_relation_poly(gring, names, std, coeffs, m, lead_coeff))
            leads.append(m)
            units.append(lead_coeff.is_unit())
    return RelationSearch(names, weights, gring, rels, leads, units, std, [], max_deg)


def subalgebra_relations(
    A: TowerPresentation,
    gens: Sequence[LaurentPoly],
    max_deg: int,
    names: Sequence[str] | None = None,
    weights: Sequence[int] | None = None,
    rank_hint: int | None = None,
    degree_cap: int = 40,
) -> RelationSearch:
    """Discover the relations among ``gens`` (elements of ``A``) up to
    weighted degree ``max_deg``; every relation is checked to vanish in ``A``.

    Default weights are the total degree of each generator in the tower
    variables.
    """
    k = len(gens)
    names = tuple(names or [f"g{i + 1}" for i in range(k)])
    gens = [A.normal_form(g) for g in gens]
    if weights is None:
        weights = [max(1, g.total_degree(A.gen_names)) for g in gens]
    values: dict[tuple[int, ...], LaurentPoly] = {(0,) * k: A.ring.one()}

    def value(m):
        v = values.get(m)
        if v is not None:
            return v
        i = max(j for j in range(k) if m[j] > 0)
        prev = list(m)
        prev[i] -= 1
        v = A.normal_form(value(tuple(prev)) * gens[i])
        values[m] = v
        return v

    res = relation_search(
        A.base, names, weights, max_deg, lambda m: A.coordinates(value(m), normalized=True),
        rank_hint=rank_hint, degree_cap=degree_cap,
    )
    res.standard_elements = [value(m) for m in res.standard]
    check_relations(A, gens, res)
    return res


def localized_relations(
    base: RingSpec,
    gen_values: Sequence[Sequence[LaurentPoly]],
    max_deg: int,
    names: Sequence[str],
    weights: Sequence[int],
    rank_hint: int | None = None,
    degree_cap: int = 40,
) -> RelationSearch:
    """Relation discovery for classes given by their values at fixed points.

    ``gen_values[i][p]`` is the value of generator ``i`` at point ``p``.
    Valid whenever localization is injective on the algebra in question;
    ``standard_elements`` are then value vectors.
    """
    k = len(gen_values)
    npts = len(gen_values[0]) if k else 1
    values: dict[tuple[int, ...], list[LaurentPoly]] = {(0,) * k: [base.one()] * npts}

    def value(m):
        v = values.get(m)
        if v is not None:
            return v
        i = max(j for j in range(k) if m[j] > 0)
        prev = list(m)
        prev[i] -= 1
        v = [a * b for a, b in zip(value(tuple(prev)), gen_values[i])]
        values[m] = v
        return v

    res = relation_search(base, names, weights, max_deg, value, rank_hint=rank_hint, degree_cap=degree_cap)
    res.standard_elements = [value(m) for m in res.standard]
    for r in res.relations:
        for p in range(npts):
            pt = {n: gen_values[i][p] for i, n in enumerate(res.names)}
            if not r.substitute(pt, base).is_zero():
                raise AssertionError(f"discovered relation {r} fails at point {p}")
    return res


def _pivot_rows(vecs: list[list[LaurentPoly]]) -> list[int]:
    # pivot columns of the transpose = independent coordinate rows
    _, piv, _ = bareiss_rref(vecs)
    return piv


def _dependency(std_vecs, pivot_rows, v, base):
    """If ``v`` is a fraction-field combination of ``std_vecs``, return
    ``(coeffs, lead)`` with ``lead * v == sum coeffs_i * std_i`` (normalized);
    otherwise ``None``."""
    if not any(x.terms for x in v):
        return [base.zero()] * len(std_vecs), base.one()
    if not std_vecs:
        return None
    # solve on the pivot rows, then confirm on every row
    sub = [[s[r] for s in std_vecs] + [v[r]] for r in pivot_rows]
    ker = bareiss_kernel(sub, base)
    if len(ker) != 1:
        return None
    w = ker[0]
    lead = w[-1]
    if not lead.terms:
        return None
    coeffs = [-c for c in w[:-1]]
    if not _holds(std_vecs, v, coeffs, lead, base):
        return None
    # prefer an integral expression: then the leading coefficient is 1
    x = solve_exact([row[:-1] for row in sub], [row[-1] for row in sub])
    if x is not None and _holds(std_vecs, v, x, base.one(), base):
        return x, base.one()
    return coeffs, lead


def _holds(std_vecs, v, coeffs, lead, base):
    for r in range(len(v)):
        lhs = lead * v[r]
        rhs = base.zero()
        for c, s in zip(coeffs, std_vecs):
            if c.terms and s[r].terms:
                rhs = rhs + c * s[r]
        if lhs != rhs:
            return False
    return True


def _relation_poly(gring, names, std, coeffs, m, lead):
    nb = gring.nvars - len(names)
    d = gring.denom

    def mono(exps):
        return LaurentPoly._make(gring, {(0,) * nb + tuple(a * d for a in exps): 1})

    rel = _into(lead, gring) * mono(m)
    for c, s in zip(coeffs, std):
        if c.terms:
            rel = rel - _into(c, gring) * mono(s)
    return normalize_relation(rel, len(names), m)


def normalize_relation(rel: LaurentPoly, ngens: int, lead: Sequence[int] | None = None) -> LaurentPoly:
    """Scale a relation canonically: strip the common base-monomial factor
    and scalar content, clear rational denominators and make the leading
    coefficient positive (monic over GF(p))."""
    ring = rel.ring
    if rel.is_zero():
        return rel
    nb = ring.nvars - ngens
    K = ring.coeffs
    lo = [min(e[i] for e in rel.terms) for i in range(nb)]
    rel = rel.shift(tuple(-x for x in lo) + (0,) * ngens)
    d = ring.denom
    cand = list(rel.terms)
    if lead is not None:
        cand = [e for e in cand if tuple(x // d for x in e[nb:]) == tuple(lead)] or cand
    lead_e = max(cand, key=lambda e: (e[nb:], e[:nb]))
    if K.kind == "GF":
        return rel.scale(K.inv(rel.terms[lead_e]))
    cs = [Fraction(c) for c in rel.terms.values()]
    den = 1
    for c in cs:
        den = lcm(den, c.denominator)
    nums = [int(c * den) for c in cs]
    g = 0
    for x in nums:
        g = gcd(g, x)
    sign = -1 if rel.terms[lead_e] < 0 else 1
    factor = Fraction(den * sign, g)
    if K.kind == "ZZ":
        return LaurentPoly._make(ring, {e: int(Fraction(c) * factor) for e, c in rel.terms.items()})
    return rel.scale(factor)


def check_relations(A: TowerPresentation, gens: Sequence[LaurentPoly], res: RelationSearch):
    images = {n: g for n, g in zip(res.names, gens)}
    for r in res.relations:
        if not A.normal_form(r.substitute(images, A.ring)).is_zero():
            raise AssertionError(f"discovered relation {r} does not vanish")


def substitute_gens(res: RelationSearch, f: LaurentPoly, A: TowerPresentation, gens: Sequence[LaurentPoly]) -> LaurentPoly:
    return A.normal_form(_into(f, res.ring).substitute(dict(zip(res.names, gens)), A.ring))


# ---------------------------------------------------------------------------
# reduction of polynomials in the generator symbols


def leading_term(f: LaurentPoly, ngens: int, weights: Sequence[int]):
    """Leading generator-monomial of ``f`` and its base-ring coefficient."""
    ring = f.ring
    nb = ring.nvars - ngens
    d = ring.denom
    best = None
    for e in f.terms:
        m = tuple(x // d for x in e[nb:])
        key = _order_key(m, weights)
        if best is None or key > best[0]:
            best = (key, m)
    m = best[1]
    coeff = {e[:nb] + (0,) * ngens: c for e, c in f.terms.items() if tuple(x // d for x in e[nb:]) == m}
    return m, LaurentPoly._make(ring, coeff)


def reduce_modulo(f: LaurentPoly, relations: Sequence[LaurentPoly], ngens: int, weights: Sequence[int], max_steps: int = 100000) -> LaurentPoly:
    """Multivariate division of ``f`` by the relations whose leading
    coefficient is a unit of the base; returns the remainder."""
    ring = f.ring
    nb = ring.nvars - ngens
    d = ring.denom
    divisors = []
    for r in relations:
        if r.is_zero():
            continue
        m, c = leading_term(r, ngens, weights)
        if c.is_unit():
            divisors.append((m, c.inverse(), r))
    rem = ring.zero()
    f = _into(f, ring)
    steps = 0
    while not f.is_zero():
        steps += 1
        if steps > max_steps:
            raise DegreeOverflow("reduction did not terminate")
        m, c = leading_term(f, ngens, weights)
        for lm, cinv, r in divisors:
            if _divides(lm, m):
                shift = (0,) * nb + tuple((a - b) * d for a, b in zip(m, lm))
                f = f - (c * cinv) * r.shift(shift)
                break
        else:
            lead = c * LaurentPoly._make(ring, {(0,) * nb + tuple(a * d for a in m): 1})
            rem = rem + lead
            f = f - lead
    return rem


def ideals_equal(A_rels, B_rels, ngens, weights) -> bool:
    """Mutual reduction test (exact when both sides are Groebner-like with
    unit leading coefficients, as the searched relation sets are)."""
    return all(reduce_modulo(a, B_rels, ngens, weights).is_zero() for a in A_rels) and all(
        reduce_modulo(b, A_rels, ngens, weights).is_zero() for b in B_rels
    )


@dataclass
class Elimination:
    search: RelationSearch
    kept: tuple[int, ...]
    eliminated: dict[str, LaurentPoly] = field(default_factory=dict)


def eliminate_generators(
    search: RelationSearch,
    rerun: Callable[[list[int]], RelationSearch],
) -> Elimination:
    """Drop every generator that a unit-leading relation expresses through
    the others (e.g. ``2 e2 = e1^2 - ...`` once 2 is invertible) and redo the
    search on the remaining generators via ``rerun(kept_indices)``.
    Generators whose defining relation has a non-unit leading coefficient
    are kept, so nothing is eliminated where that would need a division."""
    kept = list(range(len(search.names)))
    eliminated: dict[str, LaurentPoly] = {}
    current = search
    while len(kept) > 1:
        drop = None
        for rel, lm, unit in zip(current.relations, current.leading, current.unit_leading):
            if unit and sum(lm) == 1:
                drop = (lm.index(1), rel)
                break
        if drop is None:
            break
        j, rel = drop
        name = current.names[j]
        _, c = leading_term(rel, len(current.names), current.weights)
        x = current.ring.var(name)
        eliminated[name] = (c * x - rel) * c.inverse()
        kept.pop(j)
        current = rerun(list(kept))
    return Elimination(current, tuple(kept), eliminated)


def eliminate_in_tower(A: TowerPresentation, gens: Sequence[LaurentPoly], search: RelationSearch, **kwargs) -> Elimination:
    def rerun(kept):
        return subalgebra_relations(
            A, [gens[i] for i in kept], search.max_deg,
            names=[search.names[i] for i in kept], weights=[search.weights[i] for i in kept], **kwargs,
        )

    return eliminate_generators(search, rerun)
