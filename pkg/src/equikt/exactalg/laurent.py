"""Sparse multivariate Laurent polynomials with p-power-root exponents.

Exponents are stored as integer numerators over the common denominator
``p**level`` of the ring, so a ring at level 0 is an ordinary Laurent
polynomial ring and a ring at level ``m`` over GF(p) admits ``t^(1/p^m)``.
Tautological variables (the ``xi``'s of projective bundle towers) only carry
non-negative integer exponents.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from equikt.errors import (
    DomainError,
    NotDivisible,
    RingMismatch,
    UnknownVariable,
    ZeroSubstitution,
)
from equikt.exactalg.scalars import QQ, CoeffRing, coeff_ring_from_json

TORUS = "torus"
TAUT = "taut"


@dataclass(frozen=True)
class RingSpec:
    """Coefficients, an ordered variable list and a perfection level."""

    coeffs: CoeffRing
    vars: tuple[tuple[str, str], ...]
    level: int = 0
    _index: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        names = [n for n, _ in self.vars]
        if len(set(names)) != len(names):
            raise DomainError(f"duplicate variable names in {names}")
        for n, k in self.vars:
            if k not in (TORUS, TAUT):
                raise DomainError(f"variable {n!r} has unknown kind {k!r}")
        if self.level < 0:
            raise DomainError("perfection level must be non-negative")
        if self.level > 0 and self.coeffs.char == 0:
            raise DomainError("positive perfection level needs characteristic p")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    # construction helpers
    @classmethod
    def torus(cls, n: int, coeffs: CoeffRing = QQ, level: int = 0, prefix: str = "t") -> "RingSpec":
        return cls(coeffs, tuple((f"{prefix}{i + 1}", TORUS) for i in range(n)), level)

    def extend(self, names: Iterable[str], kind: str = TAUT) -> "RingSpec":
        return RingSpec(self.coeffs, self.vars + tuple((n, kind) for n in names), self.level)

    def with_level(self, level: int) -> "RingSpec":
        return RingSpec(self.coeffs, self.vars, level)

    def with_coeffs(self, coeffs: CoeffRing) -> "RingSpec":
        return RingSpec(coeffs, self.vars, self.level)

    def base(self) -> "RingSpec":
        """The sub-ring spec on the torus variables only."""
        return RingSpec(self.coeffs, tuple(v for v in self.vars if v[1] == TORUS), self.level)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.vars)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    @property
    def denom(self) -> int:
        return self.coeffs.char ** self.level if self.level else 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(name) from None

    def kind(self, name: str) -> str:
        return self.vars[self.index(name)][1]

    def is_torus(self, i: int) -> bool:
        return self.vars[i][1] == TORUS

    def has_taut(self) -> bool:
        return any(k == TAUT for _, k in self.vars)

    def compatible(self, other: "RingSpec") -> bool:
        return self.coeffs == other.coeffs and self.vars == other.vars

    def to_json(self) -> dict:
        d = self.coeffs.to_json()
        d["vars"] = [{"name": n, "kind": k} for n, k in self.vars]
        d["level"] = self.level
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "RingSpec":
        return cls(
            coeff_ring_from_json(d),
            tuple((v["name"], v.get("kind", TORUS)) for v in d["vars"]),
            int(d.get("level", 0)),
        )

    # element constructors
    def var(self, name: str) -> "LaurentPoly":
        e = [0] * self.nvars
        e[self.index(name)] = self.denom
        return LaurentPoly._make(self, {tuple(e): 1})

    def gens(self) -> tuple["LaurentPoly", ...]:
        return tuple(self.var(n) for n in self.names)

    def const(self, c) -> "LaurentPoly":
        c = self.coeffs(c)
        return LaurentPoly._make(self, {self.zero_exp(): c} if c != 0 else {})

    def zero(self) -> "LaurentPoly":
        return LaurentPoly._make(self, {})

    def one(self) -> "LaurentPoly":
        return self.const(1)

    def zero_exp(self) -> tuple[int, ...]:
        return (0,) * self.nvars

    def monomial(self, exps: Sequence, coeff=1) -> "LaurentPoly":
        """Monomial from true (rational) exponents."""
        return LaurentPoly(self, {tuple(exps): coeff})

    def parse(self, text: str) -> "LaurentPoly":
        return parse_poly(self, text)


def _lift_exps(terms: dict, factor: int) -> dict:
    if factor == 1:
        return terms
    return {tuple(x * factor for x in e): c for e, c in terms.items()}


class LaurentPoly:
    """An immutable element of a ``RingSpec``.

    ``terms`` maps scaled integer exponent tuples to nonzero coefficients.
    The public constructor takes true exponents (ints or Fractions); the
    scaled form is available through ``_make``.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping[Sequence, object] | None = None):
        scaled: dict[tuple[int, ...], object] = {}
        d = ring.denom
        K = ring.coeffs
        for exps, c in (terms or {}).items():
            if len(exps) != ring.nvars:
                raise DomainError(f"exponent vector {exps} has wrong length for {ring.names}")
            e = []
            for i, x in enumerate(exps):
                x = Fraction(x)
                s = x * d
                if s.denominator != 1:
                    raise DomainError(f"exponent {x} not allowed at level {ring.level}")
                if not ring.is_torus(i) and (x < 0 or x.denominator != 1):
                    raise DomainError(f"tautological variable {ring.vars[i][0]} needs a natural exponent")
                e.append(int(s))
            c = K(c)
            if c != 0:
                key = tuple(e)
                v = K.add(scaled.get(key, 0), c)
                if v:
                    scaled[key] = v
                else:
                    scaled.pop(key, None)
        self.ring = ring
        self.terms = scaled
        self._hash = None

    @classmethod
    def _make(cls, ring: RingSpec, terms: dict) -> "LaurentPoly":
        obj = object.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    # -- coercion -----------------------------------------------------------

    def _coerce(self, other) -> tuple["LaurentPoly", "LaurentPoly"]:
        if isinstance(other, LaurentPoly):
            a, b = self, other
            if a.ring is b.ring or a.ring == b.ring:
                return a, b
            if not a.ring.compatible(b.ring):
                raise RingMismatch(f"{a.ring.names}/{a.ring.coeffs} vs {b.ring.names}/{b.ring.coeffs}")
            # mixed perfection levels: compare at the larger level
            m = max(a.ring.level, b.ring.level)
            return a.at_level(m), b.at_level(m)
        if isinstance(other, (int, Fraction)):
            return self, self.ring.const(other)
        return NotImplemented, NotImplemented

    def at_level(self, m: int) -> "LaurentPoly":
        """Re-index at level ``m`` keeping rational exponents fixed."""
        r = self.ring
        if m == r.level:
            return self
        if m > r.level:
            return LaurentPoly._make(r.with_level(m), _lift_exps(self.terms, r.coeffs.char ** (m - r.level)))
        f = r.coeffs.char ** (r.level - m)
        out = {}
        for e, c in self.terms.items():
            if any(x % f for x in e):
                raise DomainError(f"{self} has exponents not representable at level {m}")
            out[tuple(x // f for x in e)] = c
        return LaurentPoly._make(r.with_level(m), out)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        K = a.ring.coeffs
        out = dict(a.terms)
        for e, c in b.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = K.norm(v + c)
                if v:
                    out[e] = v
                else:
                    del out[e]
        return LaurentPoly._make(a.ring, out)

    __radd__ = __add__

    def __neg__(self):
        K = self.ring.coeffs
        return LaurentPoly._make(self.ring, {e: K.norm(-c) for e, c in self.terms.items()})

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return b + (-a)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        K = a.ring.coeffs
        if len(a.terms) > len(b.terms):
            a, b = b, a
        out: dict = {}
        get = out.get
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple([x + y for x, y in zip(e1, e2)])
                v = get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        if K.kind == "GF" or K.kind == "QQ":
            out = {e: K.norm(c) for e, c in out.items()}
        return LaurentPoly._make(a.ring, {e: c for e, c in out.items() if c != 0})

    __rmul__ = __mul__

    def scale(self, c) -> "LaurentPoly":
        K = self.ring.coeffs
        c = K(c)
        if c == 0:
            return self.ring.zero()
        return LaurentPoly._make(self.ring, {e: K.mul(v, c) for e, v in self.terms.items()})

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial with *scaled* exponent vector ``exps``."""
        return LaurentPoly._make(
            self.ring, {tuple(x + y for x, y in zip(e, exps)): c for e, c in self.terms.items()}
        )

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_unit():
                raise DomainError(f"{self} is not invertible")
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise DomainError(f"{self} is not a unit")
        (e, c), = self.terms.items()
        return LaurentPoly._make(self.ring, {tuple(-x for x in e): self.ring.coeffs.inv(c)})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            K = self.ring.coeffs
            return LaurentPoly._make(self.ring, {e: K.div(c, K(other)) for e, c in self.terms.items()})
        return exact_div(self, other)

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        try:
            a, b = self._coerce(other)
        except RingMismatch:
            return False
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring.zero_exp() in self.terms)

    def constant_value(self):
        return self.terms.get(self.ring.zero_exp(), 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_unit(self) -> bool:
        """Units of a Laurent ring: unit scalar times a torus monomial."""
        if len(self.terms) != 1:
            return False
        (e, c), = self.terms.items()
        r = self.ring
        return r.coeffs.is_unit(c) and all(x == 0 or r.is_torus(i) for i, x in enumerate(e))

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used.add(self.ring.vars[i][0])
        return used

    def degree(self, name: str) -> int:
        """Largest (true) exponent of ``name``; -1 for the zero polynomial."""
        i = self.ring.index(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms) // self.ring.denom

    def total_degree(self, names: Iterable[str] | None = None) -> int:
        idx = range(self.ring.nvars) if names is None else [self.ring.index(n) for n in names]
        if not self.terms:
            return -1
        return max(sum(e[i] for i in idx) for e in self.terms) // self.ring.denom

    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        """Terms in canonical order: descending lex on the declared variable order."""
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def leading(self) -> tuple[tuple[int, ...], object]:
        e = max(self.terms)
        return e, self.terms[e]

    def true_exponent(self, e: Sequence[int]) -> tuple[Fraction, ...]:
        d = self.ring.denom
        return tuple(Fraction(x, d) for x in e)

    def coefficients_in(self, name: str) -> dict[int, "LaurentPoly"]:
        """Write the polynomial as ``sum_k c_k * name^k``; returns ``{k: c_k}``."""
        i = self.ring.index(name)
        d = self.ring.denom
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            rest = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k // d if k % d == 0 else Fraction(k, d), {})[rest] = c
        return {k: LaurentPoly._make(self.ring, t) for k, t in out.items()}

    # -- maps -------------------------------------------------------------------

    def evaluate(self, point: Sequence | Mapping):
        """Substitute scalars for every variable and return a scalar."""
        r = self.ring
        K = r.coeffs
        if isinstance(point, Mapping):
            point = [point[n] for n in r.names]
        if len(point) != r.nvars:
            raise DomainError(f"point has {len(point)} entries, ring has {r.nvars} variables")
        pt = [K(x) for x in point]
        for i, x in enumerate(pt):
            if x == 0 and r.is_torus(i):
                raise ZeroSubstitution(f"zero substituted for invertible variable {r.vars[i][0]}")
        d = r.denom
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    # over GF(p) Frobenius is the identity, so x^(k/p^m) = x^k
                    kk = k if K.kind == "GF" else k // d
                    if K.kind == "GF":
                        v = v * pow(x, kk, K.p) if kk >= 0 else v * pow(pow(x, -1, K.p), -kk, K.p)
                    else:
                        v = v * (Fraction(x) ** kk if kk < 0 else x ** kk)
            total = total + v
        return K.norm(K(total))

    def substitute(self, images: Mapping[str, "LaurentPoly"], target: RingSpec) -> "LaurentPoly":
        """Ring map sending ``name -> images[name]`` and every other variable
        to the variable of the same name in ``target``."""
        r = self.ring
        d = r.denom
        per_var = []
        for i, (n, _) in enumerate(r.vars):
            if n in images:
                img = images[n]
                if not isinstance(img, LaurentPoly):
                    img = target.const(img)
                per_var.append(("img", img))
            elif n in target.names:
                per_var.append(("var", target.index(n)))
            else:
                per_var.append(("missing", n))
        if target.level < r.level:
            raise RingMismatch("cannot substitute into a lower perfection level")
        lift = target.denom // d if d else 1
        power_cache: dict[tuple[int, int], LaurentPoly] = {}
        total: dict = {}
        K = target.coeffs
        zero = target.zero_exp()
        for e, c in self.terms.items():
            mono = list(zero)
            factor = None
            for i, k in enumerate(e):
                if not k:
                    continue
                kind, v = per_var[i]
                if kind == "missing":
                    raise UnknownVariable(v)
                if kind == "var":
                    mono[v] += k * lift
                else:
                    if k % d:
                        raise DomainError("fractional exponent on a substituted variable")
                    key = (i, k // d)
                    p = power_cache.get(key)
                    if p is None:
                        p = v ** (k // d)
                        power_cache[key] = p
                    factor = p if factor is None else factor * p
            term = LaurentPoly._make(target, {tuple(mono): K(c)})
            if factor is not None:
                term = term * factor
            for te, tc in term.terms.items():
                total[te] = K.norm(total.get(te, 0) + tc)
        return LaurentPoly._make(target, {e: c for e, c in total.items() if c != 0})

    def change_ring(self, target: RingSpec) -> "LaurentPoly":
        """Embed into ``target`` by variable name (coefficients re-coerced)."""
        return self.substitute({}, target)

    # -- text ---------------------------------------------------------------------

    def _format_monomial(self, e) -> str:
        r = self.ring
        parts = []
        for i, x in enumerate(e):
            if not x:
                continue
            name = r.vars[i][0]
            q = Fraction(x, r.denom)
            if q == 1:
                parts.append(name)
            elif q.denominator == 1:
                parts.append(f"{name}^{q.numerator}" if q > 0 else f"{name}^({q.numerator})")
            else:
                parts.append(f"{name}^({q})")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        K = self.ring.coeffs
        for e, c in self.sorted_terms():
            mono = self._format_monomial(e)
            neg = (c < 0) if K.kind != "GF" else False
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"LaurentPoly({self})"

    def to_json(self) -> list[dict]:
        r = self.ring
        K = r.coeffs
        return [
            {"c": K.format(c), "e": [_format_exp(x, r) for x in e]}
            for e, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, ring: RingSpec, data: Sequence[Mapping]) -> "LaurentPoly":
        terms = {}
        for t in data:
            e = tuple(_parse_exp(s, ring) for s in t["e"])
            if len(e) != ring.nvars:
                raise DomainError("exponent vector length does not match ring")
            c = ring.coeffs.parse(str(t["c"]))
            if e in terms:
                raise DomainError("duplicate exponent vector in serialized polynomial")
            terms[e] = c
        p = LaurentPoly._make(ring, {e: c for e, c in terms.items() if c != 0})
        return p


def _format_exp(x: int, ring: RingSpec) -> str:
    k = ring.level
    p = ring.coeffs.char
    while k and x % p == 0:
        x //= p
        k -= 1
    return str(x) if k == 0 else f"{x}/p^{k}"


def _parse_exp(s: str, ring: RingSpec) -> int:
    s = str(s)
    if "/p^" in s:
        num, _, k = s.partition("/p^")
        k = int(k)
        if k > ring.level:
            raise DomainError(f"exponent {s} exceeds ring level {ring.level}")
        return int(num) * ring.coeffs.char ** (ring.level - k)
    return int(s) * ring.denom


# ---------------------------------------------------------------------------
# exact division


def _box(terms, n):
    lo = [min(e[i] for e in terms) for i in range(n)]
    hi = [max(e[i] for e in terms) for i in range(n)]
    return lo, hi


def exact_div(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Return ``q`` with ``f == q*g`` or raise ``NotDivisible``.

    Lex-leading-term division.  Quotient terms are confined to the box
    determined by the Newton polytopes of ``f`` and ``g``, which makes the
    loop terminate when no exact quotient exists.
    """
    f, g = f._coerce(g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ring = f.ring
    K = ring.coeffs
    if f.is_zero():
        return ring.zero()
    if len(g.terms) == 1:
        (ge, gc), = g.terms.items()
        out = {}
        for e, c in f.terms.items():
            if not K.divides(gc, c):
                raise NotDivisible(f"{g} does not divide {f}")
            qe = tuple(x - y for x, y in zip(e, ge))
            out[qe] = K.div(c, gc)
        q = LaurentPoly._make(ring, out)
        _check_taut(q, f, g)
        return q
    n = ring.nvars
    flo, fhi = _box(f.terms, n)
    glo, ghi = _box(g.terms, n)
    qlo = [a - b for a, b in zip(flo, glo)]
    qhi = [a - b for a, b in zip(fhi, ghi)]
    if any(a > b for a, b in zip(qlo, qhi)):
        raise NotDivisible(f"{g} does not divide {f}")
    ge, gc = g.leading()
    gtail = [(e, c) for e, c in g.terms.items() if e != ge]
    rem = dict(f.terms)
    q: dict = {}
    while rem:
        e = max(rem)
        c = rem[e]
        qe = tuple(x - y for x, y in zip(e, ge))
        if any(x < a or x > b for x, a, b in zip(qe, qlo, qhi)) or not K.divides(gc, c):
            raise NotDivisible(f"{g} does not divide {f}")
        qc = K.div(c, gc)
        q[qe] = qc
        del rem[e]
        for te, tc in gtail:
            ee = tuple(x + y for x, y in zip(qe, te))
            v = K.norm(rem.get(ee, 0) - qc * tc)
            if v:
                rem[ee] = v
            else:
                rem.pop(ee, None)
    res = LaurentPoly._make(ring, q)
    _check_taut(res, f, g)
    return res


def _check_taut(q: LaurentPoly, f, g):
    r = q.ring
    for e in q.terms:
        for i, x in enumerate(e):
            if x < 0 and not r.is_torus(i):
                raise NotDivisible(f"{g} does not divide {f} (negative tautological exponent)")


def divides(g: LaurentPoly, f: LaurentPoly) -> bool:
    try:
        exact_div(f, g)
        return True
    except NotDivisible:
        return False


# ---------------------------------------------------------------------------
# parsing


_ALLOWED = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Add, ast.Sub, ast.Mult, ast.Pow,
    ast.Div, ast.USub, ast.UAdd, ast.Name, ast.Load, ast.Constant,
)


def parse_poly(ring: RingSpec, text: str) -> LaurentPoly:
    """Parse expressions like ``"(xi - t1)*(xi - t2)"`` or ``"3/2*t1^-1"``."""
    tree = ast.parse(text.replace("^", "**"), mode="eval")
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED):
            raise DomainError(f"unsupported syntax in {text!r}")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if not isinstance(node.value, int):
                raise DomainError(f"only integer literals allowed in {text!r}")
            return node.value
        if isinstance(node, ast.Name):
            return ring.var(node.id)
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        a, b = ev(node.left), ev(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            if isinstance(a, int) and isinstance(b, int):
                return Fraction(a, b)
            if isinstance(b, LaurentPoly) and not b.is_constant():
                return exact_div(a if isinstance(a, LaurentPoly) else ring.const(a), b)
            bb = b.constant_value() if isinstance(b, LaurentPoly) else b
            return (a if isinstance(a, LaurentPoly) else ring.const(a)) * ring.coeffs.inv(ring.coeffs(bb))
        if isinstance(node.op, ast.Pow):
            if isinstance(b, LaurentPoly):
                if not b.is_constant():
                    raise DomainError("non-constant exponent")
                b = b.constant_value()
            if isinstance(b, Fraction):
                if not isinstance(a, LaurentPoly) or not a.is_monomial():
                    raise DomainError("fractional powers only of monomials")
                (e, c), = a.terms.items()
                if c != 1:
                    raise DomainError("fractional powers only of monic monomials")
                te = a.true_exponent(e)
                return ring.monomial([x * b for x in te])
            if isinstance(a, int):
                return Fraction(a) ** b if b < 0 else a ** b
            return a ** int(b)
        raise DomainError(f"unsupported syntax in {text!r}")

    v = ev(tree)
    if not isinstance(v, LaurentPoly):
        v = ring.const(v)
    return v
