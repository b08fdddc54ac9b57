"""Named ring operations on Laurent polynomials."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from equikt.errors import DomainError, RingMismatch
from equikt.exactalg.laurent import LaurentPoly, RingSpec


def lp_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    if not a.ring.compatible(b.ring):
        raise RingMismatch("operands live in different rings")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise DomainError(f"unknown operation {op!r}")


def lp_eval(f: LaurentPoly, point: Sequence):
    return f.evaluate(point)


def elem_sym(k: int, names: Sequence[str], ring: RingSpec) -> LaurentPoly:
    """The k-th elementary symmetric polynomial in the listed variables."""
    if not 0 <= k <= len(names):
        raise DomainError(f"e_{k} of {len(names)} variables")
    gens = [ring.var(n) for n in names]
    total = ring.zero()
    for combo in combinations(gens, k):
        term = ring.one()
        for g in combo:
            term = term * g
        total = total + term
    return total


def adams_base(f: LaurentPoly, p: int) -> LaurentPoly:
    """The Adams operation psi^p on base classes: t^lambda -> t^(p*lambda)."""
    r = f.ring
    for i, (n, k) in enumerate(r.vars):
        if not r.is_torus(i) and any(e[i] for e in f.terms):
            raise DomainError(f"adams_base applies to base classes only; {n} is tautological")
    if p < 2:
        raise DomainError("Adams operation index must be >= 2")
    return LaurentPoly._make(r, {tuple(x * p for x in e): c for e, c in f.terms.items()})


def perfect_lift(f: LaurentPoly, levels: int) -> LaurentPoly:
    """Pass ``levels`` steps up the perfection colimit.

    The stored numerators are kept and the level rises, so every rational
    exponent is divided by ``p**levels``: the result is the unique
    ``p**levels``-th root, and ``adams_base`` undoes one step.
    """
    r = f.ring
    if levels < 0:
        raise DomainError("levels must be non-negative")
    if levels == 0:
        return f
    if r.coeffs.char == 0:
        raise DomainError("perfection needs a coefficient field of characteristic p")
    for i in range(r.nvars):
        if not r.is_torus(i) and any(e[i] for e in f.terms):
            raise DomainError("perfect_lift applies to base classes only")
    return LaurentPoly._make(r.with_level(r.level + levels), dict(f.terms))


def lowest_level(f: LaurentPoly) -> LaurentPoly:
    """Re-index ``f`` at the smallest level that still represents it."""
    r = f.ring
    m = r.level
    while m > 0:
        try:
            f.at_level(m - 1)
        except DomainError:
            break
        m -= 1
    return f.at_level(m)


def to_elementary(f: LaurentPoly, names: Sequence[str], symbols: Sequence[str], target: RingSpec) -> LaurentPoly:
    """Rewrite a symmetric polynomial in ``names`` through elementary symmetric
    polynomials, returned in ``target`` with ``symbols[k-1]`` standing for e_k.

    ``f`` must be a genuine polynomial (non-negative exponents) in ``names``;
    other variables are carried along as coefficients.  Raises ``DomainError``
    if ``f`` is not symmetric.
    """
    r = f.ring
    idx = [r.index(n) for n in names]
    n = len(names)
    es = [elem_sym(k, names, r) for k in range(1, n + 1)]
    out = target.zero()
    rem = f
    d = r.denom
    guard = 0
    while not rem.is_zero():
        guard += 1
        if guard > 100000:
            raise DomainError("symmetric reduction did not terminate")
        # leading term w.r.t. lex on the symmetric variables only
        e, c = max(rem.terms.items(), key=lambda t: tuple(t[0][i] for i in idx))
        lead = [e[i] for i in idx]
        if any(x < 0 or x % d for x in lead):
            raise DomainError("to_elementary needs polynomial exponents")
        lead = [x // d for x in lead]
        if any(lead[i] < lead[i + 1] for i in range(n - 1)):
            raise DomainError(f"{f} is not symmetric in {names}")
        powers = [lead[i] - (lead[i + 1] if i + 1 < n else 0) for i in range(n)]
        rest_exp = list(e)
        for i in idx:
            rest_exp[i] = 0
        coeff_mono = LaurentPoly._make(r, {tuple(rest_exp): c})
        term = coeff_mono
        for k, pw in enumerate(powers):
            if pw:
                term = term * es[k] ** pw
        rem = rem - term
        tgt = coeff_mono.change_ring(target) if _fits(coeff_mono, target) else None
        if tgt is None:
            raise DomainError("coefficient variables missing from target ring")
        sym = target.one()
        for k, pw in enumerate(powers):
            if pw:
                sym = sym * target.var(symbols[k]) ** pw
        out = out + tgt * sym
    return out


def _fits(p: LaurentPoly, target: RingSpec) -> bool:
    return all(v in target.names for v in p.variables())
