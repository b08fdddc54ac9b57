"""Small brute-force oracles used to cross-check the main algorithms.

None of these share code paths with the modules they check.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Sequence

# -- fixed partial flags of a regular matrix -----------------------------------


def _poly_mul(a, b, q):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % q
    return out


def _poly_rem(a, b, q):
    a = list(a)
    inv = pow(b[-1], -1, q)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        f = a[-1] * inv % q
        shift = len(a) - len(b)
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - f * y) % q
        a.pop()
    return a


def _divides(d, f, q) -> bool:
    return not any(_poly_rem(f, d, q))


def flag_count(roots: Sequence, mu: Sequence[int], q: int = 7) -> int:
    """Number of flags ``0 = V_0 < V_1 < ... < V_k`` with ``dim V_i / V_{i-1}
    = mu_i`` stable under a regular matrix with the given eigenvalues.

    Stable subspaces of a regular (cyclic) matrix are the kernels of its
    monic divisors of the characteristic polynomial, so the count is the
    number of divisor chains.  Divisors are found by trying every monic
    polynomial over GF(q) of the right degree.
    """
    labels = sorted(set(roots), key=repr)
    if len(labels) >= q:
        raise ValueError("not enough field elements for distinct eigenvalues")
    value = {r: i + 1 for i, r in enumerate(labels)}
    chi = [1]
    for r in roots:
        chi = _poly_mul(chi, [(-value[r]) % q, 1], q)
    m = len(roots)
    degrees = list(itertools.accumulate(mu))
    if not degrees or degrees[-1] != m:
        raise ValueError("block sizes must add up to the number of roots")
    divisors: dict[int, list[tuple[int, ...]]] = {}
    for d in set(degrees):
        if d == m:
            divisors[d] = [tuple(chi)]
            continue
        found = []
        for low in itertools.product(range(q), repeat=d):
            cand = list(low) + [1]
            if _divides(cand, chi, q):
                found.append(tuple(cand))
        divisors[d] = found

    @lru_cache(maxsize=None)
    def count(i, prev):
        if i == len(degrees):
            return 1
        total = 0
        for D in divisors[degrees[i]]:
            if _divides(list(prev), list(D), q):
                total += count(i + 1, D)
        return total

    return count(0, (1,))


# -- graph Betti numbers --------------------------------------------------------


def graph_betti(n: int, edges: Sequence[tuple[int, int]]) -> tuple[int, int]:
    """``(b0, b1)`` of a multigraph by depth-first search."""
    adj = {i: [] for i in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = set()
    comps = 0
    for s in range(n):
        if s in seen:
            continue
        comps += 1
        stack = [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return comps, len(edges) - n + comps


# -- lattice points ----------------------------------------------------------------


def lattice_points(mu: Sequence[int]) -> list[tuple[int, ...]]:
    """Coordinate lattices in relative position <= mu, by scanning a box.

    ``a`` qualifies iff the partial sums of ``sorted(-a, reverse=True)``
    are bounded by those of ``mu`` with equal total.
    """
    n = len(mu)
    lo, hi = min(mu), max(mu)
    out = []
    for a in itertools.product(range(-hi, -lo + 1), repeat=n):
        b = sorted((-x for x in a), reverse=True)
        if sum(b) != sum(mu):
            continue
        ok = True
        s = t = 0
        for x, y in zip(b, mu):
            s += x
            t += y
            if s > t:
                ok = False
                break
        if ok:
            out.append(a)
    return sorted(out)


# -- finite quotient groups ---------------------------------------------------------


def quotient_order_mod(A: Sequence[Sequence[int]], k: int) -> int:
    """``|(Z/k)^m / im(A mod k)|`` by enumerating the image."""
    m = len(A)
    n = len(A[0]) if m else 0
    image = set()
    for x in itertools.product(range(k), repeat=n):
        image.add(tuple(sum(A[i][j] * x[j] for j in range(n)) % k for i in range(m)))
    return k ** m // len(image)
