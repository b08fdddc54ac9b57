"""Exact coefficient rings: the integers, the rationals and prime fields."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from equikt.errors import DomainError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class CoeffRing:
    """A coefficient ring descriptor.

    ``kind`` is one of ``"ZZ"``, ``"QQ"`` or ``"GF"``; ``p`` is the
    characteristic (0 for ZZ and QQ).  Elements are plain Python ints for ZZ
    and GF(p) (reduced into ``[0, p)``), and ints or Fractions in lowest
    terms for QQ (integral rationals are always stored as ints).
    """

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("ZZ", "QQ", "GF"):
            raise DomainError(f"unknown coefficient ring {self.kind!r}")
        if self.kind == "GF":
            if not _is_prime(self.p):
                raise DomainError(f"GF({self.p}): characteristic must be prime")
        elif self.p != 0:
            raise DomainError(f"{self.kind} has characteristic 0")

    @property
    def char(self) -> int:
        return self.p

    @property
    def is_field(self) -> bool:
        return self.kind != "ZZ"

    def __str__(self):
        return f"GF({self.p})" if self.kind == "GF" else self.kind

    # -- element handling -------------------------------------------------

    def __call__(self, x) -> int | Fraction:
        """Coerce an int, Fraction or numeric string into this ring."""
        if isinstance(x, str):
            return self.parse(x)
        if self.kind == "GF":
            if isinstance(x, Fraction):
                return self.div(x.numerator % self.p, x.denominator % self.p)
            return int(x) % self.p
        if self.kind == "ZZ":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise DomainError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        return int(x)

    def norm(self, x):
        # fast path used by the polynomial kernels
        if self.kind == "GF":
            return x % self.p
        if type(x) is Fraction and x.denominator == 1:
            return x.numerator
        return x

    def add(self, a, b):
        return self.norm(a + b)

    def mul(self, a, b):
        return self.norm(a * b)

    def neg(self, a):
        return self.norm(-a)

    def is_unit(self, a) -> bool:
        if a == 0:
            return False
        if self.kind == "ZZ":
            return a in (1, -1)
        return True

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "GF":
            return pow(a, -1, self.p)
        if self.kind == "ZZ":
            if a not in (1, -1):
                raise DomainError(f"{a} is not a unit in ZZ")
            return a
        return self.norm(Fraction(1) / a)

    def div(self, a, b):
        """Exact division; raises ``DomainError`` when ``b`` does not divide ``a``."""
        if b == 0:
            raise ZeroDivisionError("division by zero")
        if self.kind == "GF":
            return (a * pow(b, -1, self.p)) % self.p
        if self.kind == "ZZ":
            q, r = divmod(a, b)
            if r:
                raise DomainError(f"{b} does not divide {a} in ZZ")
            return q
        return self.norm(Fraction(a) / b)

    def divides(self, b, a) -> bool:
        if b == 0:
            return a == 0
        if self.kind == "ZZ":
            return a % b == 0
        return True

    def content_gcd(self, values) -> int | Fraction:
        """Positive common factor of ``values``: gcd for ZZ, gcd(numerators) /
        gcd(denominators) for QQ, and 1 over GF(p)."""
        values = [v for v in values if v != 0]
        if not values:
            return 1
        if self.kind == "GF":
            return 1
        if self.kind == "ZZ":
            g = 0
            for v in values:
                g = gcd(g, v)
            return g
        num = 0
        den = 0
        for v in values:
            f = Fraction(v)
            num = gcd(num, f.numerator)
            den = gcd(den, f.denominator) if den else f.denominator
        return self.norm(Fraction(num, den))

    def random(self, rng, bound: int = 5):
        if self.kind == "GF":
            return rng.randrange(self.p)
        if self.kind == "QQ" and rng.random() < 0.2:
            return self.norm(Fraction(rng.randint(-bound, bound), rng.randint(1, 3)))
        return rng.randint(-bound, bound)

    # -- text ---------------------------------------------------------------

    def format(self, a) -> str:
        if self.kind == "GF":
            return f"{a} mod {self.p}"
        return str(a)

    def parse(self, s: str):
        s = s.strip()
        if " mod " in s:
            v, _, p = s.partition(" mod ")
            if self.kind != "GF" or int(p) != self.p:
                raise DomainError(f"coefficient {s!r} does not belong to {self}")
            return int(v) % self.p
        if self.kind == "GF":
            return self(Fraction(s))
        if self.kind == "ZZ":
            return int(s)
        return self.norm(Fraction(s))

    def to_json(self) -> dict:
        return {"char": self.p, "coeffs": self.kind}


ZZ = CoeffRing("ZZ")
QQ = CoeffRing("QQ")


def GF(p: int) -> CoeffRing:
    return CoeffRing("GF", p)


def coeff_ring_from_json(d: dict) -> CoeffRing:
    char = int(d.get("char", 0))
    if char:
        return GF(char)
    return CoeffRing(d.get("coeffs", "QQ"))
