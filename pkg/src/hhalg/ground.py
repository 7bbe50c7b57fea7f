"""Exact ground rings: the integers, prime fields, and the rationals.

Scalars are plain Python objects (int for Z and F_p, Fraction for Q), so
all arithmetic is exact.  A GroundRing value bundles the normalization,
unit test and division logic that the linear algebra layer needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class GroundRing:
    """One of Z, F_p (p prime) or Q."""

    kind: str  # "Z", "Fp", "Q"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Fp", "Q"):
            raise ValueError(f"unknown ground ring kind {self.kind!r}")
        if self.kind == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"characteristic must be prime, got {self.p!r}")
        elif self.p is not None:
            raise ValueError("characteristic only makes sense for Fp")

    # -- constructors ------------------------------------------------
    @staticmethod
    def integers() -> "GroundRing":
        return GroundRing("Z")

    @staticmethod
    def prime_field(p: int) -> "GroundRing":
        return GroundRing("Fp", p)

    @staticmethod
    def rationals() -> "GroundRing":
        return GroundRing("Q")

    # -- scalar arithmetic --------------------------------------------
    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def normalize(self, x):
        """Coerce an int/Fraction into canonical form for this ring."""
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                x = x.numerator
            return int(x)
        if self.kind == "Fp":
            if isinstance(x, Fraction):
                return self.normalize(x.numerator) * self.inv(self.normalize(x.denominator)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def add(self, a, b):
        c = a + b
        return c % self.p if self.kind == "Fp" else c

    def sub(self, a, b):
        c = a - b
        return c % self.p if self.kind == "Fp" else c

    def neg(self, a):
        return (-a) % self.p if self.kind == "Fp" else -a

    def mul(self, a, b):
        c = a * b
        return c % self.p if self.kind == "Fp" else c

    def is_unit(self, a) -> bool:
        if self.kind == "Z":
            return a in (1, -1)
        return self.normalize(a) != 0

    def inv(self, a):
        if self.kind == "Z":
            if a in (1, -1):
                return a
            raise ZeroDivisionError(f"{a} is not a unit in Z")
        if self.kind == "Fp":
            a = a % self.p
            if a == 0:
                raise ZeroDivisionError("division by zero in Fp")
            return pow(a, self.p - 2, self.p)
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return Fraction(1) / a

    def div(self, a, b):
        """Exact division; raises if b does not divide a."""
        if self.kind == "Z":
            if b == 0 or a % b != 0:
                raise ValueError(f"{b} does not divide {a} in Z")
            return a // b
        return self.mul(a, self.inv(b))

    def divides(self, b, a) -> bool:
        """True when b | a."""
        if self.kind == "Z":
            if b == 0:
                return a == 0
            return a % b == 0
        return self.normalize(b) != 0 or self.normalize(a) == 0

    def __str__(self):
        if self.kind == "Fp":
            return f"F{self.p}"
        return self.kind


ZZ = GroundRing.integers()
QQ = GroundRing.rationals()
