"""Real quadratic surds a + b*sqrt(d) with rational a, b."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class QuadSurd:
    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 1

    def __post_init__(self):
        a, b, d = Fraction(self.a), Fraction(self.b), int(self.d)
        if d < 1:
            raise ValueError("radicand must be positive")
        if not _squarefree(d):
            raise ValueError(f"radicand {d} is not square-free")
        if d == 1:
            a, b = a + b, Fraction(0)
        if b == 0:
            d = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def _coerce(self, other) -> "QuadSurd":
        if isinstance(other, QuadSurd):
            if other.d != self.d and 1 not in (self.d, other.d):
                raise ValueError("surds with different radicands")
            return other
        return QuadSurd(Fraction(other))

    def _radicand(self, other: "QuadSurd") -> int:
        return self.d if self.d != 1 else other.d

    def __add__(self, other):
        o = self._coerce(other)
        return QuadSurd(self.a + o.a, self.b + o.b, self._radicand(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        d = self._radicand(o)
        return QuadSurd(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, (QuadSurd, int, Fraction)):
            return NotImplemented
        return (self - other).sign() == 0

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def sign(self) -> int:
        """Sign of a + b sqrt(d), decided exactly."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = self.a * self.a - self.b * self.b * self.d
        return sa if diff > 0 else (sb if diff < 0 else 0)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        rad = f"sqrt({self.d})"
        if self.b == 1:
            tail = rad
        elif self.b == -1:
            tail = "-" + rad
        else:
            tail = f"{self.b}*{rad}"
        if self.a == 0:
            return tail
        return f"{self.a} {'-' if tail.startswith('-') else '+'} {tail.lstrip('-')}"


def _squarefree(n: int) -> bool:
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True
