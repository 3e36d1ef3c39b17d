"""Graded rings with monomial relations and a top-degree valuation.

A :class:`ChowRing` is ``Z[x_1..x_k]`` modulo the listed monomials, truncated
above degree ``dim``, together with the integer value of each top-degree
monomial (unlisted monomials are worth 0). This covers products of projective
spaces, double covers (doubled valuations) and blowups given by their
nonzero top intersection numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

Exponent = tuple


class ChowParseError(ValueError):
    def __init__(self, message: str, position: int, text: str):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.position = position


@dataclass(frozen=True)
class ChowRing:
    variables: tuple[str, ...]
    dim: int
    relations: tuple[Exponent, ...] = ()
    valuation: Mapping[Exponent, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "relations", tuple(tuple(r) for r in self.relations))
        val = {tuple(k): int(v) for k, v in dict(self.valuation).items()}
        object.__setattr__(self, "valuation", val)
        k = len(self.variables)
        if len(set(self.variables)) != k:
            raise ValueError("duplicate variable names")
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        for r in self.relations:
            if len(r) != k or any(e < 0 for e in r):
                raise ValueError(f"bad relation exponent {list(r)}")
            if sum(r) > self.dim:
                raise ValueError(f"relation {list(r)} has degree above {self.dim}")
        for mono in val:
            if len(mono) != k or any(e < 0 for e in mono):
                raise ValueError(f"bad valuation monomial {list(mono)}")
            if sum(mono) != self.dim:
                raise ValueError(f"valuation monomial {list(mono)} is not of degree {self.dim}")
            if self._killed(mono) and val[mono] != 0:
                raise ValueError(f"valuation of {list(mono)} contradicts a relation")

    def __hash__(self):
        return hash((self.variables, self.dim, self.relations, tuple(sorted(self.valuation.items()))))

    def _killed(self, mono: Exponent) -> bool:
        return sum(mono) > self.dim or any(all(m >= r for m, r in zip(mono, rel)) for rel in self.relations)

    def reduce(self, terms: Mapping[Exponent, int]) -> dict[Exponent, int]:
        return {m: c for m, c in terms.items() if c and not self._killed(m)}

    def one(self) -> "ChowClass":
        return ChowClass(self, {(0,) * len(self.variables): 1})

    def zero(self) -> "ChowClass":
        return ChowClass(self, {})

    def gen(self, name: str) -> "ChowClass":
        try:
            i = self.variables.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None
        return ChowClass(self, {tuple(int(j == i) for j in range(len(self.variables))): 1})

    def gens(self) -> list["ChowClass"]:
        return [self.gen(v) for v in self.variables]

    def parse(self, text: str) -> "ChowClass":
        return parse_class(text, self)


class ChowClass:
    """Immutable element of a :class:`ChowRing`, always kept reduced."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: ChowRing, terms: Mapping[Exponent, int]):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", ring.reduce(terms))

    def __setattr__(self, name, value):
        raise AttributeError("ChowClass is immutable")

    def _lift(self, other) -> "ChowClass":
        if isinstance(other, ChowClass):
            if other.ring != self.ring:
                raise ValueError("classes live in different rings")
            return other
        if isinstance(other, int):
            return ChowClass(self.ring, {(0,) * len(self.ring.variables): other})
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, 0) + c
        return ChowClass(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return ChowClass(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return multiply(self, o)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return power(self, k)

    def __eq__(self, other):
        o = self._lift(other) if isinstance(other, (ChowClass, int)) else NotImplemented
        if o is NotImplemented:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    @property
    def degrees(self) -> set[int]:
        return {sum(m) for m in self.terms}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    def coefficient(self, mono: Sequence[int]) -> int:
        return self.terms.get(tuple(mono), 0)

    def linear_coefficients(self) -> tuple[int, ...]:
        """Coefficients of a degree-1 class on the ring variables."""
        if self.degrees - {1}:
            raise ValueError("class is not of degree 1")
        k = len(self.ring.variables)
        return tuple(self.coefficient(tuple(int(j == i) for j in range(k))) for i in range(k))

    def __str__(self):
        return format_class(self)

    def __repr__(self):
        return f"ChowClass({format_class(self)!r})"


def multiply(a: ChowClass, b: ChowClass) -> ChowClass:
    if a.ring != b.ring:
        raise ValueError("classes live in different rings")
    ring = a.ring
    out: dict[Exponent, int] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            if not ring._killed(m):
                out[m] = out.get(m, 0) + ca * cb
    return ChowClass(ring, out)


def power(a: ChowClass, k: int) -> ChowClass:
    if k < 0:
        raise ValueError("negative exponent")
    result = a.ring.one()
    base = a
    while k:
        if k & 1:
            result = multiply(result, base)
        base = multiply(base, base)
        k >>= 1
    return result


def top_value(cls: ChowClass) -> int:
    """Degree of a top-dimensional class."""
    ring = cls.ring
    if cls.terms and cls.degrees != {ring.dim}:
        raise ValueError(f"class of degree {sorted(cls.degrees)} is not of top degree {ring.dim}")
    return sum(c * ring.valuation.get(m, 0) for m, c in cls.terms.items())


def _check_divisor(c: ChowClass, what: str):
    if c.degrees - {1}:
        raise ValueError(f"{what} must be a divisor class (degree 1)")


def fiber_gram(ring: ChowRing, basis: Sequence[ChowClass], H: ChowClass) -> tuple[tuple[int, ...], ...]:
    """Intersection matrix ``(b_i b_j H^(n-2))`` on the surface cut by n-2 copies of H."""
    if ring.dim < 4:
        raise ValueError("fiber Gram matrix needs a ring of dimension at least 4")
    _check_divisor(H, "H")
    for b in basis:
        _check_divisor(b, "basis class")
    h = power(H, ring.dim - 2)
    return tuple(tuple(top_value(bi * bj * h) for bj in basis) for bi in basis)


def base_curve_class(ring: ChowRing, H: ChowClass) -> ChowClass:
    """Class ``H^(n-1)`` of the complete intersection curve."""
    _check_divisor(H, "H")
    return power(H, ring.dim - 1)


def curve_genus(ring: ChowRing, H: ChowClass) -> int:
    """Genus of the base curve by adjunction: ``2g - 2 = H^n``."""
    _check_divisor(H, "H")
    top = top_value(power(H, ring.dim))
    if top % 2 or top < 0:
        raise ValueError(f"H^n = {top} cannot be the degree of a canonical class")
    return top // 2 + 1


def _grlex_key(mono: Exponent):
    return (sum(mono), tuple(-e for e in mono))


def format_class(c: ChowClass) -> str:
    """Text form accepted by :func:`parse_class` (graded lexicographic order)."""
    if not c.terms:
        return "0"
    names = c.ring.variables
    parts = []
    for mono in sorted(c.terms, key=_grlex_key):
        coef = c.terms[mono]
        factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e]
        mag = abs(coef)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not parts:
            parts.append(("-" if coef < 0 else "") + body)
        else:
            parts.append(("- " if coef < 0 else "+ ") + body)
    return " ".join(parts)


class _Parser:
    """Recursive descent over ``expr := term (('+'|'-') term)*``.

    ``term := unary ('*' unary)*``, ``unary := '-' unary | power`` and
    ``power := atom ('^' INT)?`` with atoms being integers, variable names
    or parenthesised expressions.
    """

    def __init__(self, text: str, ring: ChowRing):
        self.text = text
        self.ring = ring
        self.pos = 0

    def error(self, message, pos=None):
        raise ChowParseError(message, self.pos if pos is None else pos, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> ChowClass:
        if not self.text.strip():
            self.error("empty expression")
        value = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() == "*":
            self.pos += 1
            value = value * self.unary()
        return value

    def unary(self):
        if self.peek() == "-":
            self.pos += 1
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            start = self.pos
            if self.peek() == "-":
                self.error("negative exponent", start)
            digits = self.digits()
            if digits is None:
                self.error("expected an exponent")
            return power(base, digits)
        return base

    def digits(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return int(self.text[start:self.pos]) if self.pos > start else None

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return value
        if ch.isdigit():
            return self.ring.one() * self.digits()
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            name = self.text[start:self.pos]
            if name not in self.ring.variables:
                self.error(f"unknown variable {name!r}", start)
            return self.ring.gen(name)
        if not ch:
            self.error("unexpected end of input")
        self.error(f"unexpected {ch!r}")


def parse_class(text: str, ring: ChowRing) -> ChowClass:
    """Parse an expression such as ``(L1 + 2*L2)^4`` into a reduced class."""
    return _Parser(text, ring).parse()
