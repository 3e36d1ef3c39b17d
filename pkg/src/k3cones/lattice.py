"""Integer lattices with a symmetric bilinear form.

A lattice is given by its Gram matrix in a fixed basis; vectors are integer
coordinate tuples in that basis and matrices act on column vectors.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Iterable, Sequence

from . import exact
from .exact import DimensionError
from .surd import QuadSurd


@dataclass(frozen=True)
class IntLattice:
    gram: tuple

    def __post_init__(self):
        g = exact.as_matrix(self.gram)
        object.__setattr__(self, "gram", g)
        if not exact.is_square(g) or not g:
            raise ValueError("Gram matrix must be square and nonempty")
        if not exact.is_integral(g):
            raise ValueError("Gram matrix must have integer entries")
        if g != exact.transpose(g):
            raise ValueError("Gram matrix must be symmetric")
        if exact.det(g) == 0:
            raise ValueError("Gram matrix is degenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def det(self) -> int:
        return exact.det(self.gram)


def _check_vec(L: IntLattice, v) -> tuple:
    if len(v) != L.rank:
        raise DimensionError(f"vector of length {len(v)} in a rank {L.rank} lattice")
    return tuple(v)


def eval_form(L: IntLattice, x, y=None):
    """``x^T gram y`` (``y`` defaults to ``x``)."""
    x = _check_vec(L, x)
    y = x if y is None else _check_vec(L, y)
    return exact.dot(x, exact.matvec(L.gram, y))


@dataclass(frozen=True)
class DiscGroup:
    """Discriminant group L*/L as a product of cyclic factors.

    ``generators[i]`` is a representative in L* (rational coordinates in the
    lattice basis) of order ``factors[i]``.
    """

    factors: tuple[int, ...]
    generators: tuple[tuple, ...]
    # SNF data used to reduce elements of L* to generator coordinates
    _right_inv: tuple = field(repr=False, compare=False, default=())
    _diag: tuple = field(repr=False, compare=False, default=())

    @property
    def order(self) -> int:
        n = 1
        for f in self.factors:
            n *= f
        return n

    def coordinates(self, v) -> tuple[int, ...]:
        """Coordinates of ``v`` in L* modulo L with respect to ``generators``."""
        u = exact.matvec(self._right_inv, v)
        coords = []
        for ui, d in zip(u, self._diag):
            w = Fraction(ui) * d
            if w.denominator != 1:
                raise ValueError(f"{v} is not in the dual lattice")
            if d >= 2:
                coords.append(int(w) % d)
        return tuple(coords)


def discriminant_group(L: IntLattice) -> DiscGroup:
    # U G V = D, so L* = G^{-1} Z^n = V D^{-1} Z^n.
    sf = exact.snf(L.gram)
    right = sf.right
    gens, factors = [], []
    for i, d in enumerate(sf.diag):
        if d >= 2:
            gens.append(exact.as_matrix([[Fraction(right[r][i], d) for r in range(L.rank)]])[0])
            factors.append(d)
    return DiscGroup(tuple(factors), tuple(gens), exact.inverse(right), sf.diag)


def is_isometry(L: IntLattice, M) -> bool:
    M = exact.as_matrix(M)
    if exact.shape(M) != (L.rank, L.rank):
        raise DimensionError(f"matrix of shape {exact.shape(M)} on a rank {L.rank} lattice")
    return exact.matmul(exact.matmul(exact.transpose(M), L.gram), M) == L.gram


class DiscAction(enum.Enum):
    PLUS_ID = "PlusId"
    MINUS_ID = "MinusId"
    OTHER = "Other"

    def __str__(self):
        return self.value


def disc_action(L: IntLattice, M) -> tuple[tuple[tuple[int, ...], ...], DiscAction]:
    """Action of an isometry on L*/L.

    Returns the matrix whose column ``i`` holds the generator coordinates of
    the image of generator ``i``, and its classification.
    """
    if not is_isometry(L, M):
        raise ValueError("matrix is not an isometry of the lattice")
    M = exact.as_matrix(M)
    D = discriminant_group(L)
    cols = [D.coordinates(exact.matvec(M, g)) for g in D.generators]
    action = exact.transpose(cols) if cols else ()
    k = len(D.factors)

    def matches(sign):
        return all(
            (action[j][i] - sign * (i == j)) % D.factors[j] == 0 for i in range(k) for j in range(k)
        )

    if matches(1):
        kind = DiscAction.PLUS_ID
    elif matches(-1):
        kind = DiscAction.MINUS_ID
    else:
        kind = DiscAction.OTHER
    return action, kind


@dataclass(frozen=True)
class OrderVerdict:
    """``order`` is the multiplicative order, or None for infinite order."""

    order: int | None

    @property
    def finite(self) -> bool:
        return self.order is not None

    def __str__(self):
        return f"Finite({self.order})" if self.finite else "Infinite"

    @classmethod
    def parse(cls, text: str) -> "OrderVerdict":
        text = text.strip()
        if text == "Infinite":
            return cls(None)
        if text.startswith("Finite(") and text.endswith(")"):
            return cls(int(text[7:-1]))
        raise ValueError(f"cannot parse order verdict {text!r}")


def _totient(m: int) -> int:
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def finite_order_bound(n: int) -> int:
    """lcm of all m with phi(m) <= n.

    A finite-order element of GL_n(Z) has order dividing this number, since
    each eigenvalue is a root of unity of degree at most n.
    """
    # phi(m) >= sqrt(m/2), so every such m is at most 2 n^2.
    bound = 1
    for m in range(1, 2 * n * n + 3):
        if _totient(m) <= n:
            bound = lcm(bound, m)
    return bound


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def element_order(M) -> OrderVerdict:
    M = exact.as_matrix(M)
    if not exact.is_square(M):
        raise DimensionError("order of a non-square matrix")
    if abs(exact.det(M)) != 1:
        raise ValueError("matrix is not unimodular")
    n = len(M)
    ident = exact.identity(n)
    k = finite_order_bound(n)
    if exact.mat_pow(M, k) != ident:
        return OrderVerdict(None)
    for p in _prime_factors(k):
        while k % p == 0 and exact.mat_pow(M, k // p) == ident:
            k //= p
    return OrderVerdict(k)


def find_norm_vectors(L: IntLattice, norm: int, bound: int, primitive: bool = True) -> list[tuple[int, ...]]:
    """All vectors in the box ``|v_i| <= bound`` with ``v.v == norm``.

    The zero vector is never reported. With ``primitive`` set, only vectors
    with coprime entries are kept (no effect for square-free norms).
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    g = L.gram
    n = L.rank
    out = []
    rng = range(-bound, bound + 1)
    for v in itertools.product(rng, repeat=n):
        q = 0
        for i in range(n):
            vi = v[i]
            if vi:
                row = g[i]
                q += vi * (row[i] * vi + 2 * sum(row[j] * v[j] for j in range(i + 1, n)))
        if q == norm and any(v):
            if primitive:
                c = 0
                for x in v:
                    c = gcd(c, x)
                if c != 1:
                    continue
            out.append(v)
    return sorted(out)


def norm_residues(L: IntLattice, modulus: int) -> frozenset[int]:
    """Values of ``v.v mod modulus`` as v runs over all residue vectors."""
    g = L.gram
    n = L.rank
    seen = set()
    for v in itertools.product(range(modulus), repeat=n):
        q = 0
        for i in range(n):
            for j in range(n):
                q += v[i] * g[i][j] * v[j]
        seen.add(q % modulus)
    return frozenset(seen)


def is_norm_certificate(L: IntLattice, norm: int, modulus: int) -> bool:
    """True when ``v.v = norm`` has no solution modulo ``modulus``."""
    return norm % modulus not in norm_residues(L, modulus)


def certify_no_norm(L: IntLattice, norm: int, max_modulus: int) -> int | None:
    """Smallest modulus ``m <= max_modulus`` ruling out ``v.v == norm``.

    Returns None when no modulus in range works; that is an answer, not an
    error.
    """
    if max_modulus < 2:
        raise ValueError("max_modulus must be at least 2")
    for m in range(2, max_modulus + 1):
        if is_norm_certificate(L, norm, m):
            return m
    return None


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = s^2 * d with d square-free; returns (s, d)."""
    s, d = 1, n
    p = 2
    while p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
            s *= p
        p += 1
    return s, d


def positive_cone_boundary(L: IntLattice) -> tuple[QuadSurd | None, QuadSurd | None]:
    """Slopes a/b of the two isotropic lines of a rank-2 indefinite lattice.

    Roots of ``g11 t^2 + 2 g12 t + g22 = 0``, smaller root first. When
    ``g11 == 0`` one isotropic line is b = 0 and its slope is reported as
    None.
    """
    if L.rank != 2:
        raise ValueError("positive cone boundary needs a rank 2 lattice")
    (g11, g12), (_, g22) = L.gram
    disc = g12 * g12 - g11 * g22
    if disc <= 0:
        raise ValueError("form is not indefinite")
    if g11 == 0:
        return None, QuadSurd(Fraction(-g22, 2 * g12))
    s, d = _squarefree_split(disc)
    if d == 1:
        r = isqrt(disc)
        roots = sorted([Fraction(-g12 - r, g11), Fraction(-g12 + r, g11)])
        return QuadSurd(roots[0]), QuadSurd(roots[1])
    a = Fraction(-g12, g11)
    b = Fraction(s, abs(g11))
    return QuadSurd(a, -b, d), QuadSurd(a, b, d)


def translation_isometry(L: IntLattice, f, y) -> tuple:
    """Isometry x -> x + (x.f) y + m(x) f for isotropic f and y orthogonal to f.

    ``m(x) = -(x.y) - (x.f)(y.y)/2`` makes the map preserve the form.
    """
    f = _check_vec(L, f)
    y = _check_vec(L, y)
    problems = []
    ff, fy, yy = eval_form(L, f), eval_form(L, f, y), eval_form(L, y)
    if ff != 0:
        problems.append(f"f.f = {ff}, expected 0")
    if fy != 0:
        problems.append(f"f.y = {fy}, expected 0")
    if yy % 2:
        problems.append(f"y.y = {yy} is odd")
    if problems:
        raise ValueError("; ".join(problems))
    n = L.rank
    cols = []
    for k in range(n):
        e = tuple(int(i == k) for i in range(n))
        ef, ey = eval_form(L, e, f), eval_form(L, e, y)
        m = -ey - ef * (yy // 2)
        cols.append(tuple(e[i] + ef * y[i] + m * f[i] for i in range(n)))
    return exact.transpose(cols)


@dataclass(frozen=True)
class TorelliVerdict:
    kind: str  # "Induces", "PowerInduces" or "Fails"
    disc_action: DiscAction | None
    reason: str = ""

    def __str__(self):
        s = self.kind
        if self.disc_action is not None:
            s += f" ({self.disc_action})"
        if self.reason:
            s += f": {self.reason}"
        return s


def torelli_check(L: IntLattice, M, nodal_classes: Iterable[Sequence[int]] = ()) -> TorelliVerdict:
    """Lattice-side conditions for an isometry to come from an automorphism.

    The nodal set must map onto itself (as a set of vectors, signs matter).
    An action of plus or minus the identity on L*/L gives ``Induces``; any
    other action only gives ``PowerInduces``.
    """
    if not is_isometry(L, M):
        raise ValueError("matrix is not an isometry of the lattice")
    M = exact.as_matrix(M)
    nodal = {tuple(v) for v in nodal_classes}
    image = {exact.matvec(M, v) for v in nodal}
    if image != nodal:
        moved = sorted(image - nodal)
        return TorelliVerdict("Fails", None, f"nodal classes not preserved, e.g. image {list(moved[0])}")
    _, action = disc_action(L, M)
    if action is DiscAction.OTHER:
        return TorelliVerdict("PowerInduces", action)
    return TorelliVerdict("Induces", action)
