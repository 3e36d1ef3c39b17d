"""Rational polyhedral cones in both ray and inequality form.

Conversion between the two forms uses the double description method with a
fixed insertion order, so every output is reproducible bit for bit.

Canonical data stored on a :class:`Cone`:

* ``lineality`` and ``equations`` are reduced row echelon bases (rows scaled
  to primitive integers) of the lineality space and of the orthogonal
  complement of the linear span;
* ``rays`` are the extreme rays modulo the lineality space, reduced against
  the lineality basis, primitive and sorted;
* ``facets`` are the irredundant inequality normals reduced the same way
  against ``equations``.

Two cones are equal exactly when this data agrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import exact
from .exact import DimensionError

IntVec = tuple


@dataclass(frozen=True)
class Cone:
    dim: int
    rays: tuple[IntVec, ...]
    facets: tuple[IntVec, ...]
    lineality: tuple[IntVec, ...] = ()
    equations: tuple[IntVec, ...] = ()

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def span_dim(self) -> int:
        return self.dim - len(self.equations)

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    @property
    def is_improper(self) -> bool:
        """True for the whole ambient space."""
        return len(self.lineality) == self.dim

    def interior_point(self) -> IntVec:
        """A point in the relative interior (sum of rays and lineality basis)."""
        pt = [0] * self.dim
        for v in self.rays + self.lineality:
            for i, x in enumerate(v):
                pt[i] += x
        return exact.primitive(pt) if any(pt) else tuple(pt)

    def __contains__(self, v) -> bool:
        return member(self, v)

    def __str__(self):
        body = ", ".join(str(list(r)) for r in self.rays)
        s = f"<{body}>"
        if self.lineality:
            s += " + span" + str([list(v) for v in self.lineality])
        return s


def _clean(vectors: Iterable[Sequence], dim: int | None, what: str) -> tuple[list[IntVec], int]:
    vecs = [tuple(v) for v in vectors]
    if dim is None:
        if not vecs:
            raise ValueError(f"ambient dimension needed when no {what} are given")
        dim = len(vecs[0])
    if dim < 1:
        raise ValueError("ambient dimension must be at least 1")
    out = []
    for v in vecs:
        if len(v) != dim:
            raise DimensionError(f"{what[:-1]} {list(v)} does not have length {dim}")
        if not any(v):
            raise ValueError(f"zero vector among the {what}")
        out.append(exact.primitive(v))
    return out, dim


def _reduce_mod(v: IntVec, basis: Sequence[IntVec]) -> IntVec:
    """Clear the pivot coordinates of ``v`` against an integer RREF basis."""
    v = list(v)
    for row in basis:
        p = next(i for i, x in enumerate(row) if x)
        if v[p]:
            c, vp = row[p], v[p]
            v = [c * a - vp * b for a, b in zip(v, row)]
    if not any(v):
        return tuple(v)
    return exact.primitive(v)


def _extreme_rays(rows: list[IntVec], dim: int) -> list[IntVec]:
    """Extreme rays of the pointed cone {y : r.y >= 0 for r in rows}.

    ``rows`` must have rank ``dim``.
    """
    if not rows:
        return []
    basis_idx: list[int] = []
    for i, r in enumerate(rows):
        if exact.rank([rows[j] for j in basis_idx] + [r]) > len(basis_idx):
            basis_idx.append(i)
            if len(basis_idx) == dim:
                break
    if len(basis_idx) < dim:
        raise ValueError("inequality system does not define a pointed cone")
    binv = exact.inverse(tuple(rows[i] for i in basis_idx))
    processed = list(basis_idx)
    rays: dict[IntVec, frozenset[int]] = {}
    for j in range(dim):
        r = exact.primitive([binv[i][j] for i in range(dim)])
        rays[r] = frozenset(b for b in basis_idx if b != basis_idx[j])
    done = set(basis_idx)
    for i, a in enumerate(rows):
        if i in done:
            continue
        pos, neg, zero = [], [], []
        vals = {}
        for r in rays:
            s = exact.dot(a, r)
            vals[r] = s
            (pos if s > 0 else neg if s < 0 else zero).append(r)
        new: dict[IntVec, frozenset[int]] = {}
        for p in pos:
            for n in neg:
                common = rays[p] & rays[n]
                if len(common) < dim - 2:
                    continue
                if dim > 2 and exact.rank([rows[c] for c in common]) < dim - 2:
                    continue
                r = exact.primitive([vals[p] * x - vals[n] * y for x, y in zip(n, p)])
                if r not in new:
                    new[r] = frozenset(c for c in processed if exact.dot(rows[c], r) == 0) | {i}
        updated = {p: rays[p] for p in pos}
        for z in zero:
            updated[z] = rays[z] | {i}
        for r, t in new.items():
            updated.setdefault(r, t)
        rays = updated
        processed.append(i)
        done.add(i)
    return list(rays)


def _h_to_v(ineqs: list[IntVec], eqs: list[IntVec], dim: int) -> tuple[tuple[IntVec, ...], tuple[IntVec, ...]]:
    """Rays and lineality of {y : a.y >= 0 (a in ineqs), e.y = 0 (e in eqs)}."""
    lin = exact.nullspace(tuple(ineqs) + tuple(eqs), dim)
    rows = set(ineqs)
    for e in list(eqs) + list(lin):
        e = exact.primitive(e)
        rows.add(e)
        rows.add(tuple(-x for x in e))
    rows = sorted(rows)
    if not rows:
        return (), lin
    rays = _extreme_rays(rows, dim)
    rays = sorted({_reduce_mod(r, lin) for r in rays} - {(0,) * dim})
    return tuple(rays), lin


def _build(rays, lin, facets, eqs, dim) -> Cone:
    return Cone(
        dim=dim,
        rays=tuple(sorted(rays)),
        facets=tuple(sorted(facets)),
        lineality=tuple(lin),
        equations=tuple(eqs),
    )


def cone_from_facets(facets: Iterable[Sequence], dim: int | None = None, equations: Iterable[Sequence] = ()) -> Cone:
    """The cone {y : f.y >= 0 for every facet normal f, e.y = 0 for every e}."""
    ineqs, dim = _clean(facets, dim, "facets")
    eqs = [exact.primitive(e) for e in equations if any(e)]
    for e in eqs:
        if len(e) != dim:
            raise DimensionError(f"equation {list(e)} does not have length {dim}")
    rays, lin = _h_to_v(sorted(set(ineqs)), eqs, dim)
    fac, eq = _h_to_v(list(rays), list(lin), dim)
    return _build(rays, lin, fac, eq, dim)


def cone_from_rays(rays: Iterable[Sequence], dim: int | None = None, lineality: Iterable[Sequence] = ()) -> Cone:
    """Nonnegative span of ``rays`` plus the linear span of ``lineality``."""
    gens, dim = _clean(rays, dim, "rays")
    lin_in = [exact.primitive(v) for v in lineality if any(v)]
    for v in lin_in:
        if len(v) != dim:
            raise DimensionError(f"lineality vector {list(v)} does not have length {dim}")
    fac, eq = _h_to_v(sorted(set(gens)), lin_in, dim)
    r, lin = _h_to_v(list(fac), list(eq), dim)
    return _build(r, lin, fac, eq, dim)


def member(C: Cone, v: Sequence) -> bool:
    if len(v) != C.dim:
        raise DimensionError(f"vector of length {len(v)} tested against a cone in dimension {C.dim}")
    return all(exact.dot(f, v) >= 0 for f in C.facets) and all(exact.dot(e, v) == 0 for e in C.equations)


def contains_cone(C: Cone, D: Cone) -> bool:
    """True when D is a subset of C."""
    if C.dim != D.dim:
        raise DimensionError("cones live in different dimensions")
    if not all(member(C, r) for r in D.rays):
        return False
    neg = lambda v: tuple(-x for x in v)
    return all(member(C, v) and member(C, neg(v)) for v in D.lineality)


def equal(C: Cone, D: Cone) -> bool:
    if C.dim != D.dim:
        raise DimensionError("cones live in different dimensions")
    return contains_cone(C, D) and contains_cone(D, C)


def dual(C: Cone, pairing: Sequence[Sequence] | None = None) -> Cone:
    """Dual cone {y : <x, y> >= 0 for all x in C} with <x, y> = x^T P y.

    Without a pairing the standard dot product is used. Going back from the
    second space to the first uses the transposed pairing.
    """
    if pairing is None:
        return Cone(C.dim, C.facets, C.rays, C.equations, C.lineality)
    P = exact.as_matrix(pairing)
    if exact.shape(P)[0] != C.dim or not exact.is_square(P):
        raise DimensionError(f"pairing of shape {exact.shape(P)} for a cone in dimension {C.dim}")
    if exact.det(P) == 0:
        raise exact.SingularMatrixError("pairing matrix is singular")
    Pt = exact.transpose(P)
    normals = [exact.matvec(Pt, r) for r in C.rays]
    eqs = [exact.matvec(Pt, v) for v in C.lineality]
    return cone_from_facets(normals, len(Pt), equations=eqs)


def quotient_image(C: Cone, surjection: Sequence[Sequence]) -> Cone:
    """Image of C under a surjective linear map (zero images dropped)."""
    S = exact.as_matrix(surjection)
    rows, cols = exact.shape(S)
    if cols != C.dim:
        raise DimensionError(f"map with {cols} columns applied to a cone in dimension {C.dim}")
    if exact.rank(S) != rows:
        raise ValueError("map is not surjective (rank deficient)")
    images = [exact.matvec(S, r) for r in C.rays]
    lin = [exact.matvec(S, v) for v in C.lineality]
    images = [v for v in images if any(v)]
    lin = [v for v in lin if any(v)]
    if not images and not lin:
        return cone_from_facets([], rows, equations=exact.identity(rows))
    if not images:
        return cone_from_rays([lin[0]], rows, lineality=lin)
    return cone_from_rays(images, rows, lineality=lin)


@dataclass(frozen=True)
class CoverageVerdict:
    covered: bool
    witness: IntVec | None = None
    cells: int = 0


def _sign_normal(v: IntVec) -> IntVec:
    first = next(x for x in v if x)
    return v if first > 0 else tuple(-x for x in v)


def covers(target: Cone, pieces: Sequence[Cone]) -> CoverageVerdict:
    """Decide whether ``target`` lies in the union of ``pieces``.

    The target is cut recursively by every facet and equation hyperplane of
    every piece. No piece hyperplane crosses the interior of a leaf cell, so a
    leaf is inside a piece exactly when its interior point is. A failing leaf
    yields its interior point as witness.
    """
    for P in pieces:
        if P.dim != target.dim:
            raise DimensionError("pieces and target live in different dimensions")
    planes = set()
    for P in pieces:
        for h in P.facets + P.equations:
            planes.add(_sign_normal(h))
    # planes that are constant on the target span cannot split anything
    span = list(target.rays) + list(target.lineality)
    planes = sorted(h for h in planes if any(exact.dot(h, v) for v in span))
    cells = 0

    def visit(cell: Cone, start: int):
        nonlocal cells
        if any(contains_cone(P, cell) for P in pieces):
            cells += 1
            return None
        for idx in range(start, len(planes)):
            h = planes[idx]
            vals = [exact.dot(h, r) for r in cell.rays]
            crosses = any(exact.dot(h, v) for v in cell.lineality) or (
                any(x > 0 for x in vals) and any(x < 0 for x in vals)
            )
            if crosses:
                for side in (h, tuple(-x for x in h)):
                    sub = cone_from_facets(cell.facets + (side,), cell.dim, equations=cell.equations)
                    w = visit(sub, idx + 1)
                    if w is not None:
                        return w
                return None
        cells += 1
        pt = cell.interior_point()
        if any(member(P, pt) for P in pieces):
            return None
        return pt

    witness = visit(target, 0)
    return CoverageVerdict(witness is None, witness, cells)
