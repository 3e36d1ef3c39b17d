"""Word enumeration in matrix groups and Dirichlet-type domains.

For a lattice with form ``(x, y)``, a base point ``x`` and a finite set S of
isometries, the domain is ``{y : (x, y) <= (x, g y) for g in S}``; each
element contributes the inequality ``((g - I)^T G x) . y >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import exact
from .cone import Cone, cone_from_facets
from .lattice import IntLattice, eval_form


@dataclass(frozen=True)
class WordSet:
    """Distinct matrices together with one shortest word producing each."""

    matrices: tuple
    words: tuple[tuple[str, ...], ...]

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __contains__(self, m):
        return exact.as_matrix(m) in set(self.matrices)

    def word_of(self, m) -> tuple[str, ...]:
        return self.words[self.matrices.index(exact.as_matrix(m))]


def _unimodular_inverse(m):
    d = exact.det(m)
    if abs(d) != 1:
        raise ValueError(f"generator with determinant {d} is not invertible over the integers")
    return exact.inverse(m)


def enumerate_words(
    generators: Sequence[tuple[str, Sequence]],
    max_len: int,
    include_inverses: bool = True,
) -> WordSet:
    """All products of at most ``max_len`` generators, deduplicated by entries.

    ``generators`` is a sequence of ``(label, matrix)`` pairs. Inverses get
    the label suffix ``^-1``. The identity (empty word) is always included.
    Output is sorted by matrix entries.
    """
    if max_len < 0:
        raise ValueError("word length must be nonnegative")
    gens: list[tuple[str, tuple]] = []
    seen = set()
    for label, m in generators:
        m = exact.as_matrix(m)
        inv = _unimodular_inverse(m)
        for lab, g in [(label, m)] + ([(label + "^-1", inv)] if include_inverses else []):
            if g not in seen:
                seen.add(g)
                gens.append((lab, g))
    if not gens and not generators:
        raise ValueError("no generators given")
    n = len(exact.as_matrix(generators[0][1]))
    ident = exact.identity(n)
    found = {ident: ()}
    frontier = [ident]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for lab, g in gens:
                p = exact.matmul(w, g)
                if p not in found:
                    found[p] = found[w] + (lab,)
                    nxt.append(p)
        frontier = nxt
    mats = sorted(found)
    return WordSet(tuple(mats), tuple(found[m] for m in mats))


def dirichlet_halfspaces(L: IntLattice, x: Sequence[int], words) -> list[tuple[int, ...]]:
    """Primitive inequality normals ``(g - I)^T G x``, zeros dropped, sorted."""
    if len(x) != L.rank:
        raise exact.DimensionError(f"base point of length {len(x)} in a rank {L.rank} lattice")
    gx = exact.matvec(L.gram, x)
    normals = set()
    for g in words:
        g = exact.as_matrix(g)
        if exact.shape(g) != (L.rank, L.rank):
            raise exact.DimensionError(f"group element of shape {exact.shape(g)}")
        # ((g - I)^T G x)_j = sum_i (g_ij - d_ij) (Gx)_i
        n = tuple(sum((g[i][j] - (i == j)) * gx[i] for i in range(L.rank)) for j in range(L.rank))
        if any(n):
            normals.add(exact.primitive(n))
    return sorted(normals)


@dataclass(frozen=True)
class DirichletDomain:
    cone: Cone
    normals: tuple
    improper: bool
    # rays with negative self-intersection (outside the closed positive cone)
    outside_positive: tuple

    @property
    def rays(self):
        return self.cone.rays


def dirichlet_domain(
    L: IntLattice,
    x: Sequence[int],
    generators: Sequence[tuple[str, Sequence]],
    k: int,
    include_inverses: bool = True,
) -> DirichletDomain:
    """Polyhedral part of the domain for all words of length at most ``k``.

    An empty constraint set gives the whole space, flagged as improper.
    """
    words = enumerate_words(generators, k, include_inverses)
    normals = dirichlet_halfspaces(L, x, words.matrices)
    cone = cone_from_facets(normals, L.rank)
    outside = tuple(r for r in cone.rays if eval_form(L, r) < 0)
    return DirichletDomain(cone, tuple(normals), cone.is_improper, outside)


def permutation_matrices(n: int) -> list[tuple[str, tuple]]:
    """All n x n permutation matrices labelled by their one-line notation."""
    from itertools import permutations

    out = []
    for perm in permutations(range(n)):
        m = tuple(tuple(int(perm[j] == i) for j in range(n)) for i in range(n))
        out.append(("P" + "".join(str(p + 1) for p in perm), m))
    return out
