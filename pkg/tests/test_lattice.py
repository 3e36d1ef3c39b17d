import random
from fractions import Fraction

import pytest

from k3cones import exact
from k3cones.lattice import (
    DiscAction,
    IntLattice,
    OrderVerdict,
    certify_no_norm,
    disc_action,
    discriminant_group,
    element_order,
    eval_form,
    finite_order_bound,
    find_norm_vectors,
    is_isometry,
    is_norm_certificate,
    norm_residues,
    positive_cone_boundary,
    torelli_check,
    translation_isometry,
)
from k3cones.surd import QuadSurd

P1_4 = [[0, 2, 2, 2], [2, 0, 2, 2], [2, 2, 0, 2], [2, 2, 2, 0]]
M132 = ((1, 2, 6, 4), (0, -1, -2, -2), (0, 2, 3, 2), (0, 0, 0, 1))
H12 = ((1, 0, 2, 2), (0, 1, 2, 2), (0, 0, -1, 0), (0, 0, 0, -1))
ALPHA = ((15, 4), (-4, -1))
M = ((21, 8), (-8, -3))


def test_lattice_validation():
    with pytest.raises(ValueError):
        IntLattice([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        IntLattice([[1, 1], [1, 1]])
    assert IntLattice([[2, 4], [4, 2]]).even
    assert not IntLattice([[1, 0], [0, -1]]).even


def test_eval_form():
    assert eval_form(IntLattice([[0, 4], [4, 4]]), (0, 1)) == 4
    assert eval_form(IntLattice(P1_4), (0, 0, 0, 0)) == 0
    assert eval_form(IntLattice(P1_4), (-1, 1, 1, 1)) == 0
    with pytest.raises(exact.DimensionError):
        eval_form(IntLattice(P1_4), (1, 0))


def test_discriminant_groups():
    D = discriminant_group(IntLattice([[4, 6], [6, 4]]))
    assert D.factors == (2, 10) and D.order == 20
    assert discriminant_group(IntLattice([[0, 1], [1, 0]])).factors == ()
    assert discriminant_group(IntLattice([[2, 4], [4, 2]])).factors == (2, 6)


def test_disc_generators_lie_in_dual_lattice():
    for g in ([[4, 6], [6, 4]], [[2, 4], [4, 2]], P1_4, [[8, 0], [0, -2]]):
        L = IntLattice(g)
        D = discriminant_group(L)
        assert D.order == abs(L.det)
        for d, gen in zip(D.factors, D.generators):
            assert exact.is_integral([exact.matvec(L.gram, gen)])
            assert exact.is_integral([[d * x for x in gen]])
            assert not exact.is_integral([gen])


def test_dual_lattice_matches_stated_basis():
    # the two stated generators of L* must lie in L* and span it modulo L
    L = IntLattice([[4, 6], [6, 4]])
    D = discriminant_group(L)
    stated = [(Fraction(1, 10), Fraction(1, 10)), (Fraction(3, 10), Fraction(-2, 10))]
    seen = set()
    for i in range(20):
        for j in range(20):
            v = tuple(i * a + j * b for a, b in zip(*stated))
            seen.add(D.coordinates(v))
    assert len(seen) == 20


def test_isometries():
    assert is_isometry(IntLattice([[2, 4], [4, 2]]), ALPHA)
    assert is_isometry(IntLattice([[4, 6], [6, 4]]), M)
    assert is_isometry(IntLattice([[4, 6], [6, 4]]), exact.identity(2))
    assert not is_isometry(IntLattice([[4, 6], [6, 4]]), ALPHA)
    with pytest.raises(exact.DimensionError):
        is_isometry(IntLattice([[4, 6], [6, 4]]), exact.identity(3))


def test_disc_action():
    assert disc_action(IntLattice([[4, 6], [6, 4]]), M)[1] is DiscAction.MINUS_ID
    assert disc_action(IntLattice([[4, 6], [6, 4]]), exact.identity(2))[1] is DiscAction.PLUS_ID
    assert disc_action(IntLattice([[2, 4], [4, 2]]), ALPHA)[1] is DiscAction.PLUS_ID
    with pytest.raises(ValueError):
        disc_action(IntLattice([[4, 6], [6, 4]]), ALPHA)


def test_disc_action_by_residues():
    # independent check: M acts by -1 on every element of L*/L
    L = IntLattice([[4, 6], [6, 4]])
    Ginv = exact.inverse(L.gram)
    for a in range(10):
        for b in range(10):
            v = exact.matvec(Ginv, (a, b))
            diff = tuple(x + y for x, y in zip(exact.matvec(M, v), v))
            assert exact.is_integral([diff])


def test_element_order():
    assert element_order(H12) == OrderVerdict(2)
    assert element_order(exact.identity(3)) == OrderVerdict(1)
    assert element_order(ALPHA) == OrderVerdict(None)
    assert element_order(M) == OrderVerdict(None)
    assert str(element_order(M132)) == "Infinite"
    assert element_order(((0, -1), (1, -1))) == OrderVerdict(3)
    with pytest.raises(ValueError):
        element_order(((2, 0), (0, 1)))


def test_order_bound():
    assert finite_order_bound(4) == 120
    assert finite_order_bound(2) == 12


def test_order_is_minimal():
    rng = random.Random(5)
    perms = []
    for _ in range(30):
        p = list(range(4))
        rng.shuffle(p)
        perms.append(tuple(tuple(int(p[j] == i) for j in range(4)) for i in range(4)))
    for P in perms:
        k = element_order(P).order
        assert exact.mat_pow(P, k) == exact.identity(4)
        assert all(exact.mat_pow(P, j) != exact.identity(4) for j in range(1, k))


def test_verdict_parse_roundtrip():
    for v in (OrderVerdict(2), OrderVerdict(None)):
        assert OrderVerdict.parse(str(v)) == v
    with pytest.raises(ValueError):
        OrderVerdict.parse("Finite")


def test_find_norm_vectors():
    assert find_norm_vectors(IntLattice([[8, 0], [0, -2]]), -2, 10) == [(0, -1), (0, 1)]
    assert find_norm_vectors(IntLattice([[0, 1], [1, 2]]), -2, 10) == [(-2, 1), (2, -1)]
    assert find_norm_vectors(IntLattice([[4, 6], [6, 4]]), -2, 50) == []


def test_norm_vectors_closed_under_isometry():
    L = IntLattice([[0, 1], [1, 2]])
    found = set(find_norm_vectors(L, -2, 10))
    assert {tuple(-x for x in v) for v in found} == found
    # the reflection in (-2,1) is an isometry fixing the set
    r = (-2, 1)
    refl = exact.transpose(
        [tuple(e[i] + eval_form(L, e, r) * r[i] for i in range(2)) for e in ((1, 0), (0, 1))]
    )
    assert is_isometry(L, refl)
    for v in found:
        w = exact.matvec(refl, v)
        if max(abs(x) for x in w) <= 10:
            assert w in found


def test_certificates():
    assert certify_no_norm(IntLattice([[0, 4], [4, 4]]), -2, 16) == 4
    assert certify_no_norm(IntLattice([[4, 6], [6, 4]]), -2, 16) == 4
    assert certify_no_norm(IntLattice([[0, 3], [3, 6]]), -2, 16) == 3
    assert certify_no_norm(IntLattice([[0, 1], [1, 2]]), -2, 16) is None
    with pytest.raises(ValueError):
        certify_no_norm(IntLattice([[0, 1], [1, 2]]), -2, 1)


def test_double_cover_certificate():
    L = IntLattice([[2, 4], [4, 2]])
    # mod 4 fails since 2 = -2 mod 4 is attained; mod 8 works, mod 3 already works
    assert not is_norm_certificate(L, -2, 4)
    assert is_norm_certificate(L, -2, 8)
    assert norm_residues(L, 3) == frozenset({0, 2})
    assert certify_no_norm(L, -2, 16) == 3


def test_certificate_implies_empty_search():
    for g in ([[0, 4], [4, 4]], [[4, 6], [6, 4]], [[2, 4], [4, 2]], [[0, 5], [5, 10]]):
        L = IntLattice(g)
        assert certify_no_norm(L, -2, 16) is not None
        assert find_norm_vectors(L, -2, 50) == []


def _is_root(gram, t):
    (a, b), (_, c) = gram
    return t * t * a + t * (2 * b) + c == 0


def test_positive_cone_boundary():
    lo, hi = positive_cone_boundary(IntLattice([[2, 4], [4, 2]]))
    assert (lo, hi) == (QuadSurd(-2, -1, 3), QuadSurd(-2, 1, 3))
    lo, hi = positive_cone_boundary(IntLattice([[4, 6], [6, 4]]))
    assert (lo, hi) == (QuadSurd(Fraction(-3, 2), Fraction(-1, 2), 5), QuadSurd(Fraction(-3, 2), Fraction(1, 2), 5))
    lo, hi = positive_cone_boundary(IntLattice([[8, 0], [0, -2]]))
    assert (lo, hi) == (QuadSurd(Fraction(-1, 2)), QuadSurd(Fraction(1, 2)))
    for g in ([[2, 4], [4, 2]], [[4, 6], [6, 4]], [[8, 0], [0, -2]], [[2, 7], [7, 2]]):
        for t in positive_cone_boundary(IntLattice(g)):
            assert _is_root(g, t)


def test_positive_cone_boundary_errors():
    with pytest.raises(ValueError):
        positive_cone_boundary(IntLattice([[2, 1], [1, 2]]))
    with pytest.raises(ValueError):
        positive_cone_boundary(IntLattice(P1_4))


def test_translation_isometry():
    L = IntLattice(P1_4)
    assert translation_isometry(L, (1, 0, 0, 0), (0, -1, 1, 0)) == M132
    assert translation_isometry(L, (1, 0, 0, 0), (0, 0, 0, 0)) == exact.identity(4)
    swap = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0))
    T = translation_isometry(L, (1, 0, 0, 0), (0, -1, 0, 1))
    assert T == exact.matmul(exact.matmul(swap, M132), swap)


def test_translation_group_law():
    L = IntLattice(P1_4)
    f = (1, 0, 0, 0)
    ys = [(0, -1, 1, 0), (0, 0, -1, 1), (0, 2, -1, -1)]
    for y1 in ys:
        neg = tuple(-x for x in y1)
        assert exact.matmul(translation_isometry(L, f, y1), translation_isometry(L, f, neg)) == exact.identity(4)
        for y2 in ys:
            s = tuple(a + b for a, b in zip(y1, y2))
            prod = exact.matmul(translation_isometry(L, f, y1), translation_isometry(L, f, y2))
            assert prod == translation_isometry(L, f, s)


def test_translation_preconditions():
    L = IntLattice(P1_4)
    with pytest.raises(ValueError, match="f.f"):
        translation_isometry(L, (1, 1, 0, 0), (0, 0, 0, 0))
    with pytest.raises(ValueError, match="f.y"):
        translation_isometry(L, (1, 0, 0, 0), (0, 1, 0, 0))


def test_isometries_preserve_form_randomized():
    rng = random.Random(6)
    cases = [(P1_4, M132), (P1_4, H12), ([[2, 4], [4, 2]], ALPHA), ([[4, 6], [6, 4]], M)]
    for g, m in cases:
        L = IntLattice(g)
        for _ in range(200):
            v = tuple(rng.randint(-20, 20) for _ in range(L.rank))
            w = tuple(rng.randint(-20, 20) for _ in range(L.rank))
            assert eval_form(L, exact.matvec(m, v), exact.matvec(m, w)) == eval_form(L, v, w)


def test_torelli():
    v = torelli_check(IntLattice([[4, 6], [6, 4]]), M, [])
    assert v.kind == "Induces" and v.disc_action is DiscAction.MINUS_ID
    assert torelli_check(IntLattice([[2, 4], [4, 2]]), exact.identity(2)).kind == "Induces"
    v = torelli_check(IntLattice([[8, 0], [0, -2]]), ((1, 0), (0, -1)), [(0, 1)])
    assert v.kind == "Fails"


def test_torelli_power_induces():
    # diag(1,-1) fixes the 3-torsion of L*/L but negates the 5-torsion
    L = IntLattice([[6, 0], [0, -10]])
    m = ((1, 0), (0, -1))
    assert disc_action(L, m)[1] is DiscAction.OTHER
    v = torelli_check(L, m)
    assert v.kind == "PowerInduces" and str(v) == "PowerInduces (Other)"
