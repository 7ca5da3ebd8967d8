import dataclasses
import random
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, strategies as st

from pseudoiso.birational import (
    LadderEntry,
    PseudoIsoData,
    adjunction_failures,
    btc_check,
    btc_classify,
    defect_cycle,
    curve_blowup_correction,
    eq1_correction,
    identity_map,
    ladder_pairings,
    make_jx,
    negativity_witness,
    nic_check,
    nic_space,
    pullback11,
    pullback22,
    pushforward11,
    pushforward22,
    weak_btc_obstruction,
)
from pseudoiso.cohomology import (
    CurveCycle,
    DivisorClass,
    VarietyDescriptor,
    basis_divisors,
    cone_probe,
    curve_functional,
    eta0,
    exceptional,
    hyperplane,
    line_class,
    pair,
    triple,
    wedge11,
)
from pseudoiso.exact import identity, matmul

from conftest import divisors, rationals, small_ints

F = make_jx()
COMPS = btc_classify(F)
N = 4
H = hyperplane(N)
E = [exceptional(i, N) for i in range(N)]
SUM_E = E[0] + E[1] + E[2] + E[3]
ETA = eta0(N)
H2 = CurveCycle(1, (0,) * N)
SUM_L = CurveCycle(0, (1,) * N)


def L(i):
    return CurveCycle(0, tuple(int(k == i) for k in range(N)))


# --- matrices -------------------------------------------------------------------


def test_jx_pullback_examples():
    assert pullback11(F, H) == 3 * H - 2 * SUM_E
    assert pullback11(F, ETA) == ETA
    for j in range(N):
        assert pullback11(F, E[j]) == H + E[j] - SUM_E
    assert pullback22(F, H2) == 3 * H2 - SUM_L
    assert pullback22(F, L(0)) == 2 * H2 + L(0) - SUM_L


def test_jx_squares_to_identity():
    eye = identity(5)
    assert matmul(F.m11, F.m11) == eye
    assert matmul(F.m22, F.m22) == eye
    assert F.is_involution()


def test_jx_line_classes():
    assert pullback22(F, H2 - L(0) - L(1)) == -(H2 - L(2) - L(3))
    assert pushforward22(F, line_class(0, 1, N)) == -line_class(2, 3, N)
    for e in F.ladder:
        assert pullback22(F, e.source_class) == -e.image_class


def test_identity_map():
    f = identity_map(N)
    for x in basis_divisors(N):
        assert pullback11(f, x) == x == pushforward11(f, x)
    assert adjunction_failures(f) == []
    assert defect_cycle(f, H, H).is_zero()


def test_adjunction_all_basis_pairs():
    assert adjunction_failures(F) == []


def test_adjunction_detects_broken_matrices():
    bad = dataclasses.replace(F, push22=identity(5))
    assert adjunction_failures(bad)


def test_rejects_bad_data():
    v = VarietyDescriptor(N)
    eye = identity(5)
    with pytest.raises(ValueError):
        PseudoIsoData("x", v, v, eye[:4], eye, eye, eye)
    with pytest.raises(ValueError):
        LadderEntry("A", CurveCycle(Fraction(1, 2), (0,) * N), "B", H2)
    c = line_class(0, 1, N)
    with pytest.raises(ValueError):
        PseudoIsoData("x", v, v, eye, eye, eye, eye, (LadderEntry("C", c, "C", c), LadderEntry("C", c, "D", c)))


@given(divisors(), divisors())
def test_adjunction_random(x, y):
    c = wedge11(x, y)
    assert pair(pullback11(F, x), c) == pair(x, pushforward22(F, c))


# --- defect -----------------------------------------------------------------------


def test_defect_examples():
    d = defect_cycle(F, H, H)
    assert sorted(t.curve for t in d.terms) == ["C01", "C02", "C03", "C12", "C13", "C23"]
    assert all(t.coefficient == 1 for t in d.terms)
    assert defect_cycle(F, ETA, 7 * H - E[2]).is_zero()
    assert defect_cycle(F, 0 * H, H).is_zero()
    assert defect_cycle(F, 3 * H - E[0], 0 * H).terms == ()


def test_blowup_correction_examples():
    assert curve_blowup_correction(1, 1) == 1
    assert curve_blowup_correction(0, Fraction(5, 3)) == 0
    assert curve_blowup_correction(-2, 3) == -6
    assert eq1_correction is curve_blowup_correction


def test_blowup_correction_sign_on_rigged_ladder():
    c = line_class(0, 1, N)
    rig = dataclasses.replace(identity_map(N), ladder=(LadderEntry("C01", c, "C01", c),))
    a2, a3 = -2 * H, 3 * H  # pairings -2 and 3 with C01
    d = defect_cycle(rig, a2, a3)
    assert d.coefficient("C01") == curve_blowup_correction(pair(a2, c), pair(a3, c)) == -6


def _brute_defect_class(a2, a3):
    """Independent evaluation: expand both classes in the basis and add up the basis defects."""
    total = CurveCycle(0, (0,) * N)
    for (i, x), (k, y) in product(enumerate(basis_divisors(N)), repeat=2):
        coeff = a2.vector[i] * a3.vector[k]
        if coeff:
            basis_defect = wedge11(pullback11(F, x), pullback11(F, y)) - pullback22(F, wedge11(x, y))
            total = total + coeff * basis_defect
    return total


@given(divisors(), divisors())
def test_defect_identity(a2, a3):
    lhs = wedge11(pullback11(F, a2), pullback11(F, a3))
    rhs = pullback22(F, wedge11(a2, a3)) + defect_cycle(F, a2, a3).total_class()
    assert lhs == rhs
    assert defect_cycle(F, a2, a3).total_class() == _brute_defect_class(a2, a3)


@given(divisors(), divisors(), divisors(), rationals)
def test_defect_bilinear(x, y, z, k):
    def total(a, b):
        return defect_cycle(F, a, b).total_class()

    def coeffs(a, b):
        d = defect_cycle(F, a, b)
        return [d.coefficient(e.image_name) for e in F.ladder]

    assert [p + k * q for p, q in zip(coeffs(x, z), coeffs(y, z))] == coeffs(x + k * y, z)
    assert [p + k * q for p, q in zip(coeffs(z, x), coeffs(z, y))] == coeffs(z, x + k * y)
    assert total(x, y) == total(y, x)
    assert all(t.coefficient != 0 for t in defect_cycle(F, x, y).terms)


@given(divisors(), divisors(), divisors())
def test_triple_correction(a1, a2, a3):
    j1, j2, j3 = (pullback11(F, a) for a in (a1, a2, a3))
    d = defect_cycle(F, a2, a3)
    assert triple(j1, j2, j3) == triple(a1, a2, a3) + sum(
        (t.coefficient * pair(j1, t.cls) for t in d.terms), Fraction(0)
    )


# --- NIC / BTC --------------------------------------------------------------------


def test_nic_examples():
    assert nic_check(F, ETA)
    assert not nic_check(F, H)
    assert dict(ladder_pairings(F, H))["C01"] == 1
    basis = nic_space(F)
    assert [str(b) for b in basis] == ["2;-1,-1,-1,-1"]


def test_nic_space_matches_sympy():
    m = sympy.Matrix([[int(v) for v in curve_functional(e.source_class)] for e in F.ladder])
    ref = m.nullspace()
    assert len(ref) == len(nic_space(F)) == 1
    v = [Fraction(int(x.p), int(x.q)) for x in ref[0]]
    ours = nic_space(F)[0].vector
    ratio = ours[0] / v[0]
    assert all(ratio * a == b for a, b in zip(v, ours))


def test_btc_examples():
    assert btc_check(F, ETA, 5 * H - E[1])
    assert btc_check(F, 2 * H + E[0], ETA)
    assert not btc_check(F, H, H)


def _nef_pair_draw(rng):
    q = lambda: Fraction(rng.randint(0, 12), rng.randint(1, 6))  # noqa: E731
    return (q() * ETA + q() * (H - E[2] - E[3]), q() * ETA + q() * (H - E[1] - E[3]))


def test_nef_pair_family_passes():
    rng = random.Random(3)
    for _ in range(50):
        assert btc_check(F, *_nef_pair_draw(rng))


def test_nef_pair_generators_are_not_nef_on_line_curves():
    # H - E2 - E3 pairs to -1 with the line through e2 and e3
    assert pair(H - E[2] - E[3], line_class(2, 3, N)) == -1
    assert not cone_probe(H - E[2] - E[3])


@given(st.integers(-5, 5).filter(bool).map(Fraction), divisors())
def test_nic_implies_btc(k, x):
    g = k * nic_space(F)[0]
    assert nic_check(F, g)
    assert btc_check(F, g, x) and btc_check(F, x, g)


def test_btc_classify_dimensions():
    comps = btc_classify(F)
    assert all(c.dimension >= 4 for c in comps)
    assert len(comps) == 16
    full = [c for c in comps if c.assignment == (2,) * 6]
    assert len(full) == 1 and full[0].dimension == 6
    assert len(full[0].subspace2) == 1 and len(full[0].subspace3) == 5


def test_btc_classify_is_maximal_and_unique():
    comps = btc_classify(F)
    for a, b in product(comps, repeat=2):
        if a is not b:
            assert not a.is_inside(b)


def test_btc_classify_empty_ladder():
    comps = btc_classify(identity_map(N))
    assert len(comps) == 1 and comps[0].dimension == 10


@given(st.data())
def test_btc_classify_members_have_zero_defect(data):
    c = COMPS[data.draw(st.integers(0, len(COMPS) - 1))]
    coef2 = data.draw(st.lists(small_ints, min_size=len(c.subspace2), max_size=len(c.subspace2)))
    coef3 = data.draw(st.lists(small_ints, min_size=len(c.subspace3), max_size=len(c.subspace3)))

    def combo(basis, coef):
        v = [sum((k * b[i] for k, b in zip(coef, basis)), Fraction(0)) for i in range(5)]
        return DivisorClass.from_vector(v)

    a2, a3 = combo(c.subspace2, coef2), combo(c.subspace3, coef3)
    assert c.contains(a2, a3)
    assert btc_check(F, a2, a3)


@given(divisors(entries=st.integers(-2, 2).map(Fraction)), divisors(entries=st.integers(-2, 2).map(Fraction)))
def test_btc_check_agrees_with_classification(a2, a3):
    assert btc_check(F, a2, a3) == any(c.contains(a2, a3) for c in COMPS)


# --- weak BTC and negativity ---------------------------------------------------------


def test_weak_btc_examples():
    assert [name for name, _ in weak_btc_obstruction(F, H, H, H)] == ["C01", "C02", "C03", "C12", "C13", "C23"]
    assert weak_btc_obstruction(F, ETA, H, H) == []
    got = weak_btc_obstruction(F, H - E[0] - E[1], H, H)
    assert got == [("C01", (-1, 1, 1)), ("C23", (1, 1, 1))]


@given(divisors())
def test_weak_btc_diagonal_iff_nic(a):
    assert (weak_btc_obstruction(F, a, a, a) == []) == nic_check(F, a)


def test_negativity_witness():
    value, pairings = negativity_witness(F, H)
    assert value == -5
    assert [v for _, v in pairings] == [-1] * 6
    kappa = H - Fraction(1, 10) * SUM_E
    assert cone_probe(kappa, strict=True)
    value, pairings = negativity_witness(F, kappa)
    assert value == Fraction(-519, 250)
    assert all(v < 0 for _, v in pairings)
    value, pairings = negativity_witness(F, ETA)
    assert value == 4 and all(v == 0 for _, v in pairings)
