from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given

from pseudoiso.cohomology import (
    CurveCycle,
    DimensionError,
    DivisorClass,
    VarietyDescriptor,
    cone_probe,
    default_curves,
    eta0,
    exceptional,
    hyperplane,
    line_class,
    pair,
    triple,
    wedge11,
)

from conftest import curves, divisors

N = 4
H = hyperplane(N)
E = [exceptional(i, N) for i in range(N)]
ETA = eta0(N)


def H2():
    return CurveCycle(1, (0,) * N)


def L(i):
    return CurveCycle(0, tuple(int(k == i) for k in range(N)))


# brute-force oracle: expand over basis monomials and look each product up in the table
def _basis_terms(x):
    return [("H", x.a)] + [(f"E{i}", b) for i, b in enumerate(x.b)]


def _triple_table(p, q, r):
    names = sorted((p, q, r))
    if names == ["H", "H", "H"]:
        return 1
    if p == q == r:  # E_i^3 = E_i . (-L_i) = 1
        return 1
    return 0


def brute_triple(x, y, z):
    return sum(
        (cx * cy * cz * _triple_table(px, py, pz)
         for (px, cx), (py, cy), (pz, cz) in product(_basis_terms(x), _basis_terms(y), _basis_terms(z))),
        Fraction(0),
    )


def brute_pair(x, c):
    # H.H^2 = 1, E_i.L_j = -delta_ij, all others vanish
    return x.a * c.c + sum((-b * d for b, d in zip(x.b, c.d)), Fraction(0))


def test_wedge_examples():
    assert wedge11(H, H) == H2()
    assert wedge11(E[0], E[0]) == -L(0)
    assert wedge11(ETA, ETA) == CurveCycle(4, (-1,) * 4)
    assert wedge11(H, E[1]) == CurveCycle(0, (0,) * 4)


def test_pair_examples():
    assert pair(H, H2()) == 1
    assert pair(E[2], L(3)) == 0
    assert pair(E[2], L(2)) == -1
    assert pair(ETA, H2() - L(0) - L(1)) == 0


def test_triple_examples():
    assert triple(H, H, H) == 1
    jh = 3 * H - 2 * sum(E[1:], E[0])
    assert triple(jh, jh, jh) == -5
    assert triple(ETA, ETA, ETA) == 4


def test_cone_probe_examples():
    assert cone_probe(ETA)
    assert not cone_probe(ETA, strict=True)  # pairs to zero with every line through two points
    x = H - E[0] - E[1]
    c01 = line_class(0, 1, N)
    assert pair(x, c01) == -1
    assert not cone_probe(x, [c01])
    assert not cone_probe(x, [c01], strict=True)
    assert not cone_probe(-H)
    assert cone_probe(H, [c for _, c in default_curves(N)])
    assert cone_probe(H - Fraction(1, 10) * sum(E[1:], E[0]), strict=True)


def test_cone_probe_accepts_named_pairs_and_rejects_empty():
    assert cone_probe(ETA, default_curves(N))
    with pytest.raises(ValueError):
        cone_probe(ETA, [])


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        wedge11(H, hyperplane(3))
    with pytest.raises(DimensionError):
        pair(H, CurveCycle(1, (0, 0)))
    v = VarietyDescriptor(3)
    with pytest.raises(DimensionError):
        triple(H, H, H, variety=v)


def test_parse_and_format():
    x = DivisorClass.parse(" 3 ; -2, -2,-2 , -2 ")
    assert x == 3 * H - 2 * sum(E[1:], E[0])
    assert str(DivisorClass.parse("1/2;0,-3/4,0,0")) == "1/2;0,-3/4,0,0"
    with pytest.raises(ValueError):
        DivisorClass.parse("1,2,3")
    with pytest.raises((ValueError, ZeroDivisionError)):
        DivisorClass.parse("1/0;0")


def test_variety_descriptor():
    v = VarietyDescriptor(4)
    assert v.rank == 5
    assert [n for n, _ in v.curve_table] == ["C01", "C02", "C03", "C12", "C13", "C23"]
    assert v.curve("C23") == CurveCycle(1, (0, 0, -1, -1))
    assert all(c.is_integral() for _, c in v.curve_table)
    with pytest.raises(ValueError):
        VarietyDescriptor(2, curve_table=(("A", CurveCycle(Fraction(1, 2), (0, 0))),))
    with pytest.raises(ValueError):
        VarietyDescriptor(1, curve_table=(("A", CurveCycle(1, (0,))), ("A", CurveCycle(0, (1,)))))


@given(divisors(), divisors(), divisors())
def test_triple_matches_brute_force(x, y, z):
    assert triple(x, y, z) == brute_triple(x, y, z)


@given(divisors(), divisors(), divisors())
def test_triple_symmetric(x, y, z):
    t = triple(x, y, z)
    assert t == triple(y, x, z) == triple(z, y, x) == triple(x, z, y)


@given(divisors(), divisors())
def test_wedge_symmetric(x, y):
    assert wedge11(x, y) == wedge11(y, x)


@given(divisors(), divisors(), divisors(), curves())
def test_bilinearity(x, y, z, c):
    k = Fraction(3, 7)
    assert wedge11(x + k * y, z) == wedge11(x, z) + k * wedge11(y, z)
    assert pair(x + k * y, c) == pair(x, c) + k * pair(y, c)
    assert pair(x, c + k * c) == (1 + k) * pair(x, c)


@given(divisors(), curves())
def test_pair_matches_brute_force(x, c):
    assert pair(x, c) == brute_pair(x, c)


def test_support_bookkeeping():
    from pseudoiso.cohomology import curve_combination

    cyc = curve_combination([("C01", line_class(0, 1, N), Fraction(2)), ("C23", line_class(2, 3, N), Fraction(-1))], N)
    assert cyc == 2 * line_class(0, 1, N) - line_class(2, 3, N)
    assert dict(cyc.support) == {"C01": 2, "C23": -1}
