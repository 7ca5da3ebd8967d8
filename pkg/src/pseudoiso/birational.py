"""Pseudo-isomorphisms of blowups of P^3 at the level of cohomology.

A map is described by its pullback and pushforward matrices on H^{1,1} and
H^{2,2} and by its *ladder*: the indeterminacy curves of the inverse map,
each paired with the curve on which the wedge defect is deposited.  For a
pair of smooth classes the defect is

    f^*(a2) ^ f^*(a3) - f^*(a2 ^ a3) = sum_C <a2, C> <a3, C> [C']

with C running over ladder source curves and C' the matching image curve.
Every decision procedure below (NIC, BTC, Weak BTC obstructions) reduces to
exact linear algebra on the numbers <a, C>.

Matrix convention: row k of ``m11`` is the pullback of the k-th basis class
(H, E_0, ...), so ``pullback11(f, x) = sum_k x[k] * m11[k]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .cohomology import (
    CurveCycle,
    DimensionError,
    DivisorClass,
    VarietyDescriptor,
    basis_curves,
    basis_divisors,
    curve_functional,
    pair,
    triple,
    zero_curve,
)
from .exact import (
    as_fraction,
    identity,
    in_span,
    matmul,
    nullspace,
    primitive,
    span_contains,
)

MatrixT = tuple[tuple[Fraction, ...], ...]


def _frozen_matrix(rows, n: int, what: str) -> MatrixT:
    m = tuple(tuple(as_fraction(x) for x in row) for row in rows)
    if len(m) != n or any(len(r) != n for r in m):
        raise DimensionError(f"{what} must be {n}x{n}")
    return m


@dataclass(frozen=True)
class LadderEntry:
    source_name: str
    source_class: CurveCycle
    image_name: str
    image_class: CurveCycle

    def __post_init__(self):
        if not (self.source_class.is_integral() and self.image_class.is_integral()):
            raise ValueError(f"ladder curves {self.source_name}/{self.image_name} need integer classes")


@dataclass(frozen=True)
class PseudoIsoData:
    name: str
    source: VarietyDescriptor
    target: VarietyDescriptor
    m11: MatrixT
    m22: MatrixT
    push11: MatrixT
    push22: MatrixT
    ladder: tuple[LadderEntry, ...] = ()

    def __post_init__(self):
        n = self.target.rank
        if self.source.rank != n:
            raise DimensionError("source and target lattices differ in rank")
        for attr in ("m11", "m22", "push11", "push22"):
            object.__setattr__(self, attr, _frozen_matrix(getattr(self, attr), n, attr))
        ladder = tuple(self.ladder)
        names = [e.source_name for e in ladder]
        if len(set(names)) != len(names):
            raise ValueError("ladder source names must be unique")
        for e in ladder:
            self.target.check(e.source_class, e.image_class)
        object.__setattr__(self, "ladder", ladder)

    @property
    def n_points(self) -> int:
        return self.target.n_points

    def is_involution(self) -> bool:
        n = self.target.rank
        eye = identity(n)
        return matmul(self.m11, self.m11) == eye and matmul(self.m22, self.m22) == eye


def _apply(matrix: MatrixT, v: Sequence[Fraction]) -> list[Fraction]:
    n = len(matrix)
    if len(v) != n:
        raise DimensionError(f"vector of length {len(v)} against a {n}x{n} matrix")
    return [sum((v[k] * matrix[k][i] for k in range(n)), Fraction(0)) for i in range(n)]


def pullback11(f: PseudoIsoData, x: DivisorClass) -> DivisorClass:
    f.target.check(x)
    return DivisorClass.from_vector(_apply(f.m11, x.vector))


def pushforward11(f: PseudoIsoData, x: DivisorClass) -> DivisorClass:
    f.source.check(x)
    return DivisorClass.from_vector(_apply(f.push11, x.vector))


def pullback22(f: PseudoIsoData, c: CurveCycle) -> CurveCycle:
    f.target.check(c)
    return CurveCycle.from_vector(_apply(f.m22, c.vector))


def pushforward22(f: PseudoIsoData, c: CurveCycle) -> CurveCycle:
    f.source.check(c)
    return CurveCycle.from_vector(_apply(f.push22, c.vector))


def identity_map(n_points: int, name: str = "id") -> PseudoIsoData:
    v = VarietyDescriptor(n_points)
    eye = identity(n_points + 1)
    return PseudoIsoData(name, v, v, eye, eye, eye, eye, ())


def make_jx() -> PseudoIsoData:
    """Lift of the standard Cremona involution [1/x0 : 1/x1 : 1/x2 : 1/x3] to P^3 blown up at the
    four coordinate points."""
    n = 4
    m11 = [[3] + [-2] * n]
    m22 = [[3] + [-1] * n]
    for j in range(n):
        m11.append([1] + [int(i == j) - 1 for i in range(n)])
        m22.append([2] + [int(i == j) - 1 for i in range(n)])
    variety = VarietyDescriptor(n)
    ladder = []
    for i, j in combinations(range(n), 2):
        # the line through e_i, e_j is blown up onto the line through the other two points
        k, l = (m for m in range(n) if m not in (i, j))
        ladder.append(LadderEntry(f"C{i}{j}", variety.curve(f"C{i}{j}"), f"C{k}{l}", variety.curve(f"C{k}{l}")))
    return PseudoIsoData("jx", variety, variety, m11, m22, m11, m22, tuple(ladder))


def adjunction_failures(f: PseudoIsoData) -> list[tuple[int, int]]:
    """Basis pairs (x, c) where pair(f^* x, c) != pair(x, f_* c)."""
    n = f.n_points
    bad = []
    for i, x in enumerate(basis_divisors(n)):
        for k, c in enumerate(basis_curves(n)):
            if pair(pullback11(f, x), c) != pair(x, pushforward22(f, c)):
                bad.append((i, k))
    return bad


# --- wedge defect -------------------------------------------------------------


@dataclass(frozen=True)
class DefectTerm:
    curve: str
    cls: CurveCycle
    coefficient: Fraction


@dataclass(frozen=True)
class DefectCycle:
    terms: tuple[DefectTerm, ...] = ()
    n_points: int = field(default=0, compare=False)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, curve: str) -> Fraction:
        for t in self.terms:
            if t.curve == curve:
                return t.coefficient
        return Fraction(0)

    def total_class(self) -> CurveCycle:
        total = zero_curve(self.n_points)
        for t in self.terms:
            total = total + t.cls * t.coefficient
        return total


def curve_blowup_correction(alpha_dot_F, beta_dot_F) -> Fraction:
    """Multiplicity of the blown-up curve in the correction term of a single curve blowup."""
    return as_fraction(alpha_dot_F) * as_fraction(beta_dot_F)


eq1_correction = curve_blowup_correction  # name used by the operation list


def defect_cycle(f: PseudoIsoData, a2: DivisorClass, a3: DivisorClass) -> DefectCycle:
    f.target.check(a2, a3)
    terms = []
    for e in f.ladder:
        lam = curve_blowup_correction(pair(a2, e.source_class), pair(a3, e.source_class))
        if lam != 0:
            terms.append(DefectTerm(e.image_name, e.image_class, lam))
    return DefectCycle(tuple(terms), f.n_points)


def ladder_pairings(f: PseudoIsoData, x: DivisorClass) -> list[tuple[str, Fraction]]:
    f.target.check(x)
    return [(e.source_name, pair(x, e.source_class)) for e in f.ladder]


# --- NIC / BTC ------------------------------------------------------------------


def nic_check(f: PseudoIsoData, g: DivisorClass) -> bool:
    return all(v == 0 for _, v in ladder_pairings(f, g))


def nic_space(f: PseudoIsoData) -> list[DivisorClass]:
    rows = [curve_functional(e.source_class) for e in f.ladder]
    return [DivisorClass.from_vector(primitive(v)) for v in nullspace(rows, f.target.rank)]


def btc_check(f: PseudoIsoData, a2: DivisorClass, a3: DivisorClass) -> bool:
    return defect_cycle(f, a2, a3).is_zero()


@dataclass(frozen=True)
class BtcComponent:
    """A linear piece V2 x V3 of the BTC solution set.

    ``assignment[k]`` is 2 when the k-th ladder curve must be orthogonal to
    the first class, 3 when orthogonal to the second.
    """

    assignment: tuple[int, ...]
    subspace2: tuple[tuple[Fraction, ...], ...]
    subspace3: tuple[tuple[Fraction, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.subspace2) + len(self.subspace3)

    def contains(self, a2: DivisorClass, a3: DivisorClass) -> bool:
        return in_span(a2.vector, self.subspace2) and in_span(a3.vector, self.subspace3)

    def is_inside(self, other: "BtcComponent") -> bool:
        return _inside(self.subspace2, other.subspace2) and _inside(self.subspace3, other.subspace3)


def _inside(inner, outer) -> bool:
    if not inner:
        return True
    return span_contains(outer, inner, len(inner[0]))


def btc_classify(f: PseudoIsoData) -> list[BtcComponent]:
    """Maximal linear components of {(a2, a3) : defect_cycle(f, a2, a3) = 0}."""
    n = f.target.rank
    rows = [curve_functional(e.source_class) for e in f.ladder]
    candidates = []
    for assignment in product((2, 3), repeat=len(rows)):
        r2 = [r for r, s in zip(rows, assignment) if s == 2]
        r3 = [r for r, s in zip(rows, assignment) if s == 3]
        candidates.append(
            BtcComponent(
                assignment,
                tuple(tuple(v) for v in nullspace(r2, n)),
                tuple(tuple(v) for v in nullspace(r3, n)),
            )
        )
    # larger pieces first, ties broken by assignment so the output is deterministic
    candidates.sort(key=lambda c: (-c.dimension, c.assignment))
    kept: list[BtcComponent] = []
    for cand in candidates:
        if not any(cand.is_inside(k) for k in kept):
            kept.append(cand)
    return kept


def weak_btc_obstruction(
    f: PseudoIsoData, a1: DivisorClass, a2: DivisorClass, a3: DivisorClass
) -> list[tuple[str, tuple[Fraction, Fraction, Fraction]]]:
    """Ladder curves meeting all three classes nontrivially; empty means no obstruction."""
    f.target.check(a1, a2, a3)
    out = []
    for e in f.ladder:
        vals = (pair(a1, e.source_class), pair(a2, e.source_class), pair(a3, e.source_class))
        if all(v != 0 for v in vals):
            out.append((e.source_name, vals))
    return out


def negativity_witness(f: PseudoIsoData, kappa: DivisorClass) -> tuple[Fraction, list[tuple[str, Fraction]]]:
    """Self-intersection of f^*(kappa) and its pairings with the ladder curves."""
    pulled = pullback11(f, kappa)
    return triple(pulled, pulled, pulled), ladder_pairings(f, pulled)
