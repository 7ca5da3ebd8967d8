"""Intersection ring of the blowup of P^3 at N points.

Divisor classes live in H^{1,1} with basis (H, E_0, ..., E_{N-1}); curve
classes live in H^{2,2} with basis (H^2, L_0, ..., L_{N-1}).  Products are
determined by the table

    H.H = H^2      H.E_i = 0      E_i.E_j = -delta_ij L_i
    H.H^2 = 1      H.L_i = 0      E_i.H^2 = 0      E_i.L_j = -delta_ij

Everything is exact: coordinates are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .exact import as_fraction, format_rational, parse_rational


class DimensionError(ValueError):
    """Raised when classes from lattices of different rank are combined."""


def _coords(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_fraction(v) for v in values)


@dataclass(frozen=True)
class DivisorClass:
    """a*H + sum_i b[i]*E_i."""

    a: Fraction
    b: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", _coords(self.b))

    @property
    def n_points(self) -> int:
        return len(self.b)

    @property
    def vector(self) -> tuple[Fraction, ...]:
        return (self.a, *self.b)

    @classmethod
    def from_vector(cls, v: Sequence) -> "DivisorClass":
        return cls(v[0], tuple(v[1:]))

    @classmethod
    def parse(cls, text: str) -> "DivisorClass":
        a, b = _parse_class_text(text)
        return cls(a, b)

    def __str__(self) -> str:
        return format_class(self.a, self.b)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        _check_same(self, other)
        return DivisorClass(self.a + other.a, tuple(x + y for x, y in zip(self.b, other.b)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-self.a, tuple(-x for x in self.b))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-other)

    def __mul__(self, k) -> "DivisorClass":
        k = as_fraction(k)
        return DivisorClass(k * self.a, tuple(k * x for x in self.b))

    __rmul__ = __mul__

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.vector)


@dataclass(frozen=True)
class CurveCycle:
    """c*H^2 + sum_i d[i]*L_i, optionally remembering which named curves it is built from."""

    c: Fraction
    d: tuple[Fraction, ...]
    support: tuple[tuple[str, Fraction], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "c", as_fraction(self.c))
        object.__setattr__(self, "d", _coords(self.d))
        if self.support is not None:
            object.__setattr__(
                self, "support", tuple((str(n), as_fraction(m)) for n, m in self.support)
            )

    @property
    def n_points(self) -> int:
        return len(self.d)

    @property
    def vector(self) -> tuple[Fraction, ...]:
        return (self.c, *self.d)

    @classmethod
    def from_vector(cls, v: Sequence) -> "CurveCycle":
        return cls(v[0], tuple(v[1:]))

    @classmethod
    def parse(cls, text: str) -> "CurveCycle":
        c, d = _parse_class_text(text)
        return cls(c, d)

    def __str__(self) -> str:
        return format_class(self.c, self.d)

    def __add__(self, other: "CurveCycle") -> "CurveCycle":
        _check_same(self, other)
        return CurveCycle(self.c + other.c, tuple(x + y for x, y in zip(self.d, other.d)))

    def __neg__(self) -> "CurveCycle":
        return CurveCycle(-self.c, tuple(-x for x in self.d))

    def __sub__(self, other: "CurveCycle") -> "CurveCycle":
        return self + (-other)

    def __mul__(self, k) -> "CurveCycle":
        k = as_fraction(k)
        return CurveCycle(k * self.c, tuple(k * x for x in self.d))

    __rmul__ = __mul__

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.vector)


def curve_combination(terms: Iterable[tuple[str, CurveCycle, Fraction]], n_points: int) -> CurveCycle:
    """Formal sum of named curves; the lattice coordinates are the weighted sum of their classes."""
    total = zero_curve(n_points)
    support = []
    for name, cls, mult in terms:
        mult = as_fraction(mult)
        total = total + cls * mult
        support.append((name, mult))
    return CurveCycle(total.c, total.d, tuple(support))


def zero_divisor(n_points: int) -> DivisorClass:
    return DivisorClass(0, (0,) * n_points)


def zero_curve(n_points: int) -> CurveCycle:
    return CurveCycle(0, (0,) * n_points)


def basis_divisors(n_points: int) -> list[DivisorClass]:
    return [DivisorClass.from_vector([int(i == k) for i in range(n_points + 1)]) for k in range(n_points + 1)]


def basis_curves(n_points: int) -> list[CurveCycle]:
    return [CurveCycle.from_vector([int(i == k) for i in range(n_points + 1)]) for k in range(n_points + 1)]


def hyperplane(n_points: int) -> DivisorClass:
    return DivisorClass(1, (0,) * n_points)


def exceptional(i: int, n_points: int) -> DivisorClass:
    return DivisorClass(0, tuple(int(k == i) for k in range(n_points)))


def eta0(n_points: int = 4) -> DivisorClass:
    """The class 2H - sum E_i (strict transform of a quadric through the points)."""
    return DivisorClass(2, (-1,) * n_points)


def line_class(i: int, j: int, n_points: int) -> CurveCycle:
    """Class H^2 - L_i - L_j of the strict transform of the line through points i and j."""
    return CurveCycle(1, tuple(-int(k in (i, j)) for k in range(n_points)))


def line_name(i: int, j: int) -> str:
    return f"C{i}{j}" if max(i, j) < 10 else f"C{i}_{j}"


@dataclass(frozen=True)
class VarietyDescriptor:
    """Blowup of P^3 at ``n_points`` points, with a table of named curves."""

    n_points: int
    labels: tuple[str, ...] = ()
    curve_table: tuple[tuple[str, CurveCycle], ...] = ()

    def __post_init__(self):
        if self.n_points < 0:
            raise ValueError("n_points must be nonnegative")
        labels = tuple(self.labels) or tuple(f"e{i}" for i in range(self.n_points))
        if len(labels) != self.n_points:
            raise ValueError(f"expected {self.n_points} labels, got {len(labels)}")
        object.__setattr__(self, "labels", labels)
        table = tuple(self.curve_table)
        if not table:
            table = tuple(
                (line_name(i, j), line_class(i, j, self.n_points))
                for i, j in combinations(range(self.n_points), 2)
            )
        names = [n for n, _ in table]
        if len(set(names)) != len(names):
            raise ValueError("curve names must be unique")
        for name, cls in table:
            if cls.n_points != self.n_points:
                raise DimensionError(f"curve {name} has {cls.n_points} exceptional coordinates")
            if not cls.is_integral():
                raise ValueError(f"distinguished curve {name} must have integer coordinates")
        object.__setattr__(self, "curve_table", table)

    @property
    def rank(self) -> int:
        return self.n_points + 1

    def curve(self, name: str) -> CurveCycle:
        for n, cls in self.curve_table:
            if n == name:
                return cls
        raise KeyError(name)

    def check(self, *classes) -> None:
        for x in classes:
            if x.n_points != self.n_points:
                raise DimensionError(
                    f"class with {x.n_points} exceptional coordinates on a variety with {self.n_points} points"
                )


def _check_same(*classes) -> None:
    n = classes[0].n_points
    for x in classes[1:]:
        if x.n_points != n:
            raise DimensionError(f"classes have {n} and {x.n_points} exceptional coordinates")


def _check(variety: VarietyDescriptor | None, *classes) -> None:
    _check_same(*classes)
    if variety is not None:
        variety.check(*classes)


def wedge11(x: DivisorClass, y: DivisorClass, variety: VarietyDescriptor | None = None) -> CurveCycle:
    """Cup product of two divisor classes."""
    _check(variety, x, y)
    return CurveCycle(x.a * y.a, tuple(-bx * by for bx, by in zip(x.b, y.b)))


def pair(x: DivisorClass, c: CurveCycle, variety: VarietyDescriptor | None = None) -> Fraction:
    """Intersection number of a divisor class with a curve class."""
    _check(variety, x, c)
    return x.a * c.c - sum((bx * dc for bx, dc in zip(x.b, c.d)), Fraction(0))


def triple(x: DivisorClass, y: DivisorClass, z: DivisorClass, variety: VarietyDescriptor | None = None) -> Fraction:
    return pair(x, wedge11(y, z, variety), variety)


def curve_functional(c: CurveCycle) -> list[Fraction]:
    """Coefficients v with pair(x, c) = v . x.vector, for x in H^{1,1}."""
    return [c.c, *(-d for d in c.d)]


def default_curves(n_points: int) -> list[tuple[str, CurveCycle]]:
    """Test curves for nefness: L_i, strict transforms of lines through two points, H^2 - L_i, H^2.

    This list is not claimed to generate the Mori cone; probes are only ever
    relative to the curves supplied.
    """
    curves: list[tuple[str, CurveCycle]] = []
    for i in range(n_points):
        curves.append((f"L{i}", CurveCycle(0, tuple(int(k == i) for k in range(n_points)))))
    for i, j in combinations(range(n_points), 2):
        curves.append((line_name(i, j), line_class(i, j, n_points)))
    for i in range(n_points):
        curves.append((f"H2-L{i}", CurveCycle(1, tuple(-int(k == i) for k in range(n_points)))))
    curves.append(("H2", CurveCycle(1, (0,) * n_points)))
    return curves


def cone_probe(x: DivisorClass, curves: Sequence[CurveCycle] | None = None, strict: bool = False) -> bool:
    """Kleiman-type test: x pairs nonnegatively (positively if ``strict``) with every curve given."""
    if curves is None:
        curves = [c for _, c in default_curves(x.n_points)]
    curves = [c[1] if isinstance(c, tuple) else c for c in curves]
    if not curves:
        raise ValueError("cone_probe needs at least one curve")
    values = [pair(x, c) for c in curves]
    return all(v > 0 for v in values) if strict else all(v >= 0 for v in values)


def format_class(head: Fraction, tail: Sequence[Fraction]) -> str:
    return f"{format_rational(head)};" + ",".join(format_rational(t) for t in tail)


def _parse_class_text(text: str) -> tuple[Fraction, tuple[Fraction, ...]]:
    s = "".join(text.split())
    if not s:
        raise ValueError("empty class literal")
    head, sep, tail = s.partition(";")
    if not sep:
        raise ValueError(f"class literal {text!r} needs the form 'a;b0,b1,...'")
    a = parse_rational(head)
    b = tuple(parse_rational(t) for t in tail.split(",")) if tail else ()
    return a, b
