"""Exact linear algebra over the rationals.

Small dense matrices only: the lattices handled here have rank N+1 for a
handful of blown-up points, so plain Gauss-Jordan elimination on
:class:`fractions.Fraction` entries is both fast enough and exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Matrix = list[list[Fraction]]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational coordinates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    # floats are refused outright: a rounded coordinate would silently break exactness
    raise TypeError(f"cannot interpret {value!r} as a rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` into a Fraction, rejecting decimals and q = 0."""
    s = text.strip()
    if not s:
        raise ValueError("empty rational literal")
    if "/" in s:
        num, _, den = s.partition("/")
        num, den = num.strip(), den.strip()
        if not _is_int_literal(num) or not _is_int_literal(den):
            raise ValueError(f"malformed rational literal {text!r}")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    if not _is_int_literal(s):
        raise ValueError(f"malformed rational literal {text!r}")
    return Fraction(int(s))


def _is_int_literal(s: str) -> bool:
    body = s[1:] if s[:1] in "+-" else s
    return body.isdigit()


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def to_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[as_fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> Matrix:
    """Basis of {x : A x = 0} as a list of vectors, one per free column.

    With no rows the whole space is returned as the standard basis.
    """
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    reduced, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def in_span(vector: Sequence[Fraction], basis: Sequence[Sequence[Fraction]]) -> bool:
    if not any(vector):
        return True
    if not basis:
        return False
    n = len(vector)
    return rank(list(basis) + [list(vector)], n) == rank(basis, n)


def span_contains(outer: Sequence[Sequence[Fraction]], inner: Sequence[Sequence[Fraction]], n: int) -> bool:
    """True if span(inner) is a subspace of span(outer)."""
    if not inner:
        return True
    return rank(list(outer) + list(inner), n) == rank(outer, n)


def primitive(v: Sequence[Fraction]) -> list[Fraction]:
    """Rescale to a primitive integer vector whose first nonzero entry is positive."""
    from math import gcd, lcm

    if not any(v):
        return list(v)
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = gcd(*ints)
    lead = next(x for x in ints if x)
    g = g if lead > 0 else -g
    return [Fraction(x // g) for x in ints]


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
