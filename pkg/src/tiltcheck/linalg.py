"""Exact linear solves over Q, delegated to sympy."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import sympy


class SingularSystemError(ArithmeticError):
    pass


def _to_sympy(x) -> sympy.Rational:
    x = Fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


def _from_sympy(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve ``matrix @ x = rhs`` for a square nonsingular matrix."""
    m = sympy.Matrix([[_to_sympy(v) for v in row] for row in matrix])
    if m.rows != m.cols:
        raise SingularSystemError(f"matrix is {m.rows}x{m.cols}, not square")
    if m.det() == 0:
        raise SingularSystemError("matrix is singular")
    b = sympy.Matrix([_to_sympy(v) for v in rhs])
    return [_from_sympy(v) for v in m.LUsolve(b)]


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    m = sympy.Matrix([[_to_sympy(v) for v in row] for row in matrix])
    return _from_sympy(m.det())


def rank(matrix: Sequence[Sequence]) -> int:
    if not matrix:
        return 0
    return sympy.Matrix([[_to_sympy(v) for v in row] for row in matrix]).rank()
