"""Exact scalars in the field Q(i)(q) backed by sympy's sparse rational-function field."""

from fractions import Fraction
from tokenize import TokenError
import re
from typing import Union

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)
from sympy.polys.domains import QQ_I
from sympy.polys.fields import FracElement, field
from sympy.polys.polyerrors import CoercionFailed

FIELD, QGEN = field("q", QQ_I)
_POLY_ONE = FIELD.ring.one
_Q_SYMBOL = sympy.Symbol("q")
TEXT_NAMES = {"q": _Q_SYMBOL, "I": sympy.I, "i": sympy.I}
SCALAR_TRANSFORMS = standard_transformations + (implicit_multiplication, convert_xor)
# a digit glued to q, i or a parenthesis, as in 2i or 3q^2
_GLUED = re.compile(r"(?<=[0-9])\s*(?=[qiI(])")


class ScalarError(ArithmeticError):
    """Division by zero or evaluation at a pole."""


ScalarLike = Union["Scalar", int, Fraction, sympy.Basic]


class Scalar:
    """Rational function in q over the Gaussian rationals, kept in lowest terms.

    sympy's field element cancels numerator and denominator on construction. A
    constant denominator is folded into the numerator, and sums and products of
    two polynomials skip the gcd step. The hash normalises by the leading
    coefficient of the denominator so equal values hash equally.
    """

    __slots__ = ("_fe",)

    def __init__(self, value: ScalarLike = 0):
        if isinstance(value, Scalar):
            fe = value._fe
        elif isinstance(value, FracElement):
            fe = FIELD.new(value.numer, value.denom)
        elif isinstance(value, bool):
            raise TypeError("bool is not a scalar")
        elif isinstance(value, int):
            fe = FIELD(value)
        elif isinstance(value, Fraction):
            fe = FIELD(sympy.Rational(value.numerator, value.denominator))
        elif isinstance(value, sympy.Basic):
            try:
                raw = FIELD.from_expr(value)
            except (ValueError, CoercionFailed) as e:
                raise ValueError(f"Not a scalar expression: {value}") from e
            fe = FIELD.new(raw.numer, raw.denom)
        else:
            raise TypeError(f"Cannot build a scalar from {type(value).__name__}")
        self._fe = _fold_ground(fe)

    # constructors
    @classmethod
    def q(cls) -> "Scalar":
        return cls(QGEN)

    @classmethod
    def i(cls) -> "Scalar":
        return cls(sympy.I)

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse ``(3+2i)q^4/(q^2+1)`` or the sympy form ``(3 + 2*I)*q**4/(q**2 + 1)``."""
        try:
            expr = parse_expr(_GLUED.sub("*", str(text)), local_dict=dict(TEXT_NAMES), transformations=SCALAR_TRANSFORMS)
        except (SyntaxError, TypeError, TokenError) as e:
            raise ValueError(f"Cannot parse scalar: {text!r}") from e
        return cls(expr)

    # arithmetic
    def _wrap(self, fe: FracElement) -> "Scalar":
        out = Scalar.__new__(Scalar)
        out._fe = _fold_ground(fe)
        return out

    def _both_polynomial(self, other: "Scalar") -> bool:
        return self._fe.denom == _POLY_ONE and other._fe.denom == _POLY_ONE

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._both_polynomial(other):
            return self._wrap(self._fe.raw_new(self._fe.numer + other._fe.numer, _POLY_ONE))
        return self._wrap(self._fe + other._fe)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._both_polynomial(other):
            return self._wrap(self._fe.raw_new(self._fe.numer - other._fe.numer, _POLY_ONE))
        return self._wrap(self._fe - other._fe)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._both_polynomial(other):
            return self._wrap(self._fe.raw_new(self._fe.numer * other._fe.numer, _POLY_ONE))
        return self._wrap(self._fe * other._fe)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other:
            raise ScalarError("division by zero")
        return self._wrap(self._fe / other._fe)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __neg__(self) -> "Scalar":
        return self._wrap(-self._fe)

    def __pow__(self, n: int) -> "Scalar":
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else ONE / self
        out = ONE
        for _ in range(abs(n)):
            out = out * base
        return out

    def inverse(self) -> "Scalar":
        return ONE / self

    # comparison
    def __bool__(self) -> bool:
        return bool(self._fe.numer)

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return not (self._fe - other._fe).numer

    def __hash__(self) -> int:
        numer, denom = self._fe.numer, self._fe.denom
        lc = denom.LC
        numer = numer.quo_ground(lc)
        denom = denom.quo_ground(lc)
        return hash((frozenset(numer.items()), frozenset(denom.items())))

    def is_constant(self) -> bool:
        return self._fe.numer.is_ground and self._fe.denom.is_ground

    # involution and specializations
    def conj(self) -> "Scalar":
        """Complex conjugate of every coefficient; q is fixed."""
        return self._wrap(FIELD.new(_conj_poly(self._fe.numer), _conj_poly(self._fe.denom)))

    def specialize_q1(self) -> "Scalar":
        """Value at q = 1 as a constant scalar."""
        numer = _sum_coefficients(self._fe.numer)
        denom = _sum_coefficients(self._fe.denom)
        if not denom:
            raise ScalarError(f"pole at q=1: {self.to_text()}")
        return Scalar(QQ_I.to_sympy(numer) / QQ_I.to_sympy(denom))

    def eval_numeric(self, q0: float = 1.0) -> complex:
        denom = _eval_poly(self._fe.denom, q0)
        if denom == 0:
            raise ScalarError(f"pole at q={q0}: {self.to_text()}")
        return _eval_poly(self._fe.numer, q0) / denom

    # text
    def to_expr(self) -> sympy.Expr:
        return self._fe.as_expr()

    def to_text(self) -> str:
        numer = sympy.sstr(self._fe.numer.as_expr())
        if self._fe.denom == _POLY_ONE:
            return numer
        denom = sympy.sstr(self._fe.denom.as_expr())
        return f"({numer})/({denom})"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Scalar({self.to_text()!r})"


def _coerce(value):
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Scalar(value)
    return NotImplemented


def _fold_ground(fe: FracElement) -> FracElement:
    """Constant denominators move into the numerator so polynomials carry denom 1."""
    denom = fe.denom
    if denom.is_ground and denom != _POLY_ONE:
        return fe.raw_new(fe.numer.quo_ground(denom.LC), _POLY_ONE)
    return fe


def _conj_poly(poly):
    ring = poly.ring
    return ring.from_dict({monom: coeff.new(coeff.x, -coeff.y) for monom, coeff in poly.items()})


def _sum_coefficients(poly):
    total = QQ_I.zero
    for coeff in poly.values():
        total = total + coeff
    return total


def _eval_poly(poly, q0: float) -> complex:
    total = 0j
    for (exp,), coeff in poly.items():
        total += complex(QQ_I.to_sympy(coeff)) * q0 ** exp
    return total


ZERO = Scalar(0)
ONE = Scalar(1)
I_UNIT = Scalar.i()
Q = Scalar.q()


def arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"Unknown operation: {op}")
