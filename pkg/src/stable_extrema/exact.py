"""Exact scalars and working-precision helpers.

Parameters that decide which method is trustworthy (rational or not,
Doney class or not) have to be carried exactly.  Three kinds of value are
used throughout the package:

* :class:`fractions.Fraction` for exact rationals such as ``3/2``;
* :class:`Surd` for quadratic irrationals ``r + s*sqrt(d)`` such as
  ``3/2 + sqrt(2)/50``, which are irrational by construction;
* :class:`mpmath.mpf` for everything else (irrational as stored).

Extended precision comes from mpmath.  ``working_precision`` wraps
``mp.workdps`` with the package default of 34 significant digits, which
can be overridden with the ``STABLE_EXTREMA_PRECISION`` environment
variable.
"""

from __future__ import annotations

import ast
import math
import os
import re
import warnings
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from mpmath import mp

from .errors import DomainError

DEFAULT_DPS = 34
PRECISION_ENV = "STABLE_EXTREMA_PRECISION"


def default_dps() -> int:
    value = os.environ.get(PRECISION_ENV)
    if value is None:
        return DEFAULT_DPS
    dps = int(value)
    if dps < 15:
        raise DomainError(f"{PRECISION_ENV}={dps}: need at least 15 digits")
    return dps


@contextmanager
def working_precision(dps: int | None = None, guard: int = 0):
    """Run a block at ``dps`` (default: package default) plus ``guard`` digits."""
    with mp.workdps((dps or default_dps()) + guard):
        yield


def _squarefree_split(d: int) -> tuple[int, int]:
    """Return (k, e) with d = k**2 * e and e squarefree."""
    k, e, p = 1, d, 2
    while p * p <= e:
        while e % (p * p) == 0:
            e //= p * p
            k *= p
        p += 1
    return k, e


@dataclass(frozen=True)
class Surd:
    """Quadratic irrational ``rational + coeff * sqrt(radicand)``.

    Instances are always genuinely irrational: ``coeff != 0`` and the
    radicand is a squarefree integer >= 2.  Use :func:`surd` to build one;
    it collapses to a Fraction when the irrational part vanishes.
    """

    rational: Fraction
    coeff: Fraction
    radicand: int

    # arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Surd):
            if other.radicand != self.radicand:
                raise DomainError("mixed radicands are not supported")
            return other.rational, other.coeff
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return self.to_mpf() + other
        return surd(self.rational + c[0], self.coeff + c[1], self.radicand)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.rational, -self.coeff, self.radicand)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return self.to_mpf() * other
        r, s = c
        d = self.radicand
        return surd(self.rational * r + self.coeff * s * d,
                    self.rational * s + self.coeff * r, d)

    __rmul__ = __mul__

    def reciprocal(self):
        norm = self.rational ** 2 - self.coeff ** 2 * self.radicand
        return surd(self.rational / norm, -self.coeff / norm, self.radicand)

    def __truediv__(self, other):
        if isinstance(other, Surd):
            return self * other.reciprocal()
        if isinstance(other, (int, Fraction)):
            return surd(self.rational / other, self.coeff / other, self.radicand)
        return self.to_mpf() / other

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    # exact order -------------------------------------------------------

    def sign(self) -> int:
        r, s, d = self.rational, self.coeff, self.radicand
        if r >= 0 and s >= 0:
            return 1
        if r <= 0 and s <= 0:
            return -1
        # opposite signs: compare r**2 with s**2 * d
        if r * r > s * s * d:
            return 1 if r > 0 else -1
        return 1 if s > 0 else -1

    def _cmp(self, other) -> int:
        if self._coerce(other) is None:
            v, o = self.to_mpf(), other
            return (v > o) - (v < o)
        diff = self - other
        if isinstance(diff, Surd):
            return diff.sign()
        return (diff > 0) - (diff < 0)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __floor__(self):
        k = math.floor(float(self))
        while self < k:
            k -= 1
        while self >= k + 1:
            k += 1
        return k

    def frac(self):
        return self - math.floor(self)

    # conversion --------------------------------------------------------

    def to_mpf(self):
        return frac_to_mpf(self.rational) + frac_to_mpf(self.coeff) * mp.sqrt(self.radicand)

    def __float__(self):
        return float(self.rational) + float(self.coeff) * math.sqrt(self.radicand)

    def __str__(self):
        r, s = self.rational, self.coeff
        sign = "+" if s > 0 else "-"
        s = abs(s)
        irr = f"sqrt({self.radicand})"
        if s.numerator != 1:
            irr = f"{s.numerator}*{irr}"
        if s.denominator != 1:
            irr = f"{irr}/{s.denominator}"
        if r == 0:
            return irr if sign == "+" else "-" + irr
        return f"{r}{sign}{irr}"


def surd(rational, coeff, radicand: int):
    """Build ``rational + coeff*sqrt(radicand)``, simplifying where possible."""
    rational, coeff = Fraction(rational), Fraction(coeff)
    if radicand < 0:
        raise DomainError("negative radicand")
    k, e = _squarefree_split(radicand)
    coeff *= k
    if coeff == 0 or e == 1:
        return rational + coeff * (1 if e == 1 else 0)
    return Surd(rational, coeff, e)


ExactReal = Union[Fraction, Surd]


def frac_to_mpf(f: Fraction):
    return mp.mpf(f.numerator) / f.denominator


def to_mpf(x):
    """Convert any supported scalar to an mpf at the current precision."""
    if isinstance(x, Fraction):
        return frac_to_mpf(x)
    if isinstance(x, Surd):
        return x.to_mpf()
    if isinstance(x, str):
        return to_mpf(parse_real(x))
    return mp.mpf(x)


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, Surd, int))


def fractional_part(x):
    """{x} in [0, 1); exact for Fraction/Surd input."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x) - math.floor(x)
    if isinstance(x, Surd):
        return x.frac()
    return x - mp.floor(x)


def dist_to_int(x):
    """||x||, the distance to the nearest integer."""
    f = fractional_part(x)
    return min(f, 1 - f)


# parsing ---------------------------------------------------------------

_SQRT_NAME = re.compile(r"sqrt(\d+)$")


class _Evaluator(ast.NodeVisitor):
    def __init__(self, text):
        self.text = text
        self.inexact = False

    def generic_visit(self, node):
        raise DomainError(f"unsupported syntax in {self.text!r}")

    def visit_Expression(self, node):
        return self.visit(node.body)

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise DomainError(f"unsupported constant in {self.text!r}")
        if isinstance(node.value, float):
            self.inexact = True
            # exact decimal value as typed, not the binary float
            return Fraction(ast.get_source_segment(self.text, node))
        return Fraction(node.value)

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        raise DomainError(f"unsupported operator in {self.text!r}")

    def visit_BinOp(self, node):
        a, b = self.visit(node.left), self.visit(node.right)
        ops = {ast.Add: lambda: a + b, ast.Sub: lambda: a - b,
               ast.Mult: lambda: a * b, ast.Div: lambda: a / b}
        for kind, fn in ops.items():
            if isinstance(node.op, kind):
                return fn()
        raise DomainError(f"unsupported operator in {self.text!r}")

    def visit_Call(self, node):
        if not (isinstance(node.func, ast.Name) and node.func.id == "sqrt"
                and len(node.args) == 1 and not node.keywords):
            raise DomainError(f"only sqrt(integer) calls are allowed: {self.text!r}")
        arg = self.visit(node.args[0])
        if not (isinstance(arg, Fraction) and arg.denominator == 1 and arg >= 0):
            raise DomainError("sqrt() needs a nonnegative integer argument")
        return surd(0, 1, int(arg))

    def visit_Name(self, node):
        m = _SQRT_NAME.match(node.id)
        if m:
            return surd(0, 1, int(m.group(1)))
        if node.id == "pi":
            self.inexact = True
            return mp.pi
        if node.id == "e":
            self.inexact = True
            return mp.e
        raise DomainError(f"unknown name {node.id!r} in {self.text!r}")


def parse_real(text: str, warn_decimal: bool = True):
    """Parse ``"3/2"``, ``"3/2+sqrt(2)/50"``, ``"0.6"``, ``"sqrt2"`` or ``"pi"``.

    Rationals and surds are returned exactly.  Decimal literals are taken
    as the exact rational they spell, with a warning, since a typed decimal
    such as 1.5 almost always means the rational 3/2.
    """
    text = text.strip()
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise DomainError(f"cannot parse {text!r}") from exc
    ev = _Evaluator(text)
    value = ev.visit(tree)
    if ev.inexact and isinstance(value, (Fraction, Surd)) and warn_decimal:
        warnings.warn(f"decimal literal in {text!r} treated as exact rational {value}",
                      stacklevel=2)
    return value


def as_real(x):
    """Normalise user input: str -> parsed, int -> Fraction, float -> mpf."""
    if isinstance(x, str):
        return parse_real(x)
    if isinstance(x, bool):
        raise DomainError("boolean is not a real number")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, Surd)):
        return x
    return mp.mpf(x)
