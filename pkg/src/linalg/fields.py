import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import isqrt
from typing import Optional, Union

from sympy import isprime
from sympy.ntheory.factor_ import core
from sympy.ntheory.residue_ntheory import is_quad_residue, sqrt_mod

from src.utils.errors import FieldError, MixedField

logger = logging.getLogger('adhmlab.linalg')


@total_ordering
class FpElement:
    """Element of the prime field F_p, stored as its least residue."""

    __slots__ = ('value', 'p')

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other) -> Optional['FpElement']:
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise MixedField(f"Cannot combine F_{self.p} with F_{other.p}")
            return other
        if isinstance(other, int):
            return FpElement(other, self.p)
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise FieldError(f"{other} has no image in F_{self.p}")
            return FpElement(other.numerator * pow(other.denominator, -1, self.p), self.p)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FpElement(self.value + other.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FpElement(self.value - other.value, self.p)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FpElement(other.value - self.value, self.p)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FpElement(self.value * other.value, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __neg__(self):
        return FpElement(-self.value, self.p)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return FpElement(pow(self.value, exponent, self.p), self.p)

    def inverse(self) -> 'FpElement':
        if self.value == 0:
            raise FieldError(f"Division by zero in F_{self.p}")
        return FpElement(pow(self.value, -1, self.p), self.p)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (MixedField, FieldError):
            return False
        return other is not None and other.value == self.value

    def __lt__(self, other):
        # Orders residues 0..p-1; only used for deterministic sorting.
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.value < other.value

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} mod {self.p}"


ExactScalar = Union[Fraction, FpElement]


@dataclass(frozen=True)
class Field:
    """Coefficient field tag: the rationals (p is None) or F_p for an odd prime p."""
    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None and (self.p < 3 or not isprime(self.p)):
            raise FieldError(f"Prime fields need an odd prime, got {self.p}")

    @classmethod
    def prime(cls, p: int) -> 'Field':
        return cls(p)

    @classmethod
    def from_tag(cls, tag: str) -> 'Field':
        """Parse the CLI spelling: 'q' or 'fp:<p>'."""
        tag = tag.strip().lower()
        if tag in ('q', 'qq', 'rationals'):
            return cls()
        if tag.startswith('fp:'):
            try:
                return cls(int(tag[3:]))
            except ValueError:
                raise FieldError(f"Bad field tag '{tag}'")
        raise FieldError(f"Bad field tag '{tag}'")

    @property
    def tag(self) -> str:
        return 'q' if self.p is None else f"fp:{self.p}"

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def zero(self) -> ExactScalar:
        return self(0)

    @property
    def one(self) -> ExactScalar:
        return self(1)

    def __call__(self, value) -> ExactScalar:
        """Coerce an int, Fraction or field element into this field."""
        if self.p is None:
            if isinstance(value, FpElement):
                raise MixedField(f"Cannot read {value!r} as a rational")
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            raise FieldError(f"Not an exact scalar: {value!r}")
        if isinstance(value, FpElement):
            if value.p != self.p:
                raise MixedField(f"Cannot read {value!r} in F_{self.p}")
            return value
        if isinstance(value, int):
            return FpElement(value, self.p)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise FieldError(f"{value} has no image in F_{self.p}")
            return FpElement(value.numerator * pow(value.denominator, -1, self.p), self.p)
        raise FieldError(f"Not an exact scalar: {value!r}")

    def contains(self, value) -> bool:
        if self.p is None:
            return isinstance(value, Fraction)
        return isinstance(value, FpElement) and value.p == self.p

    def is_square(self, value: ExactScalar) -> bool:
        if not value:
            return True
        if self.p is None:
            return value > 0 and _is_int_square(value.numerator) and _is_int_square(value.denominator)
        return is_quad_residue(value.value, self.p)

    def square_class(self, value: ExactScalar) -> ExactScalar:
        """Representative of value modulo squares: signed squarefree over Q; 1 or the least non-residue mod p."""
        if not value:
            raise FieldError("Zero has no square class")
        if self.p is None:
            n = value.numerator * value.denominator
            return Fraction(core(abs(n)) if n > 0 else -core(abs(n)))
        if self.is_square(value):
            return self.one
        return self(next(a for a in range(2, self.p) if not is_quad_residue(a, self.p)))

    def sqrt(self, value: ExactScalar) -> ExactScalar:
        """Exact square root of a square in the field."""
        if not self.is_square(value):
            raise FieldError(f"{value!r} is not a square in {self.tag}")
        if self.p is None:
            return Fraction(isqrt(value.numerator), isqrt(value.denominator))
        return FpElement(sqrt_mod(value.value, self.p) or 0, self.p)

    def format(self, value: ExactScalar) -> str:
        if self.p is None:
            return str(value)
        return f"{value.value} mod {self.p}"

    def parse(self, text) -> ExactScalar:
        """Read '1/2', '-3', an int, or 'n mod p' (the modulus must match)."""
        if isinstance(text, bool):
            raise FieldError(f"Not a scalar: {text!r}")
        if isinstance(text, int):
            return self(text)
        if not isinstance(text, str):
            raise FieldError(f"Not a scalar: {text!r}")
        if 'mod' in text:
            left, _, right = text.partition('mod')
            try:
                n, p = int(left), int(right)
            except ValueError:
                raise FieldError(f"Bad prime-field entry '{text}'")
            if self.p != p:
                raise MixedField(f"Entry '{text}' does not belong to {self.tag}")
            return FpElement(n, p)
        try:
            return self(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError):
            raise FieldError(f"Bad rational entry '{text}'")


def _is_int_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


QQ = Field()
