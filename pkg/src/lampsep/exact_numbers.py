"""Exact arithmetic in valued fields.

Rationals are :class:`fractions.Fraction` and carry either the archimedean
absolute value or a p-adic one.  Positive characteristic is modelled by
Laurent polynomials over F_p with the t-adic valuation.  Norms are never
turned into floats: archimedean comparisons are rational comparisons and
ultrametric comparisons are integer valuation comparisons.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

BigRational = Fraction

INF = math.inf


class ValuationMismatch(ValueError):
    """Two scalars living in differently valued fields were combined."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _require_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")


def _int_valuation(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(x: Fraction | int, p: int) -> Union[int, float]:
    """v_p(x) = v_p(numerator) - v_p(denominator); ``INF`` for zero."""
    _require_prime(p)
    x = Fraction(x)
    if x == 0:
        return INF
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


# --------------------------------------------------------------------------
# Laurent polynomials over F_p
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LaurentPoly:
    """Element of F_p[t, 1/t]; ``coeffs`` is a sorted tuple of (exponent, residue)."""

    p: int
    coeffs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        _require_prime(self.p)
        clean: dict[int, int] = {}
        for e, c in self.coeffs:
            clean[e] = (clean.get(e, 0) + c) % self.p
        object.__setattr__(
            self, "coeffs", tuple(sorted((e, c) for e, c in clean.items() if c))
        )

    @classmethod
    def monomial(cls, p: int, coeff: int, exp: int) -> "LaurentPoly":
        return cls(p, ((exp, coeff),))

    @classmethod
    def constant(cls, p: int, c: int) -> "LaurentPoly":
        return cls(p, ((0, c),))

    def _check(self, other: "LaurentPoly") -> None:
        if self.p != other.p:
            raise ValuationMismatch(f"characteristics differ: {self.p} vs {other.p}")

    def is_zero(self) -> bool:
        return not self.coeffs

    def order(self) -> Union[int, float]:
        """t-adic valuation: the lowest exponent present."""
        return self.coeffs[0][0] if self.coeffs else INF

    def is_unit(self) -> bool:
        return len(self.coeffs) == 1

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        return LaurentPoly(self.p, self.coeffs + other.coeffs)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.p, tuple((e, -c) for e, c in self.coeffs))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        return LaurentPoly(
            self.p,
            tuple((e1 + e2, c1 * c2) for e1, c1 in self.coeffs for e2, c2 in other.coeffs),
        )

    def inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise ValueError(f"{self.encode()} is not a monomial, cannot invert")
        (e, c), = self.coeffs
        return LaurentPoly(self.p, ((-e, pow(c, -1, self.p)),))

    def __pow__(self, j: int) -> "LaurentPoly":
        if j < 0:
            return self.inverse() ** (-j)
        result = LaurentPoly.constant(self.p, 1)
        base = self
        while j:
            if j & 1:
                result = result * base
            base = base * base
            j >>= 1
        return result

    def encode(self) -> str:
        body = ",".join(f"{e}:{c}" for e, c in self.coeffs)
        return f"{{{self.p}; {body}}}"

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        m = re.fullmatch(r"\s*\{\s*(\d+)\s*;\s*(.*?)\s*\}\s*", text)
        if not m:
            raise ValueError(f"bad Laurent polynomial encoding {text!r}")
        p = int(m.group(1))
        coeffs = []
        if m.group(2):
            for item in m.group(2).split(","):
                e, c = item.split(":")
                coeffs.append((int(e), int(c)))
        return cls(p, tuple(coeffs))


# --------------------------------------------------------------------------
# Valuations and valued scalars
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Valuation:
    """Which absolute value a field carries.

    ``kind`` is ``"arch"``, ``"padic"`` or ``"tadic"``; ``p`` is the prime for
    p-adic and the characteristic for t-adic.
    """

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "arch":
            if self.p is not None:
                raise ValueError("archimedean valuation takes no prime")
        elif self.kind in ("padic", "tadic"):
            _require_prime(self.p)
        else:
            raise ValueError(f"unknown valuation kind {self.kind!r}")

    @classmethod
    def archimedean(cls) -> "Valuation":
        return cls("arch")

    @classmethod
    def padic(cls, p: int) -> "Valuation":
        return cls("padic", p)

    @classmethod
    def tadic(cls, p: int) -> "Valuation":
        return cls("tadic", p)

    @property
    def ultrametric(self) -> bool:
        return self.kind != "arch"

    def encode(self) -> str:
        if self.kind == "arch":
            return "arch"
        if self.kind == "padic":
            return f"{self.p}adic"
        return f"tadic{self.p}"

    @classmethod
    def parse(cls, text: str) -> "Valuation":
        text = text.strip()
        if text == "arch":
            return cls.archimedean()
        m = re.fullmatch(r"(\d+)-?adic", text)
        if m:
            return cls.padic(int(m.group(1)))
        m = re.fullmatch(r"tadic(\d+)", text)
        if m:
            return cls.tadic(int(m.group(1)))
        raise ValueError(f"bad valuation {text!r}")


Value = Union[Fraction, LaurentPoly]


@dataclass(frozen=True)
class ValuedScalar:
    value: Value
    valuation: Valuation

    def __post_init__(self):
        if isinstance(self.value, int) and not isinstance(self.value, bool):
            object.__setattr__(self, "value", Fraction(self.value))
        if self.valuation.kind == "tadic":
            if not isinstance(self.value, LaurentPoly):
                raise TypeError("t-adic scalars must be Laurent polynomials")
            if self.value.p != self.valuation.p:
                raise ValuationMismatch("Laurent characteristic differs from valuation")
        elif not isinstance(self.value, Fraction):
            raise TypeError(f"{self.valuation.encode()} scalars must be rationals")

    # construction helpers

    @classmethod
    def of(cls, value, valuation: Valuation) -> "ValuedScalar":
        if valuation.kind == "tadic" and not isinstance(value, LaurentPoly):
            value = LaurentPoly.constant(valuation.p, int(value))
        elif valuation.kind != "tadic":
            value = Fraction(value)
        return cls(value, valuation)

    def zero(self) -> "ValuedScalar":
        return ValuedScalar.of(0, self.valuation)

    def one(self) -> "ValuedScalar":
        return ValuedScalar.of(1, self.valuation)

    # arithmetic

    def _check(self, other: "ValuedScalar") -> None:
        if not isinstance(other, ValuedScalar):
            raise TypeError(f"expected ValuedScalar, got {type(other).__name__}")
        if self.valuation != other.valuation:
            raise ValuationMismatch(
                f"{self.valuation.encode()} vs {other.valuation.encode()}"
            )

    def __add__(self, other: "ValuedScalar") -> "ValuedScalar":
        self._check(other)
        return ValuedScalar(self.value + other.value, self.valuation)

    def __sub__(self, other: "ValuedScalar") -> "ValuedScalar":
        self._check(other)
        return ValuedScalar(self.value - other.value, self.valuation)

    def __neg__(self) -> "ValuedScalar":
        return ValuedScalar(-self.value, self.valuation)

    def __mul__(self, other: "ValuedScalar") -> "ValuedScalar":
        self._check(other)
        return ValuedScalar(self.value * other.value, self.valuation)

    def inverse(self) -> "ValuedScalar":
        return scalar_pow(self, -1)

    def __truediv__(self, other: "ValuedScalar") -> "ValuedScalar":
        self._check(other)
        return self * other.inverse()

    def __pow__(self, j: int) -> "ValuedScalar":
        return scalar_pow(self, j)

    def is_zero(self) -> bool:
        if isinstance(self.value, LaurentPoly):
            return self.value.is_zero()
        return self.value == 0

    def order(self) -> Union[int, float]:
        """Additive valuation (ultrametric fields only)."""
        if self.valuation.kind == "padic":
            return padic_valuation(self.value, self.valuation.p)
        if self.valuation.kind == "tadic":
            return self.value.order()
        raise ValueError("archimedean scalars have no additive valuation")

    def encode(self) -> str:
        if isinstance(self.value, LaurentPoly):
            return self.value.encode()
        return f"{self.value.numerator}/{self.value.denominator}"

    @classmethod
    def parse(cls, text: str, valuation: Valuation) -> "ValuedScalar":
        text = text.strip()
        if valuation.kind == "tadic":
            return cls(LaurentPoly.parse(text), valuation)
        return cls(Fraction(text), valuation)

    def __repr__(self) -> str:
        return f"ValuedScalar({self.encode()}, {self.valuation.encode()})"


def scalar_pow(a: ValuedScalar, j: int) -> ValuedScalar:
    """Exact a**j; negative j needs an invertible base."""
    if j < 0 and (a.is_zero() or (isinstance(a.value, LaurentPoly) and not a.value.is_unit())):
        raise ValueError(f"{a.encode()} is not invertible")
    return ValuedScalar(a.value**j, a.valuation)


LT, EQ, GT = -1, 0, 1


def _cmp(x, y) -> int:
    return (x > y) - (x < y)


def norm_compare(x: ValuedScalar, y: ValuedScalar) -> int:
    """Compare |x| with |y|; returns ``LT``, ``EQ`` or ``GT``."""
    x._check(y)
    if x.valuation.kind == "arch":
        return _cmp(abs(x.value), abs(y.value))
    # larger valuation means smaller norm; zero has valuation +inf
    return _cmp(y.order(), x.order())


def has_norm_at_least_two(a: ValuedScalar) -> bool:
    if a.is_zero():
        raise ValueError("zero has no useful norm here")
    if a.valuation.kind == "arch":
        return abs(a.value) >= 2
    # |a| = p^(-v) >= p >= 2 exactly when v <= -1; otherwise |a| <= 1
    return a.order() <= -1


def norm_at_least_half(x: ValuedScalar, y: ValuedScalar) -> bool:
    """Decide |x| >= |y| / 2 exactly, with 1/2 the real number one half."""
    x._check(y)
    if x.valuation.kind == "arch":
        return 2 * abs(x.value) >= abs(y.value)
    if y.is_zero():
        return True
    if x.is_zero():
        return False
    # |x|/|y| = p^(v(y) - v(x)); p^d >= 1/2 iff d >= 0, or d == -1 when p == 2
    d = y.order() - x.order()
    return d >= 0 or (x.valuation.p == 2 and d == -1)
