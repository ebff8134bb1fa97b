"""Exact scalar types that show up in the gluing constants.

Two shapes recur: finite sums ``sum_k a_k * pi**k`` with rational ``a_k``
(sphere volumes and everything built from them), and real powers
``base ** exponent`` with rational base and exponent (the epsilon schedule and
2m-th roots).  Both stay exact; floats appear only through ``float()``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

Rational = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to Fraction.  Floats are refused."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def frac_str(x: Fraction) -> str:
    return str(as_fraction(x))


class PiPoly:
    """Exact value ``sum_k coeff[k] * pi**k`` (k may be negative)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Rational] | None = None):
        clean = {}
        for k, v in (terms or {}).items():
            v = as_fraction(v)
            if v:
                clean[int(k)] = v
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def monomial(cls, coeff: Rational, pi_pow: int = 0) -> "PiPoly":
        return cls({pi_pow: coeff})

    @classmethod
    def coerce(cls, x) -> "PiPoly":
        if isinstance(x, PiPoly):
            return x
        return cls.monomial(as_fraction(x), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) <= 1

    @property
    def coeff(self) -> Fraction:
        """Coefficient of the single term; zero for the zero value."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) > 1:
            raise ValueError(f"{self} is not a single rational multiple of a pi power")
        return next(iter(self.terms.values()))

    @property
    def pi_pow(self) -> int:
        if not self.terms:
            return 0
        if len(self.terms) > 1:
            raise ValueError(f"{self} is not a single rational multiple of a pi power")
        return next(iter(self.terms))

    def rational(self) -> Fraction:
        """The value as a Fraction; only for pi-free values."""
        if self.is_zero():
            return Fraction(0)
        if set(self.terms) != {0}:
            raise ValueError(f"{self} is not rational")
        return self.terms[0]

    def __add__(self, other):
        other = PiPoly.coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return PiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return PiPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-PiPoly.coerce(other))

    def __rsub__(self, other):
        return PiPoly.coerce(other) - self

    def __mul__(self, other):
        other = PiPoly.coerce(other)
        out: dict[int, Fraction] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                out[k1 + k2] = out.get(k1 + k2, Fraction(0)) + v1 * v2
        return PiPoly(out)

    __rmul__ = __mul__

    def inverse(self) -> "PiPoly":
        if not self.is_monomial() or self.is_zero():
            raise ZeroDivisionError(f"cannot invert {self}")
        return PiPoly.monomial(1 / self.coeff, -self.pi_pow)

    def __truediv__(self, other):
        return self * PiPoly.coerce(other).inverse()

    def __rtruediv__(self, other):
        return PiPoly.coerce(other) * self.inverse()

    def __eq__(self, other):
        try:
            other = PiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __float__(self):
        return float(sum(float(v) * math.pi ** k for k, v in self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "PiPoly(0)"
        parts = []
        for k, v in self.terms.items():
            parts.append(str(v) if k == 0 else f"{v}*pi^{k}")
        return "PiPoly(" + " + ".join(parts) + ")"

    def to_json(self):
        if self.is_monomial():
            return {"coeff": frac_str(self.coeff), "pi_pow": self.pi_pow}
        return [{"coeff": frac_str(v), "pi_pow": k} for k, v in self.terms.items()]

    @classmethod
    def from_json(cls, data) -> "PiPoly":
        if isinstance(data, dict):
            data = [data]
        return cls({int(t["pi_pow"]): Fraction(t["coeff"]) for t in data})


def _exact_int_root(n: int, q: int) -> int | None:
    if n < 0:
        return None
    lo, hi = 0, 1
    while hi ** q <= n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** q <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo if lo ** q == n else None


def exact_rational_power(base: Fraction, exponent: Fraction) -> Fraction | None:
    """``base**exponent`` as a Fraction when it is rational, else None (base > 0)."""
    base, exponent = as_fraction(base), as_fraction(exponent)
    if base <= 0:
        raise ValueError("base must be positive")
    p, q = exponent.numerator, exponent.denominator
    num = _exact_int_root(base.numerator, q)
    den = _exact_int_root(base.denominator, q)
    if num is None or den is None:
        return None
    return Fraction(num, den) ** p


@dataclass(frozen=True)
class RatPower:
    """``base ** exponent`` with positive rational base and rational exponent."""

    base: Fraction
    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "base", as_fraction(self.base))
        object.__setattr__(self, "exponent", as_fraction(self.exponent))
        if self.base <= 0:
            raise ValueError("RatPower base must be positive")

    def exact(self) -> Fraction | None:
        return exact_rational_power(self.base, self.exponent)

    def __mul__(self, other: "RatPower") -> "RatPower":
        if other.base != self.base:
            raise ValueError("can only multiply powers of the same base")
        return RatPower(self.base, self.exponent + other.exponent)

    def __float__(self):
        exact = self.exact()
        if exact is not None:
            return float(exact)
        return math.exp(float(self.exponent) * math.log(self.base))

    def to_json(self):
        exact = self.exact()
        return {
            "base": frac_str(self.base),
            "exponent": frac_str(self.exponent),
            "exact": None if exact is None else frac_str(exact),
            "float": float(self),
        }
