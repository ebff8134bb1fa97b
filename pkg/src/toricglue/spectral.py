"""Eigen-data on S^{2m-1} and radial calculus for biharmonic extensions.

Modes are eigenspaces: gamma = 0, 1, 2, ... with Delta_S Phi = Lambda_gamma Phi,
Lambda_gamma = -gamma (2m - 2 + gamma).  A radial profile is a finite sum of
c r^a (optionally times log r) attached to one mode, so the Euclidean Laplacian
acts on it through  Delta(r^a Phi) = mu(a) r^{a-2} Phi.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .quantities import as_fraction, frac_str
from .toric import QuotientGroup


@dataclass(frozen=True)
class ModeIndex:
    gamma: int
    m: int

    def __post_init__(self):
        if self.gamma < 0 or self.m < 1:
            raise ValueError(f"bad mode gamma={self.gamma}, m={self.m}")


def eigenvalue(mode: ModeIndex) -> int:
    return -mode.gamma * (2 * mode.m - 2 + mode.gamma)


def _monomials(n_vars: int, degree: int) -> int:
    if degree < 0:
        return 0
    return math.comb(degree + n_vars - 1, n_vars - 1)


def harmonic_dimension(mode: ModeIndex) -> int:
    n = 2 * mode.m
    dim = _monomials(n, mode.gamma) - _monomials(n, mode.gamma - 2)
    if n == 1:
        closed = 1 if mode.gamma <= 1 else 0
    else:
        closed = math.comb(mode.gamma + n - 1, n - 1) - math.comb(mode.gamma + n - 3, n - 1) if mode.gamma >= 2 else _monomials(n, mode.gamma)
    if dim != closed:  # pragma: no cover - two spellings of one identity
        raise AssertionError(f"monomial count {dim} != closed form {closed}")
    return dim


class NonDiagonalActionError(ValueError):
    pass


@dataclass(frozen=True)
class GroupAction:
    """Diagonal abelian action: generator i multiplies z_k by exp(2 pi i w[i][k])."""

    order: int
    generator_weights: tuple[tuple[Fraction, ...], ...]
    structure: tuple[int, ...] = ()

    def __post_init__(self):
        w = tuple(tuple(as_fraction(x) % 1 for x in g) for g in self.generator_weights)
        object.__setattr__(self, "generator_weights", w)
        if len({len(g) for g in w}) > 1:
            raise ValueError("generators act on different dimensions")

    @classmethod
    def from_quotient(cls, g: QuotientGroup, m: Optional[int] = None) -> "GroupAction":
        return cls(g.order, g.generator_weights, g.structure)

    @classmethod
    def cyclic(cls, n: int, exponents: Sequence[int]) -> "GroupAction":
        """Z/n generated by diag(zeta^e_1, ..., zeta^e_m), zeta = exp(2 pi i / n)."""
        return cls(n, (tuple(Fraction(e, n) for e in exponents),), (n,) if n > 1 else ())

    @classmethod
    def from_exponent_matrices(cls, order: int, matrices: Sequence[Sequence[Sequence]]) -> "GroupAction":
        """Generators as matrices of phases: entry t means exp(2 pi i t), None means 0."""
        gens = []
        for M in matrices:
            for i, row in enumerate(M):
                for j, x in enumerate(row):
                    if i != j and x is not None:
                        raise NonDiagonalActionError("only diagonal actions are supported")
            gens.append(tuple(as_fraction(M[i][i]) for i in range(len(M))))
        return cls(order, tuple(gens))

    def elements(self) -> Iterable[tuple[Fraction, ...]]:
        if not self.generator_weights:
            return
        m = len(self.generator_weights[0])
        ranges = [range(d) for d in self.structure] if self.structure else [range(max(w.denominator for w in g)) for g in self.generator_weights]
        seen = set()
        for ns in itertools.product(*ranges):
            w = tuple(sum((n * g[k] for n, g in zip(ns, self.generator_weights)), Fraction(0)) % 1 for k in range(m))
            if w not in seen:
                seen.add(w)
                yield w

    def acts_freely(self) -> bool:
        return all(all(x != 0 for x in w) for w in self.elements() if any(w))


def _invariant_monomials(action: GroupAction, m: int, degree: int) -> int:
    """Monomials z^alpha zbar^beta of total degree `degree` fixed by every generator."""
    if degree < 0:
        return 0
    gens = action.generator_weights
    if not gens:
        return _monomials(2 * m, degree)
    N = math.lcm(*(w.denominator for g in gens for w in g))
    steps = [tuple(int(g[k] * N) for g in gens) for k in range(m)]
    zero = tuple(0 for _ in gens)
    # state: (degree used, residues mod N per generator) -> count
    states = {(0, zero): 1}
    for k in range(m):
        nxt: dict = {}
        for (deg, res), cnt in states.items():
            for a in range(degree - deg + 1):
                for b in range(degree - deg - a + 1):
                    r = tuple((x + (a - b) * s) % N for x, s in zip(res, steps[k]))
                    key = (deg + a + b, r)
                    nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
    return states.get((degree, zero), 0)


def invariant_harmonic_dimension(g: GroupAction, gamma: int, m: Optional[int] = None) -> int:
    if m is None:
        if not g.generator_weights:
            raise ValueError("trivial action: pass m explicitly")
        m = len(g.generator_weights[0])
    return _invariant_monomials(g, m, gamma) - _invariant_monomials(g, m, gamma - 2)


def first_invariant_mode(g: GroupAction) -> int:
    if g.order <= 1 or not g.generator_weights:
        raise ValueError("trivial group: every mode is invariant")
    if not g.acts_freely():
        raise ValueError("action is not free away from the origin")
    gamma = 1
    while invariant_harmonic_dimension(g, gamma) == 0:
        gamma += 1
    return gamma


@dataclass(frozen=True)
class IndicialRoots:
    """Integer weights where the model operator fails to be Fredholm."""

    m: int
    location: str = "origin"

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("m must be at least 2")
        if self.location not in ("origin", "infinity"):
            raise ValueError("location is 'origin' or 'infinity'")

    @property
    def excluded_band(self) -> tuple[int, ...]:
        """Integers that are NOT roots."""
        return tuple(range(5 - 2 * self.m, 0)) if self.m >= 3 else ()

    def __contains__(self, delta) -> bool:
        delta = as_fraction(delta)
        if delta.denominator != 1:
            return False
        return int(delta) not in self.excluded_band


def indicial_roots(m: int, location: str = "origin") -> IndicialRoots:
    return IndicialRoots(m, location)


@dataclass(frozen=True)
class OpenInterval:
    lo: Fraction
    hi: Fraction

    def __contains__(self, x) -> bool:
        return self.lo < as_fraction(x) < self.hi

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __str__(self):
        return f"({self.lo}, {self.hi})"


class UnsupportedError(ValueError):
    pass


def weight_window(m: int, context: str) -> OpenInterval:
    if m < 2:
        raise ValueError("m must be at least 2")
    if context in ("base", "model"):
        return OpenInterval(Fraction(0), Fraction(1)) if m == 2 else OpenInterval(Fraction(4 - 2 * m), Fraction(0))
    if context == "gap":
        if m == 2:
            raise UnsupportedError("gap window (2-2m, 4-2m) is not used for m = 2")
        return OpenInterval(Fraction(2 - 2 * m), Fraction(4 - 2 * m))
    if context == "gluing":
        return OpenInterval(Fraction(4 - 2 * m), Fraction(5 - 2 * m))
    raise ValueError(f"unknown context {context!r}")


def radial_laplacian_coefficient(a: int, mode: ModeIndex) -> int:
    """mu(a) with Delta(r^a Phi_gamma) = mu(a) r^(a-2) Phi_gamma."""
    return a * (a + 2 * mode.m - 2) + eigenvalue(mode)


@dataclass(frozen=True)
class Term:
    coef: Fraction
    exponent: int
    log: bool = False


@dataclass(frozen=True)
class RadialProfile:
    """sum of coef * r^exponent (* log r) times a mode-gamma spherical harmonic."""

    mode: ModeIndex
    terms: tuple[Term, ...] = ()
    boundary: Optional[tuple[Fraction, Fraction]] = None

    def __post_init__(self):
        acc: dict = {}
        for t in self.terms:
            key = (t.exponent, t.log)
            acc[key] = acc.get(key, Fraction(0)) + as_fraction(t.coef)
        clean = tuple(Term(c, e, lg) for (e, lg), c in sorted(acc.items()) if c != 0)
        object.__setattr__(self, "terms", clean)

    def is_zero(self) -> bool:
        return not self.terms

    def __sub__(self, other: "RadialProfile") -> "RadialProfile":
        if other.mode != self.mode:
            raise ValueError("profiles belong to different modes")
        return RadialProfile(self.mode, self.terms + tuple(Term(-t.coef, t.exponent, t.log) for t in other.terms))

    def laplacian(self) -> "RadialProfile":
        out = []
        for t in self.terms:
            mu = radial_laplacian_coefficient(t.exponent, self.mode)
            out.append(Term(t.coef * mu, t.exponent - 2, t.log))
            if t.log:
                out.append(Term(t.coef * (2 * t.exponent + 2 * self.mode.m - 2), t.exponent - 2, False))
        return RadialProfile(self.mode, tuple(out))

    def derivative(self) -> "RadialProfile":
        out = []
        for t in self.terms:
            out.append(Term(t.coef * t.exponent, t.exponent - 1, t.log))
            if t.log:
                out.append(Term(t.coef, t.exponent - 1, False))
        return RadialProfile(self.mode, tuple(out))

    def value_at_one(self) -> Fraction:
        return sum((t.coef for t in self.terms if not t.log), Fraction(0))

    def evaluate(self, r: float) -> float:
        return sum(float(t.coef) * r ** t.exponent * (math.log(r) if t.log else 1.0) for t in self.terms)

    def to_dict(self) -> dict:
        return {
            "gamma": self.mode.gamma,
            "m": self.mode.m,
            "terms": [{"coef": frac_str(t.coef), "exponent": t.exponent, "log": t.log} for t in self.terms],
        }


def outer_extension(mode: ModeIndex, h, k) -> RadialProfile:
    """Decaying biharmonic extension to |w| > 1 with value h and Laplacian k on the sphere."""
    h, k = as_fraction(h), as_fraction(k)
    m, g = mode.m, mode.gamma
    if m < 2:
        raise ValueError("m must be at least 2")
    if m == 2 and g == 0:
        terms = (Term(h, -2), Term(k / 2, 0, True))
    else:
        q = k / (4 * (m + g - 2))
        terms = (Term(h + q, 2 - 2 * m - g), Term(-q, 4 - 2 * m - g))
    return RadialProfile(mode, terms, (h, k))


def inner_extension(mode: ModeIndex, h, k) -> RadialProfile:
    """Bounded biharmonic extension to the unit ball."""
    h, k = as_fraction(h), as_fraction(k)
    m, g = mode.m, mode.gamma
    q = k / (4 * (m + g))
    return RadialProfile(mode, (Term(h - q, g), Term(q, g + 2)), (h, k))


def verify_biharmonic(p: RadialProfile) -> bool:
    if not p.laplacian().laplacian().is_zero():
        return False
    if p.boundary is not None:
        h, k = p.boundary
        if p.value_at_one() != h or p.laplacian().value_at_one() != k:
            return False
    return True


@dataclass(frozen=True)
class DtNMatrix:
    mode: ModeIndex
    entries: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    determinant: Fraction

    def apply(self, h, k) -> tuple[Fraction, Fraction]:
        (a, b), (c, d) = self.entries
        h, k = as_fraction(h), as_fraction(k)
        return a * h + b * k, c * h + d * k

    def to_row(self) -> list[str]:
        (a, b), (c, d) = self.entries
        return [str(self.mode.m), str(self.mode.gamma)] + [frac_str(x) for x in (a, b, c, d, self.determinant)]


def _dtn_image(mode: ModeIndex, h, k) -> tuple[Fraction, Fraction]:
    diff = outer_extension(mode, h, k) - inner_extension(mode, h, k)
    return diff.derivative().value_at_one(), diff.laplacian().derivative().value_at_one()


def dtn_matrix(mode: ModeIndex) -> DtNMatrix:
    """Matrix of (h, k) -> (d_r (H_out - H_in), d_r Delta (H_out - H_in)) at r = 1."""
    a, c = _dtn_image(mode, 1, 0)
    b, d = _dtn_image(mode, 0, 1)
    return DtNMatrix(mode, ((a, b), (c, d)), a * d - b * c)


class SingularDtNError(ArithmeticError):
    pass


def dtn_inverse(d: DtNMatrix):
    if d.determinant == 0:
        raise SingularDtNError(f"DtN matrix for gamma={d.mode.gamma}, m={d.mode.m} is singular")
    (a, b), (c, e) = d.entries
    D = d.determinant
    return ((e / D, -b / D), (-c / D, a / D))


@dataclass(frozen=True)
class WCorrectionFactors:
    """1/Lambda^2 factors for the u4 (modes 2, 4) and u5 (modes 3, 5) corrections."""

    m: int
    u4: tuple[Fraction, Fraction]
    u5: tuple[Fraction, Fraction]
    u4_log_branch: bool

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "u4": [frac_str(x) for x in self.u4],
            "u5": [frac_str(x) for x in self.u5],
            "u4_log_branch": self.u4_log_branch,
        }


def w_correction_mode_factors(m: int) -> WCorrectionFactors:
    if m < 2:
        raise ValueError("m must be at least 2")

    def f(g):
        return Fraction(1, eigenvalue(ModeIndex(g, m)) ** 2)

    return WCorrectionFactors(m, (f(2), f(4)), (f(3), f(5)), m == 2)


def psi4_radial_coefficient(m: int, s) -> Fraction:
    """c with Delta^2 (c |x|^4) = -2 s on C^m."""
    return -as_fraction(s) / (16 * m * (m + 1))
