"""Closed-form gluing coefficients and the epsilon bookkeeping.

Everything that involves the volume of the unit sphere is a PiPoly; every
epsilon power is a RatPower, and the order-of-magnitude comparisons are done on
exact rational exponents of epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .quantities import PiPoly, RatPower, as_fraction, frac_str


def sphere_volume(m: int) -> PiPoly:
    """|S^{2m-1}| = 2 pi^m / (m-1)!."""
    if m < 1:
        raise ValueError("m must be positive")
    return PiPoly.monomial(Fraction(2, math.factorial(m - 1)), m)


class UnsupportedCaseError(ValueError):
    pass


@dataclass(frozen=True)
class TuningInputs:
    """Inputs at one glued point.

    c_gamma is the positive constant in the expansion of the ALE potential at
    infinity.  It depends on the chosen Ricci-flat metric, so it is never guessed.
    """

    m: int
    s: Fraction
    order: int
    b: Fraction
    c_gamma: Fraction
    epsilon: Optional[Fraction] = None
    delta: Optional[Fraction] = None
    c: Optional[Fraction] = None

    def __post_init__(self):
        for name in ("s", "b", "c_gamma", "epsilon", "delta", "c"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, as_fraction(v))
        if self.c is None:
            object.__setattr__(self, "c", self.s * self.b)
        if self.m < 2:
            raise ValueError("m must be at least 2")
        if self.order < 1:
            raise ValueError("|Gamma| must be a positive integer")
        if self.s < 0:
            raise ValueError("scalar curvature must be non-negative")
        if self.b <= 0 or self.c_gamma <= 0:
            raise ValueError("b and c(Gamma) must be positive")
        if self.epsilon is not None and not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")


@dataclass(frozen=True)
class Radical:
    """The positive 2m-th root of an exact radicand."""

    radicand: PiPoly
    degree: int

    @property
    def value(self) -> float:
        return float(self.radicand) ** (1.0 / self.degree)

    def to_json(self) -> dict:
        return {"radicand": self.radicand.to_json(), "root": self.degree, "float": self.value}


def B_coefficient(t: TuningInputs) -> Radical:
    """B with B^{2m} = b |Gamma| / (2 c(Gamma) (m-1) |S^{2m-1}|)."""
    B2m = PiPoly.coerce(t.b * t.order) / (sphere_volume(t.m) * (2 * t.c_gamma * (t.m - 1)))
    return Radical(B2m, 2 * t.m)


def C_coefficient(t: TuningInputs, B2m: PiPoly) -> PiPoly:
    m = t.m
    if m == 2:
        raise UnsupportedCaseError("m = 2 uses the log coefficient of w4_radial_coefficient instead")
    S = sphere_volume(m)
    growth = 1 + Fraction((m - 1) ** 2, m + 1)
    bracket = PiPoly.coerce(B2m) * S * (2 * t.c_gamma * (m - 1) * t.s * growth / (m * t.order)) - t.c
    return bracket * Fraction(t.order, 8 * (m - 2) * (m - 1))


@dataclass(frozen=True)
class W4Coefficient:
    coefficient: Fraction
    branch: str  # "power" for |x|^(4-2m), "log" for log|x|
    exponent: Optional[int]

    def to_json(self) -> dict:
        return {"coeff": frac_str(self.coefficient), "branch": self.branch, "exponent": self.exponent}


def w4_radial_coefficient(t: TuningInputs) -> W4Coefficient:
    m = t.m
    if m == 2:
        return W4Coefficient(-t.c_gamma * t.s / 6, "log", None)
    return W4Coefficient(t.c_gamma * (m - 1) * t.s / (2 * (m - 2) * m * (m + 1)), "power", 4 - 2 * m)


def psi4_obstruction_integral(t: TuningInputs) -> PiPoly:
    """Integral of Delta^2 (chi Psi_4 + u_4) + 2s over the ALE space."""
    m = t.m
    return sphere_volume(m) * (-4 * t.c_gamma * (m - 1) ** 2 * t.s / (m * (m + 1) * t.order))


def w4_flux(t: TuningInputs) -> PiPoly:
    """Integral of Delta^2 applied to the radial W_4 term (coefficient included)."""
    w = w4_radial_coefficient(t)
    S = sphere_volume(t.m)
    if w.branch == "log":
        return S * (-4 * w.coefficient / t.order)
    return S * (8 * (t.m - 2) * (t.m - 1) * w.coefficient / t.order)


def check_tuning(b: Sequence, c: Sequence, s) -> bool:
    if len(b) != len(c):
        raise ValueError("b and c have different lengths")
    s = as_fraction(s)
    return all(as_fraction(cj) == s * as_fraction(bj) for bj, cj in zip(b, c))


@dataclass(frozen=True)
class Schedule:
    epsilon: Fraction
    m: int
    r_eps: RatPower
    R_eps: RatPower

    def identity_holds(self) -> bool:
        """r_eps = eps * R_eps, checked on exponents of the common base."""
        return self.r_eps.base == self.R_eps.base == self.epsilon and self.r_eps.exponent == 1 + self.R_eps.exponent

    def to_json(self) -> dict:
        return {"epsilon": frac_str(self.epsilon), "r_eps": self.r_eps.to_json(), "R_eps": self.R_eps.to_json()}


def schedule_exponent(m: int) -> Fraction:
    return Fraction(2 * m - 1, 2 * m + 1)


def epsilon_schedule(epsilon, m: int) -> Schedule:
    epsilon = as_fraction(epsilon)
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    rho = schedule_exponent(m)
    return Schedule(epsilon, m, RatPower(epsilon, rho), RatPower(epsilon, rho - 1))


@dataclass(frozen=True)
class TunedB:
    exact: Optional[PiPoly]
    value: float

    def to_json(self) -> dict:
        return {"exact": None if self.exact is None else self.exact.to_json(), "float": self.value}


def tuned_b(t: TuningInputs, B2m: PiPoly, f_hat=0, h0=0, k0=0, r_eps=None) -> TunedB:
    """b~^{2m} = B^{2m} (1 - f_hat/eps^{2m}) + (h0 + k0/(4m-8)) r_eps^{2m-2} / (c(Gamma) eps^{2m}).

    r_eps may be a Fraction or a RatPower; it defaults to the schedule value.
    """
    if t.m == 2:
        raise UnsupportedCaseError("the m = 2 tuned b is not supported (4m - 8 vanishes)")
    if t.epsilon is None:
        raise ValueError("tuned b needs epsilon")
    m, eps = t.m, t.epsilon
    f_hat, h0, k0 = as_fraction(f_hat), as_fraction(h0), as_fraction(k0)
    if r_eps is None:
        r_eps = epsilon_schedule(eps, m).r_eps
    if isinstance(r_eps, RatPower):
        r_exact = r_eps.exact()
        r_float = float(r_eps)
    else:
        r_exact = as_fraction(r_eps)
        r_float = float(r_exact)
    B2m = PiPoly.coerce(B2m)
    lead = B2m * (1 - f_hat / eps ** (2 * m))
    boundary = (h0 + k0 / (4 * m - 8)) / (t.c_gamma * eps ** (2 * m))
    if boundary == 0:
        return TunedB(lead, float(lead))
    value = float(lead) + float(boundary) * r_float ** (2 * m - 2)
    if r_exact is None:
        return TunedB(None, value)
    exact = lead + boundary * r_exact ** (2 * m - 2)
    return TunedB(exact, float(exact))


def tuned_b_deviation_exponent(m: int, delta) -> Fraction:
    """Exponent g with |b~^{2m} - B^{2m}| = O(eps^g) when the perturbations sit at their bounds.

    f_hat ~ eps^{2m+2} r^{2-2m-delta}; h0, k0 ~ eps^{4m+2} r^{-6m+4-delta}.
    """
    delta = as_fraction(delta)
    rho = schedule_exponent(m)
    from_f = 2 + rho * (2 - 2 * m - delta)
    from_hk = 2 * m + 2 + rho * (-4 * m + 2 - delta)
    return min(from_f, from_hk)


@dataclass(frozen=True)
class Band:
    """An error term eps^raw; `boundary` is its pointwise size at the gluing sphere."""

    name: str
    raw: Fraction
    boundary: Fraction

    def to_json(self) -> dict:
        return {"name": self.name, "raw_exponent": frac_str(self.raw), "boundary_exponent": frac_str(self.boundary)}


@dataclass(frozen=True)
class GluingBudget:
    m: int
    delta: Fraction
    principal: Fraction
    bands: tuple[Band, ...]

    def band(self, name: str) -> Band:
        return next(b for b in self.bands if b.name == name)

    @property
    def margins(self) -> dict[str, Fraction]:
        return {b.name: b.boundary - self.principal for b in self.bands}

    @property
    def verdict(self) -> bool:
        """Every correction is eps-smaller than the principal asymptotics at the gluing sphere."""
        return all(x > 0 for x in self.margins.values())

    @property
    def raw_verdict(self) -> bool:
        return all(b.raw > self.principal for b in self.bands)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "delta": frac_str(self.delta),
            "principal_exponent": frac_str(self.principal),
            "bands": [b.to_json() for b in self.bands],
            "verdict": self.verdict,
            "raw_verdict": self.raw_verdict,
        }


def gluing_budget(t: TuningInputs) -> GluingBudget:
    if t.delta is None:
        raise ValueError("gluing budget needs delta")
    from .spectral import weight_window

    m, delta = t.m, t.delta
    window = weight_window(m, "gluing")
    if delta not in window:
        raise ValueError(f"delta = {delta} lies outside the gluing window {window}")
    rho = schedule_exponent(m)
    rho_R = rho - 1
    principal = 2 * m + rho * (2 - 2 * m)
    base = 2 * m + 2 + rho * (2 - 2 * m - delta)
    model = 2 * m + 4 + rho * (-4 * m - delta) - 2 * rho_R
    radial = 4 * m + 2 + rho * (-6 * m + 4 - delta)
    nonradial = 2 * m + 4 + rho * (2 - 4 * m - delta)
    bands = (
        # weighted norms carry r^delta (base side) and eps^2 R^delta (model side, rescaled)
        Band("base_correction", base, base + rho * delta),
        Band("model_correction", model, model + 2 + rho_R * delta),
        Band("radial_boundary", radial, radial),
        Band("nonradial_boundary", nonradial, nonradial),
        Band("scalar_perturbation", Fraction(2 * m), Fraction(2 * m)),
    )
    return GluingBudget(m, delta, principal, bands)


def ale_volume(R, m: int, order: int) -> PiPoly:
    R = as_fraction(R)
    if R <= 0:
        raise ValueError("R must be positive")
    return sphere_volume(m) * (R ** (2 * m) / (2 * m * order))


@dataclass(frozen=True)
class LeadingComparison:
    leading_value: Fraction
    coefficient_value: PiPoly
    ratio: PiPoly
    note: str = "the two normalisations differ by c(Gamma)|S^{2m-1}|; not reconciled"

    def to_json(self) -> dict:
        return {
            "leading_value": frac_str(self.leading_value),
            "B2m": self.coefficient_value.to_json(),
            "ratio": self.ratio.to_json(),
            "note": self.note,
        }


def leading_b_comparison(t: TuningInputs, B2m: Optional[PiPoly] = None) -> LeadingComparison:
    if B2m is None:
        B2m = B_coefficient(t).radicand
    lead = t.order * t.b / (2 * (t.m - 1))
    return LeadingComparison(lead, B2m, PiPoly.coerce(lead) / B2m)


@dataclass(frozen=True)
class TuningReport:
    inputs: TuningInputs
    B: Radical
    C: Optional[PiPoly]
    w4: W4Coefficient
    b_tilde_2m_leading: TunedB
    tuning_ok: bool
    schedule: Optional[Schedule]
    budget: Optional[GluingBudget]
    leading: LeadingComparison

    def to_json(self) -> dict:
        t = self.inputs
        return {
            "m": t.m,
            "s": frac_str(t.s),
            "order": t.order,
            "b": frac_str(t.b),
            "c": frac_str(t.c),
            "c_gamma": frac_str(t.c_gamma),
            "B": self.B.to_json(),
            "C": None if self.C is None else self.C.to_json(),
            "w4": self.w4.to_json(),
            "b_tilde_2m_leading": self.b_tilde_2m_leading.to_json(),
            "tuning_ok": self.tuning_ok,
            "schedule": None if self.schedule is None else self.schedule.to_json(),
            "budget": None if self.budget is None else self.budget.to_json(),
            "leading": self.leading.to_json(),
        }


def tuning_report(t: TuningInputs) -> TuningReport:
    B = B_coefficient(t)
    C = C_coefficient(t, B.radicand) if t.m >= 3 else None
    ok = check_tuning([t.b], [t.c], t.s)
    schedule = epsilon_schedule(t.epsilon, t.m) if t.epsilon is not None else None
    budget = gluing_budget(t) if (ok and t.delta is not None) else None
    lead = TunedB(B.radicand, float(B.radicand))
    return TuningReport(t, B, C, w4_radial_coefficient(t), lead, ok, schedule, budget, leading_b_comparison(t, B.radicand))
