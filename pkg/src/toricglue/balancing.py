"""Balancing conditions at the points being glued.

phi[i][j] is the i-th potential evaluated at the j-th point p_j, lap_phi the
same for its Laplacian, phi_q the potentials at the auxiliary points q_l.
Weights b_j, c_j sit on the p_j and a_l on the q_l; a solution must kill every
row of  b_j lap_phi[i][j] + c_j phi[i][j]  (plus the a-terms when present).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import lattice
from .moment import PotentialTable
from .quantities import PiPoly, as_fraction, frac_str
from .tuning import sphere_volume


def _vec(v) -> tuple[Fraction, ...]:
    return tuple(as_fraction(x) for x in v)


@dataclass(frozen=True)
class BalancingProblem:
    m: int
    s: Fraction
    phi: tuple[tuple[Fraction, ...], ...]
    lap_phi: tuple[tuple[Fraction, ...], ...]
    phi_q: Optional[tuple[tuple[Fraction, ...], ...]] = None
    volume: Optional[Fraction] = None
    labels: tuple[str, ...] = ()
    einstein: bool = False

    def __post_init__(self):
        object.__setattr__(self, "s", as_fraction(self.s))
        object.__setattr__(self, "phi", lattice.rat_matrix(self.phi))
        object.__setattr__(self, "lap_phi", lattice.rat_matrix(self.lap_phi))
        if self.phi_q is not None:
            object.__setattr__(self, "phi_q", lattice.rat_matrix(self.phi_q))
            if len(self.phi_q) != len(self.phi):
                raise ValueError("phi_q must have one row per potential")
        if self.volume is not None:
            object.__setattr__(self, "volume", as_fraction(self.volume))
        if lattice.shape(self.phi) != lattice.shape(self.lap_phi):
            raise ValueError(f"phi is {lattice.shape(self.phi)} but lap_phi is {lattice.shape(self.lap_phi)}")
        if self.m < 1:
            raise ValueError("m must be positive")

    @property
    def d(self) -> int:
        return len(self.phi)

    @property
    def n_points(self) -> int:
        return lattice.shape(self.phi)[1]

    @classmethod
    def toric_einstein(cls, phi, m: int, s=1, **kw) -> "BalancingProblem":
        """Kahler-Einstein toric case: each potential satisfies lap(phi) = -(s/m) phi."""
        if isinstance(phi, PotentialTable):
            kw.setdefault("labels", phi.labels)
            phi = phi.values
        s = as_fraction(s)
        phi = lattice.rat_matrix(phi)
        lap = tuple(tuple(-s / m * x for x in row) for row in phi)
        return cls(m, s, phi, lap, einstein=True, **kw)


@dataclass(frozen=True)
class BalancingWitness:
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]
    rank_certificate: int
    nu: Optional[Fraction] = None

    def to_dict(self) -> dict:
        return {
            "b": [frac_str(x) for x in self.b],
            "c": [frac_str(x) for x in self.c],
            "rank": self.rank_certificate,
            "nu": None if self.nu is None else frac_str(self.nu),
        }


def build_theta(p: BalancingProblem, b: Sequence, c: Sequence):
    b, c = _vec(b), _vec(c)
    if len(b) != p.n_points or len(c) != p.n_points:
        raise ValueError(f"need {p.n_points} weights, got b:{len(b)} c:{len(c)}")
    return tuple(
        tuple(bj * l + cj * f for bj, cj, l, f in zip(b, c, lrow, frow))
        for lrow, frow in zip(p.lap_phi, p.phi)
    )


def build_xi(p: BalancingProblem, a: Sequence):
    if p.phi_q is None:
        raise ValueError("problem has no q-point data")
    a = _vec(a)
    if len(a) != lattice.shape(p.phi_q)[1]:
        raise ValueError(f"need {lattice.shape(p.phi_q)[1]} a-weights, got {len(a)}")
    return tuple(tuple(al * x for al, x in zip(a, row)) for row in p.phi_q)


def ke_theta_factor(m: int, s=1) -> Fraction:
    """(m-1) s / m: the multiple of phi that Theta(1, s 1) reduces to when lap(phi) = -(s/m) phi."""
    if m < 2:
        raise ValueError("m must be at least 2")
    return Fraction(m - 1, m) * as_fraction(s)


def check_nondegeneracy(theta, xi=None) -> tuple[bool, int]:
    theta = lattice.rat_matrix(theta)
    d = len(theta)
    if xi is not None:
        xi = lattice.rat_matrix(xi)
        if len(xi) != d:
            raise ValueError(f"Xi has {len(xi)} rows, Theta has {d}")
        full = tuple(x + t for x, t in zip(xi, theta))
    else:
        full = theta
    r = lattice.rank_rational(full)
    return r == d, r


def balancing_matrix(p: BalancingProblem):
    """The d x N matrix whose kernel holds the b with c = s b."""
    return tuple(tuple(l + p.s * f for l, f in zip(lrow, frow)) for lrow, frow in zip(p.lap_phi, p.phi))


def solve_balancing(p: BalancingProblem) -> Optional[BalancingWitness]:
    if p.n_points == 0:
        return None
    M = balancing_matrix(p)
    b = lattice.positive_nullspace_witness(M if M else ((Fraction(0),) * p.n_points,))
    if b is None:
        return None
    c = tuple(p.s * x for x in b)
    ok, rank = check_nondegeneracy(build_theta(p, b, c))
    if not ok:
        return None
    nu = nu_constant((), c, p.volume) if p.volume is not None else None
    return BalancingWitness(b, c, rank, nu)


def nu_constant(a: Sequence, c: Sequence, vol) -> Fraction:
    vol = as_fraction(vol)
    if vol <= 0:
        raise ValueError("volume must be positive")
    return (sum(_vec(a), Fraction(0)) + sum(_vec(c), Fraction(0))) / vol


def general_balancing_check(p: BalancingProblem, f: Sequence, a: Sequence, b: Sequence, c: Sequence) -> tuple[bool, Fraction]:
    """Check the d balancing rows f_i + Xi(a) + Theta(b, c) = 0 and return nu.

    f has d + 1 entries; f[0] is the constant-mode coefficient and enters only nu.
    """
    if p.volume is None:
        raise ValueError("general balancing needs the volume")
    f, a = _vec(f), _vec(a)
    if len(f) != p.d + 1:
        raise ValueError(f"f needs {p.d + 1} entries")
    theta = build_theta(p, b, c)
    xi = build_xi(p, a) if a else tuple(() for _ in range(p.d))
    ok = all(f[i + 1] + sum(xi[i], Fraction(0)) + sum(theta[i], Fraction(0)) == 0 for i in range(p.d))
    nu = (f[0] * p.volume + sum(a, Fraction(0)) + sum(_vec(c), Fraction(0))) / p.volume
    return ok, nu


def deficiency_coefficients(m: int, s, order: int, beta, gamma) -> tuple[PiPoly, PiPoly]:
    """Coefficients of G_Delta and G_DeltaDelta in the deficiency element W_{beta,gamma}."""
    if m < 2:
        raise ValueError("m must be at least 2")
    s, beta, gamma = as_fraction(s), as_fraction(beta), as_fraction(gamma)
    S = sphere_volume(m)
    if m == 2:
        scale = PiPoly.coerce(order) / S
        return scale * beta, scale * (gamma / 4 - s * beta / 6)
    scale = PiPoly.coerce(order) / (S * (2 * (m - 1)))
    lap = scale * beta
    bilap = scale * -(gamma / (4 * (m - 2)) - s * (m * m - m + 2) * beta / ((m - 2) * m * (m + 1)))
    return lap, bilap


@dataclass(frozen=True)
class GreenConstants:
    """Constants in the distributional identities of the Green functions.

    laplacian:   Delta G_Delta is (laplacian) times the point mass
    s_term:      coefficient multiplying s-dependent correction
    bilaplacian: Delta^2 G_DeltaDelta is (bilaplacian) times the point mass
    """

    laplacian: PiPoly
    s_term: PiPoly
    bilaplacian: PiPoly

    def to_dict(self) -> dict:
        return {k: getattr(self, k).to_json() for k in ("laplacian", "s_term", "bilaplacian")}


def green_constants(m: int, s, order: int) -> GreenConstants:
    if m < 2:
        raise ValueError("m must be at least 2")
    s = as_fraction(s)
    S = sphere_volume(m)
    if m == 2:
        return GreenConstants(S / order, S * (2 * s) / (3 * order), S * 4 / order)
    lap = S * Fraction(2 * (m - 1), order)
    return GreenConstants(
        lap,
        PiPoly.coerce(s * (m * m - m + 2) / (m * (m + 1))),
        lap * (4 * (m - 2)),
    )
