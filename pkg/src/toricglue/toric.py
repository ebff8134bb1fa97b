"""Fans, cones and the quotient singularities C^m / Gamma they encode.

A simplicial cone with primitive generators v_1..v_m gives the cyclic-type
quotient Gamma = Z^m / (Z v_1 + ... + Z v_m).  An element g of Z^m acts on the
eigencoordinates by x_k -> exp(2 pi i w_k) x_k, where w = G^{-1} g mod 1 and G
has the generators as columns.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional, Sequence

from . import lattice
from .quantities import as_fraction


class FanFormatError(ValueError):
    """Malformed fan data; the message names the offending location."""


class DegenerateConeError(ValueError):
    pass


class InconsistencyError(RuntimeError):
    """Two independent criteria disagreed.  Always a bug, never bad input."""


GROUP_ENUMERATION_LIMIT = 10_000

_FAN_KEYS = {"name", "dim", "rays", "max_cones", "polytope_multiple", "scalar_curvature"}
_REQUIRED = ("name", "dim", "rays", "max_cones")


@dataclass(frozen=True)
class Cone:
    generators: tuple[tuple[int, ...], ...]
    label: str = ""
    fan_name: str = ""
    ray_indices: tuple[int, ...] = ()

    def __post_init__(self):
        gens = lattice.int_matrix(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens or len(gens[0]) != len(gens):
            raise DegenerateConeError(f"cone {self.label or gens} needs m generators in Z^m")
        if lattice.determinant(gens) == 0:
            raise DegenerateConeError(f"cone {self.label or gens} has dependent generators")

    @property
    def dim(self) -> int:
        return len(self.generators)

    def column_matrix(self):
        """Generators as columns."""
        return lattice.transpose(self.generators)


@dataclass(frozen=True)
class Fan:
    name: str
    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]
    polytope_multiple: Optional[int] = None
    scalar_curvature: Optional[Fraction] = None

    def cones(self) -> list[Cone]:
        return [
            Cone(tuple(self.rays[i] for i in idx), f"C{n + 1}", self.name, tuple(idx))
            for n, idx in enumerate(self.max_cones)
        ]

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "dim": self.dim,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }
        if self.polytope_multiple is not None:
            d["polytope_multiple"] = self.polytope_multiple
        if self.scalar_curvature is not None:
            d["scalar_curvature"] = str(self.scalar_curvature)
        return d


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = math.gcd(*v)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in v)


def parse_fan(text: str) -> Fan:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FanFormatError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise FanFormatError("top level: expected an object")
    unknown = sorted(set(data) - _FAN_KEYS)
    if unknown:
        raise FanFormatError(f"top level: unknown key(s) {', '.join(unknown)}")
    for key in _REQUIRED:
        if key not in data:
            raise FanFormatError(f"top level: missing key '{key}'")

    name = data["name"]
    if not isinstance(name, str):
        raise FanFormatError("name: expected a string")
    m = data["dim"]
    if not _is_int(m) or m < 1:
        raise FanFormatError("dim: expected a positive integer")

    raw_rays = data["rays"]
    if not isinstance(raw_rays, list) or not raw_rays:
        raise FanFormatError("rays: expected a non-empty list")
    rays = []
    seen: dict[tuple[int, ...], int] = {}
    for i, r in enumerate(raw_rays):
        where = f"rays[{i}]"
        if not isinstance(r, list) or not all(_is_int(x) for x in r):
            raise FanFormatError(f"{where}: expected a list of integers")
        if len(r) != m:
            raise FanFormatError(f"{where}: dimension mismatch, has {len(r)} entries but dim is {m}")
        if not any(r):
            raise FanFormatError(f"{where}: zero ray")
        p = primitive(r)
        if p in seen:
            raise FanFormatError(f"{where}: duplicate ray, same as rays[{seen[p]}]")
        seen[p] = i
        rays.append(p)

    raw_cones = data["max_cones"]
    if not isinstance(raw_cones, list) or not raw_cones:
        raise FanFormatError("max_cones: expected a non-empty list")
    cones = []
    for j, c in enumerate(raw_cones):
        where = f"max_cones[{j}]"
        if not isinstance(c, list) or not all(_is_int(x) for x in c):
            raise FanFormatError(f"{where}: expected a list of ray indices")
        bad = [x for x in c if not 0 <= x < len(rays)]
        if bad:
            raise FanFormatError(f"{where}: ray index {bad[0]} out of range")
        if len(set(c)) != len(c) or len(c) != m:
            raise FanFormatError(f"{where}: non-simplicial or non-maximal cone ({len(set(c))} distinct rays in dim {m})")
        if lattice.determinant([rays[x] for x in c]) == 0:
            raise FanFormatError(f"{where}: non-simplicial or non-maximal cone (rays are linearly dependent)")
        cones.append(tuple(c))

    k = data.get("polytope_multiple")
    if k is not None and (not _is_int(k) or k < 1):
        raise FanFormatError("polytope_multiple: expected a positive integer")
    s = data.get("scalar_curvature")
    if s is not None:
        if not isinstance(s, str):
            raise FanFormatError('scalar_curvature: expected a rational string such as "3/2"')
        try:
            s = as_fraction(s)
        except (ValueError, ZeroDivisionError):
            raise FanFormatError(f"scalar_curvature: cannot read {data['scalar_curvature']!r} as a rational") from None
    return Fan(name, m, tuple(rays), tuple(cones), k, s)


def load_fan(path) -> Fan:
    path = Path(path)
    try:
        return parse_fan(path.read_text(encoding="utf-8"))
    except FanFormatError as e:
        raise FanFormatError(f"{path}: {e}") from None


def cone_order(c: Cone) -> int:
    return abs(lattice.determinant(c.generators))


@dataclass(frozen=True)
class QuotientGroup:
    order: int
    structure: tuple[int, ...]
    generator_weights: tuple[tuple[Fraction, ...], ...]
    dim: int = 0

    def __post_init__(self):
        if self.generator_weights and not self.dim:
            object.__setattr__(self, "dim", len(self.generator_weights[0]))

    def is_trivial(self) -> bool:
        return self.order == 1

    def elements(self) -> Iterator[tuple[Fraction, ...]]:
        """Weight vectors of all group elements, identity first."""
        m = self.dim
        for coeffs in itertools.product(*(range(d) for d in self.structure)):
            w = [Fraction(0)] * m
            for n, gw in zip(coeffs, self.generator_weights):
                for k in range(m):
                    w[k] += n * gw[k]
            yield tuple(x - math.floor(x) for x in w)


def _frac_part(x: Fraction) -> Fraction:
    return x - math.floor(x)


def quotient_group(c: Cone) -> QuotientGroup:
    G = c.column_matrix()
    snf = lattice.smith_normal_form(G)
    Uinv = lattice.inverse_rational(snf.U)
    Ginv = lattice.inverse_rational(G)
    structure, weights = [], []
    for i, d in enumerate(snf.divisors):
        if d == 0:
            raise DegenerateConeError(f"cone {c.label} has dependent generators")
        if d == 1:
            continue
        g = tuple(row[i] for row in Uinv)
        structure.append(d)
        weights.append(tuple(_frac_part(x) for x in lattice.matvec(Ginv, g)))
    order = math.prod(structure)
    if order != cone_order(c):
        raise InconsistencyError(f"cone {c.label}: Smith order {order} differs from |det| {cone_order(c)}")
    return QuotientGroup(order, tuple(structure), tuple(weights), c.dim)


def _faces_smooth(c: Cone) -> bool:
    m = c.dim
    for size in range(1, m):
        for face in itertools.combinations(c.generators, size):
            if lattice.gcd_of_maximal_minors(face) != 1:
                return False
    return True


def _acts_freely(group: QuotientGroup) -> bool:
    it = group.elements()
    next(it)  # identity
    return all(all(x != 0 for x in w) for w in it)


def is_isolated(c: Cone) -> bool:
    faces = _faces_smooth(c)
    group = quotient_group(c)
    if group.order <= GROUP_ENUMERATION_LIMIT:
        free = _acts_freely(group)
        if free != faces:
            raise InconsistencyError(f"cone {c.label}: free-action test says {free}, smooth-faces test says {faces}")
    return faces


def gorenstein_functional(c: Cone) -> Optional[tuple[int, ...]]:
    """The integer u with <u, v_i> = -1 on every generator, if it exists."""
    u = lattice.solve_rational(c.generators, [-1] * c.dim)
    if any(x.denominator != 1 for x in u):
        return None
    return tuple(x.numerator for x in u)


def is_su_singularity(c: Cone) -> tuple[bool, Optional[tuple[int, ...]]]:
    u = gorenstein_functional(c)
    group = quotient_group(c)
    if group.order <= GROUP_ENUMERATION_LIMIT:
        unimodular = all(sum(w).denominator == 1 for w in group.elements())
        if unimodular != (u is not None):
            raise InconsistencyError(f"cone {c.label}: functional test and weight-sum test disagree")
    return u is not None, u


@dataclass(frozen=True)
class SingularityReport:
    label: str
    order: int
    is_smooth: bool
    is_isolated: bool
    is_SU: bool
    gorenstein_functional: Optional[tuple[int, ...]] = None
    structure: tuple[int, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "order": self.order,
            "structure": list(self.structure),
            "is_smooth": self.is_smooth,
            "is_isolated": self.is_isolated,
            "is_SU": self.is_SU,
            "gorenstein_functional": None if self.gorenstein_functional is None else list(self.gorenstein_functional),
        }


def classify_cone(c: Cone) -> SingularityReport:
    group = quotient_group(c)
    su, u = is_su_singularity(c)
    return SingularityReport(c.label, group.order, group.order == 1, is_isolated(c), su, u, group.structure)


def classify_fan(f: Fan) -> list[SingularityReport]:
    return [classify_cone(c) for c in f.cones()]
