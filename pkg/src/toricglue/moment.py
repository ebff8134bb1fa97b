"""Moment polytopes of toric Fano orbifolds.

The k-anticanonical polytope of a complete simplicial fan is
{u : <u, v_rho> >= -k for every ray}.  Each maximal cone sigma pins down the
vertex solving <u, v_i> = -k on its own rays.  Facets are indexed by rays; the
vertices on the facet of rho are those of the cones containing rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import lattice
from .quantities import frac_str
from .toric import Fan

MAX_DEFAULT_MULTIPLE = 60


class NotFanoError(ValueError):
    """A cone vertex lies outside some half-space of the polytope."""


class TriangulationError(ValueError):
    pass


RatVector = tuple[Fraction, ...]


@dataclass(frozen=True)
class Polytope:
    dim: int
    k: int
    rays: tuple[tuple[int, ...], ...]
    vertices: tuple[RatVector, ...]
    cone_labels: tuple[str, ...]
    cone_rays: tuple[tuple[int, ...], ...]
    cone_vertex: dict = field(hash=False, compare=False, default_factory=dict)

    def vertex_of(self, label: str) -> RatVector:
        try:
            return self.vertices[self.cone_vertex[label]]
        except KeyError:
            raise KeyError(f"unknown cone label {label!r}") from None

    def inequality_values(self, u: Sequence[Fraction]) -> list[Fraction]:
        """<u, v_rho> + k for each ray; all must be >= 0 on the polytope."""
        return [sum(a * b for a, b in zip(u, r)) + self.k for r in self.rays]

    def translate(self, t: Sequence[Fraction]) -> "Polytope":
        """Same combinatorics, vertices shifted by t (the inequalities are no longer the fan's)."""
        t = tuple(Fraction(x) for x in t)
        moved = tuple(tuple(a + b for a, b in zip(v, t)) for v in self.vertices)
        return Polytope(self.dim, self.k, self.rays, moved, self.cone_labels, self.cone_rays, dict(self.cone_vertex))

    def to_dict(self, with_barycenter: bool = True) -> dict:
        d = {
            "dim": self.dim,
            "k": self.k,
            "vertices": [[frac_str(x) for x in v] for v in self.vertices],
            "cone_vertex": {lab: [frac_str(x) for x in self.vertex_of(lab)] for lab in self.cone_labels},
        }
        if with_barycenter and self.dim <= 3:
            d["barycenter"] = [frac_str(x) for x in barycenter(self)]
            d["volume"] = frac_str(volume(self))
        return d


def _cone_vertex(rays, idx, k) -> RatVector:
    return lattice.solve_rational([rays[i] for i in idx], [-k] * len(idx))


def default_multiple(f: Fan) -> int:
    """Smallest k in 1..60 making every cone vertex integral."""
    if f.polytope_multiple is not None:
        return f.polytope_multiple
    base = [_cone_vertex(f.rays, idx, 1) for idx in f.max_cones]
    den = 1
    for v in base:
        for x in v:
            den = den * x.denominator // math.gcd(den, x.denominator)
    if den > MAX_DEFAULT_MULTIPLE:
        raise ValueError(f"no multiple k <= {MAX_DEFAULT_MULTIPLE} makes all vertices integral (need {den})")
    return den


def anticanonical_polytope(f: Fan, k: Optional[int] = None) -> Polytope:
    if k is None:
        k = default_multiple(f)
    if k < 1:
        raise ValueError("k must be a positive integer")
    labels = tuple(c.label for c in f.cones())
    vertices: list[RatVector] = []
    index: dict[RatVector, int] = {}
    cone_vertex = {}
    problems = []
    for lab, idx in zip(labels, f.max_cones):
        u = _cone_vertex(f.rays, idx, k)
        slack = [sum(a * b for a, b in zip(u, r)) + k for r in f.rays]
        bad = [j for j, s in enumerate(slack) if s < 0]
        if bad:
            problems.append(f"{lab} vertex {[frac_str(x) for x in u]} violates rays {bad}")
        if u not in index:
            index[u] = len(vertices)
            vertices.append(u)
        cone_vertex[lab] = index[u]
    if problems:
        raise NotFanoError("; ".join(problems))
    return Polytope(f.dim, k, f.rays, tuple(vertices), labels, f.max_cones, cone_vertex)


def cone_vertex_correspondence(p: Polytope) -> dict[str, RatVector]:
    return {lab: p.vertex_of(lab) for lab in p.cone_labels}


def facet_cycle(p: Polytope, ray: int) -> list[str]:
    """Cone labels around the facet of `ray`, in boundary order (m = 2 or 3)."""
    members = [lab for lab, idx in zip(p.cone_labels, p.cone_rays) if ray in idx]
    rays_of = dict(zip(p.cone_labels, (set(idx) for idx in p.cone_rays)))
    if p.dim == 2:
        if len(members) != 2:
            raise TriangulationError(f"ray {ray} lies in {len(members)} cones, expected 2")
        return members
    if p.dim != 3:
        raise TriangulationError("facet cycles are only built for m = 2, 3")
    if len(members) < 3:
        raise TriangulationError(f"ray {ray} lies in only {len(members)} cones")
    nbrs = {a: [b for b in members if b != a and len(rays_of[a] & rays_of[b]) == 2] for a in members}
    if any(len(v) != 2 for v in nbrs.values()):
        raise TriangulationError(f"cones around ray {ray} do not close up into a cycle")
    cycle = [members[0], nbrs[members[0]][0]]
    while len(cycle) < len(members):
        nxt = [b for b in nbrs[cycle[-1]] if b != cycle[-2]][0]
        if nxt == cycle[0]:
            break
        cycle.append(nxt)
    if len(cycle) != len(members) or cycle[0] not in nbrs[cycle[-1]]:
        raise TriangulationError(f"cones around ray {ray} form more than one cycle")
    return cycle


def _simplices(p: Polytope) -> list[tuple[RatVector, ...]]:
    """Boundary simplices (facet pieces) without the apex."""
    m = p.dim
    if m == 1:
        return [(v,) for v in p.vertices]
    out = []
    for ray in range(len(p.rays)):
        cyc = [p.vertex_of(lab) for lab in facet_cycle(p, ray)]
        if m == 2:
            out.append((cyc[0], cyc[1]))
        else:
            for i in range(1, len(cyc) - 1):
                out.append((cyc[0], cyc[i], cyc[i + 1]))
    return out


def _mass(p: Polytope, apex: Optional[Sequence[Fraction]] = None):
    if p.dim > 3:
        raise NotImplementedError("barycenters are only implemented for m <= 3")
    m = p.dim
    if apex is None:
        n = len(p.vertices)
        apex = tuple(sum(v[i] for v in p.vertices) / n for i in range(m))
    apex = tuple(Fraction(x) for x in apex)
    total = Fraction(0)
    moment = [Fraction(0)] * m
    for simplex in _simplices(p):
        rel = [[a - b for a, b in zip(v, apex)] for v in simplex]
        vol = Fraction(abs(lattice.determinant_rational(rel)), math.factorial(m))
        total += vol
        for i in range(m):
            moment[i] += vol * (apex[i] + sum(v[i] for v in simplex)) / (m + 1)
    if total <= 0:
        raise TriangulationError("triangulation has zero volume")
    return total, tuple(x / total for x in moment)


def volume(p: Polytope) -> Fraction:
    return _mass(p)[0]


def barycenter(p: Polytope, apex: Optional[Sequence[Fraction]] = None) -> RatVector:
    """Exact centroid; `apex` must be interior (defaults to the vertex mean)."""
    return _mass(p, apex)[1]


@dataclass(frozen=True)
class PotentialTable:
    """values[i][j] = i-th moment coordinate at the fixed point of cone labels[j]."""

    labels: tuple[str, ...]
    values: tuple[tuple[Fraction, ...], ...]
    barycenter: RatVector
    note: str = "moment coordinates centred at the barycenter; no L2 normalisation"

    @property
    def d(self) -> int:
        return len(self.values)

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "values": [[frac_str(x) for x in row] for row in self.values],
            "barycenter": [frac_str(x) for x in self.barycenter],
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PotentialTable":
        return cls(
            tuple(d["labels"]),
            tuple(tuple(Fraction(x) for x in row) for row in d["values"]),
            tuple(Fraction(x) for x in d["barycenter"]),
            d.get("note", cls.note),
        )


def potentials_at_points(p: Polytope, labels: Sequence[str], center: Optional[RatVector] = None) -> PotentialTable:
    if center is None:
        center = barycenter(p)
    cols = [[a - b for a, b in zip(p.vertex_of(lab), center)] for lab in labels]
    values = tuple(tuple(col[i] for col in cols) for i in range(p.dim))
    return PotentialTable(tuple(labels), values, tuple(center))
