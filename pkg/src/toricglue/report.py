"""End-to-end feasibility reports: classify, build the polytope, balance, tune."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import balancing, moment, spectral, toric, tuning
from .quantities import as_fraction, frac_str

FULL = "FULL_DESINGULARIZATION"
PARTIAL = "PARTIAL"
NOT_BALANCED = "NOT_BALANCED"
NOT_APPLICABLE = "NOT_APPLICABLE"


@dataclass(frozen=True)
class ReportOptions:
    k: Optional[int] = None
    epsilon: Optional[Fraction] = None
    delta: Optional[Fraction] = None
    c_gamma: Optional[Fraction] = None
    s: Optional[Fraction] = None

    def __post_init__(self):
        for name in ("epsilon", "delta", "c_gamma", "s"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, as_fraction(v))
        if self.epsilon is not None and self.c_gamma is None:
            raise ValueError("--epsilon needs --c-gamma: the ALE constant c(Gamma) has no default")


@dataclass(frozen=True)
class FeasibilityReport:
    fan: str
    dim: int
    s: Fraction
    cones: tuple[toric.SingularityReport, ...]
    polytope: Optional[dict]
    balancing: Optional[dict]
    tuning: Optional[tuple[dict, ...]]
    verdict: str
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "fan": self.fan,
            "dim": self.dim,
            "s": frac_str(self.s),
            "cones": [c.to_dict() for c in self.cones],
            "polytope": self.polytope,
            "balancing": self.balancing,
            "tuning": None if self.tuning is None else list(self.tuning),
            "verdict": self.verdict,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "FeasibilityReport":
        cones = tuple(
            toric.SingularityReport(
                c["label"],
                c["order"],
                c["is_smooth"],
                c["is_isolated"],
                c["is_SU"],
                None if c["gorenstein_functional"] is None else tuple(c["gorenstein_functional"]),
                tuple(c["structure"]),
            )
            for c in d["cones"]
        )
        return cls(
            d["fan"],
            d["dim"],
            Fraction(d["s"]),
            cones,
            d["polytope"],
            d["balancing"],
            None if d["tuning"] is None else tuple(d["tuning"]),
            d["verdict"],
            tuple(d["notes"]),
        )

    def to_text(self) -> str:
        lines = [f"fan {self.fan} (m = {self.dim}, s = {self.s})", ""]
        vertex = (self.polytope or {}).get("cone_vertex", {})
        lines.append(f"{'cone':<6}{'|G|':>5}  {'isolated':<9}{'SU':<4}vertex")
        for c in self.cones:
            v = vertex.get(c.label)
            vs = "(" + ", ".join(v) + ")" if v else "-"
            lines.append(f"{c.label:<6}{c.order:>5}  {str(c.is_isolated):<9}{'yes' if c.is_SU else 'no':<4}{vs}")
        if self.polytope:
            p = self.polytope
            bary = p.get("barycenter")
            lines += ["", f"polytope k = {p['k']}, {len(p['vertices'])} vertices, barycenter {'(' + ', '.join(bary) + ')' if bary else 'n/a'}"]
        if self.balancing:
            b = self.balancing
            lines.append(f"balancing on {', '.join(b['labels']) or 'no points'}: rank {b['rank']} of {b['d']}")
            w = b.get("witness")
            lines.append(f"  b = ({', '.join(w['b'])})" if w else "  no positive witness")
        for t in self.tuning or ():
            lines.append(f"tuning {t['label']}: B^(2m) = {t['B']['radicand']}, tuning_ok = {t['tuning_ok']}")
            if t.get("budget"):
                lines.append(f"  budget verdict {t['budget']['verdict']} (principal eps^{t['budget']['principal_exponent']})")
        for n in self.notes:
            lines.append(f"note: {n}")
        lines += ["", f"verdict: {self.verdict}"]
        return "\n".join(lines)


def _balance(poly: moment.Polytope, labels, m: int, s: Fraction) -> dict:
    table = moment.potentials_at_points(poly, labels)
    prob = balancing.BalancingProblem.toric_einstein(table, m, s)
    theta = balancing.build_theta(prob, [1] * len(labels), [s] * len(labels)) if labels else ()
    rank = balancing.check_nondegeneracy(theta)[1] if labels else 0
    witness = balancing.solve_balancing(prob) if labels else None
    return {
        "labels": list(labels),
        "d": prob.d,
        "potentials": table.to_dict(),
        "rank": witness.rank_certificate if witness else rank,
        "witness": witness.to_dict() if witness else None,
    }


def run_fan(fan: toric.Fan, opts: ReportOptions = ReportOptions()) -> FeasibilityReport:
    s = opts.s if opts.s is not None else (fan.scalar_curvature if fan.scalar_curvature is not None else Fraction(1))
    notes = []
    if opts.s is None and fan.scalar_curvature is None:
        notes.append("scalar curvature not given; s = 1 stands for the positive unit (verdicts do not depend on s > 0)")
    cones = tuple(toric.classify_fan(fan))
    singular = [c for c in cones if not c.is_smooth]
    su = [c.label for c in singular if c.is_SU]

    poly = moment.anticanonical_polytope(fan, opts.k)
    poly_d = poly.to_dict(with_barycenter=fan.dim <= 3)

    if not singular:
        return FeasibilityReport(fan.name, fan.dim, s, cones, poly_d, None, None, NOT_APPLICABLE, tuple(notes + ["no singular points"]))
    if not all(c.is_isolated for c in singular):
        return FeasibilityReport(fan.name, fan.dim, s, cones, poly_d, None, None, NOT_APPLICABLE, tuple(notes + ["some singular point is not isolated"]))
    if not su:
        return FeasibilityReport(fan.name, fan.dim, s, cones, poly_d, None, None, NOT_APPLICABLE, tuple(notes + ["no SU singular points"]))
    if fan.dim > 3:
        raise NotImplementedError("balancing needs the barycenter, implemented for m <= 3")
    if any(Fraction(x) != 0 for x in poly_d["barycenter"]):
        notes.append("barycenter is not the origin, so the Einstein relation for the potentials fails")
        return FeasibilityReport(fan.name, fan.dim, s, cones, poly_d, None, None, NOT_APPLICABLE, tuple(notes))

    bal = _balance(poly, su, fan.dim, s)
    witness = bal["witness"]
    if witness is None:
        verdict = NOT_BALANCED
    elif len(su) == len(singular):
        verdict = FULL
    else:
        verdict = PARTIAL
        notes.append(f"{len(singular) - len(su)} non-SU singular points remain")

    tun = None
    if witness is not None and opts.epsilon is not None:
        delta = opts.delta
        if delta is None:
            delta = spectral.weight_window(fan.dim, "gluing").midpoint
            notes.append(f"delta defaulted to the gluing-window midpoint {delta}")
        by_label = {c.label: c for c in cones}
        tun = []
        for lab, b in zip(su, witness["b"]):
            t = tuning.TuningInputs(fan.dim, s, by_label[lab].order, Fraction(b), opts.c_gamma, opts.epsilon, delta, s * Fraction(b))
            d = tuning.tuning_report(t).to_json()
            d["label"] = lab
            tun.append(d)
        tun = tuple(tun)
    return FeasibilityReport(fan.name, fan.dim, s, cones, poly_d, bal, tun, verdict, tuple(notes))


def run_report(path, opts: ReportOptions = ReportOptions()) -> FeasibilityReport:
    return run_fan(toric.load_fan(path), opts)


@dataclass
class BatchResult:
    reports: list[FeasibilityReport] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)
    inconsistent: bool = False

    def summary(self) -> str:
        rows = [f"{'fan':<20}verdict"]
        rows += [f"{r.fan:<20}{r.verdict}" for r in self.reports]
        rows += [f"{name:<20}FAILED: {msg}" for name, msg in self.failures]
        return "\n".join(rows)


def batch(directory, opts: ReportOptions = ReportOptions()) -> BatchResult:
    out = BatchResult()
    for path in sorted(Path(directory).glob("*.json")):
        try:
            out.reports.append(run_report(path, opts))
        except toric.InconsistencyError as e:
            out.failures.append((path.name, str(e)))
            out.inconsistent = True
        except (ValueError, NotImplementedError, OSError) as e:
            out.failures.append((path.name, str(e)))
    return out
