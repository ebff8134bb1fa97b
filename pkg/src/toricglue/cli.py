"""Command line: toricglue <subcommand> ...

Exit codes: 0 ok, 1 input error, 2 internal inconsistency.
Negative rationals need the '=' form, e.g. --delta=-3/2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import balancing, moment, spectral, toric, tuning
from .quantities import frac_str
from .report import ReportOptions, batch, run_fan

EXIT_OK, EXIT_INPUT, EXIT_INCONSISTENT = 0, 1, 2


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def dtn_table(m: int, max_gamma: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "gamma", "p11", "p12", "p21", "p22", "det"])
    for g in range(max_gamma + 1):
        w.writerow(spectral.dtn_matrix(spectral.ModeIndex(g, m)).to_row())
    return buf.getvalue()


def _emit(args, payload, text: str):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _options(args) -> ReportOptions:
    return ReportOptions(args.k, args.epsilon, args.delta, args.c_gamma, args.scalar_curvature)


def cmd_classify(args):
    fan = toric.load_fan(args.fan)
    reps = toric.classify_fan(fan)
    rows = [f"{'cone':<6}{'|G|':>5}  {'smooth':<7}{'isolated':<9}{'SU':<4}u"]
    for r in reps:
        u = "-" if r.gorenstein_functional is None else str(r.gorenstein_functional)
        rows.append(f"{r.label:<6}{r.order:>5}  {str(r.is_smooth):<7}{str(r.is_isolated):<9}{'yes' if r.is_SU else 'no':<4}{u}")
    _emit(args, {"fan": fan.name, "cones": [r.to_dict() for r in reps]}, "\n".join(rows))


def cmd_polytope(args):
    fan = toric.load_fan(args.fan)
    p = moment.anticanonical_polytope(fan, args.k)
    d = p.to_dict(with_barycenter=fan.dim <= 3)
    rows = [f"P_(-{p.k}K) of {fan.name}: {len(p.vertices)} vertices"]
    rows += [f"{lab:<6}<-> ({', '.join(v)})" for lab, v in d["cone_vertex"].items()]
    if "barycenter" in d:
        rows.append(f"barycenter ({', '.join(d['barycenter'])}), volume {d['volume']}")
    _emit(args, d, "\n".join(rows))


def cmd_balance(args):
    fan = toric.load_fan(args.fan)
    rep = run_fan(fan, _options(args))
    _emit(args, rep.balancing, rep.to_text())


def cmd_tune(args):
    t = tuning.TuningInputs(args.m, args.scalar_curvature if args.scalar_curvature is not None else 1, args.order, args.b, args.c_gamma, args.epsilon, args.delta, args.c)
    r = tuning.tuning_report(t)
    d = r.to_json()
    rows = [
        f"B^(2m) = {r.B.radicand}  (B = {r.B.value:.12g})",
        f"C = {r.C}" if r.C is not None else "C: m = 2 uses the log coefficient",
        f"W4 radial coefficient {r.w4.coefficient} ({r.w4.branch})",
        f"c = s b: {r.tuning_ok}",
    ]
    if r.budget:
        rows.append(f"principal exponent {r.budget.principal}")
        rows += [f"  {b.name:<20} raw {b.raw}  boundary {b.boundary}" for b in r.budget.bands]
        rows.append(f"budget verdict {r.budget.verdict}")
    _emit(args, d, "\n".join(rows))


def cmd_report(args):
    rep = run_fan(toric.load_fan(args.fan), _options(args))
    _emit(args, rep.to_dict(), rep.to_text())


def cmd_batch(args):
    res = batch(args.dir, _options(args))
    payload = {"reports": [r.to_dict() for r in res.reports], "failures": [{"file": f, "error": e} for f, e in res.failures]}
    _emit(args, payload, res.summary())
    if res.inconsistent:
        return EXIT_INCONSISTENT
    return EXIT_INPUT if res.failures else EXIT_OK


def cmd_dtn(args):
    sys.stdout.write(dtn_table(args.m, args.max_gamma))


def cmd_harmonics(args):
    g = spectral.GroupAction.cyclic(args.order, args.exponents)
    m = len(args.exponents)
    dims = [spectral.invariant_harmonic_dimension(g, gamma, m) for gamma in range(args.max_gamma + 1)]
    full = [spectral.harmonic_dimension(spectral.ModeIndex(gamma, m)) for gamma in range(args.max_gamma + 1)]
    first = spectral.first_invariant_mode(g) if args.order > 1 and g.acts_freely() else None
    d = {"order": args.order, "exponents": args.exponents, "invariant": dims, "all": full, "first_invariant_mode": first}
    rows = [f"{'gamma':>5} {'Lambda':>8} {'dim':>6} {'inv':>6}"]
    rows += [f"{gm:>5} {spectral.eigenvalue(spectral.ModeIndex(gm, m)):>8} {a:>6} {i:>6}" for gm, (a, i) in enumerate(zip(full, dims))]
    rows.append(f"first invariant mode: {first if first is not None else 'n/a'}")
    _emit(args, d, "\n".join(rows))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricglue", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def out_flags(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--json", action="store_true", help="machine-readable output")
        g.add_argument("--text", dest="json", action="store_false", help="aligned text tables (default)")

    def pipeline_flags(sp):
        sp.add_argument("--k", type=int, help="polytope multiple (default: smallest making vertices integral)")
        sp.add_argument("--epsilon", type=_frac, help="gluing parameter in (0,1), e.g. 1/10000000")
        sp.add_argument("--delta", type=_frac, help="weight in the gluing window; use --delta=-3/2")
        sp.add_argument("--c-gamma", type=_frac, help="ALE constant c(Gamma) > 0; required with --epsilon")
        sp.add_argument("--scalar-curvature", type=_frac, help="s > 0 (default: fan file value, else 1)")
        out_flags(sp)

    for name, fn, helptext in (
        ("classify", cmd_classify, "quotient singularity of each maximal cone"),
        ("polytope", cmd_polytope, "anticanonical polytope, cone/vertex table, barycenter"),
        ("balance", cmd_balance, "balancing on the SU points"),
        ("report", cmd_report, "full feasibility report"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("fan", help="fan file (JSON)")
        pipeline_flags(sp)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("batch", help="report on every *.json fan in a directory")
    sp.add_argument("dir")
    pipeline_flags(sp)
    sp.set_defaults(func=cmd_batch)

    sp = sub.add_parser("tune", help="gluing coefficients at one point")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--order", type=int, required=True, help="|Gamma|")
    sp.add_argument("--b", type=_frac, default=Fraction(1))
    sp.add_argument("--c", type=_frac, help="default s*b")
    sp.add_argument("--c-gamma", type=_frac, required=True)
    sp.add_argument("--epsilon", type=_frac)
    sp.add_argument("--delta", type=_frac)
    sp.add_argument("--scalar-curvature", type=_frac)
    out_flags(sp)
    sp.set_defaults(func=cmd_tune)

    sp = sub.add_parser("dtn-table", help="CSV of Dirichlet-to-Neumann matrices per mode")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--max-gamma", type=int, default=10)
    sp.set_defaults(func=cmd_dtn, json=False)

    sp = sub.add_parser("harmonics", help="invariant harmonic dimensions for a cyclic diagonal action")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--exponents", type=int, nargs="+", required=True, help="Z/n acts by zeta^e_k on z_k")
    sp.add_argument("--max-gamma", type=int, default=6)
    out_flags(sp)
    sp.set_defaults(func=cmd_harmonics)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except toric.InconsistencyError as e:
        print(f"internal inconsistency: {e}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (ValueError, NotImplementedError, OSError, ArithmeticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return code or EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
