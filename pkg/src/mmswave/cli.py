"""Command-line entry point: ``mmswave {roots,coeffs,stability,simulate,compare}``."""
from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import harness
from .errors import MmsWaveError
from .mms import classify, compute_coefficients, growth_curve
from .modes import dispersion_poly, find_branch, roots, select_branch, verify_pairing
from .susceptibility import model_from_dict

MODEL_KEYS = {"toy": ("gamma", "a"), "lorentz": ("a", "b", "c")}


def _cplx(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _parse_params(kind: str, items) -> dict:
    params = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected key=value, got {item!r}")
        try:
            params[key] = float(val)
        except ValueError:
            raise argparse.ArgumentTypeError(f"parameter {key} is not a number: {val!r}") from None
    missing = set(MODEL_KEYS[kind]) - set(params)
    if missing:
        raise argparse.ArgumentTypeError(f"missing parameters: {', '.join(sorted(missing))}")
    return params


def _model_from_args(args):
    if getattr(args, "preset", None):
        cfg = harness.load_preset(args.preset)
        return cfg.model, cfg.k0
    if not args.model:
        raise argparse.ArgumentTypeError("give --preset or --model with --params")
    model = model_from_dict(args.model, _parse_params(args.model, args.params))
    if args.k is None:
        raise argparse.ArgumentTypeError("--k is required with --model")
    return model, args.k


def cmd_roots(args) -> int:
    model, k = _model_from_args(args)
    vals = roots(dispersion_poly(model, k))
    rep = verify_pairing(vals)
    for w in vals:
        print(json.dumps({"root": _cplx(w)}))
    print(json.dumps({"pairing": rep.as_dict(vals)}))
    print(json.dumps({"selected": _cplx(select_branch(model, vals, k)), "k": k}))
    return 0


def cmd_coeffs(args) -> int:
    model, k = _model_from_args(args)
    c = compute_coefficients(model, find_branch(model, k))
    print(json.dumps(c.as_dict(), indent=2))
    return 0


def cmd_stability(args) -> int:
    model, k = _model_from_args(args)
    c = compute_coefficients(model, find_branch(model, k))
    q = np.linspace(args.kmin, args.kmax, args.n)
    label = classify(c)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["k", "re_lambda", "classification"])
    for qq, g in zip(q, growth_curve(c, q)):
        w.writerow([f"{qq:.17g}", f"{g:.17g}", label])
    return 0


def cmd_simulate(args) -> int:
    cfg = harness.load_config(args.config) if args.config else harness.load_preset(args.preset)
    cfg = cfg.with_overrides(epsilon=args.epsilon, dt=args.dt)
    report = harness.run_scenario(cfg)
    if args.out:
        harness.export_report(report, args.out)
    for row in report.rows:
        print(f"t={row['t']:g}  rel_l2={row['rel_l2']:.4e}  rel_max={row['rel_max']:.4e}")
    for c in report.checks:
        print(f"[{'PASS' if c['passed'] else 'FAIL'}] {c['name']}: {c['value']:.4g}")
    return 0 if report.passed else 1


def cmd_compare(args) -> int:
    rows = harness.compare_dirs(args.ref, args.mms)
    if not rows:
        print("no matching field files", file=sys.stderr)
        return 1
    ok = True
    for r in rows:
        good = r["rel_l2"] <= args.tol
        ok &= good
        print(json.dumps({**r, "passed": good}))
    return 0 if ok else 1


def _add_model_args(p):
    p.add_argument("--preset", choices=harness.PRESETS)
    p.add_argument("--model", choices=sorted(MODEL_KEYS))
    p.add_argument("--params", nargs="+", metavar="KEY=VALUE",
                   help="model parameters, e.g. gamma=5 a=20")
    p.add_argument("--k", type=float, help="carrier wavenumber")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mmswave", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", help="dispersion roots, pairing and selected branch")
    _add_model_args(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("coeffs", help="amplitude-equation coefficients as JSON")
    _add_model_args(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("stability", help="envelope growth rate curve as CSV")
    _add_model_args(p)
    p.add_argument("--kmin", type=float, default=-1.0)
    p.add_argument("--kmax", type=float, default=1.0)
    p.add_argument("--n", type=int, default=201)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("simulate", help="run a scenario and validate MMS against the reference")
    p.add_argument("--preset", choices=harness.PRESETS, default="toy")
    p.add_argument("--config", help="scenario JSON file (overrides --preset)")
    p.add_argument("--out", help="output directory for report and CSVs")
    p.add_argument("--dt", type=float)
    p.add_argument("--epsilon", type=float)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="compare exported field CSVs of two runs")
    p.add_argument("--ref", required=True)
    p.add_argument("--mms", required=True)
    p.add_argument("--tol", type=float, default=0.02)
    p.set_defaults(func=cmd_compare)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as e:
        ap.error(str(e))
    except MmsWaveError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
