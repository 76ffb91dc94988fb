"""Command-line interface: one subcommand per experiment.

  run         single simulation (reports final norms and errors)
  converge    grid-refinement convergence study
  mms         manufactured-solution convergence study
  sweep       delta x h stability matrix for a coupling scheme
  region      normal-mode stability-region scan
  dispersion  traveling-wave frequency table

Configuration can come from a JSON file (--config) with CLI flags taking
precedence; the effective configuration is echoed next to the results.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .coupling import Simulation, SimulationConfig


_COMMON_DEFAULTS = {"scheme": "amp", "model": "ve", "delta": 1.0,
                    "grid_index": 1, "format": "csv"}


def _add_common(p):
    p.add_argument("--config", help="JSON file of option overrides")
    p.add_argument("--scheme", choices=["amp", "tp", "at"], default=None)
    p.add_argument("--model", choices=["ia", "va", "ve"], default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--grid-index", type=int, default=None)
    p.add_argument("--tfinal", type=float, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.add_argument("--no-corrector", action="store_true")


def _load_overrides(args):
    """Option precedence: explicit flag > config file > built-in default."""
    if getattr(args, "config", None):
        with open(args.config) as f:
            data = json.load(f)
        for key, val in data.items():
            key = key.replace("-", "_")
            if getattr(args, key, None) in (None, False):
                setattr(args, key, val)
    for key, val in _COMMON_DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, val)
    return args


def _mu_default(model, mu):
    if mu is not None:
        return mu
    return 0.0 if model == "ia" else 0.02


def cmd_run(args):
    mu = _mu_default(args.model, args.mu)
    cfg = SimulationConfig(
        model=args.model, scheme=args.scheme, delta=args.delta, mu=mu,
        grid_index=args.grid_index, exact=args.exact,
        t_final=args.tfinal if args.tfinal is not None else harness.comparison_time(args.model),
        use_corrector=not args.no_corrector)
    if cfg.exact == "tw":
        cfg.omega_guess = harness.TABLE_SEEDS.get((args.model, float(args.delta)))
    sim = Simulation(cfg)
    reports = sim.run()
    rows = [{"t": r.t, "max_v": r.max_fluid_v, "max_p": r.max_fluid_p,
             "max_solid_v": r.max_solid_v, "max_solid_s": r.max_solid_s,
             "div": r.div_norm, "blowup": int(r.blowup)} for r in reports]
    last = reports[-1] if reports else None
    print(f"run: {args.model}/{args.scheme} delta={args.delta} h=1/{round(1/sim.grid.dx)} "
          f"steps={len(reports)} blowup={bool(last.blowup) if last else False}")
    if cfg.exact != "none" and last is not None and not last.blowup:
        for group, err in harness.simulation_errors(sim).items():
            print(f"  max-norm error {group}: {err:.6e}")
    if args.out:
        harness.emit_results(rows, args.out, fmt=args.format)
        print(f"wrote {args.out}")
    return 0 if (last is None or not last.blowup) else 1


def _print_convergence(report):
    if report.blowup:
        print("  BLOWUP during the grid sequence")
        return
    groups = list(report.errors)
    print("  h        " + "".join(f"{g:>24s}" for g in groups))
    for j, h in enumerate(report.h_values):
        cells = []
        for g in groups:
            e = report.errors[g][j]
            r = report.errors[g][j - 1] / e if j and e > 0 else float("nan")
            cells.append(f"{e:12.3e} (r={r:4.1f})")
        print(f"  1/{round(1/h):<7d}" + "".join(f"{c:>24s}" for c in cells))
    print("  rate     " + "".join(
        f"{report.rates.get(g, (float('nan'),))[0]:>24.2f}" for g in groups))


def cmd_converge(args):
    args.exact = "tw"
    report = harness.run_convergence_study(
        args.model, args.scheme, args.delta, mu=_mu_default(args.model, args.mu),
        exact="tw", grid_indices=tuple(args.grids),
        t_final=args.tfinal, use_corrector=not args.no_corrector)
    print(f"convergence: {args.model}/{args.scheme} delta={args.delta}")
    _print_convergence(report)
    if args.out:
        harness.emit_results(report.rows(), args.out, fmt=args.format,
                             columns=["component", "h", "error", "ratio", "rate"])
        print(f"wrote {args.out}")
    return 0


def cmd_mms(args):
    report = harness.run_convergence_study(
        args.model, args.scheme, args.delta, mu=_mu_default(args.model, args.mu),
        exact="tz", grid_indices=tuple(args.grids),
        t_final=args.tfinal if args.tfinal is not None else 0.5,
        use_corrector=not args.no_corrector)
    print(f"manufactured-solution study: {args.model}/{args.scheme} delta={args.delta}")
    _print_convergence(report)
    if args.out:
        harness.emit_results(report.rows(), args.out, fmt=args.format,
                             columns=["component", "h", "error", "ratio", "rate"])
        print(f"wrote {args.out}")
    return 0


def cmd_sweep(args):
    rows = harness.run_instability_sweep(
        args.scheme, deltas=tuple(args.deltas), grid_indices=tuple(args.grids),
        t_final=args.tfinal if args.tfinal is not None else 5.0,
        max_steps=args.max_steps)
    print(f"stability sweep ({args.scheme}):")
    for r in rows:
        tag = "stable  " if r["stable"] else "UNSTABLE"
        print(f"  delta={r['delta']:<7g} h=1/{round(1/r['h']):<4d} {tag} steps={r['steps_run']}")
    if args.out:
        harness.emit_results(rows, args.out, fmt=args.format,
                             columns=["delta", "h", "stable", "steps_run"])
        print(f"wrote {args.out}")
    return 0


def cmd_region(args):
    rows = harness.run_region_scan(args.scheme, n_lambda=args.resolution,
                                   n_eta=args.eta_samples)
    n_unstable = sum(r["any_unstable"] for r in rows)
    print(f"region scan ({args.scheme}): {len(rows)} cells, {n_unstable} unstable")
    if args.out:
        harness.emit_results(rows, args.out, fmt=args.format,
                             columns=["lambda_x", "lambda_y", "eta",
                                      "max_abs_A", "any_unstable"])
        print(f"wrote {args.out}")
    return 0


def cmd_dispersion(args):
    rows = harness.dispersion_table()
    print("traveling-wave frequencies:")
    for r in rows:
        print(f"  {r['model']} delta={r['delta']:<8g} omega = "
              f"({r['re_omega']:.6f}, {r['im_omega']:.6e})  |W|/scale = {r['residual']:.1e}")
    if args.out:
        harness.emit_results(rows, args.out, fmt=args.format,
                             columns=["model", "delta", "mu", "k",
                                      "re_omega", "im_omega", "residual"])
        print(f"wrote {args.out}")
    return 0


def main(argv=None):
    ap = argparse.ArgumentParser(prog="fsilab",
                                 description="partitioned FSI solver laboratory")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="single simulation")
    _add_common(p)
    p.add_argument("--exact", choices=["tw", "tz", "none"], default="tw")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("converge", help="traveling-wave convergence study")
    _add_common(p)
    p.add_argument("--grids", type=int, nargs="+", default=[1, 2, 4])
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("mms", help="manufactured-solution convergence study")
    _add_common(p)
    p.add_argument("--grids", type=int, nargs="+", default=[1, 2, 4])
    p.set_defaults(func=cmd_mms)

    p = sub.add_parser("sweep", help="delta x h stability matrix")
    _add_common(p)
    p.add_argument("--deltas", type=float, nargs="+",
                   default=[100.0, 200.0, 400.0, 800.0])
    p.add_argument("--grids", type=int, nargs="+", default=[1, 2, 4, 8, 16])
    p.add_argument("--max-steps", type=int, default=6000)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("region", help="stability-region scan")
    _add_common(p)
    p.add_argument("--resolution", type=int, default=200)
    p.add_argument("--eta-samples", type=int, default=11)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("dispersion", help="traveling-wave frequency table")
    _add_common(p)
    p.set_defaults(func=cmd_dispersion)

    args = ap.parse_args(argv)
    args = _load_overrides(args)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
