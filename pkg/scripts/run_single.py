#!/usr/bin/env python3
"""Run one coupled simulation and print per-interval diagnostics.

    python scripts/run_single.py --model ve --scheme amp --delta 1 \
        --grid-index 2 --tfinal 0.3
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from fsilab import harness  # noqa: E402
from fsilab.coupling import Simulation, SimulationConfig  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--model", default="ve", choices=["ia", "va", "ve"])
    ap.add_argument("--scheme", default="amp", choices=["amp", "tp", "at"])
    ap.add_argument("--delta", type=float, default=1.0)
    ap.add_argument("--mu", type=float, default=None)
    ap.add_argument("--grid-index", type=int, default=2)
    ap.add_argument("--tfinal", type=float, default=None)
    ap.add_argument("--exact", default="tw", choices=["tw", "tz", "none"])
    ap.add_argument("--no-corrector", action="store_true")
    args = ap.parse_args()

    mu = args.mu if args.mu is not None else (0.0 if args.model == "ia" else 0.02)
    tf = args.tfinal if args.tfinal is not None else harness.comparison_time(args.model)
    cfg = SimulationConfig(
        model=args.model, scheme=args.scheme, delta=args.delta, mu=mu,
        grid_index=args.grid_index, t_final=tf, exact=args.exact,
        omega_guess=harness.TABLE_SEEDS.get((args.model, float(args.delta))),
        use_corrector=not args.no_corrector)
    sim = Simulation(cfg)
    print(f"h=1/{round(1/sim.grid.dx)}, dt={sim.dt:.4e}, z_f={sim.z_f:.3f}")
    n = int(round(tf / sim.dt))
    every = max(1, n // 10)
    for i in range(n):
        rep = sim.step()
        if (i + 1) % every == 0 or rep.blowup:
            print(f"  t={rep.t:.4f}  |v|={rep.max_fluid_v:.4e} |p|={rep.max_fluid_p:.4e} "
                  f"|vbar|={rep.max_solid_v:.4e} |sbar|={rep.max_solid_s:.4e} "
                  f"div={rep.div_norm:.2e}{'  BLOWUP' if rep.blowup else ''}")
        if rep.blowup:
            return 1
    if args.exact != "none":
        for group, err in harness.simulation_errors(sim).items():
            print(f"max-norm error {group}: {err:.6e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
