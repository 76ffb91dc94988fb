#!/usr/bin/env python3
"""Reproduce the headline experiment tables into results/.

Runs, in order: the traveling-wave frequency table, the convergence studies
for all model problems and density ratios, the manufactured-solution study,
and (optionally, slow) the coupling-scheme stability sweep and the
normal-mode region scan.

    python scripts/reproduce_tables.py            # fast tables only
    python scripts/reproduce_tables.py --all      # include sweep + region
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from fsilab import harness  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--all", action="store_true", help="include sweep and region scan")
    ap.add_argument("--out", default="results", help="output directory")
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(exist_ok=True)

    rows = harness.dispersion_table()
    harness.emit_results(rows, out / "dispersion.csv",
                         columns=["model", "delta", "mu", "k",
                                  "re_omega", "im_omega", "residual"])
    print(f"dispersion table -> {out/'dispersion.csv'}")
    for r in rows:
        print(f"  {r['model']} delta={r['delta']:<8g} "
              f"omega=({r['re_omega']:.6f}, {r['im_omega']:.6e})")

    all_rows = []
    for model in ("ia", "va", "ve"):
        for delta in (0.1, 1.0, 1000.0):
            rep = harness.run_convergence_study(model, "amp", delta)
            tag = f"{model} delta={delta:g}"
            if rep.blowup:
                print(f"converge {tag}: BLOWUP")
                continue
            rates = {g: rep.rates[g][0] for g in rep.errors}
            print(f"converge {tag}: " +
                  " ".join(f"{g}={z:.2f}" for g, z in rates.items()))
            for row in rep.rows():
                row.update(model=model, delta=delta)
                all_rows.append(row)
    harness.emit_results(all_rows, out / "convergence.csv",
                         columns=["model", "delta", "component", "h",
                                  "error", "ratio", "rate"])
    print(f"convergence tables -> {out/'convergence.csv'}")

    mms_rows = []
    for delta in (1000.0, 1.0, 0.1):
        rep = harness.run_convergence_study("va", "amp", delta, mu=0.05,
                                            exact="tz", grid_indices=(2, 4, 8),
                                            t_final=0.3,
                                            dt_proportional_to_h=True)
        print(f"mms va delta={delta:g}: " +
              " ".join(f"{g}={rep.rates[g][0]:.2f}" for g in rep.errors))
        for row in rep.rows():
            row.update(model="va", delta=delta)
            mms_rows.append(row)
    harness.emit_results(mms_rows, out / "mms.csv",
                         columns=["model", "delta", "component", "h",
                                  "error", "ratio", "rate"])
    print(f"mms tables -> {out/'mms.csv'}")

    if args.all:
        for scheme in ("tp", "amp"):
            cap = 6000 if scheme == "tp" else 2500
            rows = harness.run_instability_sweep(scheme, max_steps=cap)
            harness.emit_results(rows, out / f"sweep_{scheme}.csv",
                                 columns=["delta", "h", "stable", "steps_run"])
            print(f"sweep ({scheme}) -> {out/f'sweep_{scheme}.csv'}")
        rows = harness.run_region_scan("amp")
        harness.emit_results(rows, out / "region_amp.csv",
                             columns=["lambda_x", "lambda_y", "eta",
                                      "max_abs_A", "any_unstable"])
        print(f"region scan -> {out/'region_amp.csv'}")


if __name__ == "__main__":
    main()
