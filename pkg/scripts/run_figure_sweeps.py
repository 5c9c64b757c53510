#!/usr/bin/env python3
"""Sweep logical error rate against cadence and skip probability.

Produces one CSV per gate error rate with Monte Carlo estimates next to
the closed-form numbers, over the grid eps_a in {0, 0.3, 0.5} and
m in {1, 2, 4, 5, 8, 10, 20, 25} for a 1000-gate computation.  Plotting
p_l_mc and p_l_formula against m from these files reproduces the
package's headline comparison curves.

At the default 10^5 shots per point, budget a few minutes per eps_g
value on one core.
"""
import argparse
import json
import sys
from pathlib import Path

from qec_cadence import cli


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="out", help="directory for outputs")
    parser.add_argument("--eps-g", type=float, nargs="+", default=[1e-4, 5e-5])
    parser.add_argument("--shots", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=20260823)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--record", default=None,
                        help="calibration record to take rate coefficients from "
                             "(default: builtin coefficients)")
    args = parser.parse_args(argv)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rates = {"source": "builtin"}
    if args.record:
        rates = {"source": "calibrated", "record": args.record}

    for eps_g in args.eps_g:
        config = {
            "seed": args.seed,
            "rates": rates,
            "sweep": {
                "eps_g": [eps_g],
                "eps_a": [0.0, 0.3, 0.5],
                "m": [1, 2, 4, 5, 8, 10, 20, 25],
                "n_gates": 1000,
                "shots": args.shots,
            },
        }
        tag = f"{eps_g:g}".replace("-", "m").replace(".", "p")
        config_path = out_dir / f"sweep_config_eps_g_{tag}.json"
        config_path.write_text(json.dumps(config, indent=2) + "\n")
        csv_path = out_dir / f"sweep_eps_g_{tag}.csv"
        code = cli.main([
            "sweep", "--config", str(config_path),
            "--threads", str(args.threads), "--out", str(csv_path),
        ])
        if code != 0:
            return code
        print(f"wrote {csv_path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
