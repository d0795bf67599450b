"""Mean error and unlocalized percentage for every antenna configuration,
altitude and radius mode, with the fitted radius distributions as defaults.

    python scripts/synthetic_sweep.py --trials 200 --seed 0 --out results/
"""

import argparse
from pathlib import Path

from anchorloc.harness import Scenario, export_csv, export_summary_json, run_scenario


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--generator", choices=("synthetic", "path"), default="synthetic")
    ap.add_argument("--geometry", choices=("endpoints", "crossing"), default="endpoints")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, help="directory for per-scenario CSV and JSON")
    args = ap.parse_args()
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)

    for cfg in ("VV", "VH"):
        for h in (0, 10, 20):
            for mode in ("observed", "manufacturer", "measured"):
                s = Scenario(height_m=h, antenna_config=cfg, radius_mode=mode, trials=args.trials, seed=args.seed,
                             generator=args.generator, geometry=args.geometry)
                rep, recs = run_scenario(s, workers=args.workers)
                cells = "  ".join(f"{x.algorithm:>7} {rep.mean_error(x.algorithm):6.2f} m {x.unlocalized_pct:5.1f}%"
                                  for x in rep.summaries)
                print(f"{cfg} h={h:<2} {mode:<12} {cells}")
                if args.out:
                    stem = args.out / f"{cfg}_h{h}_{mode}"
                    stem.with_suffix(".csv").write_bytes(export_csv(recs))
                    stem.with_suffix(".json").write_bytes(export_summary_json(rep))


if __name__ == "__main__":
    main()
