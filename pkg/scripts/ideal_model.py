"""Error growth as the radius spread widens around each fitted mean.

sigma = 1 is the near-ideal regime; larger values walk towards the
observed spreads.
"""

import argparse

from anchorloc.harness import Scenario, run_scenario

ALGS = ("DRF", "Xiao", "Lee", "DrfE")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--sigmas", type=float, nargs="+", default=[1, 5, 10, 20, 30])
    args = ap.parse_args()
    print(f"{'config':<10}{'sigma':>6}  " + "  ".join(f"{a:>14}" for a in ALGS))
    for cfg in ("VV", "VH"):
        for h in (0, 10, 20):
            for sigma in args.sigmas:
                s = Scenario(height_m=h, antenna_config=cfg, sigma_override=sigma, trials=args.trials, seed=args.seed)
                rep, _ = run_scenario(s)
                cells = "  ".join(f"{rep.mean_error(a):7.2f}/{rep[a].unlocalized_pct:5.1f}%" for a in ALGS)
                print(f"{cfg} h={h:<4}{sigma:>6.0f}  {cells}")


if __name__ == "__main__":
    main()
