"""Pass fraction of the plain and single-stubborn consensus checks as the horizon grows.

Slow boundary clusters take longer than 2e4 steps to merge in some replications;
this sweep shows how the fraction approaches one.
"""

import argparse

from noisyhk.harness import preset_theorem1a, preset_theorem1c, run_ensemble

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--horizons", type=int, nargs="+", default=[20_000, 50_000, 100_000])
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    print("horizon  plain  stubborn(d_V, d_B1)")
    for h in args.horizons:
        a = run_ensemble(preset_theorem1a(10, 0.2, 0.01, replications=args.reps, horizon=h, seed=args.seed))
        c = run_ensemble(preset_theorem1c(10, 0.2, 0.008, replications=args.reps, horizon=h, seed=args.seed))
        fc = ", ".join(f"{s.pass_fraction:.2f}" for s in c.summaries)
        print(f"{h:>7}  {a.summaries[0].pass_fraction:.2f}   ({fc})")
