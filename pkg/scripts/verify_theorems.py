"""Run every bound-checking preset at its reference parameters and print pass fractions."""

import argparse
import time

from noisyhk.harness import (preset_theorem1a, preset_theorem1c, preset_theorem2, preset_theorem3,
                             preset_theorem4, run_ensemble)

RUNS = {
    "1a": lambda k: preset_theorem1a(10, 0.2, 0.01, **k),
    "1c": lambda k: preset_theorem1c(10, 0.2, 0.008, **k),
    "2": lambda k: preset_theorem2(20, 0.2, 0.02, 0.4, 0.6, 0.2, **k),
    "3": lambda k: preset_theorem3(20, 0.1, 0.01, 0.8, 0.9, 0.1, **k),
    "4ii": lambda k: preset_theorem4("ii", 10, 0.2, 0.01, 0.2, 0.8, **k),
}

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--steps", type=int, default=20_000)
    p.add_argument("--min-tail", type=int, default=4_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    args = p.parse_args()
    opts = dict(replications=args.reps, horizon=args.steps, seed=args.seed, min_tail=args.min_tail)
    for name, build in RUNS.items():
        t0 = time.perf_counter()
        report = run_ensemble(build(opts), threads=args.threads)
        parts = [f"{s.check.label}={s.pass_fraction:.2f}" for s in report.summaries]
        clusters = report.cluster_histogram
        print(f"{name:>4}  {'  '.join(parts)}  clusters={clusters}  ({time.perf_counter() - t0:.1f}s)")
