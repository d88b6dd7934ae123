"""Write trajectory CSVs for the three reference simulation set-ups.

    python3 scripts/reproduce_figures.py --out runs/figures --seed 0
"""

import argparse
from pathlib import Path

from noisyhk.cli import main

FIGURES = {
    # one stubborn agent at 0.5, agents synchronise onto it
    "stubborn": ["simulate", "--model", "homo-stubborn", "--n", "10", "--epsilon", "0.2", "--delta", "0.008",
                 "--b1", "0.5", "--steps", "2000"],
    # two prejudice groups, no noise
    "prejudice_noise_free": ["simulate", "--model", "hetero-prejudice", "--n", "20", "--epsilon", "0.2",
                             "--alpha", "0.4", "--j1", "0.6", "--j2", "0.2", "--noise", "zero", "--delta", "0",
                             "--steps", "200"],
    # same population with uniform noise
    "prejudice_noisy": ["simulate", "--model", "hetero-prejudice", "--n", "20", "--epsilon", "0.2",
                        "--alpha", "0.4", "--j1", "0.6", "--j2", "0.2", "--delta", "0.02", "--steps", "2000"],
}


def parse():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=Path("runs/figures"))
    p.add_argument("--seed", type=int, default=0)
    return p.parse_args()


if __name__ == "__main__":
    args = parse()
    for name, argv in FIGURES.items():
        target = args.out / name
        code = main(argv + ["--seed", str(args.seed), "--out", str(target)])
        if code:
            raise SystemExit(code)
