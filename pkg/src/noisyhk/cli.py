"""Command-line front end.

Three commands::

    noisyhk simulate --model plain --n 10 --epsilon 0.2 --delta 0.008 --steps 2000 --seed 7 --out runs/
    noisyhk verify   --theorem 1c --n 10 --epsilon 0.2 --delta 0.008 --b1 0.5 --out runs/thm1c
    noisyhk baseline --model hetero-prejudice --n 20 --epsilon 0.2 --alpha 0.4 --j1 0.6 --j2 0.2 --out runs/baseline

Values come from ``--config FILE.json`` (keys are flag names with
underscores) and are overridden by explicit flags. Every run writes
``effective_config.json`` next to its outputs.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import harness, metrics
from .core import ConfigError, ModelConfig, Trajectory, Variant, run_trajectory
from .harness import ExperimentReport, ExperimentSpec, HypothesisError, SpecError
from .noise import NoiseFamily, NoiseModel
from .seeds import SeedStream

COMMANDS = ("simulate", "verify", "baseline")
FORMATS = ("csv", "json", "text")
THEOREMS = ("1a", "1b", "1c", "2", "3", "4i", "4ii")
NOISES = ("uniform", "tgauss", "rademacher", "zero")

DEFAULTS = {
    "simulate": {"steps": 1000, "reps": 1, "format": "csv", "min_tail": 0},
    "verify": {"steps": harness.NOISY_HORIZON, "reps": 100, "format": "json,text", "min_tail": harness.TAIL},
    "baseline": {"steps": harness.NOISE_FREE_HORIZON, "reps": 50, "format": "json,text", "min_tail": 0},
}
COMMON_DEFAULTS = {"n": 10, "noise": "uniform", "seed": 0, "b1_count": 1, "b2_count": 1, "threads": 1,
                   "replication": 0, "out": "runs", "override_hypothesis": False}

# theorem -> model variant
THEOREM_MODEL = {"1a": "plain", "1b": "homo-prejudice", "1c": "homo-stubborn", "2": "hetero-prejudice",
                 "3": "hetero-prejudice", "4i": "hetero-stubborn", "4ii": "hetero-stubborn"}

REQUIRED = {
    "plain": ("epsilon",),
    "homo-prejudice": ("epsilon", "alpha", "j1"),
    "homo-stubborn": ("epsilon", "b1"),
    "hetero-prejudice": ("epsilon", "alpha", "j1", "j2"),
    "hetero-stubborn": ("epsilon", "b1", "b2"),
}


class UsageError(ValueError):
    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("\n".join(self.problems))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError([message])


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="noisyhk", description="Noisy Hegselmann-Krause simulations and theorem checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", type=Path, help="JSON file with default values")
        s.add_argument("--model", choices=[v.value for v in Variant])
        s.add_argument("--theorem", choices=THEOREMS)
        s.add_argument("--n", type=int)
        s.add_argument("--epsilon", type=float)
        s.add_argument("--delta", type=float)
        s.add_argument("--alpha", type=float)
        s.add_argument("--j1", type=float)
        s.add_argument("--j2", type=float)
        s.add_argument("--s1-size", type=int, help="size of S1 (prejudice) or V1 (Theorem 4(ii)); first indices")
        s.add_argument("--b1", type=float)
        s.add_argument("--b2", type=float)
        s.add_argument("--b1-count", type=int)
        s.add_argument("--b2-count", type=int)
        s.add_argument("--noise", choices=NOISES)
        s.add_argument("--sigma", type=float, help="tgauss scale before truncation")
        s.add_argument("--atom", type=float, help="rademacher magnitude")
        s.add_argument("--steps", type=int)
        s.add_argument("--reps", type=int)
        s.add_argument("--seed", type=int)
        s.add_argument("--replication", type=int, help="replication index written as trajectory.csv")
        s.add_argument("--tail", type=int, help="tail window for limsup estimates")
        s.add_argument("--min-tail", type=int)
        s.add_argument("--override-hypothesis", action="store_true", default=None)
        s.add_argument("--out")
        s.add_argument("--format", help="comma-separated subset of csv,json,text")
        s.add_argument("--threads", type=int, help="worker processes for replications (0 = auto)")
    return p


@dataclass
class RunManifest:
    command: str
    params: dict
    out: Path
    formats: tuple
    threads: int = 1
    config: Optional[ModelConfig] = None
    spec: Optional[ExperimentSpec] = None
    config_source: Optional[str] = None

    def effective(self) -> dict:
        out = {"command": self.command, "config_source": self.config_source, "params": self.params}
        if self.config is not None:
            out["model"] = self.config.to_dict()
        if self.spec is not None:
            out["experiment"] = self.spec.to_dict()
        return out


def _merge(ns: argparse.Namespace) -> tuple[dict, Optional[str], list]:
    problems = []
    values = dict(COMMON_DEFAULTS)
    values.update(DEFAULTS[ns.command])
    source = None
    if ns.config is not None:
        source = str(ns.config)
        try:
            loaded = json.loads(Path(ns.config).read_text())
        except (OSError, ValueError) as exc:
            return values, source, [f"--config: cannot read {ns.config}: {exc}"]
        known = set(vars(ns)) - {"config", "command"}
        for k, v in loaded.items():
            key = k.replace("-", "_")
            if key not in known:
                problems.append(f"--config: unknown key {k!r}")
            else:
                values[key] = v
    for k, v in vars(ns).items():
        if k not in ("config", "command") and v is not None:
            values[k] = v
    return values, source, problems


def _noise_model(v: dict, problems: list) -> Optional[NoiseModel]:
    delta = v.get("delta")
    family = v["noise"]
    if family == "zero":
        if delta not in (None, 0, 0.0):
            problems.append("--noise zero requires --delta 0 (or no --delta)")
            return None
        return NoiseModel.zero()
    if delta is None:
        problems.append("--delta is required unless --noise zero")
        return None
    if delta == 0:
        return NoiseModel.zero()
    try:
        return NoiseModel(NoiseFamily(family), delta, v.get("sigma"), v.get("atom"))
    except ValueError as exc:
        problems.append(str(exc))
        return None


def _model_config(model: str, v: dict, noise: Optional[NoiseModel], problems: list) -> Optional[ModelConfig]:
    missing = [k for k in REQUIRED[model] if v.get(k) is None]
    problems += [f"--{k.replace('_', '-')} is required for --model {model}" for k in missing]
    if missing:
        return None
    n = v["n"]
    kw = {}
    variant = Variant(model)
    if variant.prejudiced:
        size = v.get("s1_size")
        if size is None:
            size = n if variant is Variant.HOMO_PREJUDICE else n // 2
        if not 0 <= size <= n:
            problems.append(f"--s1-size must lie in 0..n (got {size})")
            return None
        kw.update(alpha=v["alpha"], j1=v["j1"], s1=range(size))
        if variant is Variant.HETERO_PREJUDICE:
            kw.update(j2=v["j2"], s2=range(size, n))
    if variant.stubborn:
        kw.update(b1=v["b1"], b1_count=v["b1_count"])
        if variant is Variant.HETERO_STUBBORN:
            kw.update(b2=v["b2"], b2_count=v["b2_count"])
    try:
        return ModelConfig(variant, n, v["epsilon"], noise or NoiseModel.zero(), **kw)
    except ConfigError as exc:
        problems += exc.problems
        return None


def _check_out(out: Path, problems: list) -> None:
    probe = out
    while not probe.exists():
        if probe.parent == probe:
            break
        probe = probe.parent
    if probe.exists() and (not probe.is_dir() or not os.access(probe, os.W_OK)):
        problems.append(f"--out: {out} is not a writable directory")


def _verify_spec(v: dict, problems: list) -> Optional[ExperimentSpec]:
    theorem = v.get("theorem")
    if theorem is None:
        problems.append("--theorem is required for verify")
        return None
    model = THEOREM_MODEL[theorem]
    missing = [k for k in REQUIRED[model] if v.get(k) is None]
    if v.get("delta") is None:
        missing.append("delta")
    problems += [f"--{k} is required for --theorem {theorem}" for k in missing]
    if missing or problems:
        return None
    n, eps, delta = v["n"], v["epsilon"], v["delta"]
    common = dict(replications=v["reps"], horizon=v["steps"], seed=v["seed"], noise=v["noise"],
                  min_tail=v["min_tail"], tail_window=v.get("tail"), override=bool(v["override_hypothesis"]))
    size = v.get("s1_size")
    try:
        if theorem == "1a":
            return harness.preset_theorem1a(n, eps, delta, **common)
        if theorem == "1b":
            s1 = range(n if size is None else size)
            return harness.preset_theorem1b(n, eps, delta, v["alpha"], v["j1"], s1, **common)
        if theorem == "1c":
            return harness.preset_theorem1c(n, eps, delta, v["b1"], v["b1_count"], **common)
        if theorem in ("2", "3"):
            fn = harness.preset_theorem2 if theorem == "2" else harness.preset_theorem3
            s1 = None if size is None else range(size)
            return fn(n, eps, delta, v["alpha"], v["j1"], v["j2"], s1, **common)
        v1 = None if size is None else range(size)
        return harness.preset_theorem4(theorem[1:], n, eps, delta, v["b1"], v["b2"], v["b1_count"],
                                       v["b2_count"], v1, **common)
    except HypothesisError as exc:
        problems.append(str(exc))
    except (ConfigError, SpecError) as exc:
        problems += exc.problems
    except ValueError as exc:
        problems.append(str(exc))
    return None


def parse_args(argv: Optional[Sequence[str]] = None) -> RunManifest:
    """Parse and fully validate a command line; raises :class:`UsageError`."""
    ns, unknown = _build_parser().parse_known_args(argv)
    v, source, problems = _merge(ns)
    problems += [f"unrecognized argument: {a}" for a in unknown]
    formats = tuple(f.strip() for f in str(v["format"]).split(",") if f.strip())
    bad = [f for f in formats if f not in FORMATS]
    if bad or not formats:
        problems.append(f"--format must be a comma-separated subset of {','.join(FORMATS)} (got {v['format']!r})")
    if not isinstance(v["n"], int) or v["n"] < 1:
        problems.append(f"n must be a positive integer (got {v['n']!r})")
    for key in ("steps", "reps", "min_tail", "threads", "replication"):
        if not isinstance(v[key], int) or v[key] < 0:
            problems.append(f"--{key.replace('_', '-')} must be a non-negative integer")
    if v["reps"] == 0:
        problems.append("--reps must be >= 1")
    if v.get("epsilon") is not None and not 0 < v["epsilon"] <= 1:
        problems.append("epsilon must lie in (0,1]")
    out = Path(v["out"])
    _check_out(out, problems)

    manifest = RunManifest(ns.command, v, out, formats, v["threads"], config_source=source)
    if ns.command == "verify":
        if v.get("delta") is not None and v["delta"] < 0:
            problems.append("delta must be >= 0")
        elif not problems:
            manifest.spec = _verify_spec(v, problems)
            if manifest.spec is not None:
                manifest.config = manifest.spec.config
    else:
        model = v.get("model")
        if model is None:
            problems.append(f"--model is required for {ns.command}")
        else:
            if ns.command == "baseline":
                v["noise"], v["delta"] = "zero", 0.0
            noise = _noise_model(v, problems)
            manifest.config = _model_config(model, v, noise, problems)
        if manifest.config is not None and ns.command == "baseline":
            manifest.spec = harness.preset_noise_free_baseline(
                manifest.config, v["reps"], v["steps"], v["seed"], min_tail=v["min_tail"], tail_window=v.get("tail"))
            bad_spec = manifest.spec.problems()
            problems += bad_spec
    if problems:
        # de-duplicate while keeping order
        raise UsageError(list(dict.fromkeys(problems)))
    return manifest


# output writers ------------------------------------------------------------------


def _num(x) -> str:
    return format(float(x), ".17g")


def emit_trajectory_csv(traj: Trajectory, series: metrics.MetricsSeries, path) -> Path:
    """Write one row per step: opinions, anchors, diameter, anchored deviations, clusters."""
    path = Path(path)
    if len(traj) == 0:
        raise ValueError("trajectory is empty")
    n, m = traj.opinions.shape[1], len(traj.stubborn)
    labels = list(series.anchored)
    header = (["t"] + [f"agent_{i}" for i in range(n)] + [f"stubborn_{k}" for k in range(m)] + ["d_V"]
              + [f"d_anchor_{label}" for label in labels] + ["clusters"])
    stub = [_num(b) for b in traj.stubborn]
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for t, row in enumerate(traj.opinions):
                w.writerow([t] + [_num(x) for x in row] + stub + [_num(series.diameter[t])]
                           + [_num(series.anchored[label][t]) for label in labels] + [int(series.clusters[t])])
    except OSError as exc:
        raise OSError(f"cannot write trajectory CSV to {path}: {exc}") from exc
    return path


def _g(x) -> str:
    return "n/a" if x is None else format(x, ".6g")


def _quartiles(q: Optional[dict]) -> str:
    if q is None:
        return "n/a"
    return "/".join(_g(q[k]) for k in ("min", "q1", "median", "q3", "max"))


def format_text_report(report: ExperimentReport) -> str:
    spec = report.spec
    cfg = spec.config
    noise = cfg.noise
    mode = "out-of-hypothesis exploration" if spec.out_of_hypothesis else "in-hypothesis"
    lines = [
        f"# {spec.label} ({mode})",
        f"# model: {cfg.variant.value} n={cfg.n} epsilon={_g(cfg.epsilon)} noise={noise.family.value}"
        f"(delta={_g(noise.delta)})",
        f"# replications={spec.replications} horizon={spec.horizon} tail_window={spec.window} "
        f"min_tail={spec.min_tail} seed={spec.master_seed} pass_threshold={_g(spec.pass_threshold)}",
    ]
    for h in spec.hypotheses:
        lines.append(f"# hypothesis: {h.describe()} [{'holds' if h.holds else 'VIOLATED'}]")
    for note in spec.notes:
        lines.append(f"# note: {note}")
    hist = " ".join(f"{k}:{v}" for k, v in report.cluster_histogram.items())
    lines.append(f"# clusters at horizon (gap rule): {hist}")
    if spec.expected_clusters is not None:
        lines.append(f"# fraction with {spec.expected_clusters} clusters: {_g(report.expected_cluster_fraction)}")
    if spec.baseline:
        fixed = [r.fixed_point_step for r in report.results if r.fixed_point_step is not None]
        lines.append(f"# fixed point reached: {len(fixed)}/{len(report.results)}; "
                     f"step min/q1/median/q3/max: {_quartiles(harness._quantiles(fixed))}")
        levels = {}
        for r in report.results:
            levels[r.levels] = levels.get(r.levels, 0) + 1
        lines.append("# distinct opinion levels at horizon: " + " ".join(f"{k}:{v}" for k, v in sorted(levels.items())))
    if spec.checks:
        lines.append(f"# verdict: {'PASS' if report.passed else 'FAIL'}")
    for s in report.summaries:
        c = s.check
        frac = "n/a" if s.pass_count is None else f"{_g(s.pass_fraction)} ({s.pass_count}/{s.replications})"
        lines.append(f"check {c.label}: bound={_g(c.bound)} criterion={c.criterion} pass_fraction={frac} "
                     f"tail_max[min/q1/median/q3/max]={_quartiles(s.tail_max)} "
                     f"entry_time[min/q1/median/q3/max]={_quartiles(s.entry_times)}")
    return "\n".join(lines) + "\n"


def emit_report(report: ExperimentReport, path, fmt: str = "json") -> Path:
    """Serialise ``report`` deterministically as ``json`` or ``text``."""
    path = Path(path)
    if fmt == "json":
        body = json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"
    elif fmt == "text":
        body = format_text_report(report)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    try:
        path.write_text(body, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    return path


def _write_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=True) + "\n", encoding="utf-8")


def _write_trajectory(manifest: RunManifest, spec: Optional[ExperimentSpec]) -> Path:
    cfg = manifest.config
    seed = SeedStream(manifest.params["seed"], manifest.params["replication"])
    regions = spec.regions if spec is not None else None
    x0 = spec.x0 if spec is not None else None
    traj = run_trajectory(cfg, x0, manifest.params["steps"], seed, regions=regions)
    return emit_trajectory_csv(traj, metrics.compute_series(traj), manifest.out / "trajectory.csv")


def run(manifest: RunManifest) -> list[Path]:
    manifest.out.mkdir(parents=True, exist_ok=True)
    written = []
    eff = manifest.out / "effective_config.json"
    _write_json(manifest.effective(), eff)
    written.append(eff)
    if manifest.command == "simulate":
        if "csv" in manifest.formats:
            written.append(_write_trajectory(manifest, None))
        return written
    report = harness.run_ensemble(manifest.spec, threads=manifest.threads)
    if "json" in manifest.formats:
        written.append(emit_report(report, manifest.out / "report.json", "json"))
    if "text" in manifest.formats:
        written.append(emit_report(report, manifest.out / "report.txt", "text"))
    if "csv" in manifest.formats:
        written.append(_write_trajectory(manifest, manifest.spec))
    return written


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        manifest = parse_args(argv)
    except UsageError as exc:
        print("noisyhk: usage error:", file=sys.stderr)
        for p in exc.problems:
            print(f"  - {p}", file=sys.stderr)
        return 2
    for path in run(manifest):
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
