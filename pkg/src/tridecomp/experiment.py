"""Batch attack experiments with machine-readable reports.

An experiment runs ``trials`` independent sessions per sweep point (seeded
``base_seed + index``), attacks each one, and aggregates exact-recovery
rates and timing percentiles.  Reports are deterministic for a fixed spec
and seed once timing fields are stripped (``normalize_report``), regardless
of how many worker processes ran the trials.
"""

from __future__ import annotations

import dataclasses
import json
import os
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .attack import AttackConfig, run_attack
from .protocol import default_params, run_session

_CONFIG_FIELDS = {f.name for f in dataclasses.fields(AttackConfig)}
_TIMING_KEYS = {"wall_ms", "timing_ms"}


@dataclasses.dataclass(frozen=True)
class ExperimentSpec:
    preset: str
    trials: int
    base_seed: int = 0
    solver: str = "bruteforce"
    secret_length: int | None = None
    config: dict = dataclasses.field(default_factory=dict)
    sweep: tuple[dict, ...] = ()
    out: str | None = None

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    @staticmethod
    def from_dict(doc: dict) -> "ExperimentSpec":
        return ExperimentSpec(
            preset=doc["preset"],
            trials=int(doc.get("trials", 1)),
            base_seed=int(doc.get("base_seed", 0)),
            solver=doc.get("solver", "bruteforce"),
            secret_length=doc.get("secret_length"),
            config=dict(doc.get("config", {})),
            sweep=tuple(dict(p) for p in doc.get("sweep", [])),
            out=doc.get("out"),
        )

    def to_dict(self) -> dict:
        return {
            "preset": self.preset,
            "trials": self.trials,
            "base_seed": self.base_seed,
            "solver": self.solver,
            "secret_length": self.secret_length,
            "config": self.config,
            "sweep": [dict(p) for p in self.sweep],
            "out": self.out,
        }


def _run_trial(args: tuple) -> dict:
    preset, params_seed, trial_seed, secret_length, config_kwargs = args
    params = default_params(preset, params_seed)
    if secret_length is not None:
        params = dataclasses.replace(params, secret_length=secret_length)
    session = run_session(params, trial_seed)
    config = AttackConfig(**config_kwargs)
    report = run_attack(session.transcript, params, config, honest_key=session.key.key)
    return {
        "seed": trial_seed,
        "flow": report.flow,
        "key_recovered": report.key_recovered,
        "wall_ms": round(report.wall_ms, 3),
        "failure_reason": report.failure_reason,
    }


def _percentile(sorted_vals: list[float], q: float) -> float:
    if not sorted_vals:
        return 0.0
    idx = min(len(sorted_vals) - 1, max(0, round(q * (len(sorted_vals) - 1))))
    return sorted_vals[idx]


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> dict:
    points = list(spec.sweep) if spec.sweep else [{}]
    report_points = []
    for point_idx, overrides in enumerate(points):
        merged = dict(spec.config)
        merged.update(overrides)
        secret_length = merged.pop("secret_length", spec.secret_length)
        solver = merged.pop("solver", spec.solver)
        bad = set(merged) - _CONFIG_FIELDS
        if bad:
            raise ValueError(f"unknown attack-config fields: {sorted(bad)}")
        config_kwargs = dict(merged)
        config_kwargs["solver"] = solver
        trial_args = []
        for trial in range(spec.trials):
            seed = spec.base_seed + trial
            kw = dict(config_kwargs)
            kw["seed"] = seed
            trial_args.append((spec.preset, spec.base_seed, seed, secret_length, kw))
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                trials = list(pool.map(_run_trial, trial_args))
        else:
            trials = [_run_trial(a) for a in trial_args]
        counts = {"group-exact": 0, "matrix-exact": 0, "candidate-unverified": 0, "failed": 0}
        for t in trials:
            counts[t["key_recovered"]] += 1
        times = sorted(t["wall_ms"] for t in trials)
        report_points.append(
            {
                "overrides": overrides,
                "solver": solver,
                "trials": spec.trials,
                "counts": counts,
                "rate_group_exact": counts["group-exact"] / spec.trials,
                "rate_matrix_exact": counts["matrix-exact"] / spec.trials,
                "timing_ms": {
                    "p50": _percentile(times, 0.5),
                    "p90": _percentile(times, 0.9),
                    "max": times[-1] if times else 0.0,
                    "total": round(sum(times), 3),
                },
                "per_trial": trials,
            }
        )
    return {
        "format": "tridecomp-experiment-report/1",
        "version": __version__,
        "spec": spec.to_dict(),
        "points": report_points,
    }


def normalize_report(report: dict) -> dict:
    """Strip timing fields so deterministic runs compare byte-identical."""

    def strip(obj):
        if isinstance(obj, dict):
            return {k: strip(v) for k, v in obj.items() if k not in _TIMING_KEYS}
        if isinstance(obj, list):
            return [strip(v) for v in obj]
        return obj

    return strip(report)


def default_out_dir() -> str:
    return os.environ.get("TRIDECOMP_OUT_DIR", ".")


def save_report(report: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)


def summarize_point(point: dict) -> str:
    ov = point["overrides"]
    tag = ",".join(f"{k}={v}" for k, v in sorted(ov.items())) or "base"
    return (
        f"{tag}: solver={point['solver']} trials={point['trials']} "
        f"group-exact={point['rate_group_exact']:.2f} "
        f"matrix-exact={point['rate_matrix_exact']:.2f} "
        f"p50={point['timing_ms']['p50']:.0f}ms"
    )
