"""Scenario configuration, Monte Carlo driver and result export."""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Iterator, Sequence

import numpy as np

from .antenna import ErrorModelParams, RadiusModel, make_pattern
from .geom import Point2D
from .localize import (
    GEOMETRIES,
    RB_ALGORITHMS,
    RF_ALGORITHMS,
    LocalizationOutcome,
    RadiusMode,
    Unlocalized,
    run_all,
)
from .mission import (
    CrossingEvent,
    RetryExhausted,
    TripleConstraints,
    detect_crossings,
    generate_path,
    select_triple,
    synth_crossing,
)
from .stats import BoxplotSummary, boxplot_summary

log = logging.getLogger(__name__)

# Fitted radius distributions per (antenna configuration, altitude).
OBSERVED_MODELS = {
    ("VV", 0): RadiusModel.uniform(97.10, 39.74),
    ("VV", 10): RadiusModel.normal(84.97, 31.70),
    ("VV", 20): RadiusModel.normal(62.91, 34.06),
    ("VH", 0): RadiusModel.normal(63.58, 33.01),
    ("VH", 10): RadiusModel.normal(66.34, 22.81),
    ("VH", 20): RadiusModel.normal(57.69, 24.91),
}

MAX_TRIPLE_ATTEMPTS = 1000
PATH_SEGMENTS = 20
PATH_HALF_SIDE_M = 200.0
PATTERN_SAMPLES = 72
MAX_PATHS_PER_TRIAL = 500
GENERATORS = ("synthetic", "path")
RADIUS_MODES = ("observed", "manufacturer", "measured")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    height_m: float = 0.0
    antenna_config: str = "VV"
    radius_model: RadiusModel | None = None
    radius_mode: str = "observed"
    iw_m: float = 0.40
    r_min_m: float = 60.0
    alpha_min_deg: float = 20.0
    trials: int = 200
    seed: int = 0
    generator: str = "synthetic"
    sigma_override: float | None = None
    error_params: ErrorModelParams = field(default_factory=ErrorModelParams)
    geometry: str = "endpoints"

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.height_m < 0:
            raise ConfigError("height_m must be non-negative")
        if self.antenna_config not in ("VV", "VH"):
            raise ConfigError(f"antenna_config must be VV or VH, got {self.antenna_config!r}")
        if self.radius_mode not in RADIUS_MODES:
            raise ConfigError(f"radius_mode must be one of {RADIUS_MODES}, got {self.radius_mode!r}")
        if self.generator not in GENERATORS:
            raise ConfigError(f"generator must be one of {GENERATORS}, got {self.generator!r}")
        if self.geometry not in GEOMETRIES:
            raise ConfigError(f"geometry must be one of {GEOMETRIES}, got {self.geometry!r}")
        if not self.iw_m > 0:
            raise ConfigError("iw_m must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.sigma_override is not None and self.sigma_override < 0:
            raise ConfigError("sigma_override must be non-negative")
        try:
            self.constraints
            self.model
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def constraints(self) -> TripleConstraints:
        return TripleConstraints(self.r_min_m, self.alpha_min_deg)

    @property
    def model(self) -> RadiusModel:
        """Radius distribution the crossings are drawn from."""
        model = self.radius_model
        if model is None:
            key = (self.antenna_config, self.height_m)
            if key not in OBSERVED_MODELS:
                raise ConfigError(f"no default radius model for {key}; set radius_model")
            model = OBSERVED_MODELS[key]
        if self.sigma_override is not None:
            model = model.with_sigma(self.sigma_override)
        return model

    @property
    def mode(self) -> RadiusMode:
        if self.radius_mode == "observed":
            return RadiusMode.observed(self.model.mu)
        if self.radius_mode == "manufacturer":
            return RadiusMode.manufacturer()
        return RadiusMode.measured()

    @property
    def algorithms(self) -> tuple[str, ...]:
        return RB_ALGORITHMS if self.radius_mode == "measured" else RF_ALGORITHMS

    def replace(self, **changes) -> Scenario:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d.update(changes)
        return Scenario(**d)

    @classmethod
    def from_dict(cls, d: dict) -> Scenario:
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(f"unknown scenario fields: {sorted(unknown)}")
        d = dict(d)
        try:
            if d.get("radius_model") is not None:
                d["radius_model"] = RadiusModel.from_dict(d["radius_model"])
            if d.get("error_params") is not None:
                ep = d["error_params"]
                extra = set(ep) - {"gamma_d", "gamma_h", "eps_s"}
                if extra:
                    raise ConfigError(f"unknown error_params fields: {sorted(extra)}")
                d["error_params"] = ErrorModelParams(**{k: float(v) for k, v in ep.items()})
            else:
                d.pop("error_params", None)
            for key in ("height_m", "iw_m", "r_min_m", "alpha_min_deg"):
                if key in d:
                    d[key] = float(d[key])
            for key in ("trials", "seed"):
                if key in d:
                    if isinstance(d[key], bool) or not isinstance(d[key], int):
                        raise ConfigError(f"{key} must be an integer")
        except (TypeError, KeyError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> Scenario:
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid scenario JSON: {exc}") from exc
        if not isinstance(d, dict):
            raise ConfigError("scenario JSON must be an object")
        return cls.from_dict(d)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    algorithm: str
    radius_mode: str
    outcome: LocalizationOutcome
    gd_truth: Point2D

    @property
    def error_m(self) -> float | None:
        return self.outcome.error(self.gd_truth)


@dataclass(frozen=True)
class AlgorithmSummary:
    algorithm: str
    box: BoxplotSummary | None
    unlocalized_pct: float
    trials: int


@dataclass(frozen=True)
class ScenarioReport:
    summaries: tuple[AlgorithmSummary, ...]

    def __getitem__(self, algorithm: str) -> AlgorithmSummary:
        for s in self.summaries:
            if s.algorithm == algorithm:
                return s
        raise KeyError(algorithm)

    def mean_error(self, algorithm: str) -> float:
        box = self[algorithm].box
        return float("nan") if box is None else box.mean


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial, derived from the scenario seed."""
    return np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), trial]))


def _event_stream(s: Scenario, gd: Point2D, rng: np.random.Generator) -> Iterator[CrossingEvent]:
    rb = s.radius_mode == "measured"
    model = s.model
    if s.generator == "synthetic":
        while True:
            yield synth_crossing(model, gd, s.iw_m, rb, s.height_m, s.error_params, rng)
    pattern = make_pattern(model, PATTERN_SAMPLES, rng)
    area = (gd.x - PATH_HALF_SIDE_M, gd.y - PATH_HALF_SIDE_M, gd.x + PATH_HALF_SIDE_M, gd.y + PATH_HALF_SIDE_M)
    for _ in range(MAX_PATHS_PER_TRIAL):
        path = generate_path(PATH_SEGMENTS, area, rng, s.height_m)
        yield from detect_crossings(path, pattern, gd, s.iw_m, rb, s.error_params, rng)


def run_trial(s: Scenario, trial: int) -> list[TrialRecord]:
    rng = trial_rng(s.seed, trial)
    gd = Point2D(0.0, 0.0)
    try:
        e1, e2, e3 = select_triple(_event_stream(s, gd, rng), s.constraints, MAX_TRIPLE_ATTEMPTS)
    except RetryExhausted as exc:
        log.warning("trial %d: %s", trial, exc)
        failed = LocalizationOutcome(None, Unlocalized.RETRY_EXHAUSTED)
        return [TrialRecord(trial, name, s.radius_mode, failed, gd) for name in s.algorithms]
    outcomes = run_all(e1, e2, e3, s.mode, s.geometry)
    return [TrialRecord(trial, name, s.radius_mode, outcomes[name], gd) for name in s.algorithms]


def _run_chunk(args: tuple[Scenario, Sequence[int]]) -> list[TrialRecord]:
    s, idx = args
    out = []
    for i in idx:
        out.extend(run_trial(s, i))
    return out


def summarize(records: Sequence[TrialRecord], algorithms: Sequence[str]) -> ScenarioReport:
    """Per-algorithm boxplot and unlocalized percentage.

    Trials that never found a valid triple carry no algorithm outcome and are
    left out of the percentages.
    """
    out = []
    for name in algorithms:
        recs = [r for r in records if r.algorithm == name and r.outcome.reason is not Unlocalized.RETRY_EXHAUSTED]
        errors = [r.error_m for r in recs if r.outcome.localized]
        n = len(recs)
        pct = 100.0 * (n - len(errors)) / n if n else 0.0
        out.append(AlgorithmSummary(name, boxplot_summary(errors) if errors else None, pct, n))
    return ScenarioReport(tuple(out))


def run_scenario(s: Scenario, workers: int = 1) -> tuple[ScenarioReport, list[TrialRecord]]:
    """Run every trial of ``s``; records come back in trial order."""
    if workers <= 1:
        records = _run_chunk((s, range(s.trials)))
    else:
        chunks = [(s, list(range(i, s.trials, workers))) for i in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_run_chunk, chunks))
        records = sorted(itertools.chain.from_iterable(parts), key=lambda r: r.trial)
    return summarize(records, s.algorithms), records


def replay_crossings(events: Sequence[CrossingEvent], gd: Point2D, mode: RadiusMode,
                     constraints: TripleConstraints, geometry: str = "endpoints") -> tuple[ScenarioReport, list[TrialRecord]]:
    """Run the algorithms on every admissible triple of recorded crossings."""
    algorithms = RB_ALGORITHMS if mode.is_measured else RF_ALGORITHMS
    records = []
    trial = 0
    for e1, e2, e3 in itertools.combinations(events, 3):
        if not constraints.accepts(e1.a1, e2.a1, e3.a1):
            continue
        outcomes = run_all(e1, e2, e3, mode, geometry)
        records.extend(TrialRecord(trial, name, mode.kind.value, outcomes[name], gd) for name in algorithms)
        trial += 1
    return summarize(records, algorithms), records


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def export_csv(records: Sequence[TrialRecord]) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["trial", "algorithm", "radius_mode", "localized", "error_m", "est_x", "est_y"])
    for r in records:
        est = r.outcome.estimate
        if est is None:
            w.writerow([r.trial, r.algorithm, r.radius_mode, "false", "", "", ""])
        else:
            w.writerow([r.trial, r.algorithm, r.radius_mode, "true", _fmt(r.error_m), _fmt(est.x), _fmt(est.y)])
    return buf.getvalue().encode("utf-8")


def summary_rows(report: ScenarioReport) -> list[dict]:
    rows = []
    for s in report.summaries:
        b = s.box
        stat = (lambda v: None) if b is None else (lambda v: round(v, 6))
        rows.append({
            "algorithm": s.algorithm,
            "mean_m": stat(b and b.mean),
            "median_m": stat(b and b.median),
            "q1_m": stat(b and b.q1),
            "q3_m": stat(b and b.q3),
            "whisker_lo_m": stat(b and b.whisker_lo),
            "whisker_hi_m": stat(b and b.whisker_hi),
            "unlocalized_pct": round(s.unlocalized_pct, 1),
            "n": 0 if b is None else b.n,
        })
    return rows


def export_summary_json(report: ScenarioReport) -> bytes:
    return (json.dumps(summary_rows(report), indent=2) + "\n").encode("utf-8")
