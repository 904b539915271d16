"""
Monte Carlo comparison of fixed pole and standard realization under noise.

For every noise level and trial a noisy copy of the simulated output is
generated with its own seed ``base_seed + trial + 10**6 * sigma_index``, so
results do not depend on the order in which the worker pool runs trials.
"""
import csv
import io
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from src.config import settings
from src.datagen.simulation import (
    StateSpaceModel,
    add_noise,
    example_poles,
    reduced_poles,
    simulate,
    state_space_from_poles
)
from src.errors import RealizationError
from src.mepsolve import realize
from src.signalmodel import FixedPoleSet, Signal
from src.telemetry import get_tracer, run_with_context

# Configure module logger
logger = logging.getLogger(__name__)

tracer = get_tracer(__name__)

SEED_STRIDE = 10 ** 6
CSV_COLUMNS = ["sigma", "trial", "method", "misfit_sq", "true_err_sq", "poles", "wall_time_s"]
SUMMARY_COLUMNS = ["sigma", "method", "metric", "min", "q1", "median", "q3", "max", "count"]


class TrialMethod(str, Enum):
    FPGOR = "FPGOR"
    SGOR = "SGOR"


class MonteCarloConfig(BaseModel):
    """Noise levels, trial count and the model the data is drawn from.

    Poles are ``(re, im)`` pairs; missing conjugates are added.
    """

    N: int = 16
    sigma_levels: List[float] = Field(default_factory=lambda: [0.05, 0.15, 0.25, 0.35, 0.45])
    trials: int = Field(default=50, ge=1)
    base_seed: int = 0
    poles: List[Tuple[float, float]] = Field(
        default_factory=lambda: [(p.real, p.imag) for p in example_poles()]
    )
    fixed_poles: List[Tuple[float, float]] = Field(
        default_factory=lambda: [(p.real, p.imag) for p in example_poles()][:2]
    )
    order: Optional[int] = None
    include_sgor: bool = False
    C: Optional[List[float]] = None
    x0: Optional[List[float]] = None
    transform: Optional[List[List[float]]] = None
    max_degree: Optional[int] = None
    record_timing: bool = False

    @field_validator("sigma_levels")
    @classmethod
    def _sigmas_nonnegative(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("At least one noise level is required")
        if any(s < 0 or not np.isfinite(s) for s in value):
            raise ValueError("Noise levels must be finite and >= 0")
        return value

    @model_validator(mode="after")
    def _check_orders(self) -> "MonteCarloConfig":
        n = self.n
        m = self.fixed_set.m
        if not 0 <= m < n:
            raise ValueError(f"Need 0 <= m < n, got m={m}, n={n}")
        if self.N <= 2 * n:
            raise ValueError(f"Need N > 2n, got N={self.N}, n={n}")
        return self

    @property
    def pole_set(self) -> FixedPoleSet:
        return FixedPoleSet.with_conjugates(complex(re, im) for re, im in self.poles)

    @property
    def fixed_set(self) -> FixedPoleSet:
        return FixedPoleSet.with_conjugates(complex(re, im) for re, im in self.fixed_poles)

    @property
    def n(self) -> int:
        return self.order if self.order is not None else self.pole_set.m

    def model(self) -> StateSpaceModel:
        T = None if self.transform is None else np.array(self.transform, dtype=float)
        return state_space_from_poles(self.pole_set, C=self.C, x0=self.x0, T=T)


def third_order_config(include_sgor: bool = False) -> MonteCarloConfig:
    """Third order model, N = 16, 50 trials, pair ``exp(+-0.8i)`` fixed."""
    return MonteCarloConfig(include_sgor=include_sgor)


def reduced_config(trials: int = 50) -> MonteCarloConfig:
    """Second order model, N = 7, pole 0.8 fixed; S-GOR stays cheap."""
    return MonteCarloConfig(
        N=7,
        trials=trials,
        poles=[(p.real, p.imag) for p in reduced_poles()],
        fixed_poles=[(0.8, 0.0)],
        include_sgor=True
    )


class TrialRecord(BaseModel):
    sigma: float
    sigma_index: int
    trial: int
    method: TrialMethod
    misfit_sq: float = float("nan")
    true_err_sq: float = float("nan")
    estimated_poles: List[Tuple[float, float]] = Field(default_factory=list)
    wall_time: Optional[float] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


class SummaryRow(BaseModel):
    sigma: float
    method: TrialMethod
    metric: str
    min: float
    q1: float
    median: float
    q3: float
    max: float
    count: int


def trial_seed(base_seed: int, sigma_index: int, trial: int) -> int:
    return base_seed + trial + SEED_STRIDE * sigma_index


def _fit(method: TrialMethod, y: Signal, x: Signal, cfg: MonteCarloConfig,
         sigma: float, sigma_index: int, trial: int) -> TrialRecord:
    fixed = cfg.fixed_set if method is TrialMethod.FPGOR else FixedPoleSet.empty()
    start = time.perf_counter()
    try:
        best = realize(y, cfg.n, fixed, max_degree=cfg.max_degree).best
    except (RealizationError, np.linalg.LinAlgError, ValueError) as e:
        logger.warning(f"Trial sigma={sigma} #{trial} {method.value} failed: {e}")
        return TrialRecord(sigma=sigma, sigma_index=sigma_index, trial=trial,
                           method=method, error=f"{type(e).__name__}: {e}")
    elapsed = time.perf_counter() - start
    true_err = x.values - best.yhat.values
    return TrialRecord(
        sigma=sigma,
        sigma_index=sigma_index,
        trial=trial,
        method=method,
        misfit_sq=best.misfit_sq,
        true_err_sq=float(true_err @ true_err),
        estimated_poles=[(p.real, p.imag) for p in best.poles],
        wall_time=elapsed if cfg.record_timing else None
    )


def run_trial(cfg: MonteCarloConfig, x: Signal, sigma_index: int, trial: int) -> List[TrialRecord]:
    """All configured methods on one noisy draw."""
    sigma = cfg.sigma_levels[sigma_index]
    with tracer.start_as_current_span("montecarlo_trial") as span:
        span.set_attribute("sigma", sigma)
        span.set_attribute("trial", trial)
        y = add_noise(x, sigma, trial_seed(cfg.base_seed, sigma_index, trial))
        methods = [TrialMethod.FPGOR] + ([TrialMethod.SGOR] if cfg.include_sgor else [])
        return [_fit(method, y, x, cfg, sigma, sigma_index, trial) for method in methods]


def montecarlo(cfg: MonteCarloConfig, workers: Optional[int] = None) -> List[TrialRecord]:
    """
    Run every (noise level, trial) pair and return the records ordered by
    (sigma_index, trial, method).

    Per-trial solver failures are recorded in the row and the run continues.
    """
    workers = workers or settings.worker_count
    x = simulate(cfg.model(), cfg.N)
    jobs = [(i, t) for i in range(len(cfg.sigma_levels)) for t in range(cfg.trials)]

    with tracer.start_as_current_span("montecarlo") as span:
        span.set_attribute("N", cfg.N)
        span.set_attribute("n", cfg.n)
        span.set_attribute("m", cfg.fixed_set.m)
        span.set_attribute("jobs", len(jobs))
        logger.info(f"Monte Carlo: {len(jobs)} trials on {workers} workers")

        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {
                executor.submit(run_with_context(run_trial, cfg, x, i, t)): (i, t)
                for i, t in jobs
            }
            records = [record for future in futures for record in future.result()]

    method_order = {TrialMethod.FPGOR: 0, TrialMethod.SGOR: 1}
    records.sort(key=lambda r: (r.sigma_index, r.trial, method_order[r.method]))
    failed = sum(not r.ok for r in records)
    if failed:
        logger.warning(f"Monte Carlo: {failed} of {len(records)} fits failed")
    return records


def summarize(records: Iterable[TrialRecord]) -> List[SummaryRow]:
    """Quartiles of both error metrics per (sigma, method), failed fits excluded."""
    groups: Dict[Tuple[int, float, TrialMethod], List[TrialRecord]] = {}
    for record in records:
        if record.ok:
            groups.setdefault((record.sigma_index, record.sigma, record.method), []).append(record)

    rows = []
    for (_, sigma, method), group in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][2].value)):
        for metric in ("misfit_sq", "true_err_sq"):
            data = np.array([getattr(r, metric) for r in group])
            q = np.quantile(data, [0.0, 0.25, 0.5, 0.75, 1.0])
            rows.append(SummaryRow(
                sigma=sigma, method=method, metric=metric,
                min=q[0], q1=q[1], median=q[2], q3=q[3], max=q[4],
                count=data.size
            ))
    return rows


def format_float(value: Optional[float]) -> str:
    if value is None:
        return ""
    return repr(float(value))


def format_poles(poles: List[Tuple[float, float]]) -> str:
    return " ".join(f"{format_float(re)}{'+' if im >= 0 else '-'}{format_float(abs(im))}j" for re, im in poles)


def records_to_csv(records: Iterable[TrialRecord]) -> str:
    """CSV text with a fixed column order; floats in shortest round-trip form."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([
            format_float(r.sigma),
            r.trial,
            r.method.value,
            format_float(r.misfit_sq),
            format_float(r.true_err_sq),
            format_poles(r.estimated_poles),
            format_float(r.wall_time)
        ])
    return buffer.getvalue()


def summary_to_csv(rows: Iterable[SummaryRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for row in rows:
        writer.writerow([
            format_float(row.sigma), row.method.value, row.metric,
            format_float(row.min), format_float(row.q1), format_float(row.median),
            format_float(row.q3), format_float(row.max), row.count
        ])
    return buffer.getvalue()
