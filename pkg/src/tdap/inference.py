"""Percentile-bootstrap uncertainty for the accuracy estimators.

Resampling is by subject: each replicate draws n subjects with
replacement, re-fits the censoring curve and weights from scratch on the
resample, and re-computes the estimand.  Replicates where the horizon is
no longer estimable (for example, a resample with no case before t0) are
dropped and counted; more than 10% failures aborts the run.

Replicate streams are derived from a single seed, one child stream per
replicate index, so results are identical for any thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .censoring import fit_censoring_km, ipcw_weights
from .cohort import CohortSample, validate_horizon
from .errors import TdapError, TooManyFailedReplicatesError
from .estimators import auc, average_precision

__all__ = [
    "DEFAULT_SEED",
    "BootstrapSpec",
    "AccuracySummary",
    "bootstrap_values",
    "bootstrap_summary",
    "bootstrap_compare",
]

DEFAULT_SEED = 1729

_SINGLE_ESTIMANDS = ("ap", "auc")
_PAIRED_ESTIMANDS = ("ap", "ap2", "rap", "auc", "auc2", "dauc")


@dataclass(frozen=True)
class BootstrapSpec:
    """Bootstrap configuration: replicate count, CI level, seed."""

    replicates: int = 1000
    level: float = 0.95
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not (isinstance(self.replicates, int) and self.replicates >= 2):
            raise ValueError(f"replicates must be an int >= 2, got {self.replicates!r}")
        if not (0.0 < self.level < 1.0):
            raise ValueError(f"level must lie in (0, 1), got {self.level!r}")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise ValueError(f"seed must be a 64-bit unsigned int, got {self.seed!r}")


@dataclass(frozen=True)
class AccuracySummary:
    """Point estimate with percentile CI and bootstrap SE."""

    estimand: str
    t0: float
    point: float
    lower: float
    upper: float
    se: float
    replicates_used: int
    replicates_failed: int

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise ValueError(
                f"lower {self.lower!r} exceeds upper {self.upper!r}"
            )

    def to_dict(self) -> dict:
        return {
            "point": self.point,
            "lower": self.lower,
            "upper": self.upper,
            "se": self.se,
            "replicates_used": self.replicates_used,
            "replicates_failed": self.replicates_failed,
        }


def _paired_stats(cohort: CohortSample, weights, t0: float) -> tuple:
    ap1 = average_precision(cohort, weights, t0, score=1)
    ap2 = average_precision(cohort, weights, t0, score=2)
    auc1 = auc(cohort, weights, t0, score=1)
    auc2 = auc(cohort, weights, t0, score=2)
    rap = np.nan if ap2 <= 0.0 else ap1 / ap2
    return ap1, ap2, rap, auc1, auc2, auc1 - auc2


def _stat_fn(estimands: tuple[str, ...], score: int):
    if estimands == _PAIRED_ESTIMANDS:
        return _paired_stats
    if estimands == ("ap",):
        return lambda c, w, t0: (average_precision(c, w, t0, score=score),)
    if estimands == ("auc",):
        return lambda c, w, t0: (auc(c, w, t0, score=score),)
    raise ValueError(f"unknown estimand set {estimands!r}")


def _replicate_matrix(
    cohort: CohortSample,
    t0: float,
    spec: BootstrapSpec,
    stat,
    width: int,
    threads: int = 1,
) -> tuple[np.ndarray, int]:
    """Run all replicates; rows with any NaN mark failed resamples."""
    n = cohort.n
    children = np.random.SeedSequence(spec.seed).spawn(spec.replicates)

    def one(b: int) -> tuple:
        rng = np.random.default_rng(children[b])
        idx = rng.integers(0, n, size=n)
        sub = cohort.take(idx)
        try:
            validate_horizon(sub, t0)
            w = ipcw_weights(sub, fit_censoring_km(sub), t0)
            row = stat(sub, w, t0)
        except TdapError:
            return (np.nan,) * width
        return row

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, range(spec.replicates)))
    else:
        rows = [one(b) for b in range(spec.replicates)]
    values = np.asarray(rows, dtype=float)

    failed = int(np.isnan(values).any(axis=1).sum())
    if failed > 0.1 * spec.replicates:
        raise TooManyFailedReplicatesError(failed, spec.replicates)
    return values[~np.isnan(values).any(axis=1)], failed


def bootstrap_values(
    cohort: CohortSample,
    t0: float,
    spec: BootstrapSpec,
    estimand: str = "ap",
    score: int = 1,
    threads: int = 1,
) -> tuple[np.ndarray, int]:
    """Raw replicate values for one estimand, plus the failure count.

    Useful for diagnostics and plots; :func:`bootstrap_summary` consumes
    the same replicate stream.
    """
    if estimand not in _SINGLE_ESTIMANDS:
        raise ValueError(f"estimand must be one of {_SINGLE_ESTIMANDS}, got {estimand!r}")
    validate_horizon(cohort, t0)
    stat = _stat_fn((estimand,), score)
    values, failed = _replicate_matrix(cohort, t0, spec, stat, 1, threads)
    return values[:, 0], failed


def _summary(estimand, t0, point, values, failed, level) -> AccuracySummary:
    alpha = 1.0 - level
    lower, upper = np.quantile(values, [alpha / 2.0, 1.0 - alpha / 2.0])
    return AccuracySummary(
        estimand=estimand,
        t0=float(t0),
        point=float(point),
        lower=float(lower),
        upper=float(upper),
        se=float(np.std(values, ddof=1)),
        replicates_used=int(values.shape[0]),
        replicates_failed=int(failed),
    )


def bootstrap_summary(
    cohort: CohortSample,
    t0: float,
    spec: BootstrapSpec,
    estimand: str = "ap",
    score: int = 1,
    threads: int = 1,
) -> AccuracySummary:
    """Point estimate on the original cohort plus percentile CI and SE."""
    if estimand not in _SINGLE_ESTIMANDS:
        raise ValueError(f"estimand must be one of {_SINGLE_ESTIMANDS}, got {estimand!r}")
    validate_horizon(cohort, t0)
    weights = ipcw_weights(cohort, fit_censoring_km(cohort), t0)
    if estimand == "ap":
        point = average_precision(cohort, weights, t0, score=score)
    else:
        point = auc(cohort, weights, t0, score=score)
    stat = _stat_fn((estimand,), score)
    values, failed = _replicate_matrix(cohort, t0, spec, stat, 1, threads)
    return _summary(estimand, t0, point, values[:, 0], failed, spec.level)


def bootstrap_compare(
    cohort: CohortSample,
    t0: float,
    spec: BootstrapSpec,
    threads: int = 1,
) -> dict[str, AccuracySummary]:
    """Joint bootstrap of both scores' AP, AUC, their ratio and difference.

    All six estimands are computed on the same resamples, so the paired
    quantities stay internally consistent.  Keys: ``ap``, ``ap2``,
    ``rap``, ``auc``, ``auc2``, ``dauc``.
    """
    from .estimators import compare_horizon

    validate_horizon(cohort, t0)
    point = compare_horizon(cohort, t0)
    points = {
        "ap": point.ap1,
        "ap2": point.ap2,
        "rap": point.rap,
        "auc": point.auc1,
        "auc2": point.auc2,
        "dauc": point.dauc,
    }
    values, failed = _replicate_matrix(
        cohort, t0, spec, _paired_stats, len(_PAIRED_ESTIMANDS), threads
    )
    return {
        name: _summary(name, t0, points[name], values[:, k], failed, spec.level)
        for k, name in enumerate(_PAIRED_ESTIMANDS)
    }
