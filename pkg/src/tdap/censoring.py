"""Censoring-survival estimation and inverse-probability weights.

Right censoring hides event status for part of the cohort.  The fix used
throughout this package is inverse-probability-of-censoring weighting:
subjects whose status at the horizon is known get reweighted by the
inverse of the estimated probability that censoring spared them, and
subjects censored before the horizon get weight zero.

The censoring distribution G(c) = Pr(C >= c) is estimated by the
Kaplan-Meier method with the roles of event and censoring swapped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cohort import CohortSample
from .errors import ZeroCensorSurvivalError

__all__ = ["CensorSurvival", "WeightVector", "fit_censoring_km", "ipcw_weights"]


@dataclass(frozen=True)
class CensorSurvival:
    """Step-function estimate of G(c) = Pr(C >= c).

    ``jump_times`` are the distinct censoring times in increasing order
    and ``values[k]`` is the estimate just after ``jump_times[k]``.  The
    function is evaluated as the left limit: censoring observed exactly
    at ``c`` does not reduce G at ``c`` itself, because at tied times the
    event is resolved before the censoring.  Hence G(c) = 1 for any c at
    or below the first jump.
    """

    jump_times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        jumps = np.asarray(self.jump_times, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if jumps.shape != vals.shape or jumps.ndim != 1:
            raise ValueError("jump_times and values must be matching 1-d arrays")
        if jumps.size and np.any(np.diff(jumps) <= 0):
            raise ValueError("jump_times must be strictly increasing")
        if np.any(vals < 0) or np.any(vals > 1) or (
            vals.size and np.any(np.diff(vals) > 0)
        ):
            raise ValueError("values must be non-increasing within [0, 1]")
        jumps = jumps.copy()
        vals = vals.copy()
        jumps.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "jump_times", jumps)
        object.__setattr__(self, "values", vals)

    def __call__(self, c):
        """Evaluate G at scalar or array ``c`` (left limit at jumps)."""
        c_arr = np.asarray(c, dtype=float)
        padded = np.concatenate(([1.0], self.values))
        # number of jumps strictly below c indexes the step value
        out = padded[np.searchsorted(self.jump_times, c_arr, side="left")]
        return float(out) if np.isscalar(c) or c_arr.ndim == 0 else out


@dataclass(frozen=True)
class WeightVector:
    """Per-subject weights tied to the horizon they were built for."""

    t0: float
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1:
            raise ValueError("weights must be a 1-d array")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and non-negative")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.size


def fit_censoring_km(cohort: CohortSample) -> CensorSurvival:
    """Estimate the censoring survival function from a cohort.

    Each distinct time carrying at least one censoring contributes a
    multiplicative factor (1 - d/m), where d counts subjects censored at
    that time and m counts subjects still under observation there.
    Subjects whose event occurs at a tied time are included in m: ties
    between an event and a censoring resolve the event first.
    """
    censored = cohort.status == 0.0
    cens_times = cohort.times[censored]
    if cens_times.size == 0:
        return CensorSurvival(np.empty(0), np.empty(0))
    jumps, d = np.unique(cens_times, return_counts=True)
    sorted_all = np.sort(cohort.times)
    # at risk at c: everyone with observed time >= c
    at_risk = cohort.n - np.searchsorted(sorted_all, jumps, side="left")
    surv = np.cumprod(1.0 - d / at_risk)
    return CensorSurvival(jumps, surv)


def ipcw_weights(
    cohort: CohortSample, censor_survival: CensorSurvival, t0: float
) -> WeightVector:
    """Build the weight vector for accuracy estimation at horizon ``t0``.

    Subjects with an observed event before ``t0`` weigh 1/G(X); subjects
    still under observation at ``t0`` weigh 1/G(t0); subjects censored
    before ``t0`` weigh 0, their event status being unknown.

    Raises :class:`ZeroCensorSurvivalError` when a needed G value is 0,
    which signals ``t0`` (or an event time) beyond the estimable range of
    the supplied censoring curve.
    """
    times = cohort.times
    w = np.zeros(cohort.n)

    observed_case = (times < t0) & (cohort.status == 1.0)
    if observed_case.any():
        g_case = censor_survival(times[observed_case])
        if np.any(g_case <= 0.0):
            bad = np.flatnonzero(observed_case)[np.argmax(g_case <= 0.0)]
            raise ZeroCensorSurvivalError(int(bad))
        w[observed_case] = 1.0 / g_case

    at_horizon = times >= t0
    if at_horizon.any():
        g_t0 = censor_survival(float(t0))
        if g_t0 <= 0.0:
            raise ZeroCensorSurvivalError(int(np.argmax(at_horizon)))
        w[at_horizon] = 1.0 / g_t0

    return WeightVector(t0=float(t0), weights=w)
