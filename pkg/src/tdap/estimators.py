"""Horizon-specific accuracy estimators for right-censored cohorts.

For a horizon t0, a *case* is a subject whose event occurs before t0 and
a *control* is a subject still event-free at t0.  Censoring is handled
by the weights from :mod:`tdap.censoring`: sums over cases use weighted
indicator masses, while counts of subjects screened positive (score at
or above a threshold) stay unweighted because scores are always
observed.

Ties in the scores get half credit everywhere: a subject's own score
contributes half of itself to the precision at that score, and tied
case/control pairs count 1/2 toward concordance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .censoring import WeightVector, fit_censoring_km, ipcw_weights
from .cohort import CohortSample, validate_horizon
from .errors import (
    DivisionByZeroAPError,
    EmptyThresholdSetError,
    NoControlsAtT0Error,
    NoEventsBeforeT0Error,
    NotPairedError,
)

__all__ = [
    "CurveTrace",
    "HorizonEstimates",
    "PairedEstimates",
    "ppv_at",
    "tpf_at",
    "ppv_tie_corrected",
    "average_precision",
    "auc",
    "event_rate",
    "pr_curve",
    "roc_curve",
    "ap_ratio",
    "auc_difference",
    "estimate_horizon",
    "compare_horizon",
]


@dataclass(frozen=True)
class CurveTrace:
    """An accuracy curve sampled at every distinct score threshold.

    ``thresholds`` run from the highest score down; ``xs``/``ys`` hold
    the matching curve coordinates ((TPF, PPV) for precision-recall,
    (FPF, TPF) for ROC).  Coordinates are clipped into [0, 1].
    """

    kind: str
    thresholds: np.ndarray = field(repr=False)
    xs: np.ndarray = field(repr=False)
    ys: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("thresholds", "xs", "ys"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.thresholds.shape == self.xs.shape == self.ys.shape):
            raise ValueError("thresholds, xs, ys must have equal length")

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.xs.tolist(), self.ys.tolist()))

    def __len__(self) -> int:
        return self.thresholds.size


@dataclass(frozen=True)
class HorizonEstimates:
    """Point estimates for one score at one horizon."""

    t0: float
    event_rate: float
    ap: float
    auc: float


@dataclass(frozen=True)
class PairedEstimates:
    """Head-to-head point estimates for two scores at one horizon."""

    t0: float
    event_rate: float
    ap1: float
    ap2: float
    rap: float
    auc1: float
    auc2: float
    dauc: float


def _case_mass(cohort: CohortSample, weights: WeightVector, t0: float) -> np.ndarray:
    # I(X < t0) * w; already 0 for subjects censored before t0
    return weights.weights * (cohort.times < t0)


def _control_mass(cohort: CohortSample, weights: WeightVector, t0: float) -> np.ndarray:
    return weights.weights * (cohort.times >= t0)


def _grouped_desc(scores: np.ndarray, *masses: np.ndarray):
    """Group subjects by distinct score, highest first.

    Returns the distinct scores (descending), the subject count per
    group, and one mass-sum array per extra argument.
    """
    neg_vals, inverse, counts = np.unique(-scores, return_inverse=True, return_counts=True)
    sums = tuple(
        np.bincount(inverse, weights=m, minlength=neg_vals.size) for m in masses
    )
    return -neg_vals, counts, sums


def ppv_at(
    cohort: CohortSample, weights: WeightVector, threshold: float, t0: float
) -> float:
    """Precision of the rule "score >= threshold" for events before t0.

    The numerator is the weighted mass of cases screened positive; the
    denominator is the plain count of subjects screened positive (score
    observation is never censored, so it needs no reweighting).
    """
    positive = cohort.score1 >= threshold
    n_pos = int(np.count_nonzero(positive))
    if n_pos == 0:
        raise EmptyThresholdSetError(threshold)
    case_w = _case_mass(cohort, weights, t0)
    return float(case_w[positive].sum() / n_pos)


def tpf_at(
    cohort: CohortSample, weights: WeightVector, threshold: float, t0: float
) -> float:
    """Sensitivity of the rule "score >= threshold" for events before t0."""
    case_w = _case_mass(cohort, weights, t0)
    total = case_w.sum()
    if total <= 0.0:
        raise NoEventsBeforeT0Error(t0)
    positive = cohort.score1 >= threshold
    return float(case_w[positive].sum() / total)


def ppv_tie_corrected(
    cohort: CohortSample, weights: WeightVector, j: int, t0: float, score: int = 1
) -> float:
    """Precision evaluated at subject ``j``'s own score with half-tie credit.

    Subjects tied with ``j`` (including ``j`` itself) contribute half of
    their mass to both numerator and denominator, which removes the
    upward bias a strict ">=" rule gives the anchoring subject.
    """
    z = cohort.scores(score)
    above = z > z[j]
    tied = z == z[j]
    case_w = _case_mass(cohort, weights, t0)
    num = case_w[above].sum() + 0.5 * case_w[tied].sum()
    den = np.count_nonzero(above) + 0.5 * np.count_nonzero(tied)
    return float(num / den)


def _ap_from_arrays(scores, case_w) -> float:
    total_case = case_w.sum()
    if total_case <= 0.0:
        return np.nan
    _, counts, (case_mass,) = _grouped_desc(scores, case_w)
    cum_case = np.cumsum(case_mass)
    cum_count = np.cumsum(counts)
    # tie-corrected precision at each distinct score: half of the tied
    # group's own mass counts as "above"
    ppv = (cum_case - 0.5 * case_mass) / (cum_count - 0.5 * counts)
    return float(np.dot(case_mass, ppv) / total_case)


def average_precision(
    cohort: CohortSample, weights: WeightVector, t0: float, score: int = 1
) -> float:
    """Average positive predictive value over the cases at horizon t0.

    This is the area under the precision-recall curve, computed as the
    weighted mean of the tie-corrected precision at each observed case's
    score.  The result is clipped into [0, 1]; the clip can bind only in
    heavily censored corners where single weights exceed 1.
    """
    case_w = _case_mass(cohort, weights, t0)
    value = _ap_from_arrays(cohort.scores(score), case_w)
    if np.isnan(value):
        raise NoEventsBeforeT0Error(t0)
    return float(min(1.0, max(0.0, value)))


def _auc_from_arrays(scores, case_w, ctrl_w) -> float:
    total_case = case_w.sum()
    total_ctrl = ctrl_w.sum()
    if total_case <= 0.0 or total_ctrl <= 0.0:
        return np.nan
    _, _, (case_mass, ctrl_mass) = _grouped_desc(scores, case_w, ctrl_w)
    ctrl_below = total_ctrl - np.cumsum(ctrl_mass)
    conc = np.dot(case_mass, ctrl_below + 0.5 * ctrl_mass)
    return float(conc / (total_case * total_ctrl))


def auc(
    cohort: CohortSample, weights: WeightVector, t0: float, score: int = 1
) -> float:
    """Probability a random case outscores a random control at t0.

    Weighted concordance over case/control pairs with half credit for
    tied scores; clipped into [0, 1].
    """
    case_w = _case_mass(cohort, weights, t0)
    ctrl_w = _control_mass(cohort, weights, t0)
    if case_w.sum() <= 0.0:
        raise NoEventsBeforeT0Error(t0)
    if ctrl_w.sum() <= 0.0:
        raise NoControlsAtT0Error(t0)
    value = _auc_from_arrays(cohort.scores(score), case_w, ctrl_w)
    return float(min(1.0, max(0.0, value)))


def event_rate(cohort: CohortSample, weights: WeightVector, t0: float) -> float:
    """Weighted estimate of Pr(event before t0), clipped into [0, 1]."""
    value = _case_mass(cohort, weights, t0).sum() / cohort.n
    return float(min(1.0, max(0.0, value)))


def pr_curve(
    cohort: CohortSample, weights: WeightVector, t0: float, score: int = 1
) -> CurveTrace:
    """Precision-recall trace over all distinct score thresholds.

    Each point uses the plain ">= threshold" rule: TPF from the weighted
    case mass, PPV from that mass over the unweighted positive count.
    """
    case_w = _case_mass(cohort, weights, t0)
    total_case = case_w.sum()
    if total_case <= 0.0:
        raise NoEventsBeforeT0Error(t0)
    thresholds, counts, (case_mass,) = _grouped_desc(cohort.scores(score), case_w)
    cum_case = np.cumsum(case_mass)
    tpf = np.clip(cum_case / total_case, 0.0, 1.0)
    ppv = np.clip(cum_case / np.cumsum(counts), 0.0, 1.0)
    return CurveTrace(kind="precision-recall", thresholds=thresholds, xs=tpf, ys=ppv)


def roc_curve(
    cohort: CohortSample, weights: WeightVector, t0: float, score: int = 1
) -> CurveTrace:
    """ROC trace (FPF, TPF) over all distinct score thresholds."""
    case_w = _case_mass(cohort, weights, t0)
    ctrl_w = _control_mass(cohort, weights, t0)
    total_case = case_w.sum()
    total_ctrl = ctrl_w.sum()
    if total_case <= 0.0:
        raise NoEventsBeforeT0Error(t0)
    if total_ctrl <= 0.0:
        raise NoControlsAtT0Error(t0)
    thresholds, _, (case_mass, ctrl_mass) = _grouped_desc(
        cohort.scores(score), case_w, ctrl_w
    )
    tpf = np.clip(np.cumsum(case_mass) / total_case, 0.0, 1.0)
    fpf = np.clip(np.cumsum(ctrl_mass) / total_ctrl, 0.0, 1.0)
    return CurveTrace(kind="roc", thresholds=thresholds, xs=fpf, ys=tpf)


def _require_paired(cohort: CohortSample) -> None:
    if not cohort.paired:
        raise NotPairedError()


def ap_ratio(
    cohort: CohortSample, t0: float, weights: WeightVector | None = None
) -> float:
    """Ratio of average precisions, score 1 over score 2.

    Both estimates share the cohort and one weight vector, so the ratio
    isolates the scores themselves.  Raises when the score-2 estimate is
    0, since no meaningful ratio exists then.
    """
    _require_paired(cohort)
    if weights is None:
        weights = ipcw_weights(cohort, fit_censoring_km(cohort), t0)
    ap1 = average_precision(cohort, weights, t0, score=1)
    ap2 = average_precision(cohort, weights, t0, score=2)
    if ap2 <= 0.0:
        raise DivisionByZeroAPError()
    return float(ap1 / ap2)


def auc_difference(
    cohort: CohortSample, t0: float, weights: WeightVector | None = None
) -> float:
    """Difference of the two scores' AUCs (score 1 minus score 2)."""
    _require_paired(cohort)
    if weights is None:
        weights = ipcw_weights(cohort, fit_censoring_km(cohort), t0)
    return float(auc(cohort, weights, t0, score=1) - auc(cohort, weights, t0, score=2))


def estimate_horizon(
    cohort: CohortSample, t0: float, weights: WeightVector | None = None
) -> HorizonEstimates:
    """Validate, weight, and estimate event rate, AP, and AUC at t0."""
    validate_horizon(cohort, t0)
    if weights is None:
        weights = ipcw_weights(cohort, fit_censoring_km(cohort), t0)
    return HorizonEstimates(
        t0=float(t0),
        event_rate=event_rate(cohort, weights, t0),
        ap=average_precision(cohort, weights, t0),
        auc=auc(cohort, weights, t0),
    )


def compare_horizon(
    cohort: CohortSample, t0: float, weights: WeightVector | None = None
) -> PairedEstimates:
    """Paired estimates for both scores at t0, sharing one weight vector."""
    _require_paired(cohort)
    validate_horizon(cohort, t0)
    if weights is None:
        weights = ipcw_weights(cohort, fit_censoring_km(cohort), t0)
    ap1 = average_precision(cohort, weights, t0, score=1)
    ap2 = average_precision(cohort, weights, t0, score=2)
    if ap2 <= 0.0:
        raise DivisionByZeroAPError()
    auc1 = auc(cohort, weights, t0, score=1)
    auc2 = auc(cohort, weights, t0, score=2)
    return PairedEstimates(
        t0=float(t0),
        event_rate=event_rate(cohort, weights, t0),
        ap1=ap1,
        ap2=ap2,
        rap=float(ap1 / ap2),
        auc1=auc1,
        auc2=auc2,
        dauc=float(auc1 - auc2),
    )
