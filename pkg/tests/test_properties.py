"""Distribution-level invariants checked on seeded random cohorts."""

import numpy as np
import pytest

from tdap import (
    CohortSample,
    auc,
    average_precision,
    event_rate,
    fit_censoring_km,
    generate_cohort,
    ipcw_weights,
    pr_curve,
    roc_curve,
)


def weights_for(coh, t0):
    return ipcw_weights(coh, fit_censoring_km(coh), t0)


def test_perfect_score_law():
    # cases strictly above controls and no censoring before t0 -> AP = AUC = 1
    rng = np.random.default_rng(52)
    for trial in range(40):
        n_case = int(rng.integers(1, 10))
        n_ctrl = int(rng.integers(1, 10))
        t0 = 5.0
        case_times = rng.uniform(0.1, 4.9, n_case)
        ctrl_times = rng.uniform(5.0, 12.0, n_ctrl)
        # censoring allowed only at or after t0
        ctrl_status = (rng.random(n_ctrl) < 0.5).astype(float)
        times = np.concatenate([case_times, ctrl_times])
        status = np.concatenate([np.ones(n_case), ctrl_status])
        scores = np.concatenate(
            [rng.uniform(10, 20, n_case), rng.uniform(0, 9, n_ctrl)]
        )
        coh = CohortSample(times, status, scores)
        w = weights_for(coh, t0)
        assert average_precision(coh, w, t0) == 1.0
        assert auc(coh, w, t0) == 1.0


def test_non_informative_score_law():
    # a score independent of outcome and censoring: AP converges to the
    # weighted event rate; tolerance frozen at 3 pilot MC SEs for n=1e5
    rng = np.random.default_rng(53)
    coh = generate_cohort(100_000, rng)
    noise = rng.standard_normal(coh.n)
    coh2 = CohortSample(coh.times, coh.status, noise)
    w = weights_for(coh2, 8.0)
    ap = average_precision(coh2, w, 8.0)
    pi = event_rate(coh2, w, 8.0)
    assert ap == pytest.approx(pi, abs=0.0022)
    assert auc(coh2, w, 8.0) == pytest.approx(0.5, abs=0.01)


def test_weight_calibration_recovers_event_rate():
    # IPW event rate vs the truth from an independent uncensored draw;
    # tolerances are 3 pilot MC SEs at n=1e5 per horizon
    from tdap.simulation import _draw_latent

    t_big, _, _, _ = _draw_latent(2_000_000, np.random.default_rng(54))
    rng = np.random.default_rng(55)
    coh = generate_cohort(100_000, rng)
    for t0, tol in ((0.5, 0.0009), (8.0, 0.0023), (36.0, 0.0040)):
        w = weights_for(coh, t0)
        ref = float(np.mean(t_big < t0))
        assert event_rate(coh, w, t0) == pytest.approx(ref, abs=tol)


def test_roc_dominance_implies_pr_dominance():
    # designed cohorts: score2 degrades score1 by swapping two mid-rank
    # subjects, so ROC1 dominates ROC2 pointwise; PR1 must then dominate
    rng = np.random.default_rng(56)
    for trial in range(20):
        n_case = int(rng.integers(3, 8))
        n_ctrl = int(rng.integers(4, 10))
        times = np.concatenate([np.full(n_case, 1.0), np.full(n_ctrl, 9.0)])
        base = np.concatenate(
            [np.arange(100, 100 + n_case), np.arange(n_ctrl)]
        ).astype(float)
        worse = base.copy()
        # push the weakest case below the two strongest controls
        worse[n_case - 1] = n_ctrl - 1 - 0.5
        coh = CohortSample(times, np.ones(times.size), base, worse)
        t0 = 2.0
        w = weights_for(coh, t0)
        roc1 = roc_curve(coh, w, t0, score=1)
        roc2 = roc_curve(coh, w, t0, score=2)
        pr1 = pr_curve(coh, w, t0, score=1)
        pr2 = pr_curve(coh, w, t0, score=2)

        def step_at(xs, ys, grid):
            # right-continuous step evaluation of a staircase trace
            out = np.empty(grid.size)
            for i, g in enumerate(grid):
                idx = np.where(xs >= g - 1e-12)[0]
                out[i] = ys[idx[0]] if idx.size else ys[-1]
            return out

        grid = np.unique(np.concatenate([roc1.xs, roc2.xs]))
        tpf1 = step_at(roc1.xs, roc1.ys, grid)
        tpf2 = step_at(roc2.xs, roc2.ys, grid)
        assert np.all(tpf1 >= tpf2 - 1e-12)  # ROC1 dominates by design
        grid_t = np.unique(np.concatenate([pr1.xs, pr2.xs]))
        ppv1 = step_at(pr1.xs, pr1.ys, grid_t)
        ppv2 = step_at(pr2.xs, pr2.ys, grid_t)
        assert np.all(ppv1 >= ppv2 - 1e-12)


def test_censoring_invariance_when_no_censoring_before_t0():
    # censoring at or after t0 leaves every estimate identical to the
    # same cohort treated as fully observed at t0
    rng = np.random.default_rng(57)
    for trial in range(30):
        n = int(rng.integers(6, 40))
        times = rng.uniform(0.1, 10, n)
        t0 = 3.0
        status = np.ones(n)
        late = times >= t0
        status[late] = (rng.random(int(late.sum())) < 0.5).astype(float)
        if not (times < t0).any() or t0 > times.max():
            continue
        scores = np.round(rng.standard_normal(n), 1)
        censored = CohortSample(times, status, scores)
        uncensored = CohortSample(times, np.ones(n), scores)
        wc = weights_for(censored, t0)
        wu = weights_for(uncensored, t0)
        assert average_precision(censored, wc, t0) == pytest.approx(
            average_precision(uncensored, wu, t0), abs=1e-12
        )
        assert auc(censored, wc, t0) == pytest.approx(
            auc(uncensored, wu, t0), abs=1e-12
        )


def test_ap_between_event_rate_and_one_on_generator_cohorts():
    rng = np.random.default_rng(58)
    for trial in range(10):
        coh = generate_cohort(3000, rng)
        for t0 in (8.0, 36.0):
            w = weights_for(coh, t0)
            ap = average_precision(coh, w, t0)
            pi = event_rate(coh, w, t0)
            assert 0.0 <= pi <= ap <= 1.0
