"""Acceptance suite: one test per exit criterion, each printing a
``[PASS]``/``[FAIL]`` line with the measured values (run with ``pytest -s``
to see the lines as they happen).
"""

import itertools
import json
import time

import numpy as np
import pytest
import scipy.stats

from balancelab.datagen import SimulationConfig, replicate_dataset
from balancelab.matching import CostMatrix, optimal_match
from balancelab.procedures import (
    run_adjusted_analysis,
    run_simulation,
    summary_to_json,
)
from balancelab.stats import ols_fit, student_t_cdf
from balancelab.streams import SeedSpec, make_stream

REPS = 10**4
ALPHA = 0.05


def check(ok: bool, label: str, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    assert ok, f"{label}: {detail}"


def mc_se(p, n=REPS):
    return np.sqrt(p * (1 - p) / n)


def analytic_balance_power(n_per_group, d_conf, alpha=ALPHA):
    """Independent oracle: two-sample t power from the noncentral t."""
    df = 2 * n_per_group - 2
    ncp = d_conf * np.sqrt(n_per_group / 2)
    tcrit = scipy.stats.t.ppf(1 - alpha / 2, df)
    # nct.cdf underflows to NaN far in the tail; that tail mass is 0
    upper = np.nan_to_num(scipy.stats.nct.sf(tcrit, df, ncp), nan=0.0)
    lower = np.nan_to_num(scipy.stats.nct.cdf(-tcrit, df, ncp), nan=0.0)
    return float(upper + lower)


@pytest.fixture(scope="module")
def footnote_config():
    return SimulationConfig(n_per_group=20, d_manip=2.0, d_conf=1.0, r=0.75,
                            alpha_balance=ALPHA, alpha_outcome=ALPHA,
                            n_replicates=REPS, seed=1000)


@pytest.fixture(scope="module")
def footnote_summary(footnote_config):
    return run_simulation(footnote_config)


@pytest.fixture(scope="module")
def power_run_cache():
    cache = {}

    def run(n, d_conf):
        if (n, d_conf) not in cache:
            config = SimulationConfig(n_per_group=n, d_manip=0.0, d_conf=d_conf,
                                      r=0.75, n_replicates=REPS,
                                      seed=2000 + 100 * n + int(d_conf * 10))
            cache[(n, d_conf)] = run_simulation(config, workers=4)
        return cache[(n, d_conf)]

    return run


def test_null_calibration():
    config = SimulationConfig(n_per_group=20, d_manip=0.0, d_conf=0.0, r=0.75,
                              alpha_balance=ALPHA, alpha_outcome=ALPHA,
                              n_replicates=REPS, seed=3000)
    start = time.perf_counter()
    s = run_simulation(config, workers=1)
    elapsed = time.perf_counter() - start
    tol = 3 * mc_se(ALPHA)  # 0.00654
    rates = (s.flag_rate, s.naive_power_or_type1, s.adjusted_power_or_type1)
    ok = all(abs(r - ALPHA) <= tol for r in rates) and elapsed < 60
    check(ok, "null calibration",
          f"balance/naive/adjusted rates {rates[0]:.4f}/{rates[1]:.4f}/{rates[2]:.4f} "
          f"vs 0.05 ± {tol:.4f}, {elapsed:.1f}s single-threaded")


def test_balance_power_matches_noncentral_t_oracle(power_run_cache):
    failures = []
    lines = []
    for d_conf, n in itertools.product((0.5, 1.0, 2.0), (10, 20, 50)):
        measured = power_run_cache(n, d_conf).flag_rate
        expected = analytic_balance_power(n, d_conf)
        tol = 3 * mc_se(expected)
        lines.append(f"n={n} d={d_conf}: {measured:.4f} vs {expected:.4f} ± {tol:.4f}")
        if abs(measured - expected) > tol:
            failures.append(lines[-1])
    check(not failures, "balance power vs noncentral-t oracle",
          "; ".join(lines) if not failures else "FAILED " + "; ".join(failures))


def test_bias_law(footnote_config, footnote_summary):
    cov_sum = 0.0
    for i in range(footnote_config.n_replicates):
        fit = run_adjusted_analysis(replicate_dataset(footnote_config, i), ALPHA)
        cov_sum += float(fit.coefficients[2])
    mean_cov = cov_sum / footnote_config.n_replicates
    naive = footnote_summary.mean_naive_estimate
    adjusted = footnote_summary.mean_adjusted_estimate
    ok = (abs(naive - 2.75) <= 0.02 and abs(adjusted - 2.00) <= 0.02
          and abs(mean_cov - 0.75) <= 0.02)
    check(ok, "bias law",
          f"mean naive {naive:.4f} (target 2.75±0.02), "
          f"mean adjusted group {adjusted:.4f} (target 2.00±0.02), "
          f"mean covariate coefficient {mean_cov:.4f} (target 0.75±0.02)")


def test_headline_unnecessary_rejection_rate(footnote_config, footnote_summary):
    summary_d2 = run_simulation(
        SimulationConfig(n_per_group=20, d_manip=2.0, d_conf=2.0, r=0.75,
                         n_replicates=REPS, seed=1001),
        workers=4,
    )
    r1 = footnote_summary.unnecessary_flag_rate
    r2 = summary_d2.unnecessary_flag_rate
    ok = r1 > 0.50 and r2 > 0.50
    check(ok, "headline unnecessary-rejection rate",
          f"d_conf=1: {r1:.3f}, d_conf=2: {r2:.3f} (both must exceed 0.50; "
          f"originally reported rates >60% and 75% use a rejection-event "
          f"definition from external code, ours is balance-flag AND "
          f"adjusted-analysis-correct)")


def test_low_power_gate_misses_real_imbalance(power_run_cache):
    rate = power_run_cache(10, 0.5).flag_rate
    check(rate < 0.30, "low-power warning",
          f"flag rate {rate:.4f} < 0.30 at n=10/group despite true "
          f"standardized imbalance 0.5")


def test_assignment_optimality():
    rng = make_stream(SeedSpec(4000, 0))

    def brute_force(values):
        n, m = values.shape
        perms = np.array(list(itertools.permutations(range(m), n)))
        rows = np.arange(n)
        return values[rows, perms].sum(axis=1).min()

    worst = 0.0
    for shape in ((7, 7), (5, 8)):
        for _ in range(100):
            values = rng.random(shape)
            costs = CostMatrix(values=values,
                               row_ids=[f"r{i}" for i in range(shape[0])],
                               col_ids=[f"c{j}" for j in range(shape[1])])
            gap = abs(optimal_match(costs).total_cost - brute_force(values))
            worst = max(worst, gap)
    check(worst <= 1e-9, "assignment optimality",
          f"max |solver - brute force| over 100x 7x7 and 100x 5x8 random "
          f"matrices: {worst:.2e}")


def test_worker_count_determinism(footnote_config):
    jsons = [summary_to_json(run_simulation(footnote_config, workers=w))
             for w in (1, 4, 8)]
    ok = jsons[0] == jsons[1] == jsons[2]
    check(ok, "worker determinism",
          "byte-identical JSON summaries for workers in {1, 4, 8}"
          if ok else "summaries differ across worker counts")


def test_ols_and_t_cdf_oracles():
    statsmodels_api = pytest.importorskip("statsmodels.api")
    rng = make_stream(SeedSpec(5000, 0))
    worst = 0.0
    for _ in range(50):
        X = np.column_stack([np.ones(50), rng.normal(size=(50, 2))])
        y = X @ rng.normal(size=3) + rng.normal(size=50)
        fit = ols_fit(X, y)
        ref = statsmodels_api.OLS(y, X).fit()
        worst = max(
            worst,
            np.max(np.abs(fit.coefficients - ref.params) / np.abs(ref.params)),
            np.max(np.abs(fit.standard_errors - ref.bse) / ref.bse),
        )
    cauchy_err = max(
        abs(student_t_cdf(t, 1.0) - (0.5 + np.arctan(t) / np.pi))
        for t in (-20, -3, -1, -0.2, 0.0, 0.2, 1, 3, 20)
    )
    ok = worst <= 1e-8 and cauchy_err <= 1e-10
    check(ok, "OLS and t-CDF oracles",
          f"max OLS relative error {worst:.2e} (<=1e-8), "
          f"max Cauchy CDF error {cauchy_err:.2e} (<=1e-10)")


def test_multicollinearity_inflates_standard_errors():
    reps = 10**3
    n = 100
    rhos = (0.0, 0.5, 0.9, 0.99)
    mean_ses = []
    for k, rho in enumerate(rhos):
        total = 0.0
        for i in range(reps):
            rng = make_stream(SeedSpec(6000 + k, i))
            z1 = rng.standard_normal(n)
            z2 = rng.standard_normal(n)
            noise = rng.standard_normal(n)
            c2 = rho * z1 + np.sqrt(1 - rho**2) * z2
            X = np.column_stack([np.ones(n), z1, c2])
            fit = ols_fit(X, z1 + c2 + noise)
            total += float(fit.standard_errors[2])
        mean_ses.append(total / reps)
    ok = all(b > a for a, b in zip(mean_ses, mean_ses[1:]))
    check(ok, "multicollinearity SE inflation",
          "mean covariate SE by rho " +
          ", ".join(f"{r}: {s:.4f}" for r, s in zip(rhos, mean_ses)))
