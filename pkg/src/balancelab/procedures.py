"""The three competing analysis pipelines and the Monte Carlo engine.

Pipelines, per simulated study:

* balance gate: Welch test on the covariate by group, the flawed
  significance filter this toolkit exists to discredit;
* naive analysis: Welch test on the outcome by group, ignoring the
  covariate, whose estimate absorbs the confound;
* adjusted analysis: OLS of outcome on [intercept, group, covariate],
  whose group coefficient is the unconfounded estimate.

A balance-gate rejection is counted as *unnecessary* when the gate flags
the study as confounded even though the covariate-adjusted analysis
reaches the ground-truth-correct conclusion about the manipulation
(significant when d_manip != 0, nonsignificant when d_manip == 0): the
study would have been discarded despite being fully recoverable.

Replicates are embarrassingly parallel. Each replicate owns the stream
(config.seed, replicate_index), and aggregation runs in replicate order,
so summaries are bit-identical for any worker count.
"""

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from .datagen import Dataset, SimulationConfig, replicate_dataset
from .errors import ConfigError
from .stats import RegressionFit, TestResult, ols_fit, welch_t_test

__all__ = [
    "ReplicateOutcome",
    "MonteCarloSummary",
    "run_balance_gate",
    "run_naive_analysis",
    "run_adjusted_analysis",
    "run_replicate",
    "run_simulation",
    "run_grid",
    "summary_to_json",
    "summaries_to_csv",
    "GRID_AXES",
]

GRID_AXES = ("n_per_group", "d_manip", "d_conf", "r")

SUMMARY_CSV_COLUMNS = (
    "n_per_group", "d_manip", "d_conf", "r",
    "alpha_balance", "alpha_outcome", "n_replicates", "seed",
    "flag_rate", "unnecessary_flag_rate",
    "naive_power_or_type1", "adjusted_power_or_type1",
    "mean_naive_estimate", "mean_adjusted_estimate",
)


@dataclass(frozen=True)
class ReplicateOutcome:
    """All three pipelines' verdicts on one simulated study."""

    replicate_index: int
    balance_p: float
    balance_flagged: bool
    naive_p: float
    naive_significant: bool
    naive_estimate: float
    adjusted_p: float
    adjusted_significant: bool
    adjusted_estimate: float
    unnecessary_flag: bool


@dataclass(frozen=True)
class MonteCarloSummary:
    """Rates and mean estimates aggregated over all replicates."""

    config: SimulationConfig
    n_replicates: int
    flag_rate: float
    unnecessary_flag_rate: float
    naive_power_or_type1: float
    adjusted_power_or_type1: float
    mean_naive_estimate: float
    mean_adjusted_estimate: float
    wall_time_s: float


def run_balance_gate(data: Dataset, alpha_balance: float) -> tuple:
    """Welch test on the covariate by group; flagged iff p < alpha."""
    a, b = data.by_group("covariate")
    result = welch_t_test(a, b)
    return result.p_value, result.p_value < alpha_balance


def run_naive_analysis(data: Dataset, alpha_outcome: float) -> TestResult:
    """Welch test on the outcome by group, covariate ignored.

    ``estimate`` is mean(group 1) - mean(group 0), so a positive confound
    inflates it by r * d_conf.
    """
    y0, y1 = data.by_group("outcome")
    return welch_t_test(y1, y0)


def run_adjusted_analysis(data: Dataset, alpha_outcome: float) -> RegressionFit:
    """OLS of outcome on [intercept, group, covariate].

    Index 1 of the fit is the adjusted manipulation estimate, index 2 the
    covariate effect.
    """
    n = len(data.group)
    design = np.column_stack([np.ones(n), data.group.astype(float), data.covariate])
    return ols_fit(design, data.outcome)


def run_replicate(config: SimulationConfig, replicate_index: int) -> ReplicateOutcome:
    """Generate one study and run all three pipelines on it."""
    data = replicate_dataset(config, replicate_index)

    balance_p, balance_flagged = run_balance_gate(data, config.alpha_balance)
    naive = run_naive_analysis(data, config.alpha_outcome)
    fit = run_adjusted_analysis(data, config.alpha_outcome)

    naive_significant = naive.p_value < config.alpha_outcome
    adjusted_p = float(fit.p_values[1])
    adjusted_significant = adjusted_p < config.alpha_outcome
    truth_recovered = adjusted_significant if config.d_manip != 0 else not adjusted_significant
    return ReplicateOutcome(
        replicate_index=replicate_index,
        balance_p=balance_p,
        balance_flagged=balance_flagged,
        naive_p=naive.p_value,
        naive_significant=naive_significant,
        naive_estimate=naive.estimate,
        adjusted_p=adjusted_p,
        adjusted_significant=adjusted_significant,
        adjusted_estimate=float(fit.coefficients[1]),
        unnecessary_flag=balance_flagged and truth_recovered,
    )


def _run_chunk(config: SimulationConfig, indices: list) -> list:
    return [run_replicate(config, i) for i in indices]


def _aggregate(config: SimulationConfig, outcomes: list, wall_time_s: float) -> MonteCarloSummary:
    outcomes = sorted(outcomes, key=lambda o: o.replicate_index)
    n = len(outcomes)
    flag = sum(o.balance_flagged for o in outcomes)
    unnecessary = sum(o.unnecessary_flag for o in outcomes)
    naive_sig = sum(o.naive_significant for o in outcomes)
    adjusted_sig = sum(o.adjusted_significant for o in outcomes)
    naive_sum = 0.0
    adjusted_sum = 0.0
    for o in outcomes:  # fixed-order float sums keep the result worker-invariant
        naive_sum += o.naive_estimate
        adjusted_sum += o.adjusted_estimate
    return MonteCarloSummary(
        config=config,
        n_replicates=n,
        flag_rate=flag / n,
        unnecessary_flag_rate=unnecessary / n,
        naive_power_or_type1=naive_sig / n,
        adjusted_power_or_type1=adjusted_sig / n,
        mean_naive_estimate=naive_sum / n,
        mean_adjusted_estimate=adjusted_sum / n,
        wall_time_s=wall_time_s,
    )


def run_simulation(config: SimulationConfig, workers: int = 1) -> MonteCarloSummary:
    """Run all replicates, on ``workers`` processes, and aggregate.

    The summary is invariant under worker count: every replicate draws from
    its own stream and aggregation happens in replicate order.
    """
    if workers < 1:
        raise ConfigError("workers", "must be >= 1")
    start = time.perf_counter()
    indices = list(range(config.n_replicates))
    if workers == 1 or config.n_replicates < 2 * workers:
        outcomes = _run_chunk(config, indices)
    else:
        chunks = [indices[w::workers] for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = [o for part in pool.map(_run_chunk, [config] * workers, chunks)
                        for o in part]
    return _aggregate(config, outcomes, time.perf_counter() - start)


def run_grid(base: SimulationConfig, axis: str, values, workers: int = 1) -> list:
    """One simulation per value of ``axis``, each reseeded from (base.seed, index)."""
    if axis not in GRID_AXES:
        raise ConfigError("grid_axis", f"unknown axis {axis!r}; expected one of {GRID_AXES}")
    summaries = []
    for i, value in enumerate(values):
        child_seed = int(np.random.SeedSequence(base.seed, spawn_key=(i,))
                         .generate_state(1, np.uint64)[0])
        config = replace(base, **{axis: value, "seed": child_seed})
        summaries.append(run_simulation(config, workers=workers))
    return summaries


def summary_dict(summary: MonteCarloSummary, include_timing: bool = False) -> dict:
    """Plain-dict form of a summary; timing is excluded by default so the
    serialization is deterministic for a given config."""
    out = {
        "config": asdict(summary.config),
        "n_replicates": summary.n_replicates,
        "flag_rate": summary.flag_rate,
        "unnecessary_flag_rate": summary.unnecessary_flag_rate,
        "naive_power_or_type1": summary.naive_power_or_type1,
        "adjusted_power_or_type1": summary.adjusted_power_or_type1,
        "mean_naive_estimate": summary.mean_naive_estimate,
        "mean_adjusted_estimate": summary.mean_adjusted_estimate,
    }
    if include_timing:
        out["wall_time_s"] = summary.wall_time_s
    return out


def summary_to_json(summaries, include_timing: bool = False) -> str:
    """Stable JSON for one summary or a list of summaries."""
    if isinstance(summaries, MonteCarloSummary):
        payload = summary_dict(summaries, include_timing)
    else:
        payload = [summary_dict(s, include_timing) for s in summaries]
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def summaries_to_csv(summaries) -> str:
    """One CSV row per summary: config fields, then rates."""
    if isinstance(summaries, MonteCarloSummary):
        summaries = [summaries]
    lines = [",".join(SUMMARY_CSV_COLUMNS)]
    for s in summaries:
        flat = {**asdict(s.config), **summary_dict(s)}
        flat.pop("config", None)
        lines.append(",".join(repr(flat[c]) if isinstance(flat[c], float) else str(flat[c])
                              for c in SUMMARY_CSV_COLUMNS))
    return "\n".join(lines) + "\n"
