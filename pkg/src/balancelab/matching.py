"""Stimulus/subject matching and blocking.

Costs are weighted L1 distances over covariates standardized by the pooled
SD of both pools, so one cost unit is one pooled standard deviation and
weights are unit-free. The optimal matcher solves the rectangular
assignment problem exactly; the greedy matcher is the cheap baseline and
supports a caliper.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ConfigError, DataError, SchemaError

__all__ = [
    "ItemPool",
    "CostMatrix",
    "Matching",
    "cost_matrix",
    "optimal_match",
    "greedy_match",
    "quantile_blocks",
]


@dataclass
class ItemPool:
    """A set of candidate items, each with named real-valued covariates."""

    ids: list
    covariates: dict  # name -> array of per-item values

    def __post_init__(self):
        self.ids = [str(i) for i in self.ids]
        if len(set(self.ids)) != len(self.ids):
            raise DataError("item identifiers must be unique")
        self.covariates = {k: np.asarray(v, dtype=float) for k, v in self.covariates.items()}
        for name, values in self.covariates.items():
            if len(values) != len(self.ids):
                raise DataError(f"covariate {name!r} length does not match item count")

    def __len__(self):
        return len(self.ids)

    @property
    def covariate_names(self):
        return tuple(self.covariates.keys())


@dataclass
class CostMatrix:
    """Pairwise matching costs between two pools."""

    values: np.ndarray
    row_ids: list
    col_ids: list

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.row_ids), len(self.col_ids)):
            raise DataError("cost matrix shape does not match identifier lists")
        if self.values.size and (not np.all(np.isfinite(self.values)) or self.values.min() < 0):
            raise DataError("costs must be finite and non-negative")


@dataclass
class Matching:
    """A one-to-one assignment with its total cost and leftover items."""

    pairs: list  # (row id, col id, cost) triples
    total_cost: float
    unmatched_rows: list = field(default_factory=list)
    unmatched_cols: list = field(default_factory=list)


def cost_matrix(pool_a: ItemPool, pool_b: ItemPool, weights: dict) -> CostMatrix:
    """Weighted standardized-L1 cost between every A item and every B item.

    Standardization uses the pooled (A union B) sample SD per covariate;
    zero-SD covariates contribute nothing and emit a warning.
    """
    if set(pool_a.covariate_names) != set(pool_b.covariate_names):
        raise SchemaError(
            f"pools disagree on covariates: {sorted(pool_a.covariate_names)} "
            f"vs {sorted(pool_b.covariate_names)}"
        )
    missing = set(pool_a.covariate_names) - set(weights)
    if missing:
        raise SchemaError(f"weights missing for covariates: {sorted(missing)}")
    for name, w in weights.items():
        if w < 0:
            raise ConfigError("weights", f"weight for {name!r} must be non-negative")

    costs = np.zeros((len(pool_a), len(pool_b)))
    for name in pool_a.covariate_names:
        a = pool_a.covariates[name]
        b = pool_b.covariates[name]
        sd = np.std(np.concatenate([a, b]), ddof=1) if len(a) + len(b) > 1 else 0.0
        if sd == 0.0:
            warnings.warn(f"covariate {name!r} has zero pooled SD and is ignored in costs")
            continue
        costs += weights[name] * np.abs(a[:, None] - b[None, :]) / sd
    return CostMatrix(values=costs, row_ids=pool_a.ids, col_ids=pool_b.ids)


def optimal_match(costs: CostMatrix) -> Matching:
    """Globally minimum-cost one-to-one assignment of rows to columns.

    Rows must be the smaller side; the caller transposes otherwise. Result
    is deterministic for identical inputs.
    """
    n, m = costs.values.shape
    if n > m:
        raise DataError("rows must be the smaller side; transpose the cost matrix")
    if n == 0:
        return Matching(pairs=[], total_cost=0.0, unmatched_cols=list(costs.col_ids))
    rows, cols = linear_sum_assignment(costs.values)
    order = np.argsort(rows)  # report pairs in row order
    pairs = [
        (costs.row_ids[r], costs.col_ids[c], float(costs.values[r, c]))
        for r, c in zip(rows[order], cols[order])
    ]
    matched_cols = set(cols.tolist())
    return Matching(
        pairs=pairs,
        total_cost=float(costs.values[rows, cols].sum()),
        unmatched_cols=[costs.col_ids[j] for j in range(m) if j not in matched_cols],
    )


def greedy_match(costs: CostMatrix, caliper: float | None = None) -> Matching:
    """Repeatedly match the globally cheapest remaining pair.

    Pairs costlier than ``caliper`` are skipped, which may leave items on
    both sides unmatched. Ties break on (cost, row index, column index).
    """
    if caliper is not None and caliper < 0:
        raise ConfigError("caliper", "must be non-negative")
    n, m = costs.values.shape
    entries = sorted(
        ((float(costs.values[i, j]), i, j) for i in range(n) for j in range(m)),
        key=lambda e: (e[0], e[1], e[2]),
    )
    used_rows, used_cols = set(), set()
    pairs = []
    total = 0.0
    for cost, i, j in entries:
        if caliper is not None and cost > caliper:
            break
        if i in used_rows or j in used_cols:
            continue
        used_rows.add(i)
        used_cols.add(j)
        pairs.append((costs.row_ids[i], costs.col_ids[j], cost))
        total += cost
    return Matching(
        pairs=pairs,
        total_cost=total,
        unmatched_rows=[costs.row_ids[i] for i in range(n) if i not in used_rows],
        unmatched_cols=[costs.col_ids[j] for j in range(m) if j not in used_cols],
    )


def quantile_blocks(pool: ItemPool, covariate: str, k: int) -> list:
    """Partition items into k blocks by empirical quantile of a covariate.

    Block labels are 0..k-1 in increasing covariate order. With distinct
    values block sizes differ by at most one; tied values all land in the
    lower block.
    """
    if covariate not in pool.covariates:
        raise SchemaError(f"unknown covariate {covariate!r}")
    n = len(pool)
    if not (1 <= k <= n):
        raise ConfigError("k", f"must lie in [1, {n}]")
    values = pool.covariates[covariate]
    order = np.argsort(values, kind="stable")
    # positional bins of near-equal size, then pull ties down to the lower bin
    base, extra = divmod(n, k)
    labels_sorted = np.concatenate(
        [np.full(base + (1 if b < extra else 0), b, dtype=int) for b in range(k)]
    )
    sorted_values = values[order]
    for i in range(1, n):
        if sorted_values[i] == sorted_values[i - 1]:
            labels_sorted[i] = labels_sorted[i - 1]
    labels = np.empty(n, dtype=int)
    labels[order] = labels_sorted
    return labels.tolist()
