import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from balancelab.errors import ConfigError, DataError, SchemaError
from balancelab.matching import (
    CostMatrix,
    ItemPool,
    cost_matrix,
    greedy_match,
    optimal_match,
    quantile_blocks,
)
from balancelab.stats import describe
from balancelab.streams import SeedSpec, make_stream


def brute_force_minimum(values):
    """Exhaustive assignment optimum over all injections rows -> columns."""
    n, m = values.shape
    best = np.inf
    for cols in itertools.permutations(range(m), n):
        best = min(best, sum(values[i, j] for i, j in enumerate(cols)))
    return best


def matrix(values):
    values = np.asarray(values, dtype=float)
    n, m = values.shape
    return CostMatrix(values=values, row_ids=[f"a{i}" for i in range(n)],
                      col_ids=[f"b{j}" for j in range(m)])


class TestCostMatrix:
    def test_identical_items_cost_zero(self):
        # a second item per pool provides nonzero pooled SD context
        a = ItemPool(ids=["x", "x2"], covariates={"f": [1.0, 2.0]})
        b = ItemPool(ids=["y", "y2"], covariates={"f": [1.0, 3.0]})
        c = cost_matrix(a, b, {"f": 1.0})
        assert c.values[0, 0] == pytest.approx(0.0)

    def test_one_pooled_sd_costs_one(self):
        a = ItemPool(ids=["x1", "x2"], covariates={"f": [0.0, 2.0]})
        b = ItemPool(ids=["y1", "y2"], covariates={"f": [0.0, 2.0]})
        sd = np.std([0.0, 2.0, 0.0, 2.0], ddof=1)
        c = cost_matrix(a, b, {"f": 1.0})
        assert c.values[0, 1] == pytest.approx(2.0 / sd)

    def test_hand_built_three_by_three(self):
        a = ItemPool(ids=list("abc"), covariates={"u": [0.0, 1.0, 2.0], "v": [5.0, 5.0, 8.0]})
        b = ItemPool(ids=list("xyz"), covariates={"u": [0.0, 2.0, 4.0], "v": [5.0, 6.0, 7.0]})
        sd_u = np.std([0, 1, 2, 0, 2, 4], ddof=1)
        sd_v = np.std([5, 5, 8, 5, 6, 7], ddof=1)
        c = cost_matrix(a, b, {"u": 1.0, "v": 2.0})
        expected_01 = abs(0 - 2) / sd_u + 2.0 * abs(5 - 6) / sd_v
        assert c.values[0, 1] == pytest.approx(expected_01)
        assert c.values[0, 0] == pytest.approx(0.0)

    def test_schema_mismatch(self):
        a = ItemPool(ids=["x"], covariates={"f": [1.0]})
        b = ItemPool(ids=["y"], covariates={"g": [1.0]})
        with pytest.raises(SchemaError):
            cost_matrix(a, b, {"f": 1.0})

    def test_missing_weight(self):
        a = ItemPool(ids=["x"], covariates={"f": [1.0]})
        b = ItemPool(ids=["y"], covariates={"f": [2.0]})
        with pytest.raises(SchemaError):
            cost_matrix(a, b, {})

    def test_zero_sd_covariate_warns_and_contributes_nothing(self):
        a = ItemPool(ids=["x1", "x2"], covariates={"flat": [3.0, 3.0]})
        b = ItemPool(ids=["y1", "y2"], covariates={"flat": [3.0, 3.0]})
        with pytest.warns(UserWarning):
            c = cost_matrix(a, b, {"flat": 1.0})
        assert np.all(c.values == 0.0)


class TestOptimalMatch:
    def test_diagonal_dominant(self):
        m = optimal_match(matrix([[0.0, 9.0], [9.0, 0.0]]))
        assert [(r, c) for r, c, _ in m.pairs] == [("a0", "b0"), ("a1", "b1")]
        assert m.total_cost == 0.0

    def test_empty(self):
        m = optimal_match(matrix(np.zeros((0, 3))))
        assert m.pairs == []
        assert m.total_cost == 0.0

    def test_rows_must_be_smaller_side(self):
        with pytest.raises(DataError):
            optimal_match(matrix(np.zeros((3, 2))))

    def test_square_matches_brute_force(self):
        rng = make_stream(SeedSpec(71, 0))
        for _ in range(25):
            values = rng.random((6, 6))
            assert optimal_match(matrix(values)).total_cost == pytest.approx(
                brute_force_minimum(values)
            )

    def test_rectangular_matches_brute_force(self):
        rng = make_stream(SeedSpec(72, 0))
        for _ in range(25):
            values = rng.random((4, 7))
            m = optimal_match(matrix(values))
            assert len(m.pairs) == 4
            assert len(m.unmatched_cols) == 3
            assert m.total_cost == pytest.approx(brute_force_minimum(values))

    def test_deterministic_under_ties(self):
        values = np.ones((3, 3))
        assert optimal_match(matrix(values)) == optimal_match(matrix(values))


class TestGreedyMatch:
    def test_greedy_trap(self):
        costs = matrix([[1.0, 2.0], [1.0, 10.0]])
        assert greedy_match(costs).total_cost == pytest.approx(11.0)
        assert optimal_match(costs).total_cost == pytest.approx(3.0)

    def test_zero_caliper_excludes_everything(self):
        m = greedy_match(matrix([[1.0, 2.0], [3.0, 4.0]]), caliper=0.0)
        assert m.pairs == []
        assert m.unmatched_rows == ["a0", "a1"]
        assert m.unmatched_cols == ["b0", "b1"]

    def test_caliper_partial(self):
        m = greedy_match(matrix([[0.1, 5.0], [5.0, 5.0]]), caliper=1.0)
        assert [(r, c) for r, c, _ in m.pairs] == [("a0", "b0")]
        assert m.unmatched_rows == ["a1"]

    def test_negative_caliper(self):
        with pytest.raises(ConfigError):
            greedy_match(matrix([[1.0]]), caliper=-1.0)

    @given(arrays(np.float64, (5, 5), elements=st.floats(0, 100)))
    @settings(max_examples=60, deadline=None)
    def test_greedy_never_beats_optimal(self, values):
        costs = matrix(values)
        assert optimal_match(costs).total_cost <= greedy_match(costs).total_cost + 1e-9


class TestQuantileBlocks:
    def pool(self, values):
        return ItemPool(ids=[f"i{k}" for k in range(len(values))],
                        covariates={"f": values})

    def test_single_block(self):
        assert quantile_blocks(self.pool([3.0, 1.0, 2.0]), "f", 1) == [0, 0, 0]

    def test_full_stratification(self):
        labels = quantile_blocks(self.pool([3.0, 1.0, 2.0]), "f", 3)
        assert labels == [2, 0, 1]

    def test_even_split_of_nine(self):
        values = [float(v) for v in (9, 1, 5, 3, 7, 2, 8, 4, 6)]
        labels = quantile_blocks(self.pool(values), "f", 3)
        order = np.argsort(values)
        sorted_labels = [labels[i] for i in order]
        assert sorted_labels == [0, 0, 0, 1, 1, 1, 2, 2, 2]

    def test_ties_fall_to_lower_block(self):
        labels = quantile_blocks(self.pool([1.0, 1.0, 1.0, 2.0]), "f", 2)
        assert labels == [0, 0, 0, 1]

    def test_contract_errors(self):
        with pytest.raises(SchemaError):
            quantile_blocks(self.pool([1.0]), "nope", 1)
        with pytest.raises(ConfigError):
            quantile_blocks(self.pool([1.0, 2.0]), "f", 3)


def test_matching_improves_balance_usually():
    # matched subsets should not look less balanced than the raw pools
    rng = make_stream(SeedSpec(73, 0))
    wins = 0
    trials = 200
    failures = []
    for trial in range(trials):
        a_vals = rng.normal(size=12)
        b_vals = rng.normal(size=16) + 0.8
        a = ItemPool(ids=[f"a{k}" for k in range(12)], covariates={"f": a_vals})
        b = ItemPool(ids=[f"b{k}" for k in range(16)], covariates={"f": b_vals})
        m = optimal_match(cost_matrix(a, b, {"f": 1.0}))
        matched_b = [b_vals[int(c[1:])] for _, c, _ in m.pairs]
        before = abs(describe(a_vals, b_vals).cohens_d)
        after_summary = describe(a_vals, matched_b)
        after = abs(after_summary.cohens_d) if after_summary.cohens_d is not None else 0.0
        if after <= before + 1e-9:
            wins += 1
        else:
            failures.append(trial)
    if failures:
        print(f"balance-improvement misses at trials {failures} (seed root 73)")
    assert wins >= 0.95 * trials
