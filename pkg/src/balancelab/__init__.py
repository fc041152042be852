"""balancelab: nuisance-variable control without significance-testing the
nuisance.

Quantifies the error rates of the balance-check habit (testing confounds
for significance and discarding "confounded" sets), and provides the
replacements: descriptive balance diagnostics, covariate-adjusted
regression, and optimal matching.
"""

from .datagen import Dataset, SimulationConfig, generate_dataset
from .matching import ItemPool, cost_matrix, greedy_match, optimal_match, quantile_blocks
from .procedures import (
    MonteCarloSummary,
    ReplicateOutcome,
    run_adjusted_analysis,
    run_balance_gate,
    run_grid,
    run_naive_analysis,
    run_replicate,
    run_simulation,
)
from .report import BalanceReport, build_balance_report
from .stats import correlation_matrix, describe, ols_fit, student_t_cdf, welch_t_test
from .streams import SeedSpec, make_stream, sample_standard_normal

__version__ = "0.1.0"
