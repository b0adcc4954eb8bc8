"""Symmetric Bayes-Nash equilibria of single-item first-price auctions.

Solvers for three input models -- black-box cdf oracles, explicit
piecewise-polynomial cdfs, and finite bid grids -- plus independent verifiers
that certify the regret of any candidate strategy.
"""

from .cdf import (
    AdversarialCdfParams,
    CdfOracle,
    PiecewisePolyCdf,
    ValidationReport,
    cdf_from_json,
    eval_cdf,
    make_adversarial_cdf,
    oracle_from_piecewise,
    power_cdf,
    query_count,
    strongly_increasing_transform,
    support_infimum,
    uniform_cdf,
    validate,
    wrap_oracle,
)
from .blackbox import BidEvaluation, BlackBoxPlan, bid, bid_function, precompute, riemann_bounds
from .discrete import (
    BidGrid,
    Certificate,
    JumpPointStrategy,
    SolveParams,
    SolveResult,
    check_conditions,
    compute_strategy,
    delta_win_prob,
    solve,
    theoretical_delta,
    utility,
)
from .errors import ConsistencyError, DomainError, PrecisionError
from .explicit import (
    IntegralTable,
    PowerTable,
    RationalBidFunction,
    canonical_bid_function,
    eval_canonical,
    integral_coefficients,
    power_coefficients,
    rbf_from_json,
    rbf_to_json,
)
from .verify import (
    PropertyCheck,
    RegretReport,
    epsilon_bne_check_ccfpa,
    epsilon_bne_check_cdfpa,
    monotone_no_overbid_check,
    monte_carlo_regret,
    monte_carlo_utility,
)

__version__ = "0.1.0"
