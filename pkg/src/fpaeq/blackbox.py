"""Approximate equilibrium bidding for continuous bids under cdf oracle access.

A plan precomputes the cdf (raised to the n-1 power) on a regular grid of
width 1/ceil(1/eps).  Each subsequent bid evaluation issues exactly one cdf
query (at the bidder's own value) and combines it with the tabulated powers:
the bid is the upper Riemann sum of the win-probability deficit

    g_x(t) = 1 - F(t)**(n-1) / F(x)**(n-1),

whose integral over [0, x] is the exact equilibrium bid.  The upper/lower sums
sandwich the exact bid and differ by at most eps.

Arithmetic follows the oracle: an exact-rational oracle yields exact rational
plans and bids, a float oracle yields float ones.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .cdf import CdfOracle
from .errors import DomainError


@dataclass(frozen=True)
class BlackBoxPlan:
    n: int
    epsilon: Fraction
    K: int
    eps_hat: Fraction
    grid: tuple
    power_table: tuple
    prefix: tuple  # prefix[j] = sum(power_table[:j])

    def power_prefix(self, j: int):
        return self.prefix[j]


@dataclass(frozen=True)
class BidEvaluation:
    x: object
    bid: object
    lower: object
    upper: object
    queries_used: int


def precompute(oracle: CdfOracle, n: int, epsilon, *, query_endpoints: bool = False) -> BlackBoxPlan:
    """Tabulate F(a_j)**(n-1) on the grid a_j = j/K, K = ceil(1/eps).

    Issues K-1 queries (grid interior); F(0) = 0 and F(1) = 1 are known for
    continuous cdfs on [0, 1].  With ``query_endpoints`` the a_0 query is
    issued as well (strict counting mode).
    """
    if n < 2:
        raise DomainError("need n >= 2 bidders")
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    if epsilon > 1:
        warnings.warn("epsilon > 1 clamped to 1")
        epsilon = 1
    K = math.ceil(1 / Fraction(epsilon))
    eps_hat = Fraction(1, K)
    grid = tuple(Fraction(j, K) for j in range(K + 1))
    f0 = oracle(grid[0]) if query_endpoints else 0
    values = [f0] + [oracle(a) for a in grid[1:-1]] + [1]
    power_table = tuple(v ** (n - 1) for v in values)
    prefix, acc = [0], 0
    for p in power_table:
        acc = acc + p
        prefix.append(acc)
    return BlackBoxPlan(n, Fraction(epsilon), K, eps_hat, grid, power_table, tuple(prefix))


def _evaluate(plan: BlackBoxPlan, oracle: CdfOracle, x) -> BidEvaluation:
    if not 0 <= x <= 1:
        raise DomainError(f"x={x} outside [0, 1]")
    fx = oracle(x)
    if fx == 0:
        # x is weakly below the support: bidding the value is exact
        return BidEvaluation(x, x, x, x, 1)
    k_x = min(math.floor(x * plan.K), plan.K)
    fn = fx ** (plan.n - 1)
    partial = x - k_x * plan.eps_hat
    inner = plan.eps_hat * plan.prefix[k_x] + partial * plan.power_table[k_x]
    upper = x - inner / fn
    # lower Riemann sum: right endpoints; the [a_{k_x}, x] term vanishes (g_x(x) = 0)
    lower = plan.eps_hat * k_x - plan.eps_hat * (plan.prefix[k_x + 1] - plan.power_table[0]) / fn
    return BidEvaluation(x, upper, lower, upper, 1)


def bid(plan: BlackBoxPlan, oracle: CdfOracle, x) -> BidEvaluation:
    """One-query bid evaluation; the bid equals the upper Riemann sum."""
    return _evaluate(plan, oracle, x)


def riemann_bounds(plan: BlackBoxPlan, oracle: CdfOracle, x):
    """Lower/upper Riemann sums sandwiching the exact equilibrium bid."""
    ev = _evaluate(plan, oracle, x)
    return ev.lower, ev.upper


def bid_function(plan: BlackBoxPlan, oracle: CdfOracle):
    """Value -> bid callable (each call costs one oracle query)."""
    return lambda x: _evaluate(plan, oracle, x).bid
