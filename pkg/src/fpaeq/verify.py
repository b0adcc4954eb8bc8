"""Independent certification of candidate equilibrium strategies.

Three routes, deliberately independent of the solvers they audit:

* exact deviation regret over a finite bid grid (rational arithmetic),
* grid-based deviation regret for continuous monotone bid functions, with the
  deviation's winning threshold recovered by bisection of the bid function,
* Monte Carlo ex-post play with uniform tie-breaking, on a counter-based
  deterministic generator so runs are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .cdf import PiecewisePolyCdf
from .discrete import BidGrid, JumpPointStrategy, delta_win_prob, utility
from .errors import DomainError

INVERSION_STEPS = 60  # bisection steps when inverting a monotone bid function
SAMPLING_STEPS = 50  # bisection steps for inverse-cdf sampling


@dataclass(frozen=True)
class RegretReport:
    max_regret: object
    argmax: Optional[tuple] = None  # (value, deviation bid)
    samples: tuple = ()
    method: str = "exact"
    trials: Optional[int] = None
    seed: Optional[int] = None
    sigma: Optional[float] = None


@dataclass(frozen=True)
class PropertyCheck:
    passed: bool
    overbid_witnesses: tuple = ()
    monotonicity_witnesses: tuple = ()


def _strategy_values(s: Sequence) -> tuple:
    sv = tuple(s)
    if any(a > b for a, b in zip(sv, sv[1:])):
        raise DomainError("jump points must be nondecreasing")
    if sv[-1] != 1:
        raise DomainError("last jump point must be 1")
    return sv


def epsilon_bne_check_cdfpa(
    F, n: int, grid: BidGrid, s: JumpPointStrategy, value_grid_size: int = 64
) -> RegretReport:
    """Brute-force deviation regret over all grid bids, exact for rational inputs.

    The value grid contains every jump point, every bid, midpoints of
    consecutive distinct jump points, and a uniform grid; regret maxima of
    step strategies occur at such interval endpoints.
    """
    sv = _strategy_values(s.s)
    values = set(sv) | set(grid.bids)
    values |= {Fraction(i, value_grid_size) for i in range(value_grid_size + 1)}
    values |= {(a + b) / 2 for a, b in zip(sv, sv[1:]) if a < b}
    best = None
    samples = []
    for v in sorted(values):
        own = utility(F, n, s, grid, s.bid_index(v), v)
        for j in range(1, grid.m + 1):
            regret = utility(F, n, s, grid, j, v) - own
            if best is None or regret > best[0]:
                best = (regret, (v, grid.bids[j - 1]))
        samples.append(max(utility(F, n, s, grid, j, v) - own for j in range(1, grid.m + 1)))
    max_regret = max(best[0], 0 * best[0])
    return RegretReport(max_regret, best[1], tuple(samples), method="exact")


def _float_cdf(F) -> Callable:
    """Float evaluator accepting scalars or numpy arrays."""
    if isinstance(F, PiecewisePolyCdf):
        bps = np.array([float(b) for b in F.breakpoints])
        coeffs = np.array([[float(c) for c in row] for row in F.coeffs])  # (pieces, deg+1)

        def ev(x):
            arr = np.asarray(x, dtype=float)
            j = np.clip(np.searchsorted(bps, arr) - 1, 0, len(coeffs) - 1)
            rows = coeffs[j]  # (..., deg+1) via fancy indexing
            acc = np.zeros_like(arr)
            for k in range(coeffs.shape[1] - 1, -1, -1):
                acc = acc * arr + rows[..., k]
            return acc if arr.ndim else float(acc)

        return ev

    def scalar(x):
        arr = np.asarray(x, dtype=float)
        if not arr.ndim:
            return float(F(float(arr)))
        out = np.empty(arr.shape)
        flat_in, flat_out = arr.ravel(), out.ravel()
        for i, v in enumerate(flat_in):
            flat_out[i] = float(F(float(v)))
        return out

    return scalar


def _support_infimum_float(F, fcdf) -> float:
    if isinstance(F, PiecewisePolyCdf):
        return float(F.support_infimum())
    if fcdf(0.0) > 0:
        return 0.0
    lo, hi = 0.0, 1.0
    for _ in range(SAMPLING_STEPS):
        mid = (lo + hi) / 2
        if fcdf(mid) > 0:
            hi = mid
        else:
            lo = mid
    return lo


def epsilon_bne_check_ccfpa(
    F,
    n: int,
    bid_fn: Callable,
    deviation_grid_size: int = 256,
    value_grid_size: int = 128,
) -> RegretReport:
    """Deviation regret for a continuous monotone bid function.

    A deviation to bid b wins against all opponent values below
    z = sup {v' : bid_fn(v') <= b}, found by bisection; utility is then
    F(z)**(n-1) * (v - b).  The sup over continuous deviations is approximated
    on a grid, so the reported regret carries the grid resolution.
    """
    fcdf = _float_cdf(F)
    probe = [i / 512 for i in range(513)]
    bids = [float(bid_fn(p)) for p in probe]
    for (p, ba), bb in zip(zip(probe, bids), bids[1:]):
        if bb < ba - 1e-12:
            raise DomainError(f"bid function decreases near v={p}")
        if ba > p + 1e-12:
            raise DomainError(f"bid function overbids at v={p}")

    def threshold(b: float) -> float:
        if float(bid_fn(1.0)) <= b:
            return 1.0
        if float(bid_fn(0.0)) > b:
            return 0.0
        lo, hi = 0.0, 1.0
        for _ in range(INVERSION_STEPS):
            mid = (lo + hi) / 2
            if float(bid_fn(mid)) <= b:
                lo = mid
            else:
                hi = mid
        return lo

    v_low = _support_infimum_float(F, fcdf)
    deviations = [i / deviation_grid_size for i in range(deviation_grid_size + 1)]
    dev_power = [fcdf(threshold(b)) ** (n - 1) for b in deviations]
    best = (float("-inf"), None)
    samples = []
    for i in range(value_grid_size + 1):
        v = v_low + (1 - v_low) * i / value_grid_size
        own = fcdf(v) ** (n - 1) * (v - float(bid_fn(v)))
        reg_v = float("-inf")
        for b, p in zip(deviations, dev_power):
            regret = p * (v - b) - own
            reg_v = max(reg_v, regret)
            if regret > best[0]:
                best = (regret, (v, b))
        samples.append(reg_v)
    return RegretReport(max(best[0], 0.0), best[1], tuple(samples), method="grid")


def _vectorized_strategy(strategy, grid: Optional[BidGrid]):
    if isinstance(strategy, JumpPointStrategy):
        if grid is None:
            raise DomainError("a bid grid is required for jump-point strategies")
        s = np.array([float(x) for x in strategy.s])
        bids = np.array([float(b) for b in grid.bids])

        def apply(v: np.ndarray) -> np.ndarray:
            j = np.searchsorted(s[1:], v, side="left")
            return bids[np.minimum(j, len(bids) - 1)]

        return apply
    return np.vectorize(lambda v: float(strategy(v)))


def _sample_values(fcdf, u: np.ndarray) -> np.ndarray:
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    for _ in range(SAMPLING_STEPS):
        mid = (lo + hi) / 2
        below = fcdf(mid) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return (lo + hi) / 2


def monte_carlo_utility(
    F, n: int, strategy, v: float, b: float, trials: int, seed: int, grid: Optional[BidGrid] = None
):
    """Ex-post utility estimate for value v deviating to bid b; returns (mean, std_err)."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    fcdf = _float_cdf(F)
    apply = _vectorized_strategy(strategy, grid)
    rng = np.random.Generator(np.random.Philox(seed))
    u = rng.random((trials, n - 1))
    opp_values = _sample_values(fcdf, u)
    opp_bids = apply(opp_values)
    top = opp_bids.max(axis=1)
    n_eq = (opp_bids == b).sum(axis=1)
    share = np.where(top < b, 1.0, np.where(top == b, 1.0 / (1.0 + n_eq), 0.0))
    payoff = (v - b) * share
    return float(payoff.mean()), float(payoff.std(ddof=1) / np.sqrt(trials))


def monte_carlo_regret(
    F,
    n: int,
    strategy,
    trials: int,
    seed: int,
    grid: Optional[BidGrid] = None,
    value_grid_size: int = 8,
    deviation_grid_size: int = 8,
) -> RegretReport:
    """Monte Carlo regret estimate over a small (value, deviation) grid.

    Deterministic given the seed; per-pair seeds derive from the root seed.
    The reported sigma is the largest standard error across estimates, so the
    regret is max_regret +- 3*sigma.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    apply = _vectorized_strategy(strategy, grid)
    values = [i / value_grid_size for i in range(value_grid_size + 1)]
    deviations = [i / deviation_grid_size for i in range(deviation_grid_size + 1)]
    best = (float("-inf"), None)
    worst_sigma = 0.0
    sub = 0
    for v in values:
        own_bid = float(apply(np.array([v]))[0])
        own, s_own = monte_carlo_utility(F, n, strategy, v, own_bid, trials, seed * 1_000_003 + sub, grid)
        sub += 1
        for b in deviations:
            est, s_dev = monte_carlo_utility(F, n, strategy, v, b, trials, seed * 1_000_003 + sub, grid)
            sub += 1
            regret = est - own
            worst_sigma = max(worst_sigma, s_own + s_dev)
            if regret > best[0]:
                best = (regret, (v, b))
    return RegretReport(
        max(best[0], 0.0), best[1], (), method="monte-carlo", trials=trials, seed=seed, sigma=worst_sigma
    )


def monotone_no_overbid_check(strategy: Callable, samples: int = 10_000) -> PropertyCheck:
    """Sampled check that a strategy never overbids and is nondecreasing."""
    overbids, decreases = [], []
    prev = None
    for i in range(samples + 1):
        v = i / samples
        b = strategy(v)
        if b > v + 1e-12:
            overbids.append((v, b))
        if prev is not None and b < prev - 1e-12:
            decreases.append((v, b))
        prev = b
        if len(overbids) > 4 and len(decreases) > 4:
            break
    return PropertyCheck(not overbids and not decreases, tuple(overbids[:5]), tuple(decreases[:5]))
