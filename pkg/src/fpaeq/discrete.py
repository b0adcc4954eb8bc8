"""Equilibrium computation for finite bid grids.

A monotone strategy over bids b_1 < ... < b_m is encoded by jump points
0 <= s_0 <= ... <= s_m = 1: a bidder with value v in (s_{j-1}, s_j] bids b_j.
The win probability of bid b_j against n-1 opponents playing the same strategy
is Delta(s_{j-1}, s_j) with

    Delta(x, y) = (1/n) * sum_{i<n} F(x)**(n-1-i) * F(y)**i.

The solver binary-searches the equilibrium utility at the top value v = 1 and
reconstructs the jump points from it (descending over bids, inverting Delta by
bisection where needed).  Output is accepted only when the approximate
equilibrium certificate passes; the worst-case precision parameter from the
analysis is never required in practice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cdf import PiecewisePolyCdf, strongly_increasing_transform
from .errors import DomainError, PrecisionError
from .rationals import parse_rational

ZERO = Fraction(0)
ONE = Fraction(1)

EQUAL_UTILITY_TOL = Fraction(1, 2**40)  # slack for U_{i-1} = U_i on merged jumps


@dataclass(frozen=True)
class BidGrid:
    bids: tuple[Fraction, ...]

    def __post_init__(self):
        bids = tuple(parse_rational(b) for b in self.bids)
        object.__setattr__(self, "bids", bids)
        if not bids:
            raise DomainError("bid grid must be nonempty")
        if bids[0] != 0:
            raise DomainError("lowest bid must be 0")
        if any(a >= b for a, b in zip(bids, bids[1:])):
            raise DomainError("bids must be strictly increasing")
        if bids[-1] >= 1:
            raise DomainError("highest bid must be < 1")

    @property
    def m(self) -> int:
        return len(self.bids)

    @property
    def alpha(self) -> Fraction:
        """Minimum gap between consecutive bids, with sentinel b_{m+1} = 1."""
        extended = self.bids + (ONE,)
        return min(b - a for a, b in zip(extended, extended[1:]))


@dataclass(frozen=True)
class JumpPointStrategy:
    s: tuple
    utilities: tuple

    def bid_index(self, v) -> int:
        """1-based index j of the bid taken at value v: v in (s_{j-1}, s_j] -> j."""
        m = len(self.s) - 1
        if v <= self.s[0]:
            return 1
        for j in range(1, m + 1):
            if self.s[j - 1] < v <= self.s[j]:
                return j
        return m

    def as_bid_function(self, grid: BidGrid):
        return lambda v: grid.bids[self.bid_index(v) - 1]


@dataclass
class SolveParams:
    """Practical precision controls; `delta=None` picks a certificate-gated default."""

    delta: Optional[Fraction] = None
    precision_bits: Optional[int] = None
    max_retries: int = 4
    expose_transformed: bool = False


@dataclass(frozen=True)
class ConditionResidual:
    condition: int  # 1, 2, or 3
    index: int  # bid index i in [m]
    residual: object
    bound: object


@dataclass(frozen=True)
class Certificate:
    gamma: object
    passed: bool
    max_residual: object
    residuals: tuple[ConditionResidual, ...]

    @property
    def implied_epsilon(self):
        """A passing certificate implies a (2 * gamma * m)-approximate equilibrium."""
        return 2 * self.gamma * len({r.index for r in self.residuals})


@dataclass(frozen=True)
class SolveResult:
    strategy: JumpPointStrategy
    certificate: Certificate
    epsilon: Fraction
    delta_used: Fraction
    transformed_cdf: Optional[object] = None


def delta_win_prob(F, n: int, x, y):
    """Win probability of a bid whose opponents' jump interval around it is [x, y]."""
    if x > y:
        raise DomainError("need x <= y")
    fx, fy = F(x), F(y)
    total = 0 * fy
    for i in range(n):
        total += fx ** (n - 1 - i) * fy**i
    return total / n


def utility(F, n: int, s: JumpPointStrategy | Sequence, grid: BidGrid, j: int, v):
    """Interim utility of bidding b_j at value v against the jump-point strategy."""
    sv = s.s if isinstance(s, JumpPointStrategy) else s
    if not 1 <= j <= grid.m:
        raise DomainError(f"bid index {j} out of range [1, {grid.m}]")
    return (v - grid.bids[j - 1]) * delta_win_prob(F, n, sv[j - 1], sv[j])


def compute_strategy(F, L, n: int, grid: BidGrid, U, delta):
    """Reconstruct jump points from a candidate top-value utility U.

    Walks bids from the highest down.  At each bid either the whole remaining
    interval pools (utility already below U), the bid is skipped down to its
    own level (utility exceeds U even at the bottom), or the jump point is
    located by bisection so that bidding here at the jump yields utility U
    within delta.
    """
    if delta <= 0:
        raise DomainError("delta must be positive")
    m = grid.m
    one = ONE if isinstance(U, Fraction) else 1.0
    s = [None] * (m + 1)
    uvec = [None] * (m + 1)
    s[m] = one
    uvec[m] = U
    steps = max(1, math.ceil(math.log2(max(2, float(n * L) / float(delta)))))
    for i in range(m, 0, -1):
        b = grid.bids[i - 1]
        si, ui = s[i], uvec[i]
        margin = si - b
        if margin * delta_win_prob(F, n, si, si) <= ui:
            s[i - 1] = si
            uvec[i - 1] = ui
        elif margin * delta_win_prob(F, n, b, si) >= ui:
            s[i - 1] = b
            uvec[i - 1] = 0 * ui
        else:
            lo, hi = b, si
            for _ in range(steps):
                mid = (lo + hi) / 2
                if margin * delta_win_prob(F, n, mid, si) < ui:
                    lo = mid
                else:
                    hi = mid
            x = (lo + hi) / 2
            achieved = margin * delta_win_prob(F, n, x, si)
            if abs(achieved - ui) > delta:
                raise PrecisionError(
                    f"bisection residual {abs(achieved - ui)} > delta={delta} at bid {i}; "
                    "increase the step budget (smaller delta) or precision"
                )
            s[i - 1] = x
            uvec[i - 1] = (x - b) * delta_win_prob(F, n, x, si)
    return s, uvec


def check_conditions(F, n: int, grid: BidGrid, s, uvec, gamma) -> Certificate:
    """Approximate-equilibrium certificate; passing implies a 2*gamma*m equilibrium."""
    sv = s.s if isinstance(s, JumpPointStrategy) else tuple(s)
    uv = s.utilities if isinstance(s, JumpPointStrategy) else tuple(uvec)
    residuals = []
    ok = True
    for i in range(1, grid.m + 1):
        b = grid.bids[i - 1]
        lo, hi, u_lo, u_hi = sv[i - 1], sv[i], uv[i - 1], uv[i]
        gap = b - lo  # condition (3): s_{i-1} >= b_i
        residuals.append(ConditionResidual(3, i, max(0 * gap, gap), 0))
        if gap > 0:
            ok = False
        win = delta_win_prob(F, n, min(lo, hi), hi)
        if lo < hi:
            r_top = abs((hi - b) * win - u_hi)
            r_bot = abs((lo - b) * win - u_lo)
            residuals.append(ConditionResidual(1, i, r_top, gamma))
            residuals.append(ConditionResidual(1, i, r_bot, gamma))
            if r_top > gamma or r_bot > gamma:
                ok = False
        else:
            r_eq = abs(u_hi - u_lo)
            r_dev = (hi - b) * delta_win_prob(F, n, hi, hi) - u_hi
            residuals.append(ConditionResidual(2, i, r_eq, EQUAL_UTILITY_TOL))
            residuals.append(ConditionResidual(2, i, max(0 * r_dev, r_dev), gamma))
            if r_eq > EQUAL_UTILITY_TOL or r_dev > gamma:
                ok = False
    max_res = max(r.residual for r in residuals)
    return Certificate(gamma, ok, max_res, tuple(residuals))


def theoretical_delta(eps: Fraction, alpha: Fraction, n: int, L, m: int) -> Fraction:
    """Worst-case sufficient precision from the analysis (astronomically small)."""
    eps, alpha, L = Fraction(eps), Fraction(alpha), Fraction(L)
    return (eps ** (5 * n) * alpha ** (3 * n) / (100 * n**3 * L**4)) ** m


def _binary_search_top_utility(F, L, n, grid, delta):
    """Outer binary search on the top-value utility U (the solver's core loop)."""
    u_lo, u_hi = ZERO, ONE
    s_r, uvec_r = compute_strategy(F, L, n, grid, ONE, delta)
    if s_r[0] == 0:
        raise RuntimeError("internal invariant breach: s_0 = 0 at U = 1")
    while u_hi - u_lo > delta:
        u_mid = (u_lo + u_hi) / 2
        s, uvec = compute_strategy(F, L, n, grid, u_mid, delta)
        if s[0] == 0:
            u_lo = u_mid
        else:
            u_hi = u_mid
            s_r, uvec_r = s, uvec
    return s_r, uvec_r


def solve(F, L, n: int, grid: BidGrid, eps, params: Optional[SolveParams] = None) -> SolveResult:
    """Compute a certified eps-approximate symmetric equilibrium for a finite bid grid.

    The cdf is first mixed with the identity (weight eps/3n) so that it is
    strongly increasing; a certificate under the mixed cdf at accuracy eps/3n
    transfers back to an eps-approximate equilibrium of the original cdf.
    """
    params = params or SolveParams()
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1)")
    if n < 2:
        raise DomainError("need n >= 2 bidders")
    if L is None:
        if not isinstance(F, PiecewisePolyCdf):
            raise DomainError("a Lipschitz constant is required for oracle cdfs")
        L = F.lipschitz_bound()
    mix = eps / (3 * n)
    F_mixed = strongly_increasing_transform(F, mix)
    L_mixed = max(ONE, Fraction(L))
    eps_run = mix  # accuracy target under the mixed cdf
    gamma = eps_run / (2 * grid.m)
    if params.delta is not None:
        delta = Fraction(params.delta)
    elif params.precision_bits is not None:
        delta = Fraction(1, 2**params.precision_bits)
    else:
        delta = min(gamma / 4, Fraction(1, 2**30))
    last_error = None
    for _ in range(params.max_retries + 1):
        try:
            s_r, uvec_r = _binary_search_top_utility(F_mixed, L_mixed, n, grid, delta)
        except PrecisionError as exc:
            last_error = exc
            delta /= 2**8
            continue
        s_star = (ZERO,) + tuple(s_r[1:])
        strategy = JumpPointStrategy(s_star, tuple(uvec_r))
        cert = check_conditions(F_mixed, n, grid, strategy, None, gamma)
        if cert.passed:
            return SolveResult(
                strategy,
                cert,
                eps,
                delta,
                F_mixed if params.expose_transformed else None,
            )
        last_error = PrecisionError(
            f"certificate failed at delta={delta} (max residual {cert.max_residual})"
        )
        delta /= 2**8
    raise PrecisionError(
        f"could not certify an equilibrium after {params.max_retries + 1} attempts: {last_error}"
    )
