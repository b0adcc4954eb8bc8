import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import fpaeq as fq
from fpaeq import BidGrid, DomainError, JumpPointStrategy, SolveParams


def grid_of(*bids):
    return BidGrid(tuple(F(b) for b in bids))


class TestBidGrid:
    def test_alpha_includes_sentinel(self):
        g = grid_of("0", "1/4", "1/2")
        assert g.m == 3
        assert g.alpha == F(1, 4)
        assert grid_of("0", "7/8").alpha == F(1, 8)

    def test_invariants(self):
        with pytest.raises(DomainError):
            grid_of("1/4", "1/2")  # lowest bid must be 0
        with pytest.raises(DomainError):
            grid_of("0", "1/2", "1/2")
        with pytest.raises(DomainError):
            grid_of("0", "1")
        with pytest.raises(DomainError):
            BidGrid(())


class TestJumpPointStrategy:
    def test_bid_index_intervals(self):
        s = JumpPointStrategy((F(0), F(1, 3), F(2, 3), F(1)), (F(0),) * 4)
        assert s.bid_index(F(0)) == 1
        assert s.bid_index(F(1, 4)) == 1
        assert s.bid_index(F(1, 3)) == 1
        assert s.bid_index(F(1, 2)) == 2
        assert s.bid_index(F(1)) == 3

    def test_merged_interval_skipped(self):
        s = JumpPointStrategy((F(0), F(1, 2), F(1, 2), F(1)), (F(0),) * 4)
        assert s.bid_index(F(1, 2)) == 1
        assert s.bid_index(F(3, 4)) == 3

    def test_as_bid_function(self):
        g = grid_of("0", "1/4")
        s = JumpPointStrategy((F(0), F(1, 2), F(1)), (F(0),) * 3)
        f = s.as_bid_function(g)
        assert f(F(1, 4)) == 0
        assert f(F(3, 4)) == F(1, 4)


class TestDeltaWinProb:
    def test_uniform_pair(self, uniform):
        # n = 2: Delta(x, y) = (x + y)/2
        assert fq.delta_win_prob(uniform, 2, F(1, 4), F(3, 4)) == F(1, 2)

    def test_diagonal_is_power(self, square):
        for n in (2, 3, 4):
            for x in (F(0), F(1, 3), F(1)):
                assert fq.delta_win_prob(square, n, x, x) == square(x) ** (n - 1)

    def test_order_enforced(self, uniform):
        with pytest.raises(DomainError):
            fq.delta_win_prob(uniform, 2, F(3, 4), F(1, 4))

    @settings(max_examples=50, deadline=None)
    @given(
        x=st.fractions(min_value=0, max_value=1),
        y=st.fractions(min_value=0, max_value=1),
        n=st.integers(min_value=2, max_value=5),
    )
    def test_tie_split_identity(self, x, y, n):
        # n * Delta is the geometric sum (F(y)^n - F(x)^n)/(F(y) - F(x))
        x, y = min(x, y), max(x, y)
        uniform = fq.uniform_cdf()
        d = fq.delta_win_prob(uniform, n, x, y)
        if x == y:
            assert d == x ** (n - 1)
        else:
            assert n * d * (y - x) == y**n - x**n


class TestUtility:
    def test_by_hand(self, uniform):
        g = grid_of("0", "1/2")
        s = JumpPointStrategy((F(0), F(3, 4), F(1)), (F(0),) * 3)
        # bid 0 at v = 1/2: win prob Delta(0, 3/4) = 3/8
        assert fq.utility(uniform, 2, s, g, 1, F(1, 2)) == F(3, 16)
        # bid 1/2 at v = 1: win prob Delta(3/4, 1) = 7/8
        assert fq.utility(uniform, 2, s, g, 2, F(1)) == F(7, 16)

    def test_index_range(self, uniform):
        g = grid_of("0", "1/2")
        s = JumpPointStrategy((F(0), F(3, 4), F(1)), (F(0),) * 3)
        with pytest.raises(DomainError):
            fq.utility(uniform, 2, s, g, 3, F(1))


class TestComputeStrategy:
    def test_top_utility_one_pools_everything(self, uniform):
        g = grid_of("0", "1/4", "1/2")
        s, uvec = fq.compute_strategy(uniform, 1, 2, g, F(1), F(1, 2**20))
        assert s[0] == 1  # utility 1 is unattainable: all jumps collapse at the top

    def test_top_utility_zero_gives_zero_jump(self, uniform):
        g = grid_of("0", "1/4", "1/2")
        s, uvec = fq.compute_strategy(uniform, 1, 2, g, F(0), F(1, 2**20))
        assert s[0] == 0
        assert s[1] == F(1, 4) and s[2] == F(1, 2)

    def test_achieved_utilities_within_delta(self, square):
        delta = F(1, 2**24)
        g = grid_of("0", "1/8", "1/4", "3/8")
        s, uvec = fq.compute_strategy(square, 2, 2, g, F(1, 3), delta)
        for i in range(1, g.m + 1):
            if s[i - 1] > g.bids[i - 1] and s[i - 1] < s[i]:
                achieved = (s[i - 1] - g.bids[i - 1]) * fq.delta_win_prob(square, 2, s[i - 1], s[i])
                assert abs(achieved - uvec[i - 1]) <= delta

    def test_jump_points_monotone_and_above_bids(self, uniform):
        g = grid_of("0", "1/8", "1/4", "1/2")
        s, _ = fq.compute_strategy(uniform, 1, 3, g, F(1, 4), F(1, 2**24))
        assert all(a <= b for a, b in zip(s, s[1:]))
        assert all(s[i - 1] >= g.bids[i - 1] or s[i - 1] == s[i] for i in range(1, g.m + 1))

    def test_bad_delta(self, uniform):
        with pytest.raises(DomainError):
            fq.compute_strategy(uniform, 1, 2, grid_of("0"), F(1, 2), F(0))


class TestCheckConditions:
    def test_hand_equilibrium_passes(self, uniform):
        # uniform, n = 2, bids {0, 1/2}: full pooling at 0 is an exact equilibrium
        g = grid_of("0", "1/2")
        s = JumpPointStrategy((F(0), F(1), F(1)), (F(0), F(1, 2), F(1, 2)))
        cert = fq.check_conditions(uniform, 2, g, s, None, F(1, 2**10))
        assert cert.passed
        assert cert.max_residual == 0

    def test_perturbed_utilities_fail(self, uniform):
        g = grid_of("0", "1/2")
        s = JumpPointStrategy((F(0), F(1), F(1)), (F(0), F(1, 2), F(1, 4)))
        cert = fq.check_conditions(uniform, 2, g, s, None, F(1, 2**10))
        assert not cert.passed

    def test_jump_below_bid_fails(self, uniform):
        g = grid_of("0", "1/2")
        s = JumpPointStrategy((F(0), F(1, 4), F(1)), (F(0), F(1, 8), F(7, 16)))
        cert = fq.check_conditions(uniform, 2, g, s, None, F(1, 2))
        assert any(r.condition == 3 and r.residual > 0 for r in cert.residuals)
        assert not cert.passed


class TestTheoreticalDelta:
    def test_closed_form(self):
        assert fq.theoretical_delta(F(1, 2), F(1, 2), 2, 1, 1) == F(1, 2**16 * 800)

    def test_astronomically_small(self):
        d = fq.theoretical_delta(F(1, 64), F(1, 8), 3, 2, 8)
        assert 0 < d < F(1, 10**100)


class TestSolve:
    @pytest.mark.parametrize("n,bids", [(2, ("0", "1/2")), (2, ("0", "1/4", "1/2", "3/4")), (3, ("0", "1/3", "2/3"))])
    def test_certified_low_regret_uniform(self, uniform, n, bids):
        eps = F(1, 64)
        g = grid_of(*bids)
        res = fq.solve(uniform, 1, n, g, eps)
        assert res.certificate.passed
        report = fq.epsilon_bne_check_cdfpa(uniform, n, g, res.strategy)
        assert report.max_regret <= eps

    def test_nonuniform_cdf(self, square):
        eps = F(1, 32)
        g = grid_of("0", "1/4", "1/2")
        res = fq.solve(square, None, 2, g, eps)
        assert res.certificate.passed
        assert fq.epsilon_bne_check_cdfpa(square, 2, g, res.strategy).max_regret <= eps

    def test_strategy_shape(self, uniform):
        g = grid_of("0", "1/4", "1/2")
        res = fq.solve(uniform, 1, 2, g, F(1, 32))
        s = res.strategy.s
        assert s[0] == 0 and s[-1] == 1
        assert all(a <= b for a, b in zip(s, s[1:]))

    def test_expose_transformed(self, uniform):
        res = fq.solve(uniform, 1, 2, grid_of("0", "1/2"), F(1, 16), SolveParams(expose_transformed=True))
        assert res.transformed_cdf is not None
        assert res.transformed_cdf(F(1, 2)) == F(1, 2)  # mixing fixes the identity cdf

    def test_oracle_needs_lipschitz(self, uniform):
        oracle = fq.oracle_from_piecewise(uniform)
        with pytest.raises(DomainError):
            fq.solve(oracle, None, 2, grid_of("0", "1/2"), F(1, 16))

    def test_bad_eps(self, uniform):
        with pytest.raises(DomainError):
            fq.solve(uniform, 1, 2, grid_of("0", "1/2"), F(2))

    def test_explicit_delta_respected(self, uniform):
        res = fq.solve(uniform, 1, 2, grid_of("0", "1/2"), F(1, 16), SolveParams(delta=F(1, 2**20)))
        assert res.delta_used == F(1, 2**20)
