"""
Unit tests for the rank-one quadrature, effective kernels and the Schur chain

Lambda_Phi is tiled by a trapezoid rule on a ball:
- the node set carries an outer shell used for the tail test
- a ball that is too small raises TruncationWarning
- the phase factor exp(i sigma/2) is flagged when under-resolved
- F integrated over Lambda_Phi matches F integrated over the grid of a
"""

import numpy as np
import pytest


def _f0_symbol():
    from weylscope.core import PhaseGrid
    from weylscope.stft import gaussian_window_f

    return gaussian_window_f((0.0, 0.0), PhaseGrid.square(1, 6.0, 64))


def _e0():
    from weylscope.bargmann import DEFAULT_FUNCTION_GRID
    from weylscope.bargmann.hermite import hermite_sample

    return hermite_sample(0, DEFAULT_FUNCTION_GRID)


class TestRankOneQuadrature:
    """Test the quadrature on Lambda_Phi"""

    def test_phase_flag(self):
        """Should flag R * h / 2 > pi / 2"""
        from weylscope.rankone import RankOneQuadrature

        assert not RankOneQuadrature(5.0, 16).phase_flag
        assert RankOneQuadrature(6.0, 16).phase_flag

    def test_validation(self):
        """Should refuse an unknown chart and a non-positive radius"""
        from weylscope.rankone import RankOneQuadrature

        with pytest.raises(ValueError):
            RankOneQuadrature(chart="polar")
        with pytest.raises(ValueError):
            RankOneQuadrature(radius=0.0)

    def test_nodes_in_ball(self):
        """Should keep nodes inside the ball and mark an outer shell"""
        from weylscope.bargmann import radial_phase
        from weylscope.rankone import RankOneQuadrature

        quad = RankOneQuadrature(5.0, 16, chart="real")
        nodes = quad.nodes(radial_phase())

        assert len(nodes) > 0
        assert np.all(np.linalg.norm(nodes.rho, axis=-1) <= 5.0)
        assert nodes.shell.any()
        assert not nodes.shell.all()
        assert np.all(nodes.weights > 0)

    def test_base_chart_weights(self):
        """Should weight base-chart nodes by the Lagrangian volume"""
        from weylscope.bargmann import lagrangian_volume, radial_phase
        from weylscope.rankone import RankOneQuadrature

        quad = RankOneQuadrature(5.0, 16)
        nodes = quad.nodes(radial_phase())

        expected = quad.grid(1).quad_weight * lagrangian_volume(radial_phase())
        assert nodes.weights[0] == pytest.approx(expected)
        assert nodes.base.shape == (len(nodes), 1)
        assert nodes.rho.shape == (len(nodes), 2)


class TestRankOneReconstruct:
    """Test the reconstructed matrix element"""

    def test_small_ball_warns(self):
        """Should raise TruncationWarning when the outer shell dominates"""
        from weylscope.core import TruncationWarning
        from weylscope.rankone import RankOneQuadrature, rank_one_reconstruct

        u = _e0()
        with pytest.warns(TruncationWarning):
            result = rank_one_reconstruct(_f0_symbol(), u, u, RankOneQuadrature(0.5, 4))

        assert result.tail_flag
        assert result.shell_modulus <= result.total_modulus

    def test_needs_n_one(self):
        """Should refuse a symbol over n = 2"""
        from weylscope.core import DimensionError, PhaseGrid, SampledSymbol
        from weylscope.rankone import rank_one_reconstruct

        pg = PhaseGrid.square(2, 4.0, 8)
        u = _e0()
        with pytest.raises(DimensionError):
            rank_one_reconstruct(SampledSymbol(pg, np.zeros(pg.shape)), u, u)


class TestEffectiveKernel:
    """Test K_eff routes"""

    def test_unknown_route(self):
        """Should refuse a route other than rankone and direct"""
        from weylscope.rankone import effective_kernel

        with pytest.raises(ValueError):
            effective_kernel(_f0_symbol(), route="x")

    def test_tilde_q_shape(self):
        """Should give q~ for all pairs of table nodes"""
        from weylscope.bargmann import ComplexGrid, radial_phase
        from weylscope.rankone import tilde_q

        table = ComplexGrid.square(1, 3.0, 4)
        q = tilde_q(table, radial_phase())

        assert q.shape == (16, 16, 4)


class TestSchurChain:
    """Test the chain result container"""

    def test_ratio_and_pass(self):
        """Should pass when ||H|| stays below the estimate times ||F||"""
        from weylscope.rankone import SchurChainResult

        good = SchurChainResult(2.0, 1.0, 1.0, 1.0)
        bad = SchurChainResult(2.0, 2.0, 1.0, 1.0)

        assert good.ratio == pytest.approx(1.0)
        assert good.passed
        assert not bad.passed

    def test_zero_bound(self):
        """Should give a zero ratio when the bound vanishes"""
        from weylscope.rankone import SchurChainResult

        assert SchurChainResult(2.0, 0.0, 0.0, 1.0).ratio == 0.0


class TestPullbackRoute:
    """Test the coefficients F integrated over Lambda_Phi"""

    def test_nodes_cover_symbol_box(self):
        """Should pull the base-chart grid back inside the box of a"""
        from weylscope.bargmann import radial_phase
        from weylscope.rankone import pullback_nodes

        a = _f0_symbol()
        zeta = pullback_nodes(a, radial_phase())

        assert np.all(np.abs(zeta.rho) <= 6.0)
        assert np.all(zeta.weights > 0)
        assert not zeta.shell.any()
        assert zeta.weights.sum() == pytest.approx((12.0 - a.grid.x.spacing) ** 2, rel=0.05)

    def test_symbol_interpolation_at_nodes(self):
        """Should reproduce the samples of a at its own grid nodes"""
        from weylscope.rankone import pullback_symbol

        a = _f0_symbol()
        zx, zxi = a.grid.axes()
        rho = np.array([[zx[20], zxi[31]], [zx[32], zxi[32]], [zx[40], zxi[25]]])
        expected = np.array([a.values[20, 31], a.values[32, 32], a.values[40, 25]])

        assert np.abs(pullback_symbol(a, rho) - expected).max() < 1e-10

    def test_matches_real_route(self):
        """Should agree with rank_one_coefficients for Gaussian symbols"""
        from weylscope.bargmann import radial_phase
        from weylscope.core import PhaseGrid
        from weylscope.interfaces.specs import symbol_on
        from weylscope.rankone import RankOneQuadrature, pullback_coefficients, rank_one_coefficients

        phi = radial_phase()
        rho = RankOneQuadrature(5.0, 8).nodes(phi).rho
        shifted = symbol_on("gauss_bump:c1=1,c2=-0.5,s=0.7", PhaseGrid.square(1, 6.0, 64))
        for a in (_f0_symbol(), shifted):
            G_real = rank_one_coefficients(a, rho)
            G_pull = pullback_coefficients(a, phi, rho)

            assert G_pull.shape == G_real.shape
            assert np.abs(G_pull - G_real).max() < 1e-6 * np.abs(G_real).max()

    def test_unknown_coefficient_route(self):
        """Should refuse a coefficient route other than real and pullback"""
        from weylscope.rankone import rank_one_reconstruct

        u = _e0()
        with pytest.raises(ValueError):
            rank_one_reconstruct(_f0_symbol(), u, u, coefficients="polar")


class TestOffdiagonalSlope:
    """Test the off-diagonal decay fit"""

    def _kernel(self, profile):
        from weylscope.bargmann import ComplexGrid, radial_phase
        from weylscope.rankone import EffectiveKernel
        from weylscope.rankone.effective import table_rho

        table = ComplexGrid.square(1, 3.0, 8)
        rho = table_rho(table, radial_phase())
        dist = np.linalg.norm(rho[:, None, :] - rho[None, :, :], axis=-1)
        return EffectiveKernel(table, profile(dist), "direct")

    def test_higher_order_fit_is_steeper(self):
        """Should fit exponential decay steeper at order 4 than at order 2"""
        from weylscope.bargmann import radial_phase
        from weylscope.rankone import offdiagonal_slope

        K = self._kernel(lambda d: np.exp(-d))
        s2 = offdiagonal_slope(K, radial_phase(), order=2)
        s4 = offdiagonal_slope(K, radial_phase(), order=4)

        assert s2 < 0.0
        assert s4 < s2

    def test_bad_order(self):
        """Should refuse an order below 1"""
        from weylscope.bargmann import radial_phase
        from weylscope.rankone import offdiagonal_slope

        K = self._kernel(lambda d: np.exp(-d))
        with pytest.raises(ValueError):
            offdiagonal_slope(K, radial_phase(), order=0)

    def test_table_too_small(self):
        """Should refuse an order whose fit starts beyond the table"""
        from weylscope.bargmann import radial_phase
        from weylscope.rankone import offdiagonal_slope

        K = self._kernel(lambda d: np.exp(-d))
        with pytest.raises(ValueError):
            offdiagonal_slope(K, radial_phase(), order=1000)
