"""
Unit tests for the Gaussian STFT and the S~(m) norms

The ground-state projector f0 is the reference symbol:
- F(f_0 f_0)(0) = 2 pi, the maximum of the table
- F_sigma f0 = f0
- Mollification converges to the symbol as nu grows
"""

import csv
import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest


def _f0(L=6.0, N=64):
    from weylscope.core import PhaseGrid
    from weylscope.stft import gaussian_window_f

    return gaussian_window_f((0.0, 0.0), PhaseGrid.square(1, L, N))


class TestWindows:
    """Test f_T and e_0"""

    def test_window_peak(self):
        """Should peak at 2^n on the center"""
        from weylscope.core import RealGrid
        from weylscope.stft import gaussian_window_f

        f = gaussian_window_f((1.0, -1.0), RealGrid(2, 8.0, 32))

        assert f.values.max() == pytest.approx(2.0)
        assert f.integral() == pytest.approx(2 * np.pi, rel=1e-8)

    def test_window_center_dimension(self):
        """Should refuse a center outside E"""
        from weylscope.core import DimensionError, RealGrid
        from weylscope.stft import gaussian_window_f

        with pytest.raises(DimensionError):
            gaussian_window_f((0.0, 0.0, 0.0), RealGrid(2, 4.0, 16))

    def test_ground_state_value(self):
        """Should give e_0(0) = pi^(-1/4)"""
        from weylscope.stft import ground_state

        assert ground_state(np.zeros((1, 1)))[0] == pytest.approx(np.pi ** -0.25)


class TestSTFT:
    """Test the tabulated transform"""

    def test_t_nodes_are_symmetric(self):
        """Should contain -T whenever it contains T"""
        from weylscope.core import RealGrid
        from weylscope.stft.transform import t_nodes

        T = t_nodes(RealGrid(2, 4.0, 16), 4)

        assert len(T) == 9
        assert sorted(map(tuple, T)) == sorted(map(tuple, -T))

    def test_constant_symbol_at_origin(self):
        """Should give F(f_0)(0) = 2 pi for the symbol 1"""
        from weylscope.core import PhaseGrid, SampledSymbol
        from weylscope.stft import stft

        pg = PhaseGrid.square(1, 6.0, 64)
        one = SampledSymbol(pg, np.ones(pg.shape))
        table = stft(one, T_points=[[0.0, 0.0]], warn=False)
        c = table.Xi_grid.center_index

        assert table.values[0][c, c] == pytest.approx(2 * np.pi, rel=1e-8)

    def test_constant_symbol_flags_edge(self):
        """Should flag and warn when f_T a reaches the grid edge"""
        from weylscope.core import BoundaryMassWarning, PhaseGrid, SampledSymbol
        from weylscope.stft import stft

        pg = PhaseGrid.square(1, 6.0, 64)
        with pytest.warns(BoundaryMassWarning):
            table = stft(SampledSymbol(pg, np.ones(pg.shape)), stride=8)

        assert table.boundary_flag

    def test_f0_norm_and_location(self):
        """Should find ||f0|| = 2 pi at T = 0, Xi = 0 without edge flags"""
        from weylscope.core.order_functions import get_order_function
        from weylscope.stft import locate_stilde_norm

        result = locate_stilde_norm(_f0(), get_order_function("one"))

        assert result.value == pytest.approx(2 * np.pi, rel=1e-8)
        assert result.T == (0.0, 0.0)
        assert result.Xi == (0.0, 0.0)
        assert not result.boundary_flag

    def test_dense_norm_agrees(self):
        """Should reproduce the FFT value by direct quadrature"""
        from weylscope.core.order_functions import get_order_function
        from weylscope.stft import dense_stilde_norm

        value = dense_stilde_norm(_f0(), get_order_function("one"), [[0.0, 0.0]], [[0.0, 0.0], [0.5, 0.5]])

        assert value == pytest.approx(2 * np.pi, rel=1e-8)

    def test_refined_xi_grid(self):
        """Should halve the Xi spacing with xi_refine=2"""
        from weylscope.stft import stft

        coarse = stft(_f0(), T_points=[[0.0, 0.0]])
        fine = stft(_f0(), T_points=[[0.0, 0.0]], xi_refine=2)

        assert fine.Xi_grid.spacing == pytest.approx(coarse.Xi_grid.spacing / 2)
        c = fine.Xi_grid.center_index
        assert fine.values[0][c, c] == pytest.approx(2 * np.pi, rel=1e-8)

    def test_bad_stride(self):
        """Should refuse a non-positive stride"""
        from weylscope.stft import stft

        with pytest.raises(ValueError):
            stft(_f0(), stride=0)

    def test_non_square_grid_rejected(self):
        """Should refuse a phase grid whose factors differ"""
        from weylscope.core import GridError, PhaseGrid, RealGrid, SampledSymbol
        from weylscope.stft import stft

        pg = PhaseGrid(RealGrid(1, 6.0, 64), RealGrid(1, 4.0, 64))
        with pytest.raises(GridError):
            stft(SampledSymbol(pg, np.zeros(pg.shape)))

    def test_ratio_dimension(self):
        """Should refuse an order function of the wrong dimension"""
        from weylscope.core import DimensionError
        from weylscope.core.order_functions import bracket
        from weylscope.stft import stft

        table = stft(_f0(), T_points=[[0.0, 0.0]])
        with pytest.raises(DimensionError):
            table.ratio(bracket(1.0, n=2))


class TestExport:
    """Test the CSV export of a table"""

    def setup_method(self):
        self.temp_dir = tempfile.mkdtemp()

    def teardown_method(self):
        shutil.rmtree(self.temp_dir)

    def test_export_columns(self):
        """Should write one row per (T, Xi) with the ratio column"""
        from weylscope.core.order_functions import get_order_function
        from weylscope.stft import export_stft_csv, stft

        table = stft(_f0(6.0, 16), T_points=[[0.0, 0.0], [1.0, 0.0]])
        path = export_stft_csv(table, get_order_function("one"), Path(self.temp_dir) / "t" / "stft.csv")

        with open(path) as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["T1", "T2", "Xi1", "Xi2", "re", "im", "modulus", "m", "ratio"]
        assert len(rows) == 1 + 2 * 16 * 16


class TestSymplecticFourier:
    """Test F_sigma"""

    def test_f0_is_fixed(self):
        """Should map f0 to itself"""
        from weylscope.stft import symplectic_fourier

        a = _f0()
        assert np.abs(symplectic_fourier(a).values - a.values).max() < 1e-8

    def test_involution(self):
        """Should satisfy F_sigma F_sigma b = b for a shifted Gaussian"""
        from weylscope.core import PhaseGrid
        from weylscope.stft import gaussian_window_f, symplectic_fourier

        b = gaussian_window_f((0.5, -0.5), PhaseGrid.square(1, 6.0, 64))
        twice = symplectic_fourier(symplectic_fourier(b))

        assert np.abs(twice.values - b.values).max() < 1e-8


class TestMollify:
    """Test the Schwartz approximation u_nu"""

    def test_spec_validation(self):
        """Should refuse nu < 1 and a non-positive cutoff"""
        from weylscope.stft import MollifierSpec

        with pytest.raises(ValueError):
            MollifierSpec(nu=0)
        with pytest.raises(ValueError):
            MollifierSpec(nu=1, cutoff=0.0)

    def test_phi_has_unit_mass(self):
        """Should normalize phi to unit mass"""
        from weylscope.stft import MollifierSpec

        spec = MollifierSpec()
        assert spec.phi_integral() == pytest.approx(1.0, abs=1e-8)
        assert spec.phi_hat_1d(np.array([0.0]))[0] == pytest.approx(1.0, abs=1e-8)

    def test_converges_with_nu(self):
        """Should approach the symbol as nu grows"""
        from weylscope.stft import MollifierSpec, mollify

        a = _f0()
        errors = [np.abs(mollify(a, MollifierSpec(nu)).values - a.values).max() for nu in (1, 4, 16)]

        assert errors[0] > errors[1] > errors[2]


class TestLatticeNorm:
    """Test the lattice definition of the norm"""

    def test_needs_e_times_e_star(self):
        """Should refuse a lattice that does not live in dimension 4"""
        from weylscope.core import DimensionError, Lattice
        from weylscope.core.order_functions import get_order_function
        from weylscope.stft import lattice_stilde_norm

        with pytest.raises(DimensionError):
            lattice_stilde_norm(_f0(), Lattice.cubic(2, 1.0), get_order_function("one"))

    def test_empty_ball(self):
        """Should return zero when no lattice point is inside the radius"""
        from weylscope.core import Lattice
        from weylscope.core.order_functions import get_order_function
        from weylscope.stft import lattice_stilde_norm

        result = lattice_stilde_norm(_f0(), Lattice.cubic(4, 1.0), get_order_function("one"), radius=0.5)

        assert result.value == 0.0
        assert result.points == 0
