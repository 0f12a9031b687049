"""
Unit tests for grids, sampled data and the symplectic structure

Grids are validated once, at construction:
- An even node count puts 0 on the grid (index N/2)
- Sampled values are immutable and finite
- A symbol grid built for a function grid gives that function grid back
"""

import warnings

import numpy as np
import pytest


class TestRealGrid:
    """Test grid construction and geometry"""

    def test_nodes_and_center(self):
        """Should place nodes at -L + k*2L/N with 0 at index N/2"""
        from weylscope.core import RealGrid

        g = RealGrid(1, 4.0, 8)

        assert g.spacing == 1.0
        assert list(g.axis()) == [-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]
        assert g.axis()[g.center_index] == 0.0
        assert g.shape == (8,)
        assert g.quad_weight == 1.0

    def test_odd_points_rejected(self):
        """Should refuse an odd number of nodes"""
        from weylscope.core import GridError, RealGrid

        with pytest.raises(GridError):
            RealGrid(1, 4.0, 7)

    def test_bad_half_width_rejected(self):
        """Should refuse a zero or non-finite half width"""
        from weylscope.core import GridError, RealGrid

        with pytest.raises(GridError):
            RealGrid(1, 0.0, 8)
        with pytest.raises(GridError):
            RealGrid(1, float("inf"), 8)

    def test_dual_refine_doubled(self):
        """Should derive the frequency, refined and doubled grids"""
        from weylscope.core import RealGrid

        g = RealGrid(2, 4.0, 8)

        assert g.dual().half_width == pytest.approx(np.pi)
        assert g.refine(2).spacing == pytest.approx(0.5)
        assert g.doubled().spacing == g.spacing
        assert g.doubled().half_width == 8.0
        assert g.points().shape == (64, 2)


class TestSampledFunction:
    """Test sampled functions on a real grid"""

    def test_ground_state_is_normalized(self):
        """Should integrate |e_0|^2 to one by the trapezoid rule"""
        from weylscope.core import RealGrid, SampledFunction
        from weylscope.stft import ground_state

        g = RealGrid(1, 8.0, 128)
        e0 = SampledFunction(g, ground_state(g.points()))

        assert e0.norm() == pytest.approx(1.0, abs=1e-12)
        assert e0.inner(e0) == pytest.approx(1.0, abs=1e-12)

    def test_values_are_read_only(self):
        """Should freeze the value array"""
        from weylscope.core import RealGrid, SampledFunction

        u = SampledFunction(RealGrid(1, 4.0, 8), np.ones(8))

        with pytest.raises(ValueError):
            u.values[0] = 2.0

    def test_non_finite_values_rejected(self):
        """Should refuse NaN samples"""
        from weylscope.core import GridError, RealGrid, SampledFunction

        vals = np.ones(8)
        vals[3] = np.nan
        with pytest.raises(GridError):
            SampledFunction(RealGrid(1, 4.0, 8), vals)

    def test_wrong_size_rejected(self):
        """Should refuse a value array that does not fit the grid"""
        from weylscope.core import DimensionError, RealGrid, SampledFunction

        with pytest.raises(DimensionError):
            SampledFunction(RealGrid(1, 4.0, 8), np.ones(6))

    def test_inner_product_needs_same_grid(self):
        """Should refuse to pair functions on different grids"""
        from weylscope.core import GridError, RealGrid, SampledFunction

        u = SampledFunction(RealGrid(1, 4.0, 8), np.ones(8))
        v = SampledFunction(RealGrid(1, 4.0, 16), np.ones(16))

        with pytest.raises(GridError):
            u.inner(v)


class TestPhaseGrid:
    """Test phase-space grids"""

    def test_for_functions_round_trip(self):
        """Should recover the function grid from its quantization grid"""
        from weylscope.core import PhaseGrid, RealGrid

        g = RealGrid(1, 8.0, 64)
        pg = PhaseGrid.for_functions(g)

        assert pg.x.points_per_axis == 128
        assert pg.x.spacing == pytest.approx(g.spacing / 2)
        assert pg.xi.half_width == pytest.approx(np.pi / g.spacing)
        assert pg.function_grid() == g

    def test_square_grid_is_not_quantization_compatible(self):
        """Should refuse to treat an arbitrary square grid as a Weyl grid"""
        from weylscope.core import GridError, PhaseGrid

        with pytest.raises(GridError):
            PhaseGrid.square(1, 6.0, 64).function_grid()

    def test_mismatched_factors_rejected(self):
        """Should refuse x and xi factors of different dimension"""
        from weylscope.core import GridError, PhaseGrid, RealGrid

        with pytest.raises(GridError):
            PhaseGrid(RealGrid(1, 4.0, 8), RealGrid(2, 4.0, 8))

    def test_symbol_from_even_real_grid(self):
        """Should read an even-dimensional RealGrid as E = R^n x R^n"""
        from weylscope.core import RealGrid, SampledSymbol

        a = SampledSymbol(RealGrid(2, 4.0, 8), np.ones((8, 8)))

        assert a.grid.n == 1
        assert a.integral() == pytest.approx(64.0)


class TestHelpers:
    """Test the bracket and edge-mass helpers"""

    def test_japanese_bracket(self):
        """Should compute (1 + |x|^2)^(1/2)"""
        from weylscope.core import japanese_bracket

        assert japanese_bracket([3.0, 4.0]) == pytest.approx(np.sqrt(26.0))
        assert japanese_bracket([0.0, 0.0]) == 1.0

    def test_edge_mass_warning(self):
        """Should warn when a sampled array has mass on its faces"""
        from weylscope.core import BoundaryMassWarning
        from weylscope.core.grids import warn_on_edge_mass

        with pytest.warns(BoundaryMassWarning):
            assert warn_on_edge_mass(np.ones((4, 4)), "flat")

    def test_no_warning_for_compact_data(self):
        """Should stay quiet when the faces are zero"""
        from weylscope.core.grids import warn_on_edge_mass

        vals = np.zeros((6, 6))
        vals[2:4, 2:4] = 1.0
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert not warn_on_edge_mass(vals, "compact")


class TestSymplectic:
    """Test J, sigma and the bijection q"""

    def test_standard_structure(self):
        """Should build J = [[0, I], [-I, 0]] with J^2 = -1"""
        from weylscope.core import SymplecticStructure

        S = SymplecticStructure.standard(1)

        assert S.J.tolist() == [[0, 1], [-1, 0]]
        assert (S.J @ S.J).tolist() == [[-1, 0], [0, -1]]
        assert (S.J_inv @ S.J).tolist() == [[1, 0], [0, 1]]

    def test_zero_dimension_rejected(self):
        """Should refuse n = 0"""
        from weylscope.core import DimensionError, SymplecticStructure

        with pytest.raises(DimensionError):
            SymplecticStructure.standard(0)

    def test_sigma_values(self):
        """Should give sigma(e1, e2) = -1 and sigma((1,2),(3,4)) = 2"""
        from weylscope.core import symplectic_form

        assert symplectic_form([1.0, 0.0], [0.0, 1.0]) == -1.0
        assert symplectic_form([1.0, 2.0], [3.0, 4.0]) == 2.0

    def test_sigma_uses_structure_matrix(self):
        """Should evaluate sigma with the J of the structure passed in"""
        from weylscope.core import SymplecticStructure, symplectic_form

        standard = SymplecticStructure.standard(1)
        reversed_orientation = SymplecticStructure(1, -standard.J)

        assert symplectic_form([1.0, 0.0], [0.0, 1.0], standard) == -1.0
        assert symplectic_form([1.0, 0.0], [0.0, 1.0], reversed_orientation) == 1.0
        assert symplectic_form([1.0, 2.0], [3.0, 4.0], reversed_orientation) == -2.0

    def test_sigma_dimension_errors(self):
        """Should refuse mismatched or odd dimensions"""
        from weylscope.core import DimensionError, symplectic_form

        with pytest.raises(DimensionError):
            symplectic_form([1.0, 0.0], [1.0, 0.0, 0.0, 0.0])
        with pytest.raises(DimensionError):
            symplectic_form([1.0, 0.0, 0.0], [1.0, 0.0, 0.0])

    def test_q_map_example_and_inverse(self):
        """Should map (e1, 0) to (e1/2, (0, -1)) and invert exactly"""
        from weylscope.core import q_inverse, q_map

        assert q_map([1.0, 0.0], [0.0, 0.0]).tolist() == [0.5, 0.0, 0.0, -1.0]

        rng = np.random.default_rng(7)
        x = rng.normal(size=(50, 2))
        y = rng.normal(size=(50, 2))
        bx, by = q_inverse(q_map(x, y))
        assert np.abs(bx - x).max() < 1e-14
        assert np.abs(by - y).max() < 1e-14

    def test_q_inverse_dimension(self):
        """Should refuse points whose dimension is not a multiple of 4"""
        from weylscope.core import DimensionError, q_inverse

        with pytest.raises(DimensionError):
            q_inverse(np.zeros(6))
