"""
Unit tests for the FBI-Bargmann transform and the H^p_Phi norms

The radial phase is the reference:
- T e_0 is constant on C
- ||T u||_{H^2_Phi} = ||u|| for the Hermite batch
- a_Phi matches the Bergman constant 1/(2 pi)
"""

import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest


def _inner_mask(grid, reach):
    z = grid.flat_nodes()
    return np.all((np.abs(z.real) <= reach) & (np.abs(z.imag) <= reach), axis=-1)


class TestComplexGrid:
    """Test the complex box"""

    def test_square_nodes(self):
        """Should tile the box with Re and Im nodes"""
        from weylscope.bargmann import ComplexGrid

        g = ComplexGrid.square(1, 4.0, 8)
        z = g.nodes()

        assert g.shape == (8, 8)
        assert z.shape == (8, 8, 1)
        assert z[0, 0, 0] == -4.0 - 4.0j
        assert g.quad_weight == 1.0

    def test_dimension_mismatch(self):
        """Should refuse Re and Im grids of different dimension"""
        from weylscope.bargmann import ComplexGrid
        from weylscope.core import GridError, RealGrid

        with pytest.raises(GridError):
            ComplexGrid(RealGrid(1, 4.0, 8), RealGrid(2, 4.0, 8))

    def test_function_size_checked(self):
        """Should refuse values that do not fill the grid"""
        from weylscope.bargmann import ComplexGrid, ComplexGridFunction
        from weylscope.core import DimensionError

        with pytest.raises(DimensionError):
            ComplexGridFunction(ComplexGrid.square(1, 4.0, 8), np.zeros(10))


class TestTransform:
    """Test T, T^* and the norms"""

    def setup_method(self):
        from weylscope.bargmann.transform import clear_cache

        clear_cache()
        self.temp_dir = tempfile.mkdtemp()

    def teardown_method(self):
        shutil.rmtree(self.temp_dir)

    def test_ground_state_is_constant(self):
        """Should map e_0 to a constant under the radial phase"""
        from weylscope.bargmann import DEFAULT_FUNCTION_GRID, ComplexGrid, bargmann_transform, radial_phase
        from weylscope.bargmann.hermite import hermite_sample

        grid = ComplexGrid.square(1, 8.0, 64)
        V = bargmann_transform(hermite_sample(0, DEFAULT_FUNCTION_GRID), radial_phase(), grid)
        inner = V.values.ravel()[_inner_mask(grid, 2.0)]

        assert np.abs(inner - inner[0]).max() < 1e-8 * abs(inner[0])

    def test_h2_norm_of_ground_state(self):
        """Should give ||e_0||_{M^2} = 1 by calibration"""
        from weylscope.bargmann import DEFAULT_FUNCTION_GRID, ComplexGrid, mod_norm, radial_phase
        from weylscope.bargmann.hermite import hermite_sample

        value = mod_norm(hermite_sample(0, DEFAULT_FUNCTION_GRID), 2, radial_phase(), ComplexGrid.square(1, 8.0, 64))

        assert value == pytest.approx(1.0, rel=1e-10)

    def test_isometry_on_hermite_functions(self):
        """Should preserve the L^2 norm of h_1 and h_2"""
        from weylscope.bargmann import DEFAULT_FUNCTION_GRID, ComplexGrid, mod_norm, radial_phase
        from weylscope.bargmann.hermite import hermite_sample

        grid = ComplexGrid.square(1, 8.0, 64)
        for k in (1, 2):
            assert mod_norm(hermite_sample(k, DEFAULT_FUNCTION_GRID), 2, radial_phase(), grid) == pytest.approx(
                1.0, rel=1e-4
            )

    def test_constant_is_cached(self):
        """Should count a hit for the second calibration on the same grids"""
        from weylscope.bargmann import radial_phase, transform_constant
        from weylscope.bargmann.transform import get_cache_stats

        first = transform_constant(radial_phase())
        second = transform_constant(radial_phase())
        stats = get_cache_stats()

        assert first == second
        assert stats["hits"] == 1
        assert stats["misses"] == 1
        assert stats["size"] == 1

    def test_adjoint_inverts_radial_transform(self):
        """Should recover e_0 from T e_0 with T^*"""
        from weylscope.bargmann import (
            DEFAULT_FUNCTION_GRID,
            ComplexGrid,
            bargmann_adjoint,
            bargmann_transform,
            radial_phase,
        )
        from weylscope.bargmann.hermite import hermite_sample

        grid = ComplexGrid.square(1, 8.0, 64)
        e0 = hermite_sample(0, DEFAULT_FUNCTION_GRID)
        back = bargmann_adjoint(bargmann_transform(e0, radial_phase(), grid), radial_phase(), DEFAULT_FUNCTION_GRID,
                                warn=False)

        assert np.abs(back.values - e0.values).max() < 1e-5

    def test_evaluate_matches_grid_values(self):
        """Should agree with the grid transform at a node"""
        from weylscope.bargmann import (
            DEFAULT_FUNCTION_GRID,
            ComplexGrid,
            bargmann_evaluate,
            bargmann_transform,
            tilted_phase,
        )
        from weylscope.bargmann.hermite import hermite_sample

        grid = ComplexGrid.square(1, 8.0, 64)
        u = hermite_sample(1, DEFAULT_FUNCTION_GRID)
        V = bargmann_transform(u, tilted_phase(), grid)
        node = grid.nodes()[30, 35]

        value = complex(bargmann_evaluate(u, tilted_phase(), node, grid))
        assert value == pytest.approx(complex(V.values[30, 35]))

    def test_dimension_mismatch(self):
        """Should refuse a two-dimensional function grid for an n = 1 phase"""
        from weylscope.bargmann import bargmann_transform, radial_phase
        from weylscope.core import DimensionError, RealGrid, SampledFunction

        u = SampledFunction(RealGrid(2, 4.0, 8), np.zeros((8, 8)))
        with pytest.raises(DimensionError):
            bargmann_transform(u, radial_phase())

    def test_sup_norm(self):
        """Should take max |V| exp(-Phi) for p = inf"""
        from weylscope.bargmann import ComplexGrid, ComplexGridFunction, hp_norm, phi_weight, radial_phase

        grid = ComplexGrid.square(1, 4.0, 8)
        V = ComplexGridFunction(grid, np.ones(grid.shape))

        assert hp_norm(V, phi_weight(radial_phase()), "inf") == pytest.approx(1.0)

    def test_csv_export(self):
        """Should write nodes, values and the weighted modulus"""
        from weylscope.bargmann import ComplexGrid, ComplexGridFunction, phi_weight, radial_phase

        grid = ComplexGrid.square(1, 4.0, 8)
        V = ComplexGridFunction(grid, np.ones(grid.shape))
        path = V.to_csv(Path(self.temp_dir) / "tu.csv", phi_weight(radial_phase()))

        lines = path.read_text().splitlines()
        assert lines[0] == "re_x0,im_x0,re_val,im_val,weighted_modulus"
        assert len(lines) == 1 + 64


class TestReproducingKernel:
    """Test a_Phi and Pi_Phi"""

    def setup_method(self):
        from weylscope.bargmann.transform import clear_cache

        clear_cache()

    def test_constant_matches_bergman(self):
        """Should calibrate a_Phi to the closed-form constant"""
        from weylscope.bargmann import bergman_constant, phi_weight, radial_phase, reproducing_constant

        value = reproducing_constant(radial_phase())

        assert value == pytest.approx(bergman_constant(phi_weight(radial_phase())), rel=1e-3)

    def test_projection_fixes_transform(self):
        """Should leave T e_0 unchanged on the inner part of the box"""
        from weylscope.bargmann import (
            DEFAULT_FUNCTION_GRID,
            ComplexGrid,
            bargmann_transform,
            phi_weight,
            radial_phase,
            reproducing_projection,
        )
        from weylscope.bargmann.hermite import hermite_sample

        grid = ComplexGrid.square(1, 8.0, 64)
        W = phi_weight(radial_phase())
        V = bargmann_transform(hermite_sample(0, DEFAULT_FUNCTION_GRID), radial_phase(), grid)
        P = reproducing_projection(V, W, warn=False)

        damp = np.exp(-W(grid.flat_nodes()))
        mask = _inner_mask(grid, 4.0)
        diff = np.abs(P.values.ravel() - V.values.ravel()) * damp
        scale = (np.abs(V.values.ravel()) * damp).max()

        assert diff[mask].max() < 1e-2 * scale


class TestRelatedTransforms:
    """Test the Fourier transform, the rotation and the ratio bracket"""

    def test_unitary_fourier_fixes_ground_state(self):
        """Should map e_0 to itself"""
        from weylscope.bargmann import DEFAULT_FUNCTION_GRID, unitary_fourier
        from weylscope.bargmann.hermite import hermite_sample

        e0 = hermite_sample(0, DEFAULT_FUNCTION_GRID)

        assert np.abs(unitary_fourier(e0).values - e0.values).max() < 1e-10

    def test_rotation_pullback(self):
        """Should give V(-i x) at every node with a preimage"""
        from weylscope.bargmann import ComplexGrid, ComplexGridFunction, rotation_pullback

        grid = ComplexGrid.square(1, 4.0, 8)
        z = grid.nodes()[..., 0]
        R = rotation_pullback(ComplexGridFunction(grid, z))

        assert np.allclose(R.values[1:], -1j * z[1:])
        assert np.all(R.values[0] == 0)

    def test_rotation_needs_square_grid(self):
        """Should refuse a non-square box"""
        from weylscope.bargmann import ComplexGrid, ComplexGridFunction, rotation_pullback
        from weylscope.core import GridError, RealGrid

        grid = ComplexGrid(RealGrid(1, 4.0, 8), RealGrid(1, 2.0, 8))
        with pytest.raises(GridError):
            rotation_pullback(ComplexGridFunction(grid, np.zeros(grid.shape)))

    def test_same_phase_ratio_is_one(self):
        """Should give the bracket [1, 1] when both phases agree"""
        from weylscope.bargmann import DEFAULT_FUNCTION_GRID, hermite_batch, norm_ratio_bracket, radial_phase

        bracket = norm_ratio_bracket(hermite_batch(DEFAULT_FUNCTION_GRID, 2), radial_phase(), radial_phase(), 2)

        assert bracket.low == pytest.approx(1.0)
        assert bracket.high == pytest.approx(1.0)
        assert bracket.constant == pytest.approx(1.0)

    def test_empty_batch(self):
        """Should refuse an empty batch"""
        from weylscope.bargmann import norm_ratio_bracket, radial_phase

        with pytest.raises(ValueError):
            norm_ratio_bracket([], radial_phase(), radial_phase(), 2)


class TestHermite:
    """Test the Hermite batch"""

    def test_orthonormal(self):
        """Should give a Gram matrix equal to the identity"""
        from weylscope.bargmann import DEFAULT_FUNCTION_GRID, hermite_batch

        batch = hermite_batch(DEFAULT_FUNCTION_GRID)
        gram = np.array([[u.inner(v) for v in batch] for u in batch])

        assert len(batch) == 5
        assert np.abs(gram - np.eye(5)).max() < 1e-10

    def test_bad_index(self):
        """Should refuse negative or fractional indices"""
        from weylscope.bargmann import hermite_function

        with pytest.raises(ValueError):
            hermite_function(-1, np.zeros(3))
        with pytest.raises(ValueError):
            hermite_function(1.5, np.zeros(3))

    def test_needs_one_dimension(self):
        """Should refuse a two-dimensional grid"""
        from weylscope.bargmann import hermite_sample
        from weylscope.core import DimensionError, RealGrid

        with pytest.raises(DimensionError):
            hermite_sample(0, RealGrid(2, 4.0, 8))
