"""
Unit tests for magnetic translations and coherent states

Forms real on Lambda_Phi give unitary translations of H_Phi:
- the zero form acts as the identity
- translations preserve the H^2_Phi norm
- coherent states V_Y have unit norm, and say so when the box is too small
"""

import numpy as np
import pytest


def _ground_transform(grid):
    from weylscope.bargmann import DEFAULT_FUNCTION_GRID, bargmann_transform, radial_phase
    from weylscope.bargmann.hermite import hermite_sample

    return bargmann_transform(hermite_sample(0, DEFAULT_FUNCTION_GRID), radial_phase(), grid)


class TestLinearForm:
    """Test the linear forms l(x, xi)"""

    def test_real_on_lagrangian(self):
        """Should satisfy the reality condition when built above a base point"""
        from weylscope.bargmann import phi_weight, radial_phase
        from weylscope.rankone import LinearFormEll

        W = phi_weight(radial_phase())
        ell = LinearFormEll.real_on(W, [0.5 - 1.0j])

        assert ell.real
        assert ell.reality_defect(W) < 1e-14

    def test_length_mismatch(self):
        """Should refuse lx and lxi of different lengths"""
        from weylscope.core import DimensionError
        from weylscope.rankone import LinearFormEll

        with pytest.raises(DimensionError):
            LinearFormEll([1.0, 0.0], [1.0])

    def test_evaluation(self):
        """Should evaluate lx.x + lxi.xi"""
        from weylscope.rankone import LinearFormEll

        ell = LinearFormEll([2.0], [1j])

        assert ell(np.array([1.5]), np.array([2.0])) == pytest.approx(3.0 + 2.0j)


class TestMagneticTranslate:
    """Test exp(-i l(x, D)) on grid values"""

    def test_zero_form_is_identity(self):
        """Should leave V unchanged for l = 0"""
        from weylscope.bargmann import ComplexGrid, phi_weight, radial_phase
        from weylscope.rankone import LinearFormEll, magnetic_translate

        V = _ground_transform(ComplexGrid.square(1, 8.0, 64))
        moved = magnetic_translate(V, LinearFormEll.zero(), phi_weight(radial_phase()))

        assert np.allclose(moved.values, V.values)

    def test_isometry(self):
        """Should preserve the H^2_Phi norm for a real form"""
        from weylscope.bargmann import ComplexGrid, hp_norm, phi_weight, radial_phase
        from weylscope.rankone import LinearFormEll, magnetic_translate

        W = phi_weight(radial_phase())
        V = _ground_transform(ComplexGrid.square(1, 8.0, 64))
        moved = magnetic_translate(V, LinearFormEll.real_on(W, [0.5 + 0.5j]), W)

        assert hp_norm(moved, W, 2, warn=False) == pytest.approx(hp_norm(V, W, 2, warn=False), rel=1e-6)

    def test_shift_out_of_box(self):
        """Should refuse a shift beyond half the box"""
        from weylscope.bargmann import ComplexGrid, phi_weight, radial_phase
        from weylscope.core import ShiftOutOfBoxError
        from weylscope.rankone import LinearFormEll, magnetic_translate

        W = phi_weight(radial_phase())
        V = _ground_transform(ComplexGrid.square(1, 8.0, 64))
        with pytest.raises(ShiftOutOfBoxError):
            magnetic_translate(V, LinearFormEll.real_on(W, [5.0]), W)

    def test_false_reality_flag(self):
        """Should refuse a form flagged real that is not real on Lambda_Phi"""
        from weylscope.bargmann import ComplexGrid, phi_weight, radial_phase
        from weylscope.rankone import LinearFormEll, magnetic_translate

        W = phi_weight(radial_phase())
        V = _ground_transform(ComplexGrid.square(1, 8.0, 64))
        with pytest.raises(ValueError):
            magnetic_translate(V, LinearFormEll([1.0], [1.0], True), W)

    def test_real_translate_needs_real_form(self):
        """Should refuse a complex form on the real line"""
        from weylscope.bargmann import DEFAULT_FUNCTION_GRID
        from weylscope.bargmann.hermite import hermite_sample
        from weylscope.rankone import LinearFormEll, real_translate

        with pytest.raises(ValueError):
            real_translate(hermite_sample(0, DEFAULT_FUNCTION_GRID), LinearFormEll([1j], [0.0]))


class TestCoherentStates:
    """Test V_Y on Lambda_Phi"""

    def test_unit_norms(self):
        """Should give ||V_Y|| = 1 for base points inside the box"""
        from weylscope.bargmann import radial_phase
        from weylscope.rankone import coherent_norms

        y = np.array([[0.0], [1.0 + 1.0j], [-2.0], [2.0j]])
        norms = coherent_norms(y, radial_phase())

        assert np.allclose(norms, 1.0, rtol=1e-5)

    def test_coherent_state_is_normalized(self):
        """Should return V_Y with unit H^2_Phi norm by both routes"""
        from weylscope.bargmann import phi_weight, radial_phase, tilted_phase
        from weylscope.rankone import coherent_state

        cases = ((radial_phase(), True), (radial_phase(), False), (tilted_phase(), True))
        for phase, exact in cases:
            V = coherent_state([1.0 + 0.5j], phase, exact=exact)
            assert V.norm(phi_weight(phase)) == pytest.approx(1.0, rel=1e-5)
            assert V.Y.shape == (2,)

    def test_coherent_state_small_box_warns(self):
        """Should warn when the box cuts off part of V_Y"""
        from weylscope.bargmann import ComplexGrid, radial_phase
        from weylscope.core import BoundaryMassWarning
        from weylscope.rankone import coherent_state

        with pytest.warns(BoundaryMassWarning):
            coherent_state([1.4], radial_phase(), grid=ComplexGrid.square(1, 3.0, 24))

    def test_form_is_real(self):
        """Should build a coherent form that is real on Lambda_Phi"""
        from weylscope.bargmann import phi_weight, tilted_phase
        from weylscope.rankone import coherent_form

        W = phi_weight(tilted_phase())
        ell = coherent_form(W, [0.7 - 0.3j])

        assert ell.real
        assert ell.reality_defect(W) < 1e-12

    def test_base_point_dimension(self):
        """Should refuse a base point of the wrong length"""
        from weylscope.bargmann import phi_weight, radial_phase
        from weylscope.core import DimensionError
        from weylscope.rankone import coherent_form

        with pytest.raises(DimensionError):
            coherent_form(phi_weight(radial_phase()), [0.0, 1.0])
