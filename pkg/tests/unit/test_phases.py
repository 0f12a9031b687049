"""
Unit tests for quadratic phases and the exact critical-value calculus

Every quantity derived from a quadratic phase is a matrix:
- Phi from the sup over real y
- kappa and its inverse from one solve each
- critical values by the Schur complement
"""

import numpy as np
import pytest


class TestQuadraticPhase:
    """Test phase construction and validation"""

    def test_registered_phases(self):
        """Should provide the radial, symbol-side and tilted phases"""
        from weylscope.bargmann import PHASE_FACTORIES

        assert set(PHASE_FACTORIES) == {"radial", "symbol_side", "tilted"}
        for name, factory in PHASE_FACTORIES.items():
            assert factory().label == name

    def test_im_c_must_be_positive(self):
        """Should refuse Im C <= 0"""
        from weylscope.bargmann import QuadraticPhase
        from weylscope.core import PhaseError

        with pytest.raises(PhaseError):
            QuadraticPhase([[0.5j]], [[-1j]], [[-1j]], "bad")

    def test_b_must_be_invertible(self):
        """Should refuse det B = 0"""
        from weylscope.bargmann import QuadraticPhase
        from weylscope.core import PhaseError

        with pytest.raises(PhaseError):
            QuadraticPhase([[0.5j]], [[0.0]], [[1j]], "bad")

    def test_block_sizes(self):
        """Should refuse A and C of a different size than B"""
        from weylscope.bargmann import QuadraticPhase
        from weylscope.core import DimensionError

        with pytest.raises(DimensionError):
            QuadraticPhase(np.eye(2), [[1j]], [[1j]])

    def test_evaluation(self):
        """Should evaluate x.Ax/2 + x.By + y.Cy/2"""
        from weylscope.bargmann import radial_phase

        phi = radial_phase()
        x, y = np.array([1.0 + 1j]), np.array([0.5])
        expected = 0.5j * (x[0] - y[0]) ** 2 - 0.25j * x[0] ** 2

        assert phi(x, y) == pytest.approx(expected)

    def test_scaled(self):
        """Should scale all three blocks"""
        from weylscope.bargmann import radial_phase

        phi = radial_phase()
        doubled = phi.scaled(2.0)

        assert np.allclose(doubled.A, 2 * phi.A)
        assert np.allclose(doubled.C, 2 * phi.C)


class TestWeight:
    """Test Phi, its polarization and the Levi form"""

    def test_radial_weight(self):
        """Should give Phi(x) = |x|^2 / 4"""
        from weylscope.bargmann import phi_weight, radial_phase

        W = phi_weight(radial_phase())

        assert np.allclose(W.Phi, np.diag([0.25, 0.25]))
        assert W(np.array([2.0 + 2.0j])) == pytest.approx(2.0)

    def test_symbol_side_weight(self):
        """Should give Phi(x) = (Im x)^2"""
        from weylscope.bargmann import phi_weight, symbol_side_phase

        W = phi_weight(symbol_side_phase())

        assert np.allclose(W.Phi, [[0.0, 0.0], [0.0, 1.0]])

    def test_polarization_on_diagonal(self):
        """Should satisfy Psi(x, conj x) = Phi(x)"""
        from weylscope.bargmann import phi_weight, tilted_phase

        W = phi_weight(tilted_phase())
        x = np.array([[0.3 - 1.2j], [2.0 + 0.5j]])

        assert np.allclose(W.psi(x, np.conj(x)).real, W(x))
        assert np.allclose(W.psi(x, np.conj(x)).imag, 0.0, atol=1e-12)

    def test_bergman_constant(self):
        """Should give 1/(2 pi) for the radial weight"""
        from weylscope.bargmann import bergman_constant, levi_form, phi_weight, radial_phase

        W = phi_weight(radial_phase())

        assert np.allclose(levi_form(W), [[0.25]])
        assert bergman_constant(W) == pytest.approx(1 / (2 * np.pi))

    def test_exponent_gap_is_distance(self):
        """Should give Phi(x) + Phi(y) - 2 Re Psi(x, conj y) = |x - y|^2 / 4 for the radial weight"""
        from weylscope.bargmann import exponent_gap, fit_lower_constant, phi_weight, radial_phase

        W = phi_weight(radial_phase())
        rng = np.random.default_rng(11)
        x = (rng.normal(size=40) + 1j * rng.normal(size=40))[:, None]
        y = (rng.normal(size=40) + 1j * rng.normal(size=40))[:, None]
        d2 = np.abs(x - y)[:, 0] ** 2

        gap = exponent_gap(W, x, y)

        assert np.allclose(gap, d2 / 4)
        assert fit_lower_constant(gap, d2) == pytest.approx(0.25)

    def test_lower_constant_needs_pairs(self):
        """Should refuse a sample without distinct pairs"""
        from weylscope.bargmann import fit_lower_constant

        with pytest.raises(ValueError):
            fit_lower_constant(np.zeros(3), np.zeros(3))

    def test_with_constant(self):
        """Should attach a_Phi without changing the forms"""
        from weylscope.bargmann import phi_weight, radial_phase

        W = phi_weight(radial_phase())
        Wc = W.with_constant(0.2)

        assert Wc.aPhi == 0.2
        assert W.aPhi is None
        assert np.array_equal(Wc.Phi, W.Phi)


class TestKappa:
    """Test the canonical transformation"""

    def test_symbol_side_kappa(self):
        """Should map (y, eta) to (y - i eta/2, eta)"""
        from weylscope.bargmann import kappa_apply, symbol_side_phase

        out = kappa_apply(symbol_side_phase(), np.array([1.5, -2.0]))

        assert np.allclose(out, [1.5 + 1.0j, -2.0])

    def test_inverse(self):
        """Should invert kappa exactly"""
        from weylscope.bargmann import kappa_apply, kappa_inverse, tilted_phase

        phi = tilted_phase()
        pts = np.array([[0.3, -0.7], [1.0 + 0.5j, 2.0], [-2.0, 0.25j]])

        assert np.allclose(kappa_inverse(phi, kappa_apply(phi, pts)), pts)

    def test_point_dimension(self):
        """Should refuse points of the wrong dimension"""
        from weylscope.bargmann import kappa_apply, radial_phase
        from weylscope.core import DimensionError

        with pytest.raises(DimensionError):
            kappa_apply(radial_phase(), np.zeros(3))

    def test_transfer_to_same_phase(self):
        """Should be the identity when both phases agree"""
        from weylscope.bargmann import tilted_phase, transfer_map

        chi = transfer_map(tilted_phase(), tilted_phase())
        w = np.array([[0.5 - 1.0j], [2.0 + 0.1j]])

        assert np.allclose(chi(w), w)

    def test_lagrangian_volume_positive(self):
        """Should give a positive finite density for every registered phase"""
        from weylscope.bargmann import PHASE_FACTORIES, lagrangian_volume

        for factory in PHASE_FACTORIES.values():
            vol = lagrangian_volume(factory())
            assert 0 < vol < np.inf


class TestCriticalValue:
    """Test exact stationary phase"""

    def test_schur_complement(self):
        """Should eliminate y from (k, y).M(k, y)/2"""
        from weylscope.bargmann import QuadraticForm, critical_value

        form = QuadraticForm(np.array([[1.0, 1.0], [1.0, 2.0]]), (("k", 1), ("y", 1)))
        reduced, Y = critical_value(form, "y")

        assert reduced.names == ("k",)
        assert reduced.matrix[0, 0] == pytest.approx(0.5)
        assert Y[0, 0] == pytest.approx(-0.5)

    def test_singular_hessian(self):
        """Should raise SingularFormError when M_yy is singular"""
        from weylscope.bargmann import QuadraticForm, critical_value
        from weylscope.core import SingularFormError

        form = QuadraticForm(np.array([[1.0, 1.0], [1.0, 0.0]]), (("k", 1), ("y", 1)), "degenerate")
        with pytest.raises(SingularFormError) as info:
            critical_value(form, "y")
        assert info.value.label == "degenerate"

    def test_form_evaluation(self):
        """Should evaluate w.Mw/2 from named blocks"""
        from weylscope.bargmann import QuadraticForm

        form = QuadraticForm(np.array([[2.0]]), (("x", 1),))

        assert form(x=np.array([3.0])) == pytest.approx(9.0)
        with pytest.raises(KeyError):
            form(y=np.array([3.0]))

    def test_ground_state_form_radial(self):
        """Should vanish for the radial phase, so that T e_0 is constant"""
        from weylscope.bargmann import ground_state_decay, ground_state_form, phi_weight, radial_phase

        phi = radial_phase()

        assert np.allclose(ground_state_form(phi).matrix, 0.0)
        assert np.allclose(ground_state_decay(phi), phi_weight(phi).Phi)
