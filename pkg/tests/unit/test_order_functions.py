"""
Unit tests for order functions and lattices

An order function carries (C0, N0) with m(X) <= C0 <X - Y>^N0 m(Y):
- Closed-form families carry the Peetre constants
- Everything else is certified by an exhaustive pair scan
- A stored certificate that the scan exceeds is an error, not a warning
"""

from dataclasses import replace

import numpy as np
import pytest


class TestFamilies:
    """Test evaluation of the registered families"""

    def test_bracket_values(self):
        """Should evaluate <X>^s"""
        from weylscope.core.order_functions import bracket

        m = bracket(2.0)

        assert m(np.zeros(4)) == pytest.approx(1.0)
        assert m([1.0, 0.0, 0.0, 0.0]) == pytest.approx(2.0)
        assert m.C0 == pytest.approx(2.0)
        assert m.N0 == 2.0

    def test_anisotropic_values(self):
        """Should evaluate <T>^s1 <Xi>^s2 on E x E*"""
        from weylscope.core.order_functions import anisotropic

        m = anisotropic(0.0, -5.0)

        assert m([3.0, 4.0, 0.0, 0.0]) == pytest.approx(1.0)
        assert m([0.0, 0.0, 1.0, 0.0]) == pytest.approx(2.0 ** -2.5)

    def test_constant_must_be_positive(self):
        """Should refuse a non-positive constant weight"""
        from weylscope.core import CertificationError
        from weylscope.core.order_functions import constant

        with pytest.raises(CertificationError):
            constant(-1.0)

    def test_unknown_family(self):
        """Should refuse a family outside the closed registry"""
        from weylscope.core import OrderFunction, RegistryError

        with pytest.raises(RegistryError):
            OrderFunction("callable", ())

    def test_wrong_point_dimension(self):
        """Should refuse points that are not in E x E*"""
        from weylscope.core import DimensionError
        from weylscope.core.order_functions import bracket

        with pytest.raises(DimensionError):
            bracket(1.0)(np.zeros(3))

    def test_translated_keeps_certificate(self):
        """Should shift the argument and keep C0, N0"""
        from weylscope.core.order_functions import bracket, translated

        m = bracket(2.0)
        t = translated(m, (1.0, 0.0, 0.0, 0.0))

        assert t([1.0, 0.0, 0.0, 0.0]) == pytest.approx(1.0)
        assert (t.C0, t.N0) == (m.C0, m.N0)

    def test_tabulated_clamps_outside_box(self):
        """Should clamp queries outside the table to its box"""
        from weylscope.core import RealGrid
        from weylscope.core.order_functions import tabulated

        grid = RealGrid(4, 1.0, 4)
        m = tabulated(np.full(grid.shape, 3.0), grid)

        assert m([10.0, -10.0, 0.0, 0.0]) == pytest.approx(3.0)

    def test_tabulated_shape_mismatch(self):
        """Should refuse a table that does not fit its grid"""
        from weylscope.core import DimensionError, RealGrid
        from weylscope.core.order_functions import tabulated

        with pytest.raises(DimensionError):
            tabulated(np.ones((4, 4)), RealGrid(4, 1.0, 4))


class TestCertification:
    """Test the empirical certification of (C0, N0)"""

    def test_peetre_constant_holds(self):
        """Should find an empirical C0 below the Peetre constant"""
        from weylscope.core import RealGrid, check_order_function
        from weylscope.core.order_functions import bracket

        m = bracket(2.0)
        empirical = check_order_function(m, RealGrid(4, 1.5, 4))

        assert 1.0 <= empirical <= m.C0

    def test_constant_certifies_to_one(self):
        """Should certify the constant weight with C0 = 1"""
        from weylscope.core import RealGrid, certify_order_function
        from weylscope.core.order_functions import constant

        assert certify_order_function(constant(2.0), RealGrid(4, 1.0, 4), 0.0) == pytest.approx(1.0)

    def test_exceeded_certificate_raises(self):
        """Should raise with the offending pair when the stored C0 is too small"""
        from weylscope.core import CertificationError, RealGrid, check_order_function
        from weylscope.core.order_functions import bracket

        m = replace(bracket(2.0), C0=1.0, N0=0.0)
        with pytest.raises(CertificationError) as info:
            check_order_function(m, RealGrid(4, 1.5, 4))

        X, Y = info.value.point
        assert len(X) == 4 and len(Y) == 4
        assert info.value.value > 1.0

    def test_uncertified_weight_raises(self):
        """Should refuse to check a weight without a certificate"""
        from weylscope.core import CertificationError, RealGrid, check_order_function
        from weylscope.core.order_functions import gaussian

        with pytest.raises(CertificationError):
            check_order_function(gaussian(0.25), RealGrid(4, 1.0, 4))

    def test_certified_copy(self):
        """Should attach an empirical certificate to an uncertified weight"""
        from weylscope.core import RealGrid
        from weylscope.core.order_functions import gaussian

        m = gaussian(0.25).certified(RealGrid(4, 1.0, 4), N0=2.0)

        assert m.is_certified
        assert m.N0 == 2.0
        assert m.C0 >= 1.0

    def test_zero_weight_reports_point(self):
        """Should report the first sample point where the weight vanishes"""
        from weylscope.core import CertificationError, RealGrid, certify_order_function
        from weylscope.core.order_functions import tabulated

        grid = RealGrid(4, 1.0, 4)
        m = tabulated(np.zeros(grid.shape), grid)

        with pytest.raises(CertificationError) as info:
            certify_order_function(m, grid, 0.0)
        assert len(info.value.point) == 4

    def test_negative_exponent_rejected(self):
        """Should refuse N0 < 0"""
        from weylscope.core import CertificationError, RealGrid, certify_order_function
        from weylscope.core.order_functions import bracket

        with pytest.raises(CertificationError):
            certify_order_function(bracket(1.0), RealGrid(4, 1.0, 4), -1.0)

    def test_product_certificate(self):
        """Should bound the product by the product of the certificates"""
        from weylscope.core import RealGrid, certify_order_function
        from weylscope.core.order_functions import anisotropic, bracket

        m1, m2 = bracket(2.0), anisotropic(0.0, -3.0)
        m = m1 * m2
        C0 = certify_order_function(m, RealGrid(4, 1.5, 4), m.N0)

        assert m.C0 == pytest.approx(m1.C0 * m2.C0)
        assert C0 <= m.C0 * (1.0 + 1e-9)

    def test_small_exponent_grows_with_box(self):
        """Should show C0 growing with the box when N0 is below |s|"""
        from weylscope.core import RealGrid, certify_order_function
        from weylscope.core.order_functions import bracket

        small = certify_order_function(bracket(2.0), RealGrid(4, 1.0, 4), 1.0)
        large = certify_order_function(bracket(2.0), RealGrid(4, 3.0, 4), 1.0)

        assert large > small


class TestRegistry:
    """Test named and spec-built order functions"""

    def test_registered_names(self):
        """Should provide the named weights used by the suites"""
        from weylscope.core.order_functions import get_order_function, registered_order_functions

        names = registered_order_functions()
        assert {"one", "bracket_2", "decay_xi_5"} <= set(names)
        assert get_order_function("decay_xi_5").params == (0.0, -5.0)

    def test_unknown_name(self):
        """Should raise UnknownEntryError listing the available names"""
        from weylscope.core import UnknownEntryError
        from weylscope.core.order_functions import get_order_function

        with pytest.raises(UnknownEntryError) as info:
            get_order_function("nope")
        assert "bracket_2" in str(info.value)

    def test_from_spec(self):
        """Should build a family from a mapping and honour overrides"""
        from weylscope.core.order_functions import order_function_from_spec

        m = order_function_from_spec({"family": "bracket", "params": [1.0]})
        assert m.N0 == 1.0

        m = order_function_from_spec({"family": "gaussian", "params": [0.5], "C0": 4.0, "N0": 2.0})
        assert (m.C0, m.N0) == (4.0, 2.0)

    def test_from_spec_rejects_tabulated(self):
        """Should refuse families that need a table"""
        from weylscope.core import RegistryError
        from weylscope.core.order_functions import order_function_from_spec

        with pytest.raises(RegistryError):
            order_function_from_spec({"family": "tabulated"})


class TestLattice:
    """Test lattices, windows and the partition of unity"""

    def test_gaussian_partition(self):
        """Should sum translated f0 windows to one on a fine lattice"""
        from weylscope.core import Lattice, RealGrid, partition_check

        lattice = Lattice.cubic(2, 0.5)
        grid = RealGrid(2, 4.0, 32)

        assert partition_check(lattice, grid) < 1e-10
        assert partition_check(lattice, grid, shift=(0.123, -0.377)) < 1e-10

    def test_coarse_lattice_aliases(self):
        """Should show the Poisson error on a lattice of step 2"""
        from weylscope.core import Lattice, RealGrid, partition_check

        dev = partition_check(Lattice.cubic(2, 2.0), RealGrid(2, 4.0, 32))

        assert 1e-6 < dev < 1.0

    def test_zero_window(self):
        """Should give deviation exactly one for the zero window"""
        from weylscope.core import Lattice, RealGrid, WindowSpec, partition_check

        zero = WindowSpec("gaussian-f0", (0.0, 0.0), 1.0, 0.0)
        dev = partition_check(Lattice.cubic(2, 0.5, zero), RealGrid(2, 4.0, 16))

        assert dev == 1.0

    def test_non_diagonal_basis(self):
        """Should fall back to the direct sum for a sheared basis"""
        from weylscope.core import Lattice, RealGrid, WindowSpec, partition_check

        basis = np.array([[0.5, 0.25], [0.0, 0.5]])
        lattice = Lattice(basis, WindowSpec.f0(2))

        assert not lattice.is_diagonal
        assert partition_check(lattice, RealGrid(2, 2.0, 8)) < 1e-8

    def test_singular_basis_rejected(self):
        """Should refuse a non-invertible basis"""
        from weylscope.core import GridError, Lattice, WindowSpec

        with pytest.raises(GridError):
            Lattice(np.array([[1.0, 2.0], [2.0, 4.0]]), WindowSpec.f0(2))

    def test_window_dimension_mismatch(self):
        """Should refuse a window of another dimension"""
        from weylscope.core import DimensionError, Lattice, WindowSpec

        with pytest.raises(DimensionError):
            Lattice(np.eye(4), WindowSpec.f0(2))

    def test_f0_window_values(self):
        """Should make the D = 2 Gaussian window equal to f0"""
        from weylscope.core import WindowSpec

        chi = WindowSpec.f0(2)

        assert chi([0.0, 0.0]) == pytest.approx(2.0)
        assert chi([1.0, 0.0]) == pytest.approx(2.0 * np.exp(-1.0))
        assert chi.shape_integral() == pytest.approx(2.0 * np.pi)

    def test_bracket_points(self):
        """Should keep lattice points with <gamma> <= radius"""
        from weylscope.core import Lattice

        lattice = Lattice.cubic(2, 1.0)

        assert len(lattice.bracket_points(0.5)) == 0
        assert len(lattice.bracket_points(1.5)) == 5
