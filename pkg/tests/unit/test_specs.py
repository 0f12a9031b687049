"""
Unit tests for named symbols, functions, phases and order functions

Specs are 'name:key=value,...' strings:
- parsing rejects empty names, bad numbers and repeated keys
- unknown names raise UnknownEntryError listing what exists
- sampled symbols are cached per grid
"""

import numpy as np
import pytest


class TestParseSpec:
    """Test spec parsing"""

    def test_keyword_parameters(self):
        """Should split the name and key=value pairs"""
        from weylscope.interfaces.specs import parse_spec

        parsed = parse_spec("gauss:x0=1,p0=0.5")

        assert parsed.name == "gauss"
        assert parsed.params == {"x0": 1.0, "p0": 0.5}
        assert parsed.args == ()

    def test_positional_value(self):
        """Should keep bare values as positional arguments"""
        from weylscope.interfaces.specs import parse_spec

        assert parse_spec("hermite:3").args == (3.0,)

    def test_empty_spec(self):
        """Should refuse an empty spec"""
        from weylscope.core import SpecSyntaxError
        from weylscope.interfaces.specs import parse_spec

        with pytest.raises(SpecSyntaxError):
            parse_spec("")
        with pytest.raises(SpecSyntaxError):
            parse_spec(":s=1")

    def test_repeated_key(self):
        """Should refuse a key given twice"""
        from weylscope.core import SpecSyntaxError
        from weylscope.interfaces.specs import parse_spec

        with pytest.raises(SpecSyntaxError):
            parse_spec("gauss_bump:s=1,s=2")

    def test_bad_number(self):
        """Should refuse a value that is not a number"""
        from weylscope.core import SpecSyntaxError
        from weylscope.interfaces.specs import parse_spec

        with pytest.raises(SpecSyntaxError):
            parse_spec("gauss_bump:s=wide")


class TestSymbols:
    """Test the symbol registry"""

    def setup_method(self):
        from weylscope.interfaces.specs import clear_cache

        clear_cache()

    def test_unknown_symbol(self):
        """Should raise UnknownEntryError for an unregistered name"""
        from weylscope.core import UnknownEntryError
        from weylscope.interfaces.specs import symbol_function

        with pytest.raises(UnknownEntryError):
            symbol_function("banana")

    def test_unknown_parameter(self):
        """Should refuse a parameter the family does not have"""
        from weylscope.core import SpecSyntaxError
        from weylscope.interfaces.specs import symbol_function

        with pytest.raises(SpecSyntaxError):
            symbol_function("f0:s=2")

    def test_parameters_override_defaults(self):
        """Should centre gauss_bump at (c1, c2)"""
        from weylscope.interfaces.specs import symbol_function

        a = symbol_function("gauss_bump:c1=1,c2=-0.5,s=0.7")

        assert a(np.array(1.0), np.array(-0.5)) == pytest.approx(1.0)

    def test_cache_counts_hits(self):
        """Should count a hit for the second sample on the same grid"""
        from weylscope.core import PhaseGrid
        from weylscope.interfaces.specs import get_cache_stats, symbol_on

        grid = PhaseGrid.square(1, 6.0, 32)
        first = symbol_on("f0", grid)
        second = symbol_on("f0", grid)
        stats = get_cache_stats()

        assert first is second
        assert stats["hits"] == 1
        assert stats["misses"] == 1
        assert stats["size"] == 1

    def test_cache_is_bounded(self, monkeypatch):
        """Should evict the least recently used symbol once the cache is full"""
        from weylscope.core import PhaseGrid
        from weylscope.interfaces import specs

        monkeypatch.setattr(specs, "MAX_CACHED_SYMBOLS", 2)
        coarse = PhaseGrid.square(1, 6.0, 16)
        fine = PhaseGrid.square(1, 6.0, 32)
        first = specs.symbol_on("f0", coarse)
        specs.symbol_on("f0", fine)
        specs.symbol_on("f0", coarse)
        specs.symbol_on("gauss_bump", coarse)
        stats = specs.get_cache_stats()

        assert stats["size"] == 2
        assert stats["evictions"] == 1
        assert specs.symbol_on("f0", coarse) is first
        assert specs.get_cache_stats()["misses"] == 3

    def test_growing_symbols_are_tapered(self):
        """Should taper xi and the oscillator on a Weyl grid but not f0"""
        from weylscope.core import RealGrid
        from weylscope.interfaces.specs import symbol_on, weyl_symbol
        from weylscope.weyl import weyl_grid

        g = RealGrid(1, 8.0, 64)
        for name in ("xi", "oscillator"):
            assert weyl_symbol(name, g) is symbol_on(name, weyl_grid(g), taper=True)
        assert weyl_symbol("f0", g) is symbol_on("f0", weyl_grid(g), taper=False)

    def test_decaying_symbols(self):
        """Should list only Schwartz symbols when asked"""
        from weylscope.interfaces.specs import available_symbols

        decaying = available_symbols(decaying_only=True)

        assert "f0" in decaying
        assert "one" not in decaying
        assert set(decaying) < set(available_symbols())


class TestFunctions:
    """Test the function specs"""

    def test_hermite(self):
        """Should sample a normalized Hermite function"""
        from weylscope.core import RealGrid
        from weylscope.interfaces.specs import function_on

        u = function_on("hermite:2", RealGrid(1, 8.0, 128))

        assert u.inner(u).real == pytest.approx(1.0, rel=1e-8)

    def test_negative_hermite_index(self):
        """Should refuse a negative Hermite index"""
        from weylscope.core import RealGrid, SpecSyntaxError
        from weylscope.interfaces.specs import function_on

        with pytest.raises(SpecSyntaxError):
            function_on("hermite:-1", RealGrid(1, 8.0, 128))

    def test_gauss_packet(self):
        """Should sample a unit-norm Gaussian packet"""
        from weylscope.core import RealGrid
        from weylscope.interfaces.specs import function_on

        u = function_on("gauss:x0=1,p0=0.5,s=0.8", RealGrid(1, 8.0, 128))

        assert u.inner(u).real == pytest.approx(1.0, rel=1e-8)

    def test_bad_width(self):
        """Should refuse a non-positive width"""
        from weylscope.core import RealGrid, SpecSyntaxError
        from weylscope.interfaces.specs import function_on

        with pytest.raises(SpecSyntaxError):
            function_on("gauss:s=0", RealGrid(1, 8.0, 128))

    def test_unknown_function(self):
        """Should raise UnknownEntryError for an unknown family"""
        from weylscope.core import RealGrid, UnknownEntryError
        from weylscope.interfaces.specs import function_on

        with pytest.raises(UnknownEntryError):
            function_on("sinc", RealGrid(1, 8.0, 128))


class TestPhasesAndOrders:
    """Test phase and order-function lookup"""

    def test_phase_lookup(self):
        """Should build registered phases and refuse unknown ones"""
        from weylscope.core import UnknownEntryError
        from weylscope.interfaces.specs import available_phases, get_phase

        assert available_phases() == ["radial", "symbol_side", "tilted"]
        assert get_phase("radial").label == "radial"
        with pytest.raises(UnknownEntryError):
            get_phase("spiral")

    def test_order_lookup_with_registry(self):
        """Should prefer registered names and accept extra entries"""
        from weylscope.core import UnknownEntryError
        from weylscope.core.order_functions import bracket
        from weylscope.interfaces.specs import get_order

        assert get_order("bracket_2").family == "bracket"
        assert get_order("mine", {"mine": bracket(3.0)}).params == (3.0,)
        with pytest.raises(UnknownEntryError):
            get_order("mine")
