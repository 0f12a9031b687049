"""
Unit tests for the check helpers and the per-weight theorem sweep

- the refined rank-one quadrature always has more nodes than the coarse one
- associativity triples only use Gaussian-class symbols
- grid-doubling comparisons double all three grids on the same boxes
- every convergent order function gets its own operator-bound check and
  the others are reported as outside the hypothesis
"""


class TestCheckHelpers:
    """Test module-level helpers of the check catalogue"""

    def test_refined_nodes(self):
        """Should compare M = 16 against M = 24 and refine larger M by half"""
        from weylscope.runtime.checks import REFINED_NODES, refined_nodes

        assert REFINED_NODES == 24
        assert refined_nodes(16) == 24
        assert refined_nodes(8) == 24
        assert refined_nodes(24) == 36
        assert refined_nodes(32) == 48

    def test_associativity_triples_are_gaussian(self):
        """Should build associativity triples from Gaussian-class symbols only"""
        from weylscope.runtime.checks import ASSOCIATIVITY_TRIPLES, GAUSSIAN_SYMBOLS

        used = {name for triple in ASSOCIATIVITY_TRIPLES for name in triple}

        assert used <= set(GAUSSIAN_SYMBOLS)
        assert {"f0", "gauss_bump", "modulated_gauss"} <= used

    def test_doubled_grids(self):
        """Should double the nodes of all three grids on the same boxes"""
        from weylscope.runtime import SuiteConfig, SuiteContext
        from weylscope.runtime.checks import doubled_grids
        from weylscope.storage import VerificationReport

        ctx = SuiteContext(SuiteConfig(), VerificationReport())
        fg, cg, sg = doubled_grids(ctx)

        assert fg.points_per_axis == 2 * ctx.function_grid.points_per_axis
        assert fg.half_width == ctx.function_grid.half_width
        assert cg.re.points_per_axis == 2 * ctx.complex_grid.re.points_per_axis
        assert cg.re.half_width == ctx.complex_grid.re.half_width
        assert sg.x.points_per_axis == 2 * ctx.symbol_grid.x.points_per_axis
        assert sg.x.half_width == ctx.symbol_grid.x.half_width

    def test_gaussian_symbols_decay(self):
        """Should only count decaying registered symbols as Gaussian"""
        from weylscope.interfaces.specs import symbol_entry
        from weylscope.runtime.checks import GAUSSIAN_SYMBOLS

        assert all(symbol_entry(name)[0].decays for name in GAUSSIAN_SYMBOLS)


class TestTheoremSweep:
    """Test that the theorem suite runs once per order function"""

    def _context(self):
        from weylscope.runtime import SuiteContext, config_from_dict
        from weylscope.runtime.suites import resolve_corpus
        from weylscope.storage import VerificationReport

        cfg = config_from_dict({"corpus": {"symbols": ["f0"],
                                           "order_functions": ["one", "bracket_2", "decay_xi_5"]}})
        ctx = SuiteContext(cfg, VerificationReport())
        resolve_corpus(ctx)
        ctx.suite = "theorems"
        return ctx

    def test_every_convergent_weight_is_checked(self, monkeypatch):
        """Should check each convergent weight and flag the divergent one"""
        from weylscope.runtime import checks

        ctx = self._context()
        monkeypatch.setattr(checks, "_convergent",
                            lambda c: [(name, c.order_functions[name]) for name in ("one", "bracket_2")])
        monkeypatch.setattr(checks, "_bound_ratio", lambda c, m, fg, sg: (1.0, []))

        checks.theorems_suite(ctx)
        status = {r.name: r.status for r in ctx.report.records}

        assert status == {
            "operator-bound[one]": "pass",
            "operator-bound[bracket_2]": "pass",
            "operator-bound[decay_xi_5]": "warn-boundary",
        }
        divergent = next(r for r in ctx.report.records if r.name == "operator-bound[decay_xi_5]")
        assert divergent.computed["schur_divergent"] is True

    def test_no_convergent_weight(self, monkeypatch):
        """Should fail a single operator-bound check when no weight qualifies"""
        from weylscope.runtime import checks

        ctx = self._context()
        monkeypatch.setattr(checks, "_convergent", lambda c: [])

        checks.theorems_suite(ctx)

        assert [(r.name, r.status) for r in ctx.report.records] == [("operator-bound", "fail")]
