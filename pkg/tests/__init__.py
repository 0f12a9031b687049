"""
Test suite for weylscope.

Test structure:
- unit/ - Unit tests (fast, one module each, small grids)
- integration/ - Suite runs through the runner and the report writer
- e2e/ - The weylscope command line end to end

Run tests:
    pytest                    # All tests
    pytest tests/unit         # Unit tests only
    pytest tests/integration  # Integration tests only
    pytest -k "magnetic"      # Tests matching name
    pytest --cov              # With coverage

Philosophy:
    Grids in tests are small. Tolerances are the ones the suites use
    on the same grids, never looser.
"""
