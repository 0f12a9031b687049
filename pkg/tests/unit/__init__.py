"""Unit tests for weylscope.

Small grids, closed-form expectations, one module per file.
"""
