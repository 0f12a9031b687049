"""Integration tests for weylscope.

Suites run through the runner; reports and logs go to temp directories.
"""
