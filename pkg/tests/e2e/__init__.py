"""End-to-end tests for the weylscope command line."""
