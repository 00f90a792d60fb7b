"""Integration tests for tree-kweights."""
