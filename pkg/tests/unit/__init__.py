"""Unit tests for tree-kweights."""
