"""Command-line adapter."""

from tree_kweights.cli.app import app, main

__all__ = ["app", "main"]
