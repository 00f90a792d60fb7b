"""Core components: trees, families, reconstruction and the brute-force oracle."""

from tree_kweights.core.family import WeightFamily
from tree_kweights.core.tree import Topology, WeightedTree

__all__ = ["Topology", "WeightFamily", "WeightedTree"]
