"""Exact k-weights of positive-weighted labeled trees."""

# Primary API
from tree_kweights.core.family import (
    FamilyClass,
    FamilyStatus,
    WeightFamily,
    check_four_point,
    check_triangle,
    classify_family,
    is_positive_leaf_treelike,
    is_positive_treelike,
)
from tree_kweights.core.labels import LabelSubset
from tree_kweights.core.multiweight import (
    Correspondence,
    EquivalenceReport,
    MixedFamily,
    extend_family,
    mixed_treelike_equivalence,
    nm1_to_two,
    two_to_nm1,
)
from tree_kweights.core.oracle import (
    Realization,
    TopologyCatalog,
    TopologyConstraint,
    brute_force_k_weight,
    enumerate_topologies,
    exhaustive_realizability,
    find_realization,
    random_weighted_tree,
)
from tree_kweights.core.reconstruct import (
    SimplexDescription,
    SimplexKind,
    TwigFormula,
    canonical_pseudostar,
    moduli_description,
    r_io,
    r_oi,
    realize_on_topology,
    reconstruct,
    reconstruct_equality_star,
    reconstruct_from_two_weights,
)
from tree_kweights.core.tree import (
    Topology,
    WeightedTree,
    all_k_weights,
    is_essential,
    is_r_pseudostar,
    is_reduced,
    is_star,
    k_weight,
    realizes,
    twigs,
)

# Exceptions
from tree_kweights.exceptions import (
    ClassificationError,
    DocumentParseError,
    FamilyError,
    NotTreelikeError,
    OracleLimitError,
    RewriteError,
    SimplexMembershipError,
    TreeStructureError,
    TreeWeightsError,
    UnknownLabelError,
)

__all__ = [
    # Trees
    "Topology",
    "WeightedTree",
    "LabelSubset",
    "all_k_weights",
    "is_essential",
    "is_r_pseudostar",
    "is_reduced",
    "is_star",
    "k_weight",
    "realizes",
    "twigs",
    # Families
    "FamilyClass",
    "FamilyStatus",
    "WeightFamily",
    "check_four_point",
    "check_triangle",
    "classify_family",
    "is_positive_leaf_treelike",
    "is_positive_treelike",
    # Reconstruction
    "SimplexDescription",
    "SimplexKind",
    "TwigFormula",
    "canonical_pseudostar",
    "moduli_description",
    "r_io",
    "r_oi",
    "realize_on_topology",
    "reconstruct",
    "reconstruct_equality_star",
    "reconstruct_from_two_weights",
    # Correspondences
    "Correspondence",
    "EquivalenceReport",
    "MixedFamily",
    "extend_family",
    "mixed_treelike_equivalence",
    "nm1_to_two",
    "two_to_nm1",
    # Oracle
    "Realization",
    "TopologyCatalog",
    "TopologyConstraint",
    "brute_force_k_weight",
    "enumerate_topologies",
    "exhaustive_realizability",
    "find_realization",
    "random_weighted_tree",
    # Exceptions
    "ClassificationError",
    "DocumentParseError",
    "FamilyError",
    "NotTreelikeError",
    "OracleLimitError",
    "RewriteError",
    "SimplexMembershipError",
    "TreeStructureError",
    "TreeWeightsError",
    "UnknownLabelError",
]

__version__ = "0.1.0"
