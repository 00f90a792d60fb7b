"""Labeled weighted trees and their k-weights.

A tree is stored as an edge set over opaque integer vertex ids plus an
injective map label -> vertex id. Labels sit on every leaf and possibly on
internal vertices. All weights are exact Fractions.
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from types import MappingProxyType

from tree_kweights.core.codec import parse_number
from tree_kweights.core.family import WeightFamily
from tree_kweights.core.labels import LabelSubset
from tree_kweights.exceptions import FamilyError, TreeStructureError, UnknownLabelError

Edge = tuple[int, int]
"""An undirected edge, normalized so that the smaller vertex id comes first."""


def normalize_edge(u: int, v: int) -> Edge:
    """Return the edge {u, v} as an ordered pair (min, max).

    Raises:
        TreeStructureError: If u == v (loops are not tree edges).
    """
    if u == v:
        raise TreeStructureError(f"Loop at vertex {u} is not a tree edge")
    return (u, v) if u < v else (v, u)


class _LabeledShape:
    """Structural queries shared by weighted trees and bare topologies.

    Subclasses provide `edges` and `labels`; everything here is derived
    from those two and cached, since both classes are immutable.
    """

    edges: frozenset[Edge]
    labels: Mapping[int, int]

    @cached_property
    def vertices(self) -> frozenset[int]:
        """All vertex ids touched by an edge."""
        return frozenset(v for edge in self.edges for v in edge)

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        """Sorted neighbour tuple for every vertex."""
        neighbours: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            neighbours[u].append(v)
            neighbours[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in neighbours.items()}

    @cached_property
    def label_of(self) -> dict[int, int]:
        """Inverse of the label map: vertex id -> label."""
        return {vertex: label for label, vertex in self.labels.items()}

    @property
    def label_set(self) -> tuple[int, ...]:
        """All labels, ascending."""
        return tuple(sorted(self.labels))

    @property
    def n_labels(self) -> int:
        return len(self.labels)

    def degree(self, vertex: int) -> int:
        return len(self.adjacency[vertex])

    @cached_property
    def leaves(self) -> frozenset[int]:
        """Vertices of degree 1."""
        return frozenset(v for v, ns in self.adjacency.items() if len(ns) == 1)

    @property
    def leaf_labels(self) -> tuple[int, ...]:
        """Labels placed on leaves, ascending."""
        return tuple(sorted(lab for lab, v in self.labels.items() if v in self.leaves))

    @property
    def non_leaf_labels(self) -> tuple[int, ...]:
        """Labels placed on internal vertices, ascending."""
        return tuple(sorted(lab for lab, v in self.labels.items() if v not in self.leaves))

    @property
    def leaf_label_count(self) -> int:
        return len(self.leaf_labels)

    @property
    def non_leaf_label_count(self) -> int:
        return len(self.non_leaf_labels)

    def is_twig(self, edge: Edge) -> bool:
        """Check whether an edge has a leaf endpoint."""
        u, v = edge
        return u in self.leaves or v in self.leaves

    @cached_property
    def non_twig_edges(self) -> tuple[Edge, ...]:
        """Edges with no leaf endpoint, in ascending order (e_1, ..., e_N)."""
        return tuple(sorted(e for e in self.edges if not self.is_twig(e)))

    def vertex_of(self, label: int) -> int:
        """Return the vertex carrying a label.

        Raises:
            UnknownLabelError: If the label is not present.
        """
        try:
            return self.labels[label]
        except KeyError:
            known = ", ".join(str(lab) for lab in self.label_set)
            raise UnknownLabelError(
                f"Label {label} is not carried by the tree (labels: {known})"
            ) from None

    def side(self, edge: Edge, start: int) -> frozenset[int]:
        """Vertices reachable from `start` once `edge` is removed."""
        blocked = {edge, (edge[1], edge[0])}
        seen = {start}
        stack = [start]
        while stack:
            current = stack.pop()
            for nxt in self.adjacency[current]:
                if (current, nxt) in blocked or nxt in seen:
                    continue
                seen.add(nxt)
                stack.append(nxt)
        return frozenset(seen)

    def split(self, edge: Edge) -> tuple[frozenset[int], frozenset[int]]:
        """Label bipartition induced by an edge: (labels on edge[0]'s side, the rest)."""
        near = self.side(edge, edge[0])
        left = frozenset(lab for lab, v in self.labels.items() if v in near)
        return left, frozenset(self.labels) - left

    def spanning_edges(self, vertices: Iterable[int]) -> frozenset[Edge]:
        """Edges of the minimal connected subtree containing the given vertices.

        Roots the tree at one terminal and keeps every edge whose lower
        side contains a terminal; in a tree that is exactly the union of
        the pairwise paths between terminals.
        """
        terminals = set(vertices)
        if len(terminals) <= 1:
            return frozenset()
        root = min(terminals)
        parent: dict[int, int | None] = {root: None}
        order = [root]
        for current in order:
            for nxt in self.adjacency[current]:
                if nxt not in parent:
                    parent[nxt] = current
                    order.append(nxt)

        below = {v: v in terminals for v in order}
        kept: set[Edge] = set()
        for vertex in reversed(order):
            up = parent[vertex]
            if up is None:
                continue
            if below[vertex]:
                kept.add(normalize_edge(vertex, up))
                below[up] = True
        return frozenset(kept)

    def path_edges(self, u: int, v: int) -> frozenset[Edge]:
        """Edges on the unique path between two vertices."""
        return self.spanning_edges((u, v))

    def canonical_form(self) -> str:
        """Canonical string of the labeled shape, independent of unlabeled vertex ids."""
        return self._canonical(weights=None)

    def _canonical(self, weights: Mapping[Edge, Fraction] | None) -> str:
        root = self.labels[min(self.labels)]

        def encode(vertex: int, parent: int | None) -> str:
            label = self.label_of.get(vertex, "")
            children = []
            for child in self.adjacency[vertex]:
                if child == parent:
                    continue
                sub = encode(child, vertex)
                if weights is not None:
                    sub = f"{weights[normalize_edge(vertex, child)]}>{sub}"
                children.append(sub)
            return f"[{label}|{';'.join(sorted(children))}]"

        return encode(root, None)


def _validate_shape(edges: frozenset[Edge], labels: Mapping[int, int]) -> None:
    """Check the tree invariants shared by weighted trees and topologies.

    Raises:
        TreeStructureError: If any invariant fails.
    """
    if not edges:
        raise TreeStructureError("A tree needs at least one edge; a single vertex carries no weight")

    vertices = {v for edge in edges for v in edge}
    if len(edges) != len(vertices) - 1:
        raise TreeStructureError(
            f"Edge set is not a tree: {len(edges)} edges on {len(vertices)} vertices"
        )

    neighbours: dict[int, set[int]] = {v: set() for v in vertices}
    for u, v in edges:
        neighbours[u].add(v)
        neighbours[v].add(u)
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        for nxt in neighbours[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    if len(seen) != len(vertices):
        raise TreeStructureError("Edge set is not connected")

    for label, vertex in labels.items():
        if label < 1:
            raise TreeStructureError(f"Labels are positive integers, got {label}")
        if vertex not in vertices:
            raise TreeStructureError(f"Label {label} points at unknown vertex {vertex}")
    if len(set(labels.values())) != len(labels):
        raise TreeStructureError("Label map is not injective: two labels share a vertex")

    labeled = set(labels.values())
    for vertex in sorted(vertices):
        if len(neighbours[vertex]) == 1 and vertex not in labeled:
            raise TreeStructureError(f"Leaf vertex {vertex} carries no label")


@dataclass(frozen=True)
class Topology(_LabeledShape):
    """An unweighted labeled reduced tree.

    Attributes:
        edges: Set of normalized edges.
        labels: Injective map label -> vertex id.
    """

    edges: frozenset[Edge]
    labels: Mapping[int, int]

    def __post_init__(self) -> None:
        """Normalize edges and enforce the reduced-tree invariants."""
        object.__setattr__(self, "edges", frozenset(normalize_edge(u, v) for u, v in self.edges))
        object.__setattr__(self, "labels", MappingProxyType(dict(self.labels)))
        _validate_shape(self.edges, self.labels)
        for vertex in sorted(self.vertices):
            if self.degree(vertex) == 2 and vertex not in self.label_of:
                raise TreeStructureError(
                    f"Topology is not reduced: unlabeled vertex {vertex} has degree 2"
                )

    def with_weights(self, weights: Mapping[Edge, Fraction]) -> "WeightedTree":
        """Attach weights to every edge of this topology."""
        missing = self.edges - set(weights)
        if missing:
            raise TreeStructureError(f"Missing weights for edges {sorted(missing)}")
        return WeightedTree(
            weights={edge: weights[edge] for edge in self.edges},
            labels=self.labels,
        )

    def __hash__(self) -> int:
        return hash(self.canonical_form())


@dataclass(frozen=True)
class WeightedTree(_LabeledShape):
    """A labeled tree with exact, strictly positive edge weights.

    Attributes:
        weights: Map from normalized edge to positive Fraction; its keys are the edges.
        labels: Injective map label -> vertex id.
    """

    weights: Mapping[Edge, Fraction]
    labels: Mapping[int, int]

    def __post_init__(self) -> None:
        """Normalize edge keys and weights, then validate the tree invariants."""
        weights: dict[Edge, Fraction] = {}
        for (u, v), raw in self.weights.items():
            edge = normalize_edge(u, v)
            if edge in weights:
                raise TreeStructureError(f"Edge {edge} listed twice")
            value = raw if isinstance(raw, Fraction) else parse_number(raw)
            if value <= 0:
                raise TreeStructureError(f"Edge {edge} has non-positive weight {value}")
            weights[edge] = value
        object.__setattr__(self, "weights", MappingProxyType(weights))
        object.__setattr__(self, "labels", MappingProxyType(dict(self.labels)))
        _validate_shape(self.edges, self.labels)

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[int, int, Fraction | int | str]],
        labels: Mapping[int, int],
    ) -> "WeightedTree":
        """Build a tree from (u, v, weight) triples.

        Example:
            WeightedTree.from_edges([(0, 1, 3), (0, 2, 2), (0, 3, 1)], {1: 1, 2: 2, 3: 3})
        """
        weights: dict[Edge, Fraction] = {}
        for u, v, raw in edges:
            edge = normalize_edge(u, v)
            if edge in weights:
                raise TreeStructureError(f"Edge {edge} listed twice")
            weights[edge] = raw if isinstance(raw, Fraction) else parse_number(raw)
        return cls(weights=weights, labels=labels)

    @property
    def edges(self) -> frozenset[Edge]:  # type: ignore[override]
        return frozenset(self.weights)

    @property
    def total_weight(self) -> Fraction:
        """w(T), the sum of all edge weights."""
        return sum(self.weights.values(), Fraction(0))

    @property
    def topology(self) -> Topology:
        """The underlying labeled topology.

        Raises:
            TreeStructureError: If the tree is not reduced.
        """
        return Topology(edges=self.edges, labels=self.labels)

    def with_weights(self, weights: Mapping[Edge, Fraction]) -> "WeightedTree":
        """Return the same shape carrying new weights."""
        return WeightedTree(weights=dict(weights), labels=self.labels)

    def weighted_canonical_form(self) -> str:
        """Canonical string including edge weights."""
        return self._canonical(weights=self.weights)

    def __hash__(self) -> int:
        return hash(self.weighted_canonical_form())


def _subset_vertices(tree: _LabeledShape, subset: Iterable[int] | LabelSubset) -> list[int]:
    return [tree.vertex_of(label) for label in LabelSubset.of(subset)]


def k_weight(tree: WeightedTree, subset: Iterable[int] | LabelSubset) -> Fraction:
    """Compute the k-weight D_I of a tree.

    The minimal connected subtree containing the labeled vertices is the
    union of their pairwise paths; its total weight is D_I.

    Args:
        tree: The positive-weighted tree.
        subset: Labels I (k = |I|).

    Returns:
        The exact weight; 0 for a single label.

    Raises:
        UnknownLabelError: If a label of the subset is not carried by the tree.

    Examples:
        star with twigs 3, 2, 1 on labels 1, 2, 3; subset {1, 2} -> 5
    """
    spanned = tree.spanning_edges(_subset_vertices(tree, subset))
    return sum((tree.weights[e] for e in spanned), Fraction(0))


def all_k_weights(tree: WeightedTree, k: int) -> WeightFamily:
    """Compute the family of all k-weights of a tree.

    Raises:
        FamilyError: If k is outside 2..n or the tree has fewer than 3 labels.
    """
    n = tree.n_labels
    if not 2 <= k <= n:
        raise FamilyError(f"k must satisfy 2 <= k <= n={n}, got k={k}")
    entries = {
        LabelSubset(combo): k_weight(tree, combo) for combo in combinations(tree.label_set, k)
    }
    return WeightFamily(labels=tree.label_set, k=k, entries=entries)


def realizes(tree: WeightedTree, fam: WeightFamily) -> bool:
    """Check that every entry of the family equals the tree's k-weight on that subset.

    The tree may carry more labels than the family.
    """
    return all(k_weight(tree, subset) == value for subset, value in fam.entries.items())


def is_reduced(tree: _LabeledShape) -> bool:
    """Check that every vertex of degree 2 is labeled."""
    return all(v in tree.label_of for v in tree.vertices if tree.degree(v) == 2)


def is_essential(tree: _LabeledShape) -> bool:
    """Check that no vertex has degree 2."""
    return all(tree.degree(v) != 2 for v in tree.vertices)


def is_r_pseudostar(tree: _LabeledShape, r: int) -> bool:
    """Check that every edge leaves at most r leaves on one of its sides.

    A 1-pseudostar is a star.

    Raises:
        TreeStructureError: If r < 1.
    """
    if r < 1:
        raise TreeStructureError(f"r must be at least 1, got {r}")
    for edge in tree.edges:
        near = tree.side(edge, edge[0])
        near_leaves = len(near & tree.leaves)
        far_leaves = len(tree.leaves) - near_leaves
        if min(near_leaves, far_leaves) > r:
            return False
    return True


def twigs(tree: _LabeledShape) -> dict[int, Edge]:
    """Map every leaf label to its twig (the unique edge at that leaf)."""
    result: dict[int, Edge] = {}
    for label in tree.leaf_labels:
        leaf = tree.labels[label]
        result[label] = normalize_edge(leaf, tree.adjacency[leaf][0])
    return result


def is_star(tree: _LabeledShape) -> bool:
    """Check that every edge is a twig (a 1-pseudostar with one centre)."""
    return not tree.non_twig_edges and len(tree.vertices) >= 3


__all__ = [
    "Edge",
    "LabelSubset",
    "Topology",
    "WeightedTree",
    "all_k_weights",
    "is_essential",
    "is_r_pseudostar",
    "is_reduced",
    "is_star",
    "k_weight",
    "normalize_edge",
    "realizes",
    "twigs",
]
