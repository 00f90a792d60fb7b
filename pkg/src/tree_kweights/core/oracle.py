"""Brute-force ground truth for k-weights, topologies and realizations.

Everything here is exhaustive and exact, and only meant for small
instances. The closed forms in tree, family and reconstruct are checked
against these routines.
"""

import logging
import random
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import lcm

from tree_kweights.core.family import WeightFamily
from tree_kweights.core.labels import LabelSubset
from tree_kweights.core.linear import positive_solution, solve_affine
from tree_kweights.core.tree import Edge, Topology, WeightedTree, normalize_edge
from tree_kweights.exceptions import FamilyError, OracleLimitError, TreeStructureError

logger = logging.getLogger(__name__)

MAX_BRUTE_FORCE_EDGES = 16
MAX_CATALOG_LABELS = 8
MAX_REALIZABILITY_LABELS = 6
MAX_SEARCH_LABELS = 7
MAX_GRID_POINTS = 200_000
"""Per-topology cap on grid points visited by exhaustive_realizability."""


@dataclass(frozen=True)
class TopologyConstraint:
    """Restriction on the number of labels placed on internal vertices.

    Attributes:
        non_leaf_labels: Required count M of internal labels; None admits any count.
    """

    non_leaf_labels: int | None = 0

    @classmethod
    def leaf_only(cls) -> "TopologyConstraint":
        return cls(non_leaf_labels=0)

    @classmethod
    def unrestricted(cls) -> "TopologyConstraint":
        return cls(non_leaf_labels=None)

    def admits(self, topo: Topology) -> bool:
        """Check whether a topology meets the constraint."""
        return self.non_leaf_labels is None or topo.non_leaf_label_count == self.non_leaf_labels

    def describe(self) -> str:
        if self.non_leaf_labels is None:
            return "any"
        if self.non_leaf_labels == 0:
            return "leaf-only"
        return f"{self.non_leaf_labels} non-leaf labels"


@dataclass(frozen=True)
class TopologyCatalog:
    """All labeled reduced topologies on labels 1..n meeting a constraint.

    Attributes:
        n_labels: Number of labels.
        constraint: The constraint every item satisfies.
        items: Topologies, one per isomorphism class, in canonical order.
    """

    n_labels: int
    constraint: TopologyConstraint
    items: tuple[Topology, ...] = field(default_factory=tuple)

    def __iter__(self) -> Iterator[Topology]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class Realization:
    """A topology together with positive weights realizing a family.

    Attributes:
        topology: The labeled reduced topology.
        weights: Positive weight for every edge of the topology.
    """

    topology: Topology
    weights: Mapping[Edge, Fraction]

    @property
    def tree(self) -> WeightedTree:
        return self.topology.with_weights(self.weights)

    @property
    def coordinates(self) -> dict[Edge, Fraction]:
        """Weights of the non-twig edges."""
        return {edge: self.weights[edge] for edge in self.topology.non_twig_edges}


def brute_force_k_weight(tree: WeightedTree, subset: Sequence[int] | LabelSubset) -> Fraction:
    """Minimum weight over all connected subtrees containing the subset's vertices.

    Enumerates every edge subset, keeps the connected ones that touch all
    terminals and returns the lightest.

    Raises:
        OracleLimitError: If the tree has more than MAX_BRUTE_FORCE_EDGES edges.
        UnknownLabelError: If a label is not carried by the tree.
    """
    edges = sorted(tree.edges)
    if len(edges) > MAX_BRUTE_FORCE_EDGES:
        raise OracleLimitError(
            f"Brute force supports at most {MAX_BRUTE_FORCE_EDGES} edges, tree has {len(edges)}"
        )
    terminals = {tree.vertex_of(label) for label in LabelSubset.of(subset)}
    if len(terminals) == 1:
        return Fraction(0)

    best: Fraction | None = None
    for size in range(1, len(edges) + 1):
        for chosen in combinations(edges, size):
            touched = {v for edge in chosen for v in edge}
            # a connected edge set in a tree has exactly one more vertex than edges
            if len(touched) != size + 1 or not terminals <= touched:
                continue
            weight = sum((tree.weights[e] for e in chosen), Fraction(0))
            if best is None or weight < best:
                best = weight
    assert best is not None
    return best


def _insertions(topo: Topology, label: int, leaf_only: bool) -> Iterator[Topology]:
    """Every reduced topology obtained by placing one new label on topo."""
    fresh = max(topo.vertices) + 1
    for vertex in sorted(topo.vertices):
        internal = topo.degree(vertex) >= 2
        if leaf_only and (not internal or vertex in topo.label_of):
            continue
        yield Topology(edges=topo.edges | {(vertex, fresh)}, labels={**topo.labels, label: fresh})
        if not leaf_only and internal and vertex not in topo.label_of:
            yield Topology(edges=topo.edges, labels={**topo.labels, label: vertex})
    for u, w in sorted(topo.edges):
        base = topo.edges - {(u, w)}
        split = base | {(u, fresh), (fresh, w)}
        yield Topology(
            edges=split | {(fresh, fresh + 1)}, labels={**topo.labels, label: fresh + 1}
        )
        if not leaf_only:
            yield Topology(edges=split, labels={**topo.labels, label: fresh})


def _renumber(topo: Topology) -> Topology:
    """Give labeled vertices their label as id and unlabeled ones n+1, n+2, ... in BFS order."""
    root = topo.labels[min(topo.labels)]
    order = [root]
    seen = {root}
    for current in order:
        for nxt in topo.adjacency[current]:
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
    next_id = max(topo.labels) + 1
    mapping: dict[int, int] = {}
    for vertex in order:
        if vertex in topo.label_of:
            mapping[vertex] = topo.label_of[vertex]
        else:
            mapping[vertex] = next_id
            next_id += 1
    return Topology(
        edges=frozenset(normalize_edge(mapping[u], mapping[v]) for u, v in topo.edges),
        labels={label: mapping[vertex] for label, vertex in topo.labels.items()},
    )


@lru_cache(maxsize=None)
def _grow(n: int, leaf_only: bool) -> tuple[Topology, ...]:
    if n == 2:
        return (Topology(edges=frozenset({(1, 2)}), labels={1: 1, 2: 2}),)
    seen: dict[str, Topology] = {}
    for topo in _grow(n - 1, leaf_only):
        for candidate in _insertions(topo, n, leaf_only):
            seen.setdefault(candidate.canonical_form(), candidate)
    ordered = sorted(
        (_renumber(topo) for topo in seen.values()),
        key=lambda t: (len(t.non_twig_edges), len(t.edges), t.canonical_form()),
    )
    logger.debug("Grew topologies", extra={"n": n, "leaf_only": leaf_only, "count": len(ordered)})
    return tuple(ordered)


def enumerate_topologies(
    n: int, constraint: TopologyConstraint | None = None
) -> TopologyCatalog:
    """All labeled reduced topologies on labels 1..n meeting a constraint.

    Trees on n labels are grown from those on n - 1 labels by every way of
    placing label n (new leaf on a vertex, new leaf on a subdivided edge,
    an unlabeled internal vertex, or a subdividing vertex), then
    deduplicated by canonical form.

    Args:
        n: Number of labels, 2 <= n <= MAX_CATALOG_LABELS.
        constraint: Defaults to leaf-only.

    Raises:
        OracleLimitError: If n exceeds MAX_CATALOG_LABELS.
        TreeStructureError: If n < 2.

    Examples:
        n=3 leaf-only -> 1 (the star)
        n=4 leaf-only -> 4 (star and three caterpillars)
        n=4 with 3 non-leaf labels -> 0
    """
    constraint = constraint or TopologyConstraint.leaf_only()
    if n < 2:
        raise TreeStructureError(f"Topologies need at least 2 labels, got n={n}")
    if n > MAX_CATALOG_LABELS:
        raise OracleLimitError(
            f"Topology enumeration supports at most {MAX_CATALOG_LABELS} labels, got n={n}"
        )
    pool = _grow(n, constraint.non_leaf_labels == 0)
    items = tuple(topo for topo in pool if constraint.admits(topo))
    logger.info(
        "Enumerated topologies",
        extra={"n": n, "constraint": constraint.describe(), "count": len(items)},
    )
    return TopologyCatalog(n_labels=n, constraint=constraint, items=items)


def _relabel(topo: Topology, labels: Sequence[int]) -> Topology:
    """Rename labels 1..n of a catalog topology to the given sorted labels."""
    return Topology(
        edges=topo.edges,
        labels={labels[label - 1]: vertex for label, vertex in topo.labels.items()},
    )


def _incidence_system(
    families: Sequence[WeightFamily], topo: Topology, columns: Sequence[Edge]
) -> tuple[list[list[Fraction]], list[Fraction]]:
    index = {edge: i for i, edge in enumerate(columns)}
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for fam in families:
        for subset, value in fam.entries.items():
            row = [Fraction(0)] * len(columns)
            vertices = [topo.vertex_of(label) for label in subset]
            for edge in topo.spanning_edges(vertices):
                row[index[edge]] = Fraction(1)
            rows.append(row)
            rhs.append(value)
    return rows, rhs


def _columns(topo: Topology) -> list[Edge]:
    """Twigs first, then non-twig edges, so free variables fall on non-twig edges."""
    non_twig = set(topo.non_twig_edges)
    return sorted(e for e in topo.edges if e not in non_twig) + list(topo.non_twig_edges)


def _default_step(fam: WeightFamily) -> Fraction:
    denominator = lcm(*(value.denominator for value in fam.entries.values()))
    return Fraction(1, denominator * (fam.n - 1))


def exhaustive_realizability(
    fam: WeightFamily, *, resolution: Fraction | None = None
) -> list[Realization]:
    """All grid realizations of a family across the full topology catalog.

    On each topology the k-weight equations are solved exactly; free
    weights (preferably non-twig) range over resolution * {1, 2, ...} up
    to the largest entry, and the remaining weights are solved for and
    kept only when all are strictly positive.

    Args:
        fam: Family with n <= MAX_REALIZABILITY_LABELS.
        resolution: Grid step; defaults to 1 / (lcm of denominators * (n - 1)).

    Returns:
        Realizations in catalog order, then grid order.

    Raises:
        OracleLimitError: If n or the per-topology grid is too large.
    """
    n = fam.n
    if n > MAX_REALIZABILITY_LABELS:
        raise OracleLimitError(
            f"Exhaustive realizability supports at most {MAX_REALIZABILITY_LABELS} labels, got n={n}"
        )
    step = resolution if resolution is not None else _default_step(fam)
    if step <= 0:
        raise FamilyError(f"Grid resolution must be positive, got {step}")
    ceiling = max(fam.entries.values())
    levels = [step * i for i in range(1, int(ceiling / step) + 1)]

    found: list[Realization] = []
    catalog = enumerate_topologies(n, TopologyConstraint.unrestricted())
    for base in catalog:
        topo = _relabel(base, fam.labels)
        columns = _columns(topo)
        rows, rhs = _incidence_system([fam], topo, columns)
        solution = solve_affine(rows, rhs, len(columns))
        if solution is None:
            continue
        points = len(levels) ** solution.dimension
        if points > MAX_GRID_POINTS:
            raise OracleLimitError(
                f"Grid of {points} points on topology {topo.canonical_form()} exceeds "
                f"{MAX_GRID_POINTS}; use a coarser resolution"
            )
        for free_values in product(levels, repeat=solution.dimension):
            values = solution.evaluate(free_values)
            if all(v > 0 for v in values):
                found.append(Realization(topology=topo, weights=dict(zip(columns, values))))

    logger.info(
        "Exhaustive realizability finished",
        extra={"n": n, "topologies": len(catalog), "realizations": len(found), "step": str(step)},
    )
    return found


def find_realization(
    families: Sequence[WeightFamily], labels: Sequence[int] | None = None
) -> WeightedTree | None:
    """Search the topology catalog for a tree realizing every family at once.

    Each topology gives a linear system in its edge weights; a strictly
    positive solution is sought by Fourier-Motzkin elimination.

    Args:
        families: Families whose labels all lie in `labels`.
        labels: The tree's labels; defaults to the union of the families' labels.

    Returns:
        The first realizing tree in catalog order, or None.

    Raises:
        OracleLimitError: If there are more than MAX_SEARCH_LABELS labels.
    """
    if labels is None:
        labels = sorted({label for fam in families for label in fam.labels})
    universe = tuple(sorted(set(labels)))
    if len(universe) > MAX_SEARCH_LABELS:
        raise OracleLimitError(
            f"Realization search supports at most {MAX_SEARCH_LABELS} labels, got {len(universe)}"
        )
    for fam in families:
        outside = set(fam.labels) - set(universe)
        if outside:
            raise FamilyError(f"Family labels {sorted(outside)} are outside {list(universe)}")

    catalog = enumerate_topologies(len(universe), TopologyConstraint.unrestricted())
    for base in catalog:
        topo = _relabel(base, universe)
        columns = _columns(topo)
        rows, rhs = _incidence_system(families, topo, columns)
        solution = solve_affine(rows, rhs, len(columns))
        if solution is None:
            continue
        values = positive_solution(solution)
        if values is not None:
            logger.debug("Found realization", extra={"topology": topo.canonical_form()})
            return topo.with_weights(dict(zip(columns, values)))
    return None


def random_weighted_tree(
    rng: random.Random,
    n: int,
    *,
    non_leaf_labels: int | None = None,
    max_numerator: int = 12,
    max_denominator: int = 4,
) -> WeightedTree:
    """A random positive-weighted reduced tree on labels 1..n.

    Picks a topology uniformly from the catalog meeting the constraint and
    draws each weight as p/q with 1 <= p <= max_numerator, 1 <= q <= max_denominator.

    Raises:
        TreeStructureError: If no topology meets the constraint.
    """
    catalog = enumerate_topologies(n, TopologyConstraint(non_leaf_labels=non_leaf_labels))
    if not catalog.items:
        raise TreeStructureError(
            f"No reduced topology on {n} labels has {non_leaf_labels} non-leaf labels"
        )
    topo = rng.choice(catalog.items)
    weights = {
        edge: Fraction(rng.randint(1, max_numerator), rng.randint(1, max_denominator))
        for edge in sorted(topo.edges)
    }
    return topo.with_weights(weights)
