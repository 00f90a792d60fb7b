"""Realizing trees for (n-1)-weight and 2-weight families.

For an (n-1)-family F the realizations on a fixed labeled reduced
topology form an open simplex parametrized by the non-twig weights
e_1, ..., e_N:

- all strict, leaf-only topology: every w(e) > 0 with sum < bound (dimension N);
- all strict, the M maximal labels on internal vertices: sum = total (dimension N - 1);
- one equality at c: only the star centered at c, with fixed weights;
- anything else: empty.

Twig weights are affine in the coordinate sum, so every admissible
coordinate vector determines the whole tree.
"""

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from tree_kweights.core.codec import parse_number
from tree_kweights.core.family import (
    FamilyClass,
    FamilyStatus,
    WeightFamily,
    check_four_point,
    classify_family,
    find_four_point_violation,
    find_triangle_violation,
)
from tree_kweights.core.tree import (
    Edge,
    Topology,
    WeightedTree,
    all_k_weights,
    normalize_edge,
    twigs,
)
from tree_kweights.exceptions import (
    ClassificationError,
    FamilyError,
    NotTreelikeError,
    RewriteError,
    SimplexMembershipError,
)

logger = logging.getLogger(__name__)

STAR_CENTER = 0
"""Vertex id of the unlabeled center in canonical pseudostars; leaf vertex ids equal labels."""


class SimplexKind(Enum):
    """Shape of the moduli set of positive weights on one topology."""

    OPEN_SUM_BOUND = "open_sum_bound"
    SUM_EQUALITY = "sum_equality"
    POINT = "point"
    EMPTY = "empty"


@dataclass(frozen=True)
class TwigFormula:
    """Affine twig weight w(twig_j) = constant - slope * (sum of non-twig weights)."""

    constant: Fraction
    slope: Fraction

    def evaluate(self, coordinate_sum: Fraction) -> Fraction:
        return self.constant - self.slope * coordinate_sum


@dataclass(frozen=True)
class SimplexDescription:
    """Moduli of positive weights realizing a family on one topology.

    Attributes:
        topology: The labeled reduced topology.
        kind: OPEN_SUM_BOUND, SUM_EQUALITY, POINT or EMPTY.
        coordinates: The non-twig edges e_1, ..., e_N in ascending order.
        twig_formula: Leaf label -> affine twig weight.
        bound: Strict upper bound on the coordinate sum (OPEN_SUM_BOUND).
        total: Required coordinate sum (SUM_EQUALITY).
        point: Full edge-weight map of the unique realization (POINT).
        reason: Why no realization exists (EMPTY).
    """

    topology: Topology
    kind: SimplexKind
    coordinates: tuple[Edge, ...]
    twig_formula: Mapping[int, TwigFormula] = field(default_factory=dict)
    bound: Fraction | None = None
    total: Fraction | None = None
    point: Mapping[Edge, Fraction] | None = None
    reason: str = ""

    @property
    def dimension(self) -> int:
        """Dimension of the moduli set; -1 when it is empty."""
        if self.kind is SimplexKind.OPEN_SUM_BOUND:
            return len(self.coordinates)
        if self.kind is SimplexKind.SUM_EQUALITY:
            return len(self.coordinates) - 1
        if self.kind is SimplexKind.POINT:
            return 0
        return -1

    def check(self, coords: Mapping[Edge, Fraction]) -> None:
        """Verify that coordinates lie in the open simplex.

        Raises:
            SimplexMembershipError: Naming the first violated constraint.
        """
        if self.kind is SimplexKind.EMPTY:
            raise SimplexMembershipError(f"The moduli set is empty: {self.reason}")

        given = {normalize_edge(u, v): value for (u, v), value in coords.items()}
        expected = set(self.coordinates)
        if set(given) != expected:
            missing = sorted(expected - set(given))
            extra = sorted(set(given) - expected)
            raise SimplexMembershipError(
                f"Coordinates must be exactly the non-twig edges {list(self.coordinates)}; "
                f"missing {missing}, unexpected {extra}"
            )

        for edge in self.coordinates:
            if given[edge] <= 0:
                raise SimplexMembershipError(f"w{edge} = {given[edge]} must be > 0")

        total = sum(given.values(), Fraction(0))
        if self.kind is SimplexKind.OPEN_SUM_BOUND:
            assert self.bound is not None
            if total >= self.bound:
                raise SimplexMembershipError(
                    f"Sum of non-twig weights {total} must be < {self.bound}"
                )
        elif self.kind is SimplexKind.SUM_EQUALITY:
            if total != self.total:
                raise SimplexMembershipError(
                    f"Sum of non-twig weights {total} must equal {self.total}"
                )

    def contains(self, coords: Mapping[Edge, Fraction]) -> bool:
        """Membership test without the diagnostic."""
        try:
            self.check(coords)
        except SimplexMembershipError:
            return False
        return True

    def interior_point(self) -> dict[Edge, Fraction]:
        """The barycenter of the simplex, a deterministic admissible point.

        Raises:
            SimplexMembershipError: If the moduli set is empty.
        """
        count = len(self.coordinates)
        if self.kind is SimplexKind.EMPTY:
            raise SimplexMembershipError(f"The moduli set is empty: {self.reason}")
        if self.kind is SimplexKind.OPEN_SUM_BOUND:
            assert self.bound is not None
            return {edge: self.bound / (count + 1) for edge in self.coordinates}
        if self.kind is SimplexKind.SUM_EQUALITY:
            assert self.total is not None
            return {edge: self.total / count for edge in self.coordinates}
        return {}

    def weights_at(self, coords: Mapping[Edge, Fraction]) -> dict[Edge, Fraction]:
        """Full edge-weight map for admissible coordinates."""
        self.check(coords)
        if self.kind is SimplexKind.POINT:
            assert self.point is not None
            return dict(self.point)
        weights = {normalize_edge(u, v): value for (u, v), value in coords.items()}
        coordinate_sum = sum(weights.values(), Fraction(0))
        for label, edge in twigs(self.topology).items():
            weights[edge] = self.twig_formula[label].evaluate(coordinate_sum)
        return weights


def _require_nm1(fam: WeightFamily, operation: str) -> FamilyClass:
    fam.require_k(fam.n - 1, operation)
    return classify_family(fam)


def pseudostar_weights(fam: WeightFamily) -> dict[int, Fraction]:
    """Twig weights of the star with unlabeled center whose (n-1)-weights are F.

    Solves D_hat(j) = W - w_j with W the sum of all twigs:
    w_j = (sum_{k != j} D_hat(k) - (n - 2) * D_hat(j)) / (n - 1).
    The values are positive exactly when F is all-strict.
    """
    hats = fam.complements()
    total = sum(hats.values(), Fraction(0))
    n = fam.n
    return {
        label: ((total - hats[label]) - (n - 2) * hats[label]) / (n - 1) for label in fam.labels
    }


def canonical_pseudostar(fam: WeightFamily) -> WeightedTree:
    """Build the star with unlabeled center and n labeled leaves realizing F.

    Args:
        fam: All-strict family of (n-1)-weights.

    Returns:
        Star with center vertex 0 and leaf vertex id equal to its label.

    Raises:
        FamilyError: If k != n - 1.
        ClassificationError: If the family is not all-strict.

    Examples:
        D_hat = (3, 4, 5) -> twigs 3, 2, 1
        D_hat = (3, 3, 3, 3) -> all twigs 1
    """
    classification = _require_nm1(fam, "canonical_pseudostar")
    if classification.status is not FamilyStatus.ALL_STRICT:
        raise ClassificationError(
            f"canonical_pseudostar needs an all-strict family, got status "
            f"{classification.status.value}"
        )
    weights = {
        (STAR_CENTER, label): value for label, value in pseudostar_weights(fam).items()
    }
    return WeightedTree(weights=weights, labels={label: label for label in fam.labels})


def reconstruct_equality_star(fam: WeightFamily) -> WeightedTree:
    """Build the unique tree of a family with exactly one equality.

    The realization is the star whose center carries the equality label c,
    with w(e(c, j)) = D_hat(c) - D_hat(j). Vertex ids equal labels.

    Raises:
        FamilyError: If k != n - 1.
        ClassificationError: If the status is not one equality.

    Examples:
        D_hat = (1, 2, 3) -> center 3, w(3, 1) = 2, w(3, 2) = 1
    """
    classification = _require_nm1(fam, "reconstruct_equality_star")
    if classification.status is not FamilyStatus.ONE_EQUALITY:
        detail = ""
        if classification.witnesses:
            detail = f" (witnesses {list(classification.witnesses)})"
        raise ClassificationError(
            f"reconstruct_equality_star needs exactly one equality, got status "
            f"{classification.status.value}{detail}"
        )
    center = classification.center
    assert center is not None
    top = fam.hat(center)
    weights = {(center, label): top - fam.hat(label) for label in fam.labels if label != center}
    return WeightedTree(weights=weights, labels={label: label for label in fam.labels})


def _empty(topo: Topology, reason: str) -> SimplexDescription:
    logger.debug("Empty moduli set", extra={"reason": reason})
    return SimplexDescription(
        topology=topo, kind=SimplexKind.EMPTY, coordinates=topo.non_twig_edges, reason=reason
    )


def moduli_description(fam: WeightFamily, topo: Topology) -> SimplexDescription:
    """Describe all positive weights on a topology realizing an (n-1)-family.

    Args:
        fam: Family of (n-1)-weights.
        topo: Labeled reduced topology on the same labels.

    Returns:
        The simplex description; EMPTY when no positive weight realizes F.

    Raises:
        FamilyError: If k != n - 1 or the topology's labels differ from the family's.

    Examples:
        all D_hat = 3 on the 4-leaf caterpillar -> OPEN_SUM_BOUND, bound 3
        D_hat = (2, 5/2, 3, 3) on 1-u-v-2 with 3, 4 on u, v -> SUM_EQUALITY, total 3/2
    """
    classification = _require_nm1(fam, "moduli_description")
    if topo.label_set != fam.labels:
        raise FamilyError(
            f"Topology labels {list(topo.label_set)} do not match family labels {list(fam.labels)}"
        )

    n = fam.n
    coordinates = topo.non_twig_edges
    hats = fam.complements()
    status = classification.status

    if status is FamilyStatus.VIOLATION:
        return _empty(topo, f"family is not treelike (witnesses {list(classification.witnesses)})")

    if status is FamilyStatus.ONE_EQUALITY:
        center = classification.center
        assert center is not None
        if topo.non_leaf_labels != (center,) or coordinates:
            return _empty(
                topo, f"one equality at {center} is realized only by the star centered at {center}"
            )
        center_vertex = topo.vertex_of(center)
        rigid = {
            label: TwigFormula(constant=hats[center] - hats[label], slope=Fraction(0))
            for label in fam.labels
            if label != center
        }
        point = {
            normalize_edge(center_vertex, topo.vertex_of(label)): formula.constant
            for label, formula in rigid.items()
        }
        logger.info("Rigid star", extra={"center": center, "n": n})
        return SimplexDescription(
            topology=topo,
            kind=SimplexKind.POINT,
            coordinates=(),
            twig_formula=rigid,
            point=point,
        )

    if not topo.non_leaf_labels:
        base = pseudostar_weights(fam)
        slope = Fraction(1, n - 1)
        formula = {label: TwigFormula(constant=base[label], slope=slope) for label in fam.labels}
        if not coordinates:
            point = {edge: base[label] for label, edge in twigs(topo).items()}
            return SimplexDescription(
                topology=topo,
                kind=SimplexKind.POINT,
                coordinates=(),
                twig_formula=formula,
                point=point,
            )
        bound = (n - 1) * min(base.values())
        logger.info("Open sum-bound simplex", extra={"n": n, "dimension": len(coordinates)})
        return SimplexDescription(
            topology=topo,
            kind=SimplexKind.OPEN_SUM_BOUND,
            coordinates=coordinates,
            twig_formula=formula,
            bound=bound,
        )

    m_max = classification.m_max
    if not 1 <= m_max <= n - 2 or topo.non_leaf_labels != classification.max_labels:
        return _empty(
            topo,
            f"internal labels {list(topo.non_leaf_labels)} must be exactly the "
            f"maximal labels {list(classification.max_labels)} with at most n-2 of them",
        )
    if not coordinates:
        return _empty(topo, "internal labels need at least one non-twig edge")

    top = hats[classification.max_labels[0]]
    leaf_labels = topo.leaf_labels
    total = sum((hats[j] for j in leaf_labels), Fraction(0)) - (n - m_max - 1) * top
    slope = Fraction(1, n - m_max - 1)
    formula = {
        j: TwigFormula(constant=top - hats[j] + slope * total, slope=slope) for j in leaf_labels
    }
    logger.info(
        "Sum-equality simplex", extra={"n": n, "m_max": m_max, "dimension": len(coordinates) - 1}
    )
    return SimplexDescription(
        topology=topo,
        kind=SimplexKind.SUM_EQUALITY,
        coordinates=coordinates,
        twig_formula=formula,
        total=total,
    )


def realize_on_topology(
    fam: WeightFamily, topo: Topology, coords: Mapping[Edge, Fraction | int | str]
) -> WeightedTree:
    """Weighted tree on a topology with given non-twig weights realizing F.

    Raises:
        SimplexMembershipError: If coords lie outside the moduli simplex.
        FamilyError: If the family and topology do not match.

    Examples:
        all D_hat = 3, caterpillar, internal weight 1 -> twigs 2/3
        same with internal weight 3 -> SimplexMembershipError (bound is strict)
    """
    parsed = {
        normalize_edge(u, v): value if isinstance(value, Fraction) else parse_number(value)
        for (u, v), value in coords.items()
    }
    description = moduli_description(fam, topo)
    return topo.with_weights(description.weights_at(parsed))


def _require_leaf_only(tree: WeightedTree, operation: str) -> None:
    if tree.non_leaf_labels:
        raise RewriteError(
            f"{operation} applies to trees labeled only on leaves, "
            f"got internal labels {list(tree.non_leaf_labels)}"
        )


def _check_split(tree: WeightedTree, edge: Edge, r: int, operation: str) -> None:
    left, right = tree.split(edge)
    if len(left) <= r or len(right) <= r:
        raise RewriteError(
            f"{operation} needs both sides of {edge} to carry more than r={r} labels, "
            f"got {len(left)} and {len(right)}"
        )


def r_io(tree: WeightedTree, edge: tuple[int, int], r: int) -> WeightedTree:
    """Contract a non-twig edge and spread its weight over the twigs.

    Every twig gains y / (n - r), where y is the contracted weight. The
    merged vertex keeps the smaller id. For r = 1 all (n-1)-weights are
    preserved.

    Raises:
        RewriteError: If the edge is missing, is a twig, or a side has at most r labels.

    Examples:
        caterpillar twigs 1, internal 3/2, r = 1 -> star twigs 3/2
    """
    if r < 1:
        raise RewriteError(f"r must be at least 1, got {r}")
    _require_leaf_only(tree, "r_io")
    target = normalize_edge(*edge)
    if target not in tree.weights:
        raise RewriteError(f"Edge {target} is not in the tree")
    if tree.is_twig(target):
        raise RewriteError(f"Edge {target} is a twig and cannot be contracted")
    _check_split(tree, target, r, "r_io")

    keep, drop = target
    y = tree.weights[target]
    share = y / (tree.n_labels - r)
    merged: dict[Edge, Fraction] = {}
    for (u, v), weight in tree.weights.items():
        if (u, v) == target:
            continue
        u, v = (keep if u == drop else u), (keep if v == drop else v)
        merged[normalize_edge(u, v)] = weight
    contracted = WeightedTree(weights=merged, labels=tree.labels)
    for twig in twigs(contracted).values():
        merged[twig] += share
    logger.debug("Applied r-IO", extra={"edge": target, "r": r, "weight": str(y)})
    return WeightedTree(weights=merged, labels=tree.labels)


def r_oi(
    tree: WeightedTree,
    vertex: int,
    part: Iterable[int],
    new_weight: Fraction | int | str,
    r: int,
) -> WeightedTree:
    """Split a vertex along a bipartition of its neighbours; inverse of r_io.

    The neighbours in `part` move to a new vertex (id = max vertex id + 1)
    joined to `vertex` by an edge of weight y; every twig loses y / (n - r).

    Raises:
        RewriteError: If the bipartition is invalid, the split has a side with
            at most r labels, or a twig weight would become non-positive.

    Examples:
        star twigs 3/2, split {1, 2} | {3, 4}, y = 3/2, r = 1 -> caterpillar twigs 1
    """
    if r < 1:
        raise RewriteError(f"r must be at least 1, got {r}")
    _require_leaf_only(tree, "r_oi")
    y = new_weight if isinstance(new_weight, Fraction) else parse_number(new_weight)
    if y <= 0:
        raise RewriteError(f"New edge weight must be > 0, got {y}")
    if vertex not in tree.vertices:
        raise RewriteError(f"Vertex {vertex} is not in the tree")
    if vertex in tree.label_of:
        raise RewriteError(f"Vertex {vertex} carries label {tree.label_of[vertex]} and cannot be split")

    moved = set(part)
    neighbours = set(tree.adjacency[vertex])
    if not moved <= neighbours:
        raise RewriteError(f"Vertices {sorted(moved - neighbours)} are not neighbours of {vertex}")
    if len(moved) < 2 or len(neighbours - moved) < 2:
        raise RewriteError(
            f"Both parts of the bipartition at {vertex} need at least 2 neighbours, "
            f"got {len(moved)} and {len(neighbours - moved)}"
        )

    new_vertex = max(tree.vertices) + 1
    weights: dict[Edge, Fraction] = {}
    for (u, v), weight in tree.weights.items():
        if u == vertex and v in moved:
            u = new_vertex
        elif v == vertex and u in moved:
            v = new_vertex
        weights[normalize_edge(u, v)] = weight
    new_edge = normalize_edge(vertex, new_vertex)
    weights[new_edge] = y

    split = WeightedTree(weights=weights, labels=tree.labels)
    _check_split(split, new_edge, r, "r_oi")
    share = y / (tree.n_labels - r)
    for label, twig in twigs(split).items():
        if weights[twig] <= share:
            raise RewriteError(
                f"Twig of label {label} has weight {weights[twig]}, which must exceed y/(n-r) = {share}"
            )
        weights[twig] -= share
    logger.debug("Applied r-OI", extra={"vertex": vertex, "r": r, "weight": str(y)})
    return WeightedTree(weights=weights, labels=tree.labels)


class _TreeBuilder:
    """Mutable adjacency used while inserting labels one at a time."""

    def __init__(self) -> None:
        self.adjacency: dict[int, dict[int, Fraction]] = {}
        self.labels: dict[int, int] = {}
        self._next_id = 0

    def new_vertex(self) -> int:
        vertex = self._next_id
        self._next_id += 1
        self.adjacency[vertex] = {}
        return vertex

    def connect(self, u: int, v: int, weight: Fraction) -> None:
        self.adjacency[u][v] = weight
        self.adjacency[v][u] = weight

    def disconnect(self, u: int, v: int) -> None:
        del self.adjacency[u][v]
        del self.adjacency[v][u]

    def path(self, start: int, end: int) -> list[int]:
        parent: dict[int, int | None] = {start: None}
        queue = [start]
        for current in queue:
            for nxt in sorted(self.adjacency[current]):
                if nxt not in parent:
                    parent[nxt] = current
                    queue.append(nxt)
        walk = [end]
        while walk[-1] != start:
            previous = parent[walk[-1]]
            assert previous is not None
            walk.append(previous)
        return walk[::-1]

    def point_on_path(self, start: int, end: int, distance: Fraction) -> int:
        """Vertex at `distance` from start along the path, subdividing an edge if needed."""
        walk = self.path(start, end)
        travelled = Fraction(0)
        for u, v in zip(walk, walk[1:]):
            if travelled == distance:
                return u
            weight = self.adjacency[u][v]
            if travelled + weight > distance:
                middle = self.new_vertex()
                self.disconnect(u, v)
                self.connect(u, middle, distance - travelled)
                self.connect(middle, v, travelled + weight - distance)
                return middle
            travelled += weight
        return end

    def build(self) -> WeightedTree:
        weights = {
            normalize_edge(u, v): w for u, ns in self.adjacency.items() for v, w in ns.items()
        }
        return WeightedTree(weights=weights, labels=self.labels)


def reconstruct_from_two_weights(fam: WeightFamily) -> WeightedTree:
    """Rebuild the unique reduced tree whose 2-weights are F.

    Labels are inserted in ascending order. For a new label x the
    attachment point is found on the path between the placed pair (a, b)
    minimizing h = (D_ax + D_bx - D_ab) / 2, at distance D_ax - h from a.
    When h = 0 the label sits on the tree itself (possibly on an internal
    vertex); otherwise it hangs on a new twig of weight h.

    Raises:
        FamilyError: If k != 2.
        NotTreelikeError: If the triangle or four-point condition fails.

    Examples:
        D12=5, D13=4, D23=3 -> star with twigs 3, 2, 1
        D12=3, D13=2, D23=1 -> path 1 - 3 - 2 with label 3 internal
    """
    fam.require_k(2, "reconstruct_from_two_weights")
    if not check_four_point(fam):
        witness = find_triangle_violation(fam)
        if witness is not None:
            raise NotTreelikeError(f"Triangle inequality fails on labels {witness}")
        raise NotTreelikeError(
            f"Four-point condition fails on labels {find_four_point_violation(fam)}"
        )

    builder = _TreeBuilder()
    first, second, *rest = fam.labels
    builder.labels[first] = builder.new_vertex()
    builder.labels[second] = builder.new_vertex()
    builder.connect(builder.labels[first], builder.labels[second], fam.pair(first, second))

    placed = [first, second]
    for x in rest:
        best: tuple[Fraction, int, int] | None = None
        for i, a in enumerate(placed):
            for b in placed[i + 1:]:
                h = (fam.pair(a, x) + fam.pair(b, x) - fam.pair(a, b)) / 2
                if best is None or h < best[0]:
                    best = (h, a, b)
        assert best is not None
        h, a, b = best
        anchor = builder.point_on_path(builder.labels[a], builder.labels[b], fam.pair(a, x) - h)
        if h == 0:
            if anchor in builder.labels.values():
                raise NotTreelikeError(f"Label {x} would share a vertex with another label")
            builder.labels[x] = anchor
        else:
            leaf = builder.new_vertex()
            builder.connect(anchor, leaf, h)
            builder.labels[x] = leaf
        placed.append(x)
        logger.debug("Inserted label", extra={"label": x, "pair": (a, b), "height": str(h)})

    tree = builder.build()
    if all_k_weights(tree, 2).entries != fam.entries:
        raise NotTreelikeError("Reconstructed tree does not reproduce the 2-weights")
    logger.info("Reconstructed tree from 2-weights", extra={"n": fam.n, "edges": len(tree.edges)})
    return tree


def reconstruct(fam: WeightFamily) -> WeightedTree:
    """Canonical realization of a treelike family with k = n - 1 or k = 2.

    For k = n - 1 this is the rigid star (one equality) or the canonical
    pseudostar (all strict); for k = 2 it is the unique reduced tree.
    When n = 3 both readings apply and agree; the (n-1) route is used.

    Raises:
        NotTreelikeError: If the family is not treelike.
        FamilyError: For any other k.
    """
    if fam.k == fam.n - 1:
        classification = classify_family(fam)
        if classification.status is FamilyStatus.ONE_EQUALITY:
            return reconstruct_equality_star(fam)
        if classification.status is FamilyStatus.ALL_STRICT:
            return canonical_pseudostar(fam)
        raise NotTreelikeError(
            f"Generalized inequality fails at labels {list(classification.witnesses)}"
        )
    if fam.k == 2:
        return reconstruct_from_two_weights(fam)
    raise FamilyError(f"reconstruct supports k = 2 or k = n - 1, got k={fam.k} with n={fam.n}")


__all__ = [
    "SimplexDescription",
    "SimplexKind",
    "Topology",
    "TwigFormula",
    "canonical_pseudostar",
    "moduli_description",
    "pseudostar_weights",
    "r_io",
    "r_oi",
    "realize_on_topology",
    "reconstruct",
    "reconstruct_equality_star",
    "reconstruct_from_two_weights",
]
