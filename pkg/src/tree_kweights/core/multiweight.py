"""Correspondences between (n-1)-weights and 2-weights.

A family of (n-1)-weights with exactly one equality at c and a 2-weight
family that is additive through c describe the same star:

    D_{i,c} = D_hat(c) - D_hat(i)
    D_{i,j} = 2 * D_hat(c) - D_hat(i) - D_hat(j)      (i, j != c)

and conversely D_hat(i) = sum_{j != i, c} D_{c,j}, D_hat(c) = sum_{j != c} D_{c,j}.

The same identities extend a k-weight family on m labels by the 2-weights
of a (k+1)-subset on which the equality holds; the extended family is
realized by exactly the same trees.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from tree_kweights.core.family import FamilyStatus, WeightFamily, classify_family
from tree_kweights.core.oracle import find_realization
from tree_kweights.core.tree import WeightedTree, realizes
from tree_kweights.exceptions import ClassificationError, FamilyError, UnknownLabelError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Correspondence:
    """A one-equality (n-1)-family paired with its star-additive 2-family.

    Attributes:
        center: The label c carrying the equality.
        family_nm1: Family of (n-1)-weights.
        family_two: Family of 2-weights with D_ij = D_ci + D_cj for i, j != c.
    """

    center: int
    family_nm1: WeightFamily
    family_two: WeightFamily


@dataclass(frozen=True)
class MixedFamily:
    """A k-weight family extended by the 2-weights of a distinguished subset.

    Attributes:
        base: The k-weight family over m labels.
        extra_two_weights: 2-weights on the pairs of the subset.
        subset: The subset a_1, ..., a_{k+1}, with the equality label last.
    """

    base: WeightFamily
    extra_two_weights: WeightFamily
    subset: tuple[int, ...]

    @property
    def families(self) -> tuple[WeightFamily, WeightFamily]:
        return (self.base, self.extra_two_weights)


@dataclass(frozen=True)
class EquivalenceReport:
    """Verdicts of the exhaustive treelikeness search on F and its extension F1.

    Attributes:
        base_verdict: Whether some tree realizes F.
        mixed_verdict: Whether some tree realizes F1.
        base_tree: A tree realizing F, if any.
        mixed_tree: A tree realizing F1, if any.
        shared_tree: base_tree when it also realizes the extra 2-weights.
    """

    base_verdict: bool
    mixed_verdict: bool
    base_tree: WeightedTree | None = None
    mixed_tree: WeightedTree | None = None
    shared_tree: WeightedTree | None = None

    @property
    def agree(self) -> bool:
        return self.base_verdict == self.mixed_verdict


def _star_two_weights(
    hats: Mapping[int, Fraction], center: int
) -> dict[tuple[int, int], Fraction]:
    top = hats[center]
    pairs: dict[tuple[int, int], Fraction] = {}
    for i, j in combinations(sorted(hats), 2):
        if center in (i, j):
            other = j if i == center else i
            pairs[(i, j)] = top - hats[other]
        else:
            pairs[(i, j)] = 2 * top - hats[i] - hats[j]
    bad = {pair: value for pair, value in pairs.items() if value <= 0}
    if bad:
        pair, value = min(bad.items())
        raise FamilyError(f"Derived 2-weight D{pair} = {value} is not strictly positive")
    return pairs


def nm1_to_two(fam: WeightFamily) -> Correspondence:
    """Convert a one-equality (n-1)-family to its 2-weight family.

    Raises:
        FamilyError: If k != n - 1.
        ClassificationError: If the status is not one equality.

    Examples:
        D_hat = (1, 2, 3) -> D13 = 2, D23 = 1, D12 = 3
        D_hat = (4, 4, 4, 6) -> D_i4 = 2, D_ij = 4
    """
    fam.require_k(fam.n - 1, "nm1_to_two")
    classification = classify_family(fam)
    if classification.status is not FamilyStatus.ONE_EQUALITY:
        raise ClassificationError(
            f"nm1_to_two needs exactly one equality, got status {classification.status.value}"
        )
    center = classification.center
    assert center is not None
    pairs = _star_two_weights(fam.complements(), center)
    family_two = WeightFamily(labels=fam.labels, k=2, entries=pairs)  # type: ignore[arg-type]
    return Correspondence(center=center, family_nm1=fam, family_two=family_two)


def find_star_center(fam: WeightFamily) -> int | None:
    """Smallest label c with D_ij = D_ci + D_cj for all i, j != c, or None."""
    fam.require_k(2, "find_star_center")
    for center in fam.labels:
        others = [label for label in fam.labels if label != center]
        if all(
            fam.pair(i, j) == fam.pair(center, i) + fam.pair(center, j)
            for i, j in combinations(others, 2)
        ):
            return center
    return None


def two_to_nm1(fam: WeightFamily) -> Correspondence:
    """Convert a star-additive 2-family to its one-equality (n-1)-family.

    Raises:
        FamilyError: If k != 2.
        ClassificationError: If no star center exists, or the result does not
            classify as one equality at that center.

    Examples:
        D13 = 2, D23 = 1, D12 = 3 -> D_hat = (1, 2, 3)
        D_ci = t for all i, n = 4 -> D_hat(i) = 2t, D_hat(c) = 3t
    """
    center = find_star_center(fam)
    if center is None:
        raise ClassificationError("two_to_nm1 needs a star center c with D_ij = D_ci + D_cj")
    spokes = {label: fam.pair(center, label) for label in fam.labels if label != center}
    hats = {center: sum(spokes.values(), Fraction(0))}
    for label in spokes:
        hats[label] = sum((w for other, w in spokes.items() if other != label), Fraction(0))
    family_nm1 = WeightFamily.from_complements(hats)
    classification = classify_family(family_nm1)
    if classification.status is not FamilyStatus.ONE_EQUALITY or classification.center != center:
        raise ClassificationError(
            f"Converted family does not have its single equality at {center} "
            f"(status {classification.status.value})"
        )
    return Correspondence(center=center, family_nm1=family_nm1, family_two=fam)


def extend_family(base: WeightFamily, subset: Sequence[int]) -> MixedFamily:
    """Extend a k-weight family by the 2-weights of a (k+1)-subset.

    On the subset the restricted entries form a family of k-weights over
    k + 1 labels. Exactly one label a must satisfy
    (k - 1) * D_{subset - a} = sum of the other k entries; it becomes a_{k+1}
    and the extra 2-weights follow the star identities.

    Args:
        base: Family of k-weights on m labels.
        subset: k + 1 distinct labels of the family.

    Returns:
        The mixed family F1, with the equality label last in `subset`.

    Raises:
        FamilyError: If the subset has the wrong size or a derived 2-weight is not positive.
        UnknownLabelError: If a subset label is not in the family.
        ClassificationError: If the equality fails on every label of the subset, or
            holds for several of them.
    """
    ordered = tuple(subset)
    if len(set(ordered)) != len(ordered):
        raise FamilyError(f"Subset {list(ordered)} repeats a label")
    if len(ordered) != base.k + 1:
        raise FamilyError(
            f"Subset must have k+1 = {base.k + 1} labels, got {len(ordered)}"
        )
    missing = [label for label in ordered if label not in base.labels]
    if missing:
        raise UnknownLabelError(f"Labels {missing} are not in the family {list(base.labels)}")

    restricted = base.restrict(ordered)
    hats = restricted.complements()
    total = sum(hats.values(), Fraction(0))
    equalities = [
        label for label in ordered if (base.k - 1) * hats[label] == total - hats[label]
    ]
    if not equalities:
        raise ClassificationError(
            f"On subset {list(ordered)} the equality (k-1)*D(subset - a) = sum of the other "
            "entries holds for no label a"
        )
    if len(equalities) > 1:
        raise ClassificationError(
            f"Subset {list(ordered)} has multiple equality witnesses {equalities}; "
            "such a family is not realizable"
        )

    center = equalities[0]
    pairs = _star_two_weights(hats, center)
    extra = WeightFamily(labels=restricted.labels, k=2, entries=pairs)  # type: ignore[arg-type]
    arranged = tuple(label for label in ordered if label != center) + (center,)
    logger.info(
        "Extended family", extra={"k": base.k, "m": base.n, "subset": arranged, "center": center}
    )
    return MixedFamily(base=base, extra_two_weights=extra, subset=arranged)


def mixed_treelike_equivalence(base: WeightFamily, subset: Sequence[int]) -> EquivalenceReport:
    """Decide treelikeness of F and of its extension F1 by exhaustive search.

    Both verdicts come from an exact search over the topology catalog of
    the base labels; the extended family adds the subset's 2-weights as
    further equations.

    Raises:
        Errors of extend_family, and OracleLimitError for too many labels.
    """
    mixed = extend_family(base, subset)
    base_tree = find_realization([base], labels=base.labels)
    mixed_tree = find_realization(list(mixed.families), labels=base.labels)
    shared = (
        base_tree
        if base_tree is not None and realizes(base_tree, mixed.extra_two_weights)
        else None
    )
    report = EquivalenceReport(
        base_verdict=base_tree is not None,
        mixed_verdict=mixed_tree is not None,
        base_tree=base_tree,
        mixed_tree=mixed_tree,
        shared_tree=shared,
    )
    if not report.agree:
        logger.warning(
            "Treelikeness verdicts differ",
            extra={"base": report.base_verdict, "mixed": report.mixed_verdict},
        )
    return report
