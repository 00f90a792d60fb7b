"""Weight families and the treelikeness conditions.

A family F = {D_I} maps every size-k subset of the labels to a positive
rational. For k = 2 the triangle and four-point conditions decide
treelikeness; for k = n - 1 the generalized inequality

    (n - 2) * D_hat(i) <= sum_{j != i} D_hat(j)

with at most one equality does.
"""

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations

from tree_kweights.core.codec import parse_number
from tree_kweights.core.labels import LabelSubset
from tree_kweights.exceptions import FamilyError, UnknownLabelError

logger = logging.getLogger(__name__)

Number = Fraction | int | str


@dataclass(frozen=True)
class WeightFamily:
    """A complete family of positive k-weights over a label set.

    Attributes:
        labels: Sorted tuple of the n labels (documents always use 1..n).
        k: Size of every index subset.
        entries: Total map from each size-k LabelSubset to a positive Fraction.
    """

    labels: tuple[int, ...]
    k: int
    entries: Mapping[LabelSubset, Fraction]

    def __post_init__(self) -> None:
        """Normalize keys and values, then check completeness and positivity."""
        labels = tuple(sorted(self.labels))
        if len(set(labels)) != len(labels) or (labels and labels[0] < 1):
            raise FamilyError(f"Family labels must be distinct positive integers, got {labels}")
        n = len(labels)
        if n < 3:
            raise FamilyError(f"A family needs at least 3 labels, got n={n}")
        if not 2 <= self.k <= n:
            raise FamilyError(f"k must satisfy 2 <= k <= n={n}, got k={self.k}")

        entries: dict[LabelSubset, Fraction] = {}
        for raw_key, raw_value in self.entries.items():
            key = LabelSubset.of(raw_key)
            if key.size != self.k:
                raise FamilyError(f"Entry {key} has size {key.size}, expected k={self.k}")
            unknown = [lab for lab in key if lab not in labels]
            if unknown:
                raise FamilyError(f"Entry {key} uses labels {unknown} outside {list(labels)}")
            value = raw_value if isinstance(raw_value, Fraction) else parse_number(raw_value)
            if value <= 0:
                raise FamilyError(f"Entry D{key} = {value} is not strictly positive")
            entries[key] = value

        expected = [LabelSubset(combo) for combo in combinations(labels, self.k)]
        missing = [str(key) for key in expected if key not in entries]
        if missing:
            raise FamilyError(
                f"Family is incomplete: {len(missing)} of {len(expected)} entries missing, "
                f"first missing {missing[0]}"
            )

        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "entries", {key: entries[key] for key in expected})

    @classmethod
    def from_mapping(
        cls,
        entries: Mapping[Iterable[int], Number],
        *,
        k: int | None = None,
        labels: Iterable[int] | None = None,
    ) -> "WeightFamily":
        """Build a family from plain tuples/lists of labels.

        When labels is omitted it is the union of all keys; k defaults to the key size.

        Example:
            WeightFamily.from_mapping({(1, 2): 5, (1, 3): 4, (2, 3): 3})
        """
        keyed = {LabelSubset.of(key): parse_number(v) if not isinstance(v, Fraction) else v
                 for key, v in entries.items()}
        if not keyed:
            raise FamilyError("A family needs at least one entry")
        sizes = {key.size for key in keyed}
        size = k if k is not None else min(sizes)
        universe = tuple(labels) if labels is not None else tuple(
            sorted({lab for key in keyed for lab in key})
        )
        return cls(labels=universe, k=size, entries=keyed)

    @classmethod
    def from_complements(cls, values: Mapping[int, Number]) -> "WeightFamily":
        """Build an (n-1)-weight family from its hat values D_hat(i).

        Example:
            WeightFamily.from_complements({1: 3, 2: 4, 3: 5})
            # D_{2,3} = 3, D_{1,3} = 4, D_{1,2} = 5
        """
        labels = tuple(sorted(values))
        entries = {
            LabelSubset(tuple(lab for lab in labels if lab != i)): values[i] for i in labels
        }
        return cls(labels=labels, k=len(labels) - 1, entries=entries)  # type: ignore[arg-type]

    @property
    def n(self) -> int:
        """Number of labels."""
        return len(self.labels)

    def __getitem__(self, subset: Iterable[int] | LabelSubset) -> Fraction:
        key = LabelSubset.of(subset)
        try:
            return self.entries[key]
        except KeyError:
            raise UnknownLabelError(f"No entry D{key} in a family of {self.k}-weights") from None

    def pair(self, i: int, j: int) -> Fraction:
        """The 2-weight D_{i,j}."""
        return self[(i, j)]

    def hat(self, label: int) -> Fraction:
        """The (n-1)-weight D_hat(label) omitting one label.

        Raises:
            FamilyError: If the family is not of (n-1)-weights.
        """
        self.require_k(self.n - 1, "hat notation")
        return self[tuple(lab for lab in self.labels if lab != label)]

    def complements(self) -> dict[int, Fraction]:
        """All hat values D_hat(i), keyed by label."""
        self.require_k(self.n - 1, "hat notation")
        return {label: self.hat(label) for label in self.labels}

    def restrict(self, labels: Iterable[int]) -> "WeightFamily":
        """Subfamily of entries whose index lies inside the given labels.

        Raises:
            FamilyError: If the restriction has fewer than 3 or fewer than k labels.
            UnknownLabelError: If a label is not in the family.
        """
        chosen = tuple(sorted(set(labels)))
        unknown = [lab for lab in chosen if lab not in self.labels]
        if unknown:
            raise UnknownLabelError(f"Labels {unknown} are not in the family {list(self.labels)}")
        entries = {
            LabelSubset(combo): self.entries[LabelSubset(combo)]
            for combo in combinations(chosen, self.k)
        }
        return WeightFamily(labels=chosen, k=self.k, entries=entries)

    def require_k(self, k: int, operation: str) -> None:
        """Raise FamilyError unless the family has subsets of size k."""
        if self.k != k:
            raise FamilyError(f"{operation} needs a family of {k}-weights, got k={self.k}")


class FamilyStatus(Enum):
    """Outcome of the generalized-inequality test on an (n-1)-family."""

    ALL_STRICT = "all_strict"
    ONE_EQUALITY = "one_equality"
    VIOLATION = "violation"


@dataclass(frozen=True)
class FamilyClass:
    """Classification of an (n-1)-weight family.

    Attributes:
        m_max: M, the number of hat values equal to the maximum.
        sorted_labels: Labels ordered by ascending D_hat, ties by ascending label.
        status: ALL_STRICT, ONE_EQUALITY or VIOLATION.
        center: The equality label c when status is ONE_EQUALITY.
        witnesses: Failing labels when status is VIOLATION.
    """

    m_max: int
    sorted_labels: tuple[int, ...]
    status: FamilyStatus
    center: int | None = None
    witnesses: tuple[int, ...] = ()

    @property
    def is_treelike(self) -> bool:
        return self.status is not FamilyStatus.VIOLATION

    @property
    def max_labels(self) -> tuple[int, ...]:
        """The M labels attaining the maximum hat value, ascending."""
        return tuple(sorted(self.sorted_labels[-self.m_max:]))


def classify_family(fam: WeightFamily) -> FamilyClass:
    """Classify an (n-1)-family by exact comparison of the generalized inequality.

    Args:
        fam: Family with k = n - 1.

    Returns:
        FamilyClass with M, the sorted order and the status.

    Raises:
        FamilyError: If k != n - 1.

    Examples:
        D_hat = (1, 2, 3) -> M=1, ONE_EQUALITY(c=3)
        D_hat = (3, 3, 3, 3) -> M=4, ALL_STRICT
        D_hat = (1, 1, 5) -> VIOLATION(3)
    """
    fam.require_k(fam.n - 1, "classify_family")
    n = fam.n
    hats = fam.complements()
    total = sum(hats.values(), Fraction(0))

    equalities: list[int] = []
    violations: list[int] = []
    for label in fam.labels:
        lhs = (n - 2) * hats[label]
        rhs = total - hats[label]
        if lhs == rhs:
            equalities.append(label)
        elif lhs > rhs:
            violations.append(label)

    top = max(hats.values())
    m_max = sum(1 for value in hats.values() if value == top)
    sorted_labels = tuple(sorted(fam.labels, key=lambda lab: (hats[lab], lab)))

    if violations or len(equalities) >= 2:
        result = FamilyClass(
            m_max=m_max,
            sorted_labels=sorted_labels,
            status=FamilyStatus.VIOLATION,
            witnesses=tuple(violations) if violations else tuple(equalities),
        )
    elif equalities:
        result = FamilyClass(
            m_max=m_max,
            sorted_labels=sorted_labels,
            status=FamilyStatus.ONE_EQUALITY,
            center=equalities[0],
        )
    else:
        result = FamilyClass(
            m_max=m_max, sorted_labels=sorted_labels, status=FamilyStatus.ALL_STRICT
        )

    logger.debug(
        "Classified family",
        extra={"n": n, "status": result.status.value, "m_max": m_max, "center": result.center},
    )
    return result


def is_positive_treelike(fam: WeightFamily) -> bool:
    """Check whether some positive-weighted reduced tree realizes the (n-1)-family."""
    return classify_family(fam).is_treelike


def is_positive_leaf_treelike(fam: WeightFamily) -> bool:
    """Check whether a tree with only leaf-labels realizes the (n-1)-family."""
    return classify_family(fam).status is FamilyStatus.ALL_STRICT


def find_triangle_violation(fam: WeightFamily) -> tuple[int, int, int] | None:
    """Return labels (i, j, h) with D_ij > D_ih + D_jh, or None.

    Raises:
        FamilyError: If k != 2.
    """
    fam.require_k(2, "check_triangle")
    for i, j, h in combinations(fam.labels, 3):
        for a, b, c in ((i, j, h), (i, h, j), (j, h, i)):
            if fam.pair(a, b) > fam.pair(a, c) + fam.pair(b, c):
                return (a, b, c)
    return None


def check_triangle(fam: WeightFamily) -> bool:
    """Check D_ij <= D_ih + D_jh for all distinct labels.

    Raises:
        FamilyError: If k != 2.
    """
    return find_triangle_violation(fam) is None


def find_four_point_violation(fam: WeightFamily) -> tuple[int, ...] | None:
    """Return a quadruple whose maximal pair sum is attained once, or None.

    Raises:
        FamilyError: If k != 2.
    """
    fam.require_k(2, "check_four_point")
    for i, j, h, k in combinations(fam.labels, 4):
        sums = sorted(
            (
                fam.pair(i, j) + fam.pair(h, k),
                fam.pair(i, k) + fam.pair(h, j),
                fam.pair(i, h) + fam.pair(k, j),
            )
        )
        if sums[2] != sums[1]:
            return (i, j, h, k)
    return None


def check_four_point(fam: WeightFamily) -> bool:
    """Check the four-point condition together with the triangle inequalities.

    For n = 3 there is no quadruple and the result is the triangle test.

    Raises:
        FamilyError: If k != 2.
    """
    if not check_triangle(fam):
        return False
    return find_four_point_violation(fam) is None
