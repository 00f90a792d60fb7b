"""Label subsets: the index sets I of the k-weights D_I."""

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from tree_kweights.core.codec import subset_key
from tree_kweights.exceptions import UnknownLabelError


@dataclass(frozen=True)
class LabelSubset:
    """A nonempty set of labels, stored sorted ascending.

    Attributes:
        members: Sorted tuple of distinct positive labels.
    """

    members: tuple[int, ...]

    def __post_init__(self) -> None:
        """Normalize to a sorted tuple and reject empty or repeated members."""
        members = tuple(sorted(self.members))
        if not members:
            raise UnknownLabelError("A label subset must contain at least one label")
        if len(set(members)) != len(members):
            raise UnknownLabelError(f"Repeated label in subset {list(self.members)}")
        if members[0] < 1:
            raise UnknownLabelError(f"Labels are positive integers, got {members[0]}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, labels: "Iterable[int] | LabelSubset") -> "LabelSubset":
        """Build a subset from any iterable of labels (or return it unchanged)."""
        if isinstance(labels, LabelSubset):
            return labels
        return cls(tuple(labels))

    @property
    def size(self) -> int:
        """The k of a k-weight indexed by this subset."""
        return len(self.members)

    @property
    def key(self) -> str:
        """Canonical comma-joined key, e.g. "1,2,4"."""
        return subset_key(self.members)

    def without(self, label: int) -> "LabelSubset":
        """Return the subset with one label removed (the hat notation)."""
        return LabelSubset(tuple(m for m in self.members if m != label))

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, label: object) -> bool:
        return label in self.members

    def __str__(self) -> str:
        return "{" + self.key + "}"
