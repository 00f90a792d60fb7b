"""Tests for weight families and the treelikeness conditions."""

import random
from fractions import Fraction

import pytest

from tree_kweights.core.family import (
    FamilyStatus,
    WeightFamily,
    check_four_point,
    check_triangle,
    classify_family,
    find_four_point_violation,
    find_triangle_violation,
    is_positive_leaf_treelike,
    is_positive_treelike,
)
from tree_kweights.core.labels import LabelSubset
from tree_kweights.core.oracle import random_weighted_tree
from tree_kweights.core.tree import all_k_weights
from tree_kweights.exceptions import FamilyError, UnknownLabelError


class TestWeightFamilyConstruction:
    """Construction-time validation of WeightFamily."""

    def test_from_mapping(self) -> None:
        fam = WeightFamily.from_mapping({(1, 2): 5, (1, 3): "4", (2, 3): Fraction(3)})

        assert fam.labels == (1, 2, 3)
        assert fam.k == 2
        assert fam.n == 3
        assert fam[(1, 3)] == 4

    def test_entries_in_combination_order(self) -> None:
        fam = WeightFamily.from_mapping({(2, 3): 3, (1, 3): 4, (1, 2): 5})

        assert [key.key for key in fam.entries] == ["1,2", "1,3", "2,3"]

    def test_incomplete(self) -> None:
        with pytest.raises(FamilyError, match="incomplete"):
            WeightFamily.from_mapping({(1, 2): 5, (1, 3): 4}, labels=(1, 2, 3))

    @pytest.mark.parametrize("value", [0, -1, "-1/2"])
    def test_non_positive_entry(self, value: int | str) -> None:
        with pytest.raises(FamilyError, match="not strictly positive"):
            WeightFamily.from_mapping({(1, 2): value, (1, 3): 4, (2, 3): 3})

    def test_too_few_labels(self) -> None:
        with pytest.raises(FamilyError, match="at least 3 labels"):
            WeightFamily.from_mapping({(1, 2): 1})

    def test_k_below_two(self) -> None:
        with pytest.raises(FamilyError, match="k must satisfy"):
            WeightFamily.from_mapping({(1,): 1, (2,): 1, (3,): 1})

    def test_k_equal_to_n_is_accepted(self) -> None:
        fam = WeightFamily.from_mapping({(1, 2, 3): 6})

        assert fam.k == fam.n == 3

    def test_mixed_sizes(self) -> None:
        with pytest.raises(FamilyError, match="has size 3"):
            WeightFamily.from_mapping({(1, 2): 5, (1, 3): 4, (2, 3): 3, (1, 2, 3): 6})

    def test_label_outside(self) -> None:
        with pytest.raises(FamilyError, match="outside"):
            WeightFamily.from_mapping({(1, 2): 5, (1, 3): 4, (2, 3): 3, (3, 7): 1}, labels=(1, 2, 3))

    def test_frozen_dataclass(self, hats) -> None:
        fam = hats(3, 4, 5)
        with pytest.raises(AttributeError):
            fam.k = 3  # type: ignore[misc]


class TestWeightFamilyAccess:
    """Lookups, hat notation and restriction."""

    def test_getitem_order_insensitive(self, hats) -> None:
        fam = hats(3, 4, 5)

        assert fam[(2, 1)] == fam[(1, 2)] == fam[LabelSubset((1, 2))] == 5

    def test_missing_entry(self, hats) -> None:
        with pytest.raises(UnknownLabelError, match="No entry"):
            hats(3, 4, 5)[(1, 9)]

    def test_from_complements(self, hats) -> None:
        """D_hat(i) is the entry omitting i."""
        fam = hats(3, 4, 5)

        assert fam[(2, 3)] == 3
        assert fam[(1, 3)] == 4
        assert fam[(1, 2)] == 5
        assert fam.hat(2) == 4
        assert fam.complements() == {1: 3, 2: 4, 3: 5}

    def test_hat_needs_nm1(self, make_star) -> None:
        fam = all_k_weights(make_star({1: 1, 2: 1, 3: 1, 4: 1}), 2)

        with pytest.raises(FamilyError, match="hat notation needs a family of 3-weights"):
            fam.hat(1)

    def test_restrict(self, make_star) -> None:
        fam = all_k_weights(make_star({1: 1, 2: 2, 3: 3, 4: 4}), 2)
        sub = fam.restrict([3, 1, 2])

        assert sub.labels == (1, 2, 3)
        assert sub == all_k_weights(make_star({1: 1, 2: 2, 3: 3}), 2)

    def test_restrict_too_small(self, make_star) -> None:
        fam = all_k_weights(make_star({1: 1, 2: 2, 3: 3, 4: 4}), 2)

        with pytest.raises(FamilyError, match="at least 3 labels"):
            fam.restrict([1, 2])

    def test_restrict_unknown_label(self, make_star) -> None:
        fam = all_k_weights(make_star({1: 1, 2: 2, 3: 3, 4: 4}), 2)

        with pytest.raises(UnknownLabelError, match=r"\[9\]"):
            fam.restrict([1, 2, 9])


class TestClassifyFamily:
    """Tests for classify_family."""

    def test_one_equality(self, hats) -> None:
        result = classify_family(hats(1, 2, 3))

        assert result.status is FamilyStatus.ONE_EQUALITY
        assert result.center == 3
        assert result.m_max == 1
        assert result.sorted_labels == (1, 2, 3)
        assert result.is_treelike

    def test_all_strict(self, hats) -> None:
        result = classify_family(hats(3, 3, 3, 3))

        assert result.status is FamilyStatus.ALL_STRICT
        assert result.m_max == 4
        assert result.max_labels == (1, 2, 3, 4)
        assert result.center is None

    def test_violation(self, hats) -> None:
        result = classify_family(hats(1, 1, 5))

        assert result.status is FamilyStatus.VIOLATION
        assert result.witnesses == (3,)
        assert result.m_max == 1
        assert not result.is_treelike

    def test_two_equalities_are_a_violation(self, hats) -> None:
        result = classify_family(hats(1, 2, 3, 3))

        assert result.status is FamilyStatus.VIOLATION
        assert result.witnesses == (3, 4)
        assert result.m_max == 2

    def test_sorted_labels_break_ties_by_label(self, hats) -> None:
        assert classify_family(hats(2, 1, 1)).sorted_labels == (2, 3, 1)

    def test_max_labels(self, hats) -> None:
        result = classify_family(hats(2, Fraction(5, 2), 3, 3))

        assert result.status is FamilyStatus.ALL_STRICT
        assert result.m_max == 2
        assert result.max_labels == (3, 4)

    def test_needs_nm1(self, make_star) -> None:
        fam = all_k_weights(make_star({1: 1, 2: 1, 3: 1, 4: 1}), 2)

        with pytest.raises(FamilyError, match="classify_family"):
            classify_family(fam)

    def test_leaf_only_tree_is_all_strict(self, make_caterpillar) -> None:
        fam = all_k_weights(make_caterpillar(), 3)

        assert classify_family(fam).status is FamilyStatus.ALL_STRICT

    def test_labeled_center_star_is_one_equality(self, make_star) -> None:
        fam = all_k_weights(make_star({1: 1, 2: 2, 3: 3}, center_label=4), 3)

        result = classify_family(fam)
        assert result.status is FamilyStatus.ONE_EQUALITY
        assert result.center == 4

    def test_predicates(self, hats) -> None:
        assert is_positive_treelike(hats(1, 2, 3))
        assert not is_positive_leaf_treelike(hats(1, 2, 3))
        assert is_positive_leaf_treelike(hats(3, 3, 3, 3))
        assert not is_positive_treelike(hats(1, 1, 5))


class TestTriangle:
    """Tests for the triangle inequality on 2-weights."""

    def test_tree_metric_passes(self, pairs) -> None:
        assert check_triangle(pairs({"1,2": 5, "1,3": 4, "2,3": 3}))

    def test_violation(self, pairs) -> None:
        fam = pairs({"1,2": 10, "1,3": 1, "2,3": 1})

        assert not check_triangle(fam)
        assert find_triangle_violation(fam) == (1, 2, 3)

    def test_needs_two_weights(self, hats) -> None:
        with pytest.raises(FamilyError, match="needs a family of 2-weights"):
            check_triangle(hats(3, 3, 3, 3))


class TestFourPoint:
    """Tests for the four-point condition."""

    def test_failing_family(self, pairs) -> None:
        """Pair sums 4, 6, 8: the maximum is attained once."""
        fam = pairs({"1,2": 2, "3,4": 2, "1,3": 3, "2,4": 3, "1,4": 4, "2,3": 4})

        assert check_triangle(fam)
        assert not check_four_point(fam)
        assert find_four_point_violation(fam) == (1, 2, 3, 4)

    def test_triangle_failure_fails_four_point(self, pairs) -> None:
        fam = pairs({"1,2": 1, "3,4": 1, "1,3": 2, "2,4": 2, "1,4": 4, "2,3": 4})

        assert not check_triangle(fam)
        assert not check_four_point(fam)

    def test_equal_weights(self, pairs) -> None:
        fam = pairs({"1,2": 1, "3,4": 1, "1,3": 1, "2,4": 1, "1,4": 1, "2,3": 1})

        assert check_four_point(fam)

    def test_three_labels_reduces_to_triangle(self, pairs) -> None:
        assert check_four_point(pairs({"1,2": 5, "1,3": 4, "2,3": 3}))
        assert not check_four_point(pairs({"1,2": 10, "1,3": 1, "2,3": 1}))

    @pytest.mark.parametrize("seed", range(5))
    def test_tree_two_weights_pass(self, seed: int) -> None:
        tree = random_weighted_tree(random.Random(seed), 5, non_leaf_labels=None)

        assert check_four_point(all_k_weights(tree, 2))

    def test_needs_two_weights(self, hats) -> None:
        with pytest.raises(FamilyError, match="check_four_point"):
            find_four_point_violation(hats(3, 3, 3, 3))
