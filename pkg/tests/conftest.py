"""Shared pytest fixtures for tree-kweights tests."""

import os
from collections.abc import Callable, Mapping
from fractions import Fraction
from pathlib import Path
from typing import Any

import pytest
from hypothesis import settings

from tree_kweights.cli.documents import dump_document
from tree_kweights.core.family import WeightFamily
from tree_kweights.core.tree import Topology, WeightedTree

settings.register_profile("dev", deadline=None, max_examples=40)
settings.register_profile("ci", deadline=None, max_examples=200)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))

Number = Fraction | int | str

CATERPILLAR_EDGES = ((1, 5), (2, 5), (5, 6), (3, 6), (4, 6))
"""Leaves 1, 2 on vertex 5 and 3, 4 on vertex 6; (5, 6) is the only non-twig edge."""


@pytest.fixture
def make_star() -> Callable[..., WeightedTree]:
    """Build a star whose leaf vertex ids equal their labels.

    Returns a callable that accepts:
    - twig_weights: label -> twig weight
    - center_label: label placed on the center (vertex id = that label), or None
      for an unlabeled center with vertex id 0
    """

    def _make(twig_weights: Mapping[int, Number], center_label: int | None = None) -> WeightedTree:
        center = 0 if center_label is None else center_label
        labels = {label: label for label in twig_weights}
        if center_label is not None:
            labels[center_label] = center_label
        return WeightedTree(
            weights={(center, label): w for label, w in twig_weights.items()},  # type: ignore[misc]
            labels=labels,
        )

    return _make


@pytest.fixture
def make_caterpillar() -> Callable[..., WeightedTree]:
    """Build the 4-leaf caterpillar {1,2}|{3,4}.

    Returns a callable that accepts:
    - twig: weight of every twig (default 1)
    - internal: weight of the edge (5, 6) (default 3/2)
    """

    def _make(twig: Number = 1, internal: Number = Fraction(3, 2)) -> WeightedTree:
        weights = {edge: twig for edge in CATERPILLAR_EDGES}
        weights[(5, 6)] = internal
        return WeightedTree(
            weights=weights,  # type: ignore[arg-type]
            labels={1: 1, 2: 2, 3: 3, 4: 4},
        )

    return _make


@pytest.fixture
def caterpillar_topology() -> Topology:
    return Topology(edges=frozenset(CATERPILLAR_EDGES), labels={1: 1, 2: 2, 3: 3, 4: 4})


@pytest.fixture
def labeled_path_tree() -> WeightedTree:
    """Path 1 - u - v - 2 with label 3 on u and 4 on v; weights 1, 3/2, 1/2."""
    return WeightedTree.from_edges(
        [(1, 3, 1), (3, 4, Fraction(3, 2)), (4, 2, Fraction(1, 2))],
        {1: 1, 2: 2, 3: 3, 4: 4},
    )


@pytest.fixture
def hats() -> Callable[..., WeightFamily]:
    """Build an (n-1)-family from its hat values D_hat(1), ..., D_hat(n)."""

    def _make(*values: Number) -> WeightFamily:
        return WeightFamily.from_complements(
            {label: value for label, value in enumerate(values, start=1)}
        )

    return _make


@pytest.fixture
def pairs() -> Callable[..., WeightFamily]:
    """Build a 2-family from {"1,2": value, ...} style keys."""

    def _make(entries: Mapping[str, Number]) -> WeightFamily:
        return WeightFamily.from_mapping(
            {tuple(int(p) for p in key.split(",")): value for key, value in entries.items()}
        )

    return _make


@pytest.fixture
def write_document(tmp_path: Path) -> Callable[..., Path]:
    """Write a JSON document into tmp_path and return its path."""

    def _write(document: Mapping[str, Any], name: str = "document.json") -> Path:
        path = tmp_path / name
        path.write_text(dump_document(document), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def golden_dir() -> Path:
    return Path(__file__).parent / "golden"
