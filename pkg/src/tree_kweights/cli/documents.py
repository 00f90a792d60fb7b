"""JSON documents for trees, topologies, families and command reports.

Formats:
- tree:     {"vertices": [0, 1, ...], "edges": [[u, v, "p/q"], ...], "labels": {"1": 0, ...}}
- topology: the tree format without weights, edges are [u, v]
- family:   {"n": 3, "k": 2, "weights": {"1,2": "5", "1,3": "4", "2,3": "3"}}

Families use labels 1..n. A family over other labels carries an extra
"labels" list. Numbers are exact strings; decimals are accepted on input
and expanded exactly.
"""

import json
from collections.abc import Mapping
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Any

from tree_kweights.core.codec import format_number, parse_label, parse_number, parse_subset_key
from tree_kweights.core.family import FamilyClass, WeightFamily
from tree_kweights.core.labels import LabelSubset
from tree_kweights.core.multiweight import EquivalenceReport, MixedFamily
from tree_kweights.core.reconstruct import SimplexDescription
from tree_kweights.core.tree import Edge, Topology, WeightedTree, normalize_edge
from tree_kweights.exceptions import DocumentParseError, TreeStructureError

Document = dict[str, Any]


def load_document(path: Path | str) -> Document:
    """Read a JSON object from a file.

    Raises:
        DocumentParseError: If the file cannot be read or is not a JSON object.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentParseError(f"Cannot read {path}: {e.strerror or e}") from e
    except UnicodeDecodeError as e:
        raise DocumentParseError(f"{path} is not UTF-8 text: {e.reason} at byte {e.start}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentParseError(f"{path} is not valid JSON: {e.msg} at line {e.lineno}") from e
    except RecursionError as e:
        raise DocumentParseError(f"{path} is nested too deeply to parse") from e
    if not isinstance(data, dict):
        raise DocumentParseError(f"{path} must contain a JSON object, got {type(data).__name__}")
    return data


def dump_document(document: Mapping[str, Any]) -> str:
    """Deterministic JSON text with a trailing newline."""
    return json.dumps(document, indent=2) + "\n"


def _require(document: Mapping[str, Any], key: str, kind: type | tuple[type, ...]) -> Any:
    if key not in document:
        raise DocumentParseError(f"Document is missing the '{key}' key")
    value = document[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise DocumentParseError(f"'{key}' has the wrong type {type(value).__name__}")
    return value


def _parse_vertex(raw: Any) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise DocumentParseError(f"Vertex ids are integers, got {raw!r}")
    return raw


def _parse_labels(document: Mapping[str, Any]) -> dict[int, int]:
    raw = _require(document, "labels", dict)
    return {parse_label(key): _parse_vertex(vertex) for key, vertex in raw.items()}


def _check_vertices(document: Mapping[str, Any], edges: set[Edge]) -> None:
    listed = {_parse_vertex(v) for v in _require(document, "vertices", list)}
    touched = {v for edge in edges for v in edge}
    if listed != touched:
        raise TreeStructureError(
            f"Vertex list {sorted(listed)} does not match the edge endpoints {sorted(touched)}"
        )


def parse_tree(document: Mapping[str, Any]) -> WeightedTree:
    """Build a WeightedTree from a tree document.

    Raises:
        DocumentParseError: If the document shape or a number is malformed.
        TreeStructureError: If the edges do not form a valid labeled tree.
    """
    weights: dict[Edge, Fraction] = {}
    for entry in _require(document, "edges", list):
        if not isinstance(entry, list) or len(entry) != 3:
            raise DocumentParseError(f"Tree edges are [u, v, weight] triples, got {entry!r}")
        u, v, raw = entry
        edge = normalize_edge(_parse_vertex(u), _parse_vertex(v))
        if edge in weights:
            raise TreeStructureError(f"Edge {edge} listed twice")
        weights[edge] = parse_number(raw)
    _check_vertices(document, set(weights))
    return WeightedTree(weights=weights, labels=_parse_labels(document))


def parse_topology(document: Mapping[str, Any]) -> Topology:
    """Build a Topology from a topology document.

    Raises:
        DocumentParseError: If the document shape is malformed.
        TreeStructureError: If the edges do not form a reduced labeled tree.
    """
    edges: set[Edge] = set()
    for entry in _require(document, "edges", list):
        if not isinstance(entry, list) or len(entry) != 2:
            raise DocumentParseError(f"Topology edges are [u, v] pairs, got {entry!r}")
        edges.add(normalize_edge(_parse_vertex(entry[0]), _parse_vertex(entry[1])))
    _check_vertices(document, edges)
    return Topology(edges=frozenset(edges), labels=_parse_labels(document))


def parse_family(document: Mapping[str, Any]) -> WeightFamily:
    """Build a WeightFamily from a family document.

    Raises:
        DocumentParseError: If keys, numbers or the n/k header are malformed.
        FamilyError: If the family is incomplete or has a non-positive entry.
    """
    n = _require(document, "n", int)
    k = _require(document, "k", int)
    if "labels" in document:
        labels = tuple(parse_label(v) for v in _require(document, "labels", list))
        if len(labels) != n:
            raise DocumentParseError(f"'labels' lists {len(labels)} labels but n={n}")
    else:
        labels = tuple(range(1, n + 1))
    entries = {
        LabelSubset(parse_subset_key(key)): parse_number(value)
        for key, value in _require(document, "weights", dict).items()
    }
    return WeightFamily(labels=labels, k=k, entries=entries)


def tree_document(tree: WeightedTree) -> Document:
    return {
        "vertices": sorted(tree.vertices),
        "edges": [[u, v, format_number(tree.weights[(u, v)])] for u, v in sorted(tree.edges)],
        "labels": {str(label): tree.labels[label] for label in tree.label_set},
    }


def topology_document(topo: Topology) -> Document:
    return {
        "vertices": sorted(topo.vertices),
        "edges": [[u, v] for u, v in sorted(topo.edges)],
        "labels": {str(label): topo.labels[label] for label in topo.label_set},
    }


def family_document(fam: WeightFamily) -> Document:
    document: Document = {"n": fam.n, "k": fam.k}
    if fam.labels != tuple(range(1, fam.n + 1)):
        document["labels"] = list(fam.labels)
    document["weights"] = {
        LabelSubset(combo).key: format_number(fam.entries[LabelSubset(combo)])
        for combo in combinations(fam.labels, fam.k)
    }
    return document


def classification_document(classification: FamilyClass) -> Document:
    document: Document = {
        "status": classification.status.value,
        "M": classification.m_max,
        "sorted_labels": list(classification.sorted_labels),
    }
    if classification.center is not None:
        document["c"] = classification.center
    if classification.witnesses:
        document["witnesses"] = list(classification.witnesses)
    return document


def simplex_document(description: SimplexDescription) -> Document:
    document: Document = {
        "kind": description.kind.value,
        "dimension": description.dimension,
        "topology": topology_document(description.topology),
        "coordinates": [[u, v] for u, v in description.coordinates],
    }
    if description.bound is not None:
        document["bound"] = format_number(description.bound)
    if description.total is not None:
        document["total"] = format_number(description.total)
    if description.twig_formula:
        document["twig_formula"] = {
            str(label): {
                "constant": format_number(formula.constant),
                "slope": format_number(formula.slope),
            }
            for label, formula in sorted(description.twig_formula.items())
        }
    if description.point is not None:
        document["point"] = [
            [u, v, format_number(description.point[(u, v)])] for u, v in sorted(description.point)
        ]
    if description.reason:
        document["reason"] = description.reason
    return document


def mixed_document(mixed: MixedFamily, report: EquivalenceReport | None = None) -> Document:
    document: Document = {
        "subset": list(mixed.subset),
        "base": family_document(mixed.base),
        "extra_two_weights": family_document(mixed.extra_two_weights),
    }
    if report is not None:
        document["report"] = {
            "base_verdict": report.base_verdict,
            "mixed_verdict": report.mixed_verdict,
            "agree": report.agree,
            "shared_tree": tree_document(report.shared_tree) if report.shared_tree else None,
        }
    return document
