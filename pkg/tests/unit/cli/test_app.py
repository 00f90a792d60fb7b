"""Tests for the command-line front end."""

import json

import pytest
from typer.testing import CliRunner

from tree_kweights import __version__
from tree_kweights.cli.app import app

runner = CliRunner()

STAR = {
    "vertices": [0, 1, 2, 3],
    "edges": [[0, 1, "3"], [0, 2, "2"], [0, 3, "1"]],
    "labels": {"1": 1, "2": 2, "3": 3},
}
CATERPILLAR = {
    "vertices": [1, 2, 3, 4, 5, 6],
    "edges": [[1, 5, "1"], [2, 5, "1"], [3, 6, "1"], [4, 6, "1"], [5, 6, "3/2"]],
    "labels": {"1": 1, "2": 2, "3": 3, "4": 4},
}
CATERPILLAR_TOPOLOGY = {
    "vertices": [1, 2, 3, 4, 5, 6],
    "edges": [[1, 5], [2, 5], [3, 6], [4, 6], [5, 6]],
    "labels": {"1": 1, "2": 2, "3": 3, "4": 4},
}
UNIFORM = {"n": 4, "k": 3, "weights": {"1,2,3": "3", "1,2,4": "3", "1,3,4": "3", "2,3,4": "3"}}


def _invoke(*args: str):
    return runner.invoke(app, list(args))


class TestVersion:
    """Tests for the version command."""

    def test_prints_version(self) -> None:
        result = _invoke("version")

        assert result.exit_code == 0
        assert result.stdout.strip() == __version__

    def test_no_args_shows_help(self) -> None:
        result = _invoke()

        assert "kweights" in result.output


class TestKweights:
    """Tests for the kweights command."""

    def test_triples(self, write_document) -> None:
        result = _invoke("kweights", "--tree", str(write_document(STAR)), "--k", "3")

        assert result.exit_code == 0
        assert json.loads(result.stdout) == {"n": 3, "k": 3, "weights": {"1,2,3": "6"}}

    def test_k_out_of_range_is_domain_error(self, write_document) -> None:
        result = _invoke("kweights", "--tree", str(write_document(STAR)), "--k", "5")

        assert result.exit_code == 1
        assert "error:" in result.output
        assert "k must satisfy" in result.output

    def test_missing_file_is_parse_error(self, tmp_path) -> None:
        result = _invoke("kweights", "--tree", str(tmp_path / "nope.json"), "--k", "2")

        assert result.exit_code == 2
        assert "Cannot read" in result.output

    def test_malformed_json_is_parse_error(self, tmp_path) -> None:
        path = tmp_path / "bad.json"
        path.write_text("{", encoding="utf-8")

        result = _invoke("kweights", "--tree", str(path), "--k", "2")

        assert result.exit_code == 2

    def test_invalid_tree_is_domain_error(self, write_document) -> None:
        bad = {**STAR, "edges": [[0, 1, "0"], [0, 2, "2"], [0, 3, "1"]]}

        result = _invoke("kweights", "--tree", str(write_document(bad)), "--k", "2")

        assert result.exit_code == 1
        assert "non-positive" in result.output

    def test_missing_option_is_usage_error(self) -> None:
        assert _invoke("kweights", "--k", "2").exit_code == 2

    def test_debug_log_level(self, write_document) -> None:
        result = _invoke(
            "--log-level", "DEBUG", "kweights", "--tree", str(write_document(STAR)), "--k", "2"
        )

        assert result.exit_code == 0


class TestCheck:
    """Tests for the check command."""

    def test_two_weights_of_tree(self, write_document) -> None:
        family = {"n": 4, "k": 2, "weights": {
            "1,2": "2", "1,3": "7/2", "1,4": "7/2", "2,3": "7/2", "2,4": "7/2", "3,4": "2"
        }}

        result = _invoke("check", "--family", str(write_document(family)))

        assert result.exit_code == 0
        assert json.loads(result.stdout) == {
            "status": "treelike",
            "triangle": True,
            "four_point": True,
        }

    def test_violation_lists_witnesses(self, write_document) -> None:
        family = {"n": 3, "k": 2, "weights": {"1,2": "5", "1,3": "1", "2,3": "1"}}

        result = _invoke("check", "--family", str(write_document(family)))

        assert result.exit_code == 0
        assert json.loads(result.stdout) == {
            "status": "violation",
            "M": 1,
            "sorted_labels": [1, 2, 3],
            "witnesses": [3],
        }

    def test_unsupported_k(self, write_document) -> None:
        family = {"n": 5, "k": 3, "weights": {
            key: "3" for key in [
                "1,2,3", "1,2,4", "1,2,5", "1,3,4", "1,3,5",
                "1,4,5", "2,3,4", "2,3,5", "2,4,5", "3,4,5",
            ]
        }}

        result = _invoke("check", "--family", str(write_document(family)))

        assert result.exit_code == 1
        assert "k = n - 1 or k = 2" in result.output

    def test_incomplete_family(self, write_document) -> None:
        family = {"n": 3, "k": 2, "weights": {"1,2": "5"}}

        assert _invoke("check", "--family", str(write_document(family))).exit_code == 1

    def test_three_labels_are_classified(self, write_document) -> None:
        """With n = 3, k = 2 is also k = n - 1; the classification report wins."""
        family = {"n": 3, "k": 2, "weights": {"1,2": "10", "1,3": "1", "2,3": "1"}}

        result = _invoke("check", "--family", str(write_document(family)))

        assert result.exit_code == 0
        document = json.loads(result.stdout)
        assert document["status"] == "violation"
        assert document["witnesses"] == [3]

    def test_invalid_utf8_is_parse_error(self, tmp_path) -> None:
        path = tmp_path / "family.json"
        path.write_bytes(b'{"n": 3, "k": 2, "weights": {"1,2": "\xff"}}')

        result = _invoke("check", "--family", str(path))

        assert result.exit_code == 2
        assert "error:" in result.output
        assert "not UTF-8" in result.output

    def test_deeply_nested_json_is_parse_error(self, tmp_path) -> None:
        path = tmp_path / "family.json"
        path.write_text("[" * 100_000 + "]" * 100_000, encoding="utf-8")

        result = _invoke("check", "--family", str(path))

        assert result.exit_code == 2
        assert "nested too deeply" in result.output


class TestReconstruct:
    """Tests for the reconstruct command."""

    def test_pseudostar(self, write_document) -> None:
        result = _invoke("reconstruct", "--family", str(write_document(UNIFORM)))

        assert result.exit_code == 0
        document = json.loads(result.stdout)
        assert {edge[2] for edge in document["edges"]} == {"1"}
        assert len(document["edges"]) == 4

    def test_barycenter_on_topology(self, write_document) -> None:
        family = write_document(UNIFORM, name="family.json")
        topology = write_document(CATERPILLAR_TOPOLOGY, name="topology.json")

        result = _invoke("reconstruct", "--family", str(family), "--topology", str(topology))

        assert result.exit_code == 0
        edges = {(u, v): w for u, v, w in json.loads(result.stdout)["edges"]}
        assert edges[(5, 6)] == "3/2"
        assert edges[(1, 5)] == "1/2"

    def test_coordinates_outside_simplex(self, write_document) -> None:
        family = write_document(UNIFORM, name="family.json")
        topology = write_document(CATERPILLAR_TOPOLOGY, name="topology.json")

        result = _invoke(
            "reconstruct", "--family", str(family), "--topology", str(topology), "--coords", "3"
        )

        assert result.exit_code == 1
        assert "must be < 3" in result.output

    def test_wrong_coordinate_count(self, write_document) -> None:
        family = write_document(UNIFORM, name="family.json")
        topology = write_document(CATERPILLAR_TOPOLOGY, name="topology.json")

        result = _invoke(
            "reconstruct", "--family", str(family), "--topology", str(topology), "--coords", "1,1"
        )

        assert result.exit_code == 2

    def test_coords_need_topology(self, write_document) -> None:
        result = _invoke("reconstruct", "--family", str(write_document(UNIFORM)), "--coords", "1")

        assert result.exit_code == 2
        assert "--coords needs --topology" in result.output

    def test_not_treelike(self, write_document) -> None:
        family = {"n": 3, "k": 2, "weights": {"1,2": "5", "1,3": "1", "2,3": "1"}}

        result = _invoke("reconstruct", "--family", str(write_document(family)))

        assert result.exit_code == 1


class TestModuli:
    """Tests for the moduli command."""

    def test_empty_simplex(self, write_document) -> None:
        family = write_document(
            {"n": 4, "k": 3, "weights": {"1,2,3": "3", "1,2,4": "3", "1,3,4": "2", "2,3,4": "1"}},
            name="family.json",
        )
        topology = write_document(CATERPILLAR_TOPOLOGY, name="topology.json")

        result = _invoke("moduli", "--family", str(family), "--topology", str(topology))

        assert result.exit_code == 0
        document = json.loads(result.stdout)
        assert document["kind"] == "empty"
        assert document["dimension"] == -1


class TestConvert:
    """Tests for the convert command."""

    def test_two_to_nm1(self, write_document) -> None:
        family = {"n": 3, "k": 2, "weights": {"1,2": "3", "1,3": "2", "2,3": "1"}}

        result = _invoke("convert", "--family", str(write_document(family)), "--direction", "2-to-nm1")

        assert result.exit_code == 0
        assert json.loads(result.stdout) == family

    def test_unknown_direction(self, write_document) -> None:
        result = _invoke("convert", "--family", str(write_document(UNIFORM)), "--direction", "up")

        assert result.exit_code == 2

    def test_all_strict_is_domain_error(self, write_document) -> None:
        result = _invoke(
            "convert", "--family", str(write_document(UNIFORM)), "--direction", "nm1-to-2"
        )

        assert result.exit_code == 1
        assert "exactly one equality" in result.output


class TestExtend:
    """Tests for the extend command."""

    def test_without_check(self, write_document) -> None:
        family = {"n": 3, "k": 2, "weights": {"1,2": "3", "1,3": "2", "2,3": "1"}}

        result = _invoke("extend", "--family", str(write_document(family)), "--subset", "3,1,2")

        assert result.exit_code == 0
        document = json.loads(result.stdout)
        assert document["subset"] == [1, 2, 3]
        assert "report" not in document

    def test_equality_fails(self, write_document) -> None:
        result = _invoke("extend", "--family", str(write_document(UNIFORM)), "--subset", "1,2,3,4")

        assert result.exit_code == 1
        assert "holds for no label a" in result.output

    def test_bad_subset_text(self, write_document) -> None:
        result = _invoke("extend", "--family", str(write_document(UNIFORM)), "--subset", "1,x")

        assert result.exit_code == 2


class TestOp:
    """Tests for the op command."""

    def test_contract(self, write_document) -> None:
        result = _invoke("op", "--tree", str(write_document(CATERPILLAR)), "--r", "1", "--contract", "5,6")

        assert result.exit_code == 0
        document = json.loads(result.stdout)
        assert {edge[2] for edge in document["edges"]} == {"3/2"}

    def test_split(self, write_document) -> None:
        star = {
            "vertices": [0, 1, 2, 3, 4],
            "edges": [[0, 1, "3/2"], [0, 2, "3/2"], [0, 3, "3/2"], [0, 4, "3/2"]],
            "labels": {"1": 1, "2": 2, "3": 3, "4": 4},
        }

        result = _invoke(
            "op", "--tree", str(write_document(star)), "--r", "1",
            "--split", "0", "--part", "1,2", "--weight", "3/2",
        )

        assert result.exit_code == 0
        edges = {(u, v): w for u, v, w in json.loads(result.stdout)["edges"]}
        assert edges[(0, 5)] == "3/2"
        assert edges[(1, 5)] == "1"

    def test_contract_twig(self, write_document) -> None:
        result = _invoke("op", "--tree", str(write_document(CATERPILLAR)), "--r", "1", "--contract", "1,5")

        assert result.exit_code == 1
        assert "twig" in result.output

    @pytest.mark.parametrize(
        "extra",
        [
            [],
            ["--contract", "5,6", "--split", "5", "--part", "1,2", "--weight", "1"],
        ],
    )
    def test_exactly_one_operation(self, write_document, extra: list[str]) -> None:
        result = _invoke("op", "--tree", str(write_document(CATERPILLAR)), "--r", "1", *extra)

        assert result.exit_code == 2
        assert "exactly one" in result.output

    def test_split_needs_part_and_weight(self, write_document) -> None:
        result = _invoke("op", "--tree", str(write_document(CATERPILLAR)), "--r", "1", "--split", "5")

        assert result.exit_code == 2

    def test_bad_edge_text(self, write_document) -> None:
        result = _invoke("op", "--tree", str(write_document(CATERPILLAR)), "--r", "1", "--contract", "5")

        assert result.exit_code == 2


class TestTopologies:
    """Tests for the topologies command."""

    def test_counts(self) -> None:
        result = _invoke("topologies", "--n", "4")

        assert result.exit_code == 0
        document = json.loads(result.stdout)
        assert document["count"] == 4
        assert document["constraint"] == "leaf-only"
        assert len(document["topologies"]) == 4

    def test_any(self) -> None:
        document = json.loads(_invoke("topologies", "--n", "4", "--any").stdout)

        assert document["count"] == 26
        assert document["constraint"] == "any"

    def test_nonleaf(self) -> None:
        document = json.loads(_invoke("topologies", "--n", "4", "--nonleaf", "1").stdout)

        assert document["constraint"] == "1 non-leaf labels"
        assert all(
            len(topo["labels"]) == 4 for topo in document["topologies"]
        )

    def test_limit(self) -> None:
        result = _invoke("topologies", "--n", "9")

        assert result.exit_code == 1
        assert "at most 8 labels" in result.output


class TestOracle:
    """Tests for the oracle command."""

    def test_agrees(self, write_document) -> None:
        result = _invoke("oracle", "--tree", str(write_document(CATERPILLAR)), "--subset", "1,3")

        assert result.exit_code == 0
        assert json.loads(result.stdout) == {
            "subset": "1,3",
            "k_weight": "7/2",
            "brute_force": "7/2",
            "agree": True,
        }

    def test_unknown_label(self, write_document) -> None:
        result = _invoke("oracle", "--tree", str(write_document(CATERPILLAR)), "--subset", "1,9")

        assert result.exit_code == 1
