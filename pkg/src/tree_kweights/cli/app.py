"""Command-line front end.

Every command reads JSON documents, prints one JSON document on stdout
and exits with 0 on success, 1 on a domain error and 2 on an I/O or
parse error. Diagnostics go to stderr.
"""

import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Annotated, Any

import typer

from tree_kweights import __version__
from tree_kweights.cli.documents import (
    classification_document,
    dump_document,
    family_document,
    load_document,
    mixed_document,
    parse_family,
    parse_topology,
    parse_tree,
    simplex_document,
    topology_document,
    tree_document,
)
from tree_kweights.core.codec import (
    parse_label_list,
    parse_number,
    parse_number_list,
    subset_key,
)
from tree_kweights.core.family import (
    check_four_point,
    check_triangle,
    classify_family,
)
from tree_kweights.core.multiweight import (
    extend_family,
    mixed_treelike_equivalence,
    nm1_to_two,
    two_to_nm1,
)
from tree_kweights.core.oracle import TopologyConstraint, brute_force_k_weight, enumerate_topologies
from tree_kweights.core.reconstruct import (
    moduli_description,
    r_io,
    r_oi,
    realize_on_topology,
    reconstruct,
)
from tree_kweights.core.tree import all_k_weights, k_weight
from tree_kweights.exceptions import DocumentParseError, FamilyError, TreeWeightsError

logger = logging.getLogger(__name__)

EXIT_DOMAIN_ERROR = 1
EXIT_PARSE_ERROR = 2

app = typer.Typer(
    name="tree-kweights",
    help="Exact k-weights of labeled weighted trees and their reconstruction.",
    no_args_is_help=True,
    add_completion=False,
)

FileOption = Annotated[
    Path, typer.Option(dir_okay=False, help="Path to a JSON document.", show_default=False)
]


class Direction(str, Enum):
    NM1_TO_TWO = "nm1-to-2"
    TWO_TO_NM1 = "2-to-nm1"


class LogLevel(str, Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Map library errors to the documented exit codes."""
    try:
        yield
    except DocumentParseError as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(EXIT_PARSE_ERROR) from e
    except TreeWeightsError as e:
        logger.debug("Command failed", extra={"error": type(e).__name__})
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(EXIT_DOMAIN_ERROR) from e


def _emit(document: dict[str, Any]) -> None:
    typer.echo(dump_document(document), nl=False)


@app.callback()
def main_callback(
    log_level: Annotated[
        LogLevel, typer.Option("--log-level", help="Verbosity of diagnostics on stderr.")
    ] = LogLevel.WARNING,
) -> None:
    """Exact k-weights of labeled weighted trees and their reconstruction."""
    logging.basicConfig(
        stream=sys.stderr,
        level=log_level.value,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


@app.command()
def version() -> None:
    """Print the package version."""
    typer.echo(__version__)


@app.command()
def kweights(
    tree: FileOption,
    k: Annotated[int, typer.Option(help="Size of the label subsets.")],
) -> None:
    """Compute all k-weights of a tree."""
    with _exit_codes():
        weighted = parse_tree(load_document(tree))
        _emit(family_document(all_k_weights(weighted, k)))


@app.command()
def check(family: FileOption) -> None:
    """Classify a family of (n-1)-weights, or test a family of 2-weights."""
    with _exit_codes():
        fam = parse_family(load_document(family))
        if fam.k == fam.n - 1:
            _emit(classification_document(classify_family(fam)))
        elif fam.k == 2:
            triangle = check_triangle(fam)
            four_point = check_four_point(fam)
            _emit(
                {
                    "status": "treelike" if four_point else "not_treelike",
                    "triangle": triangle,
                    "four_point": four_point,
                }
            )
        else:
            raise FamilyError(
                f"check supports k = n - 1 or k = 2, got k={fam.k} with n={fam.n}"
            )


@app.command("reconstruct")
def reconstruct_command(
    family: FileOption,
    topology: Annotated[
        Path | None, typer.Option(dir_okay=False, help="Topology document to realize F on.")
    ] = None,
    coords: Annotated[
        str | None,
        typer.Option(help="Non-twig weights e_1,...,e_N as 'p/q,...'; defaults to the barycenter."),
    ] = None,
) -> None:
    """Build a tree realizing a family."""
    with _exit_codes():
        fam = parse_family(load_document(family))
        if topology is None:
            if coords is not None:
                raise DocumentParseError("--coords needs --topology")
            result = reconstruct(fam)
        else:
            topo = parse_topology(load_document(topology))
            description = moduli_description(fam, topo)
            if coords is None:
                point = description.interior_point()
            else:
                values = parse_number_list(coords)
                if len(values) != len(description.coordinates):
                    raise DocumentParseError(
                        f"--coords lists {len(values)} values but the topology has "
                        f"{len(description.coordinates)} non-twig edges"
                    )
                point = dict(zip(description.coordinates, values))
            result = realize_on_topology(fam, topo, point)
        logger.info("Reconstructed tree", extra={"edges": len(result.edges)})
        _emit(tree_document(result))


@app.command()
def moduli(family: FileOption, topology: FileOption) -> None:
    """Describe the moduli simplex of a family on a topology."""
    with _exit_codes():
        fam = parse_family(load_document(family))
        topo = parse_topology(load_document(topology))
        _emit(simplex_document(moduli_description(fam, topo)))


@app.command()
def convert(
    family: FileOption,
    direction: Annotated[Direction, typer.Option(help="Conversion direction.")],
) -> None:
    """Convert between a one-equality (n-1)-family and its 2-weight family."""
    with _exit_codes():
        fam = parse_family(load_document(family))
        if direction is Direction.NM1_TO_TWO:
            _emit(family_document(nm1_to_two(fam).family_two))
        else:
            _emit(family_document(two_to_nm1(fam).family_nm1))


@app.command()
def extend(
    family: FileOption,
    subset: Annotated[str, typer.Option(help="The k+1 labels a_1,...,a_{k+1}.")],
    check_equivalence: Annotated[
        bool, typer.Option("--check", help="Also decide treelikeness of both families.")
    ] = False,
) -> None:
    """Extend a k-weight family by the 2-weights of a (k+1)-subset."""
    with _exit_codes():
        fam = parse_family(load_document(family))
        labels = parse_label_list(subset)
        mixed = extend_family(fam, labels)
        report = mixed_treelike_equivalence(fam, labels) if check_equivalence else None
        _emit(mixed_document(mixed, report))


@app.command()
def op(
    tree: FileOption,
    r: Annotated[int, typer.Option(help="The r of the r-IO / r-OI operation.")],
    contract: Annotated[
        str | None, typer.Option(help="Edge 'u,v' to contract (r-IO).")
    ] = None,
    split: Annotated[int | None, typer.Option(help="Vertex to split (r-OI).")] = None,
    part: Annotated[
        str | None, typer.Option(help="Neighbours 'a,b,...' moved to the new vertex.")
    ] = None,
    weight: Annotated[str | None, typer.Option(help="Weight of the new edge.")] = None,
) -> None:
    """Apply an r-IO contraction or an r-OI split."""
    with _exit_codes():
        if (contract is None) == (split is None):
            raise DocumentParseError("Give exactly one of --contract or --split")
        weighted = parse_tree(load_document(tree))
        if contract is not None:
            ends = _vertex_list(contract)
            if len(ends) != 2:
                raise DocumentParseError(f"--contract takes an edge 'u,v', got '{contract}'")
            result = r_io(weighted, (ends[0], ends[1]), r)
        else:
            if part is None or weight is None:
                raise DocumentParseError("--split needs --part and --weight")
            assert split is not None
            moved = _vertex_list(part)
            result = r_oi(weighted, split, moved, parse_number(weight), r)
        _emit(tree_document(result))


def _vertex_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise DocumentParseError(f"Expected comma-joined vertex ids, got '{text}'") from None


@app.command()
def topologies(
    n: Annotated[int, typer.Option(help="Number of labels.")],
    nonleaf: Annotated[int, typer.Option(help="Required number of non-leaf labels.")] = 0,
    any_placement: Annotated[
        bool, typer.Option("--any", help="Admit any number of non-leaf labels.")
    ] = False,
) -> None:
    """List all labeled reduced topologies on labels 1..n."""
    with _exit_codes():
        constraint = TopologyConstraint(non_leaf_labels=None if any_placement else nonleaf)
        catalog = enumerate_topologies(n, constraint)
        _emit(
            {
                "n": n,
                "constraint": constraint.describe(),
                "count": len(catalog),
                "topologies": [topology_document(topo) for topo in catalog],
            }
        )


@app.command()
def oracle(
    tree: FileOption,
    subset: Annotated[str, typer.Option(help="Labels 'a,b,...' of the subset.")],
) -> None:
    """Compare k_weight with the brute-force minimum over connected subtrees."""
    with _exit_codes():
        weighted = parse_tree(load_document(tree))
        labels = parse_label_list(subset)
        fast = k_weight(weighted, labels)
        brute = brute_force_k_weight(weighted, labels)
        _emit(
            {
                "subset": subset_key(labels),
                "k_weight": str(fast),
                "brute_force": str(brute),
                "agree": fast == brute,
            }
        )


def main() -> None:
    """Console-script entry point."""
    app()


__all__ = ["app", "main"]
