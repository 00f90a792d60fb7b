"""Exception hierarchy for tree k-weight errors."""


class TreeWeightsError(Exception):
    """Base exception for all tree k-weight errors.

    This is the parent class for all exceptions raised by the
    tree-kweights package. Catching this exception will catch
    every domain, reconstruction and document error.

    Example:
        try:
            tree = reconstruct(family)
        except TreeWeightsError as e:
            logger.error(f"Failed to reconstruct: {e}")
    """


class TreeStructureError(TreeWeightsError):
    """Raised when an edge list does not describe a valid labeled tree.

    This exception is raised at construction time when:
        - The edges do not form a tree (cycle, disconnected, |E| != |V| - 1)
        - An edge weight is zero or negative
        - A leaf carries no label
        - Two labels point at the same vertex
        - A topology is not reduced (unlabeled vertex of degree 2)

    Example:
        TreeStructureError("Leaf vertex 4 carries no label")
    """


class UnknownLabelError(TreeWeightsError):
    """Raised when a label subset mentions a label the tree or family lacks.

    Example:
        UnknownLabelError("Label 7 is not carried by the tree (labels: 1, 2, 3)")
    """


class FamilyError(TreeWeightsError):
    """Raised when a weight family is malformed or has the wrong shape.

    This exception is raised when:
        - An entry is missing or not strictly positive
        - n or k is out of range
        - An operation needs a different k (e.g. four-point needs k = 2)

    Example:
        FamilyError("check_triangle needs a family of 2-weights, got k=3")
    """


class ClassificationError(TreeWeightsError):
    """Raised when a family's classification violates an operation's precondition.

    This exception is raised when:
        - A canonical pseudostar is requested for a family that is not all-strict
        - The rigid star is requested without exactly one equality
        - The equality on a (k+1)-subset fails or holds more than once

    Example:
        ClassificationError(
            "reconstruct_equality_star needs exactly one equality, got status all_strict"
        )
    """


class NotTreelikeError(TreeWeightsError):
    """Raised when a family is not realized by any positive-weighted tree.

    Example:
        NotTreelikeError("Four-point condition fails on labels (1, 2, 3, 4)")
    """


class SimplexMembershipError(TreeWeightsError):
    """Raised when non-twig weights lie outside the moduli simplex.

    The message always names the violated constraint.

    Example:
        SimplexMembershipError("Sum of non-twig weights 3 must be < 3")
    """


class RewriteError(TreeWeightsError):
    """Raised when an r-IO or r-OI operation is not admissible.

    This exception is raised when:
        - The contracted edge is a twig
        - The split sides do not both exceed r labels
        - A twig weight would become non-positive
        - The bipartition of a vertex's neighbours is invalid

    Example:
        RewriteError("Edge (0, 1) is a twig and cannot be contracted")
    """


class OracleLimitError(TreeWeightsError):
    """Raised when a brute-force computation would exceed its size cap.

    Example:
        OracleLimitError("Brute force supports at most 16 edges, tree has 19")
    """


class DocumentParseError(TreeWeightsError):
    """Raised when a tree, topology or family document cannot be parsed.

    This exception is raised when:
        - The file is not valid JSON
        - A number is not an integer, fraction "p/q" or decimal string
        - A subset key is not a comma-joined list of labels
        - Required document keys are missing

    Example:
        DocumentParseError("Invalid number '3/0': zero denominator")
    """
