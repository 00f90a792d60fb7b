"""Exact number and label-subset codec.

Converts between text and exact values:
- "5" -> Fraction(5) (integer)
- "3/2" -> Fraction(3, 2) (fraction)
- "0.25" -> Fraction(1, 4) (decimal, expanded exactly, never rounded)
- "1,2,3" -> (1, 2, 3) (label subset key)
"""

import re
from collections.abc import Iterable
from fractions import Fraction

from tree_kweights.exceptions import DocumentParseError

_INTEGER_PATTERN = re.compile(r"^[+-]?\d+$")
_FRACTION_PATTERN = re.compile(r"^([+-]?\d+)/(\d+)$")
_DECIMAL_PATTERN = re.compile(r"^[+-]?(\d+\.\d*|\.\d+)$")
_LABEL_PATTERN = re.compile(r"^[1-9]\d*$")


def parse_number(text: str | int) -> Fraction:
    """Parse an exact rational from its text form.

    Args:
        text: Integer, "p/q" fraction or decimal string. Plain ints are accepted too.

    Returns:
        The exact Fraction.

    Raises:
        DocumentParseError: If the text is not one of the accepted forms.

    Examples:
        "5" -> Fraction(5, 1)
        "3/2" -> Fraction(3, 2)
        "0.1" -> Fraction(1, 10)
    """
    if isinstance(text, bool):
        raise DocumentParseError(f"Invalid number {text!r}: booleans are not numbers")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise DocumentParseError(
            f"Invalid number {text!r}: expected a string, got {type(text).__name__}"
        )

    value = text.strip()

    if _INTEGER_PATTERN.match(value):
        return Fraction(int(value))

    if match := _FRACTION_PATTERN.match(value):
        denominator = int(match.group(2))
        if denominator == 0:
            raise DocumentParseError(f"Invalid number '{text}': zero denominator")
        return Fraction(int(match.group(1)), denominator)

    if _DECIMAL_PATTERN.match(value):
        return Fraction(value)

    raise DocumentParseError(
        f"Invalid number '{text}'. Use an integer, a fraction 'p/q' or a decimal like '0.25'."
    )


def format_number(value: Fraction) -> str:
    """Render a Fraction as "p/q", or "p" when the denominator is 1."""
    return str(value)


def parse_label(text: str | int) -> int:
    """Parse a single positive label.

    Raises:
        DocumentParseError: If the label is not a positive integer.
    """
    if isinstance(text, int) and not isinstance(text, bool):
        if text < 1:
            raise DocumentParseError(f"Invalid label {text}: labels are positive integers")
        return text
    value = str(text).strip()
    if not _LABEL_PATTERN.match(value):
        raise DocumentParseError(f"Invalid label '{text}': labels are positive integers")
    return int(value)


def parse_label_list(text: str) -> tuple[int, ...]:
    """Parse a comma-joined label list, keeping the given order.

    Raises:
        DocumentParseError: If a label is malformed or repeated.

    Examples:
        "1,2,4" -> (1, 2, 4)
        "4, 1" -> (4, 1)
    """
    if not text.strip():
        raise DocumentParseError("Empty label list")
    labels = tuple(parse_label(part) for part in text.split(","))
    if len(set(labels)) != len(labels):
        raise DocumentParseError(f"Repeated label in '{text}'")
    return labels


def parse_subset_key(text: str) -> tuple[int, ...]:
    """Parse a family subset key; keys must be sorted ascending.

    Raises:
        DocumentParseError: If the key is malformed or not canonical.
    """
    labels = parse_label_list(text)
    if list(labels) != sorted(labels):
        raise DocumentParseError(f"Subset key '{text}' must list labels in ascending order")
    return labels


def subset_key(labels: Iterable[int]) -> str:
    """Render a label subset as its canonical sorted key, e.g. (3, 1) -> "1,3"."""
    return ",".join(str(label) for label in sorted(labels))


def parse_number_list(text: str) -> tuple[Fraction, ...]:
    """Parse a comma-joined list of exact numbers, e.g. "1/2,3" -> (1/2, 3)."""
    if not text.strip():
        return ()
    return tuple(parse_number(part) for part in text.split(","))
