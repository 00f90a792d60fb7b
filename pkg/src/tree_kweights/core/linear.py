"""Exact rational linear algebra for realization searches.

Two pieces:
- solve_affine: reduced row echelon form over Fraction, giving every
  variable as an affine expression in the free variables;
- strictly_positive_point: Fourier-Motzkin elimination on strict
  inequalities a . t + c > 0, with back-substitution to a witness point.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

logger = logging.getLogger(__name__)

Constraint = tuple[tuple[Fraction, ...], Fraction]
"""A strict inequality coefs . t + const > 0."""


@dataclass(frozen=True)
class AffineSolution:
    """General solution of a consistent linear system.

    Attributes:
        free: Indices of the free variables, ascending.
        expressions: For every variable, (constant, coefficients over the free variables).
    """

    free: tuple[int, ...]
    expressions: tuple[tuple[Fraction, tuple[Fraction, ...]], ...]

    @property
    def dimension(self) -> int:
        return len(self.free)

    def evaluate(self, free_values: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Values of all variables for the given free-variable values."""
        if len(free_values) != len(self.free):
            raise ValueError(f"Expected {len(self.free)} free values, got {len(free_values)}")
        return tuple(
            const + sum((c * t for c, t in zip(coefs, free_values)), Fraction(0))
            for const, coefs in self.expressions
        )


def solve_affine(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], n_vars: int
) -> AffineSolution | None:
    """Solve rows . x = rhs exactly.

    Pivots are chosen left to right, so earlier columns become pivot
    variables and later columns stay free.

    Returns:
        The affine solution, or None when the system is inconsistent.
    """
    matrix = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots: list[int] = []
    rank = 0
    for col in range(n_vars):
        pivot_row = next((r for r in range(rank, len(matrix)) if matrix[r][col] != 0), None)
        if pivot_row is None:
            continue
        matrix[rank], matrix[pivot_row] = matrix[pivot_row], matrix[rank]
        lead = matrix[rank][col]
        matrix[rank] = [v / lead for v in matrix[rank]]
        for r in range(len(matrix)):
            if r != rank and matrix[r][col] != 0:
                factor = matrix[r][col]
                matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[rank])]
        pivots.append(col)
        rank += 1

    for r in range(rank, len(matrix)):
        if matrix[r][n_vars] != 0:
            return None

    free = tuple(col for col in range(n_vars) if col not in pivots)
    expressions: list[tuple[Fraction, tuple[Fraction, ...]]] = []
    pivot_row_of = {col: r for r, col in enumerate(pivots)}
    for col in range(n_vars):
        if col in pivot_row_of:
            row = matrix[pivot_row_of[col]]
            expressions.append((row[n_vars], tuple(-row[f] for f in free)))
        else:
            expressions.append(
                (Fraction(0), tuple(Fraction(1 if f == col else 0) for f in free))
            )
    return AffineSolution(free=free, expressions=tuple(expressions))


def _normalize(constraint: Constraint) -> Constraint:
    coefs, const = constraint
    scale = next((abs(c) for c in coefs if c != 0), None)
    if scale is None:
        return coefs, const
    return tuple(c / scale for c in coefs), const / scale


def _bounds(
    constraints: Sequence[Constraint], var: int, prefix: Sequence[Fraction]
) -> tuple[Fraction | None, Fraction | None]:
    """Open interval for variable `var` given values of the variables before it."""
    lower: Fraction | None = None
    upper: Fraction | None = None
    for coefs, const in constraints:
        a = coefs[var]
        if a == 0:
            continue
        rest = const + sum((c * t for c, t in zip(coefs[:var], prefix)), Fraction(0))
        bound = -rest / a
        if a > 0:
            lower = bound if lower is None else max(lower, bound)
        else:
            upper = bound if upper is None else min(upper, bound)
    return lower, upper


def strictly_positive_point(
    constraints: Sequence[Constraint], n_vars: int
) -> tuple[Fraction, ...] | None:
    """Find t with coefs . t + const > 0 for every constraint, or None.

    Eliminates variables from the last to the first, keeping the system
    at each stage, then back-substitutes from the first variable picking
    the midpoint of the open interval (or one step inside a half-line).

    Example:
        [((1,), 0), ((-1,), 3)] -> (3/2,)  # 0 < t < 3
    """
    stages: list[list[Constraint]] = [list(dict.fromkeys(_normalize(c) for c in constraints))]
    for var in reversed(range(n_vars)):
        current = stages[-1]
        positive = [c for c in current if c[0][var] > 0]
        negative = [c for c in current if c[0][var] < 0]
        kept = [c for c in current if c[0][var] == 0]
        for p_coefs, p_const in positive:
            for q_coefs, q_const in negative:
                scale_p = -q_coefs[var]
                scale_q = p_coefs[var]
                coefs = tuple(scale_p * a + scale_q * b for a, b in zip(p_coefs, q_coefs))
                kept.append(_normalize((coefs, scale_p * p_const + scale_q * q_const)))
        stages.append(list(dict.fromkeys(kept)))

    if any(const <= 0 for _, const in stages[-1]):
        return None

    point: list[Fraction] = []
    for var in range(n_vars):
        lower, upper = _bounds(stages[n_vars - var - 1], var, point)
        if lower is not None and upper is not None:
            if lower >= upper:
                logger.warning(
                    "Fourier-Motzkin back-substitution found an empty interval",
                    extra={"var": var, "lower": str(lower), "upper": str(upper)},
                )
                return None
            point.append((lower + upper) / 2)
        elif lower is not None:
            point.append(lower + 1)
        elif upper is not None:
            point.append(upper - 1)
        else:
            point.append(Fraction(0))
    return tuple(point)


def positive_solution(solution: AffineSolution) -> tuple[Fraction, ...] | None:
    """A solution of the affine system with every variable strictly positive, or None."""
    constraints = [(coefs, const) for const, coefs in solution.expressions]
    if not solution.free:
        values = solution.evaluate(())
        return values if all(v > 0 for v in values) else None
    free_values = strictly_positive_point(constraints, solution.dimension)
    if free_values is None:
        return None
    return solution.evaluate(free_values)
