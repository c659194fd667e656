"""Exception hierarchy shared across the package.

Two broad families matter to callers: :class:`DataError` for unusable
input data and :class:`NumericalError` for failures inside fitting or
optimization. The CLI maps them to distinct exit codes.
"""

from __future__ import annotations

__all__ = [
    "DagavgError",
    "DataError",
    "NumericalError",
    "RankDeficientError",
    "TooManyParentsError",
    "SearchExhaustedError",
    "NotConvergedError",
    "ParseError",
    "DuplicateHeaderError",
    "MissingValueError",
    "ConstantColumnError",
]


class DagavgError(Exception):
    """Base class for all package-specific errors."""


class DataError(DagavgError):
    """Input data is malformed or unusable."""


class NumericalError(DagavgError):
    """A numerical procedure failed (singular system, no convergence)."""


class RankDeficientError(NumericalError):
    """The parent columns of a node are numerically rank deficient."""

    def __init__(self, node: int, ratio: float = 0.0):
        self.node = node
        self.ratio = ratio
        super().__init__(
            f"parent columns of node {node} are numerically singular "
            f"(diagonal ratio {ratio:.3e} < 1e-10)"
        )


class TooManyParentsError(NumericalError):
    """A node has at least as many parents as there are samples."""

    def __init__(self, node: int, n_parents: int, n_samples: int):
        self.node = node
        self.n_parents = n_parents
        self.n_samples = n_samples
        super().__init__(
            f"node {node} has {n_parents} parents but only "
            f"{n_samples} samples; least squares is underdetermined"
        )


class SearchExhaustedError(NumericalError):
    """Greedy search ran out of edges to add or remove."""


class NotConvergedError(NumericalError):
    """The weight optimizer failed to certify optimality."""

    def __init__(self, iters: int, residual: float):
        self.iters = iters
        self.residual = residual
        super().__init__(
            f"weight solver not converged after {iters} iterations "
            f"(KKT residual {residual:.3e})"
        )


class ParseError(DataError):
    """A cell failed to parse as a number.

    Coordinates are 1-based; ``row`` counts data rows, excluding the
    header line.
    """

    def __init__(self, row: int, col: int, value: str = ""):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(f"non-numeric cell {value!r} at row {row}, column {col}")


class DuplicateHeaderError(DataError):
    """Two columns share the same header name."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"duplicated column name {name!r}")


class MissingValueError(DataError):
    """A cell is empty where a number is required."""

    def __init__(self, row: int, col: int):
        self.row = row
        self.col = col
        super().__init__(f"missing value at row {row}, column {col}")


class ConstantColumnError(DataError):
    """A column has zero sample variance and cannot be standardized."""

    def __init__(self, col: int, name: str = ""):
        self.col = col
        self.name = name
        label = name or str(col)
        super().__init__(f"column {label} is constant (zero sample variance)")
