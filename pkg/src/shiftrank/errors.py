"""Exception types shared across the library.

The CLI maps these onto exit codes: parse errors exit 2, capacity and
budget errors exit 3, oracle/formula cross-check failures exit 4.
"""


class ShiftRankError(Exception):
    """Base class for all library errors."""


class SpecParseError(ShiftRankError, ValueError):
    """A group-spec string or Cayley-table file is malformed."""


class CapacityError(ShiftRankError):
    """A requested construction exceeds a configured size limit."""


class BudgetExceededError(ShiftRankError):
    """An exact search ran out of its configured budget.

    Distinct from returning a value: callers must treat "budget exceeded"
    as unknown, never as a bound.
    """


class NotSubgroupError(ShiftRankError, ValueError):
    """A member set is not closed under the group operation."""


class NotNormalError(ShiftRankError, ValueError):
    """A subgroup is not normal where normality is required."""


class NotComparableError(ShiftRankError, ValueError):
    """Möbius query on a pair H, K with H not contained in K."""


class NotDedekindError(ShiftRankError, ValueError):
    """A Dedekind-only bound was requested for a non-Dedekind group."""


class DegreeError(ShiftRankError, ValueError):
    """Permutation-degree bound requested with degree <= 3."""


class ContextMismatchError(ShiftRankError, ValueError):
    """Operands live over different groups or alphabet sizes."""


class InexactDivisionError(ShiftRankError, ArithmeticError):
    """An orbit count came out non-integral; signals a lattice/Möbius bug."""


class CrossCheckError(ShiftRankError):
    """Brute-force oracle and formula disagree."""
