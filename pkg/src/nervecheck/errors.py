"""Exception hierarchy.

Every error raised deliberately by the library derives from
:class:`NerveCheckError`, so callers (the CLI in particular) can separate
bad input from bugs.
"""

from __future__ import annotations


class NerveCheckError(Exception):
    """Base class for all library errors."""


class NotPrimeError(NerveCheckError, ValueError):
    pass


class ShapeError(NerveCheckError, ValueError):
    pass


class ContainmentError(NerveCheckError, ValueError):
    """A subspace was expected to lie inside another one and does not."""


class DimensionError(NerveCheckError, ValueError):
    pass


class ComplexMismatchError(NerveCheckError, ValueError):
    """Chains or maps from different complexes were combined."""


class NotSimplicialError(NerveCheckError, ValueError):
    """A vertex map does not send simplices to simplices."""


class CycleError(NerveCheckError, ValueError):
    """A chain was required to be a cycle and is not."""


class SpaceMismatchError(NerveCheckError, ValueError):
    pass


class InvalidCoverError(NerveCheckError, ValueError):
    pass


class NotARefinementError(NerveCheckError, ValueError):
    pass


class MetricError(NerveCheckError, ValueError):
    pass


class ActionError(NerveCheckError, ValueError):
    """Base for validation failures of a cyclic action."""


class OrderError(ActionError):
    pass


class FreenessError(ActionError):
    pass


class RegularityError(ActionError):
    """The subgroup action would not produce a simplicial quotient.

    Subdividing the complex (see ``simplicial.barycentric_subdivision``)
    usually makes an action regular.
    """


class AlignmentError(NerveCheckError, ValueError):
    pass


class PartitionError(NerveCheckError, ValueError):
    pass


class PreconditionError(NerveCheckError, ValueError):
    pass


class SetupError(NerveCheckError, ValueError):
    pass


class GuardError(NerveCheckError, ValueError):
    pass


class FactorizationError(NerveCheckError, ValueError):
    pass


class InapplicableError(NerveCheckError, ValueError):
    pass


class ParseError(NerveCheckError, ValueError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
