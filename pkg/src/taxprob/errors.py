"""Exception types shared across the package."""


class TaxprobError(Exception):
    """Base class for all errors raised by this package."""


class UnknownEventError(TaxprobError):
    """An identifier was used that is not part of the declared universe."""


class AtomSpaceError(TaxprobError):
    """Atom enumeration would yield more atoms than the configured cap."""


class ProbabilisticConflictError(TaxprobError):
    """Two sound intervals for the same conditional have an empty intersection.

    This signals that an asserted bound contradicts the taxonomy, or that
    saturation derived incompatible bounds (possible only when the knowledge
    base has no model at all).
    """

    def __init__(self, conclusion, premise, first, second, context=""):
        self.conclusion = conclusion
        self.premise = premise
        self.first = first
        self.second = second
        msg = (f"probabilistic conflict for ({conclusion}|{premise}): "
               f"{first} and {second} do not intersect")
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class CoherenceError(TaxprobError):
    """A query command was run against an incoherent knowledge base."""


class InternalSolverError(TaxprobError):
    """The LP solver reached a state that is impossible for well-formed input."""
