"""Exception hierarchy shared by every roughtop module."""


class RoughTopError(Exception):
    """Base class; ``witness`` carries the concrete offending data, if any."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class EmptySubset(RoughTopError):
    pass


class NotSymmetric(RoughTopError):
    pass


class ParentNotRoughGroup(RoughTopError):
    pass


class NotRoughGroup(RoughTopError):
    pass


class NotTopologicalRoughGroup(RoughTopError):
    pass


class ElementNotInG(RoughTopError):
    pass


class NotApplicable(RoughTopError):
    pass


class CapExceeded(RoughTopError):
    pass


class CarrierMismatch(RoughTopError):
    pass


class TopologyError(RoughTopError):
    pass


class MissingEmptyOrCarrier(TopologyError):
    pass


class NotClosedUnderUnion(TopologyError):
    pass


class NotClosedUnderIntersection(TopologyError):
    pass


class NotSurjective(RoughTopError):
    pass


class HomNotVerified(RoughTopError):
    pass


class NotContinuous(RoughTopError):
    pass


class NotASubgroup(RoughTopError):
    pass


class UnknownProperty(RoughTopError):
    pass


class GeneratorExhausted(RoughTopError):
    def __init__(self, message="", partial=None):
        super().__init__(message)
        self.partial = partial


class BudgetExhausted(RoughTopError):
    def __init__(self, message="", partial=None):
        super().__init__(message)
        self.partial = partial


class InfiniteEntry(RoughTopError):
    pass


class PredicateSyntaxError(RoughTopError):
    def __init__(self, message, position):
        super().__init__(f"{message} (column {position + 1})")
        self.position = position


class UnknownAtom(RoughTopError):
    def __init__(self, name, position=None):
        super().__init__(f"unknown atom {name!r}")
        self.name = name
        self.position = position


class StructureFileError(RoughTopError):
    """Malformed structure file; ``where`` is a line:col or a JSON path."""

    def __init__(self, message, where=None):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where
