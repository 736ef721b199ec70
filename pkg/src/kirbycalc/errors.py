"""Exception hierarchy shared by every module."""


class KirbyError(Exception):
    """Base class for all engine errors."""


class DomainError(KirbyError, ValueError):
    """An argument lies outside an operation's domain."""


class MissingLabelError(KirbyError, LookupError):
    def __init__(self, label):
        super().__init__(f"no handle labelled {label!r}")
        self.label = label


class DuplicateLabelError(KirbyError, ValueError):
    pass


class FramingNotUnitError(KirbyError, ValueError):
    pass


class StrictnessError(KirbyError, ValueError):
    pass


class UnknownEntryError(KirbyError, ValueError):
    """A move needed a concrete value where only Unknown is available."""


class NonMeridianError(KirbyError, ValueError):
    pass


class DuplicateFourHandleError(KirbyError, ValueError):
    pass


class ShapeError(KirbyError, ValueError):
    """A decomposition does not have the configuration a surgery requires."""


class BoundaryPreconditionError(KirbyError, ValueError):
    """The boundary H1 order is only defined on 2-handlebodies with known data."""


class HasOneHandlesError(BoundaryPreconditionError):
    pass


class HasUpperHandlesError(BoundaryPreconditionError):
    pass


class UnknownLinkingError(BoundaryPreconditionError):
    pass


class ConventionError(KirbyError, RuntimeError):
    """An internal construction produced data that fails its own validation."""
