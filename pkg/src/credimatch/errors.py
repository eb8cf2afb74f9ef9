"""Exception hierarchy.

Every domain failure derives from :class:`EvidenceError`, which the CLI maps
to exit code 1.
"""


class EvidenceError(ValueError):
    """Base class for domain errors."""


class EmptyFrame(EvidenceError):
    pass


class DuplicateLabel(EvidenceError):
    pass


class FrameTooLarge(EvidenceError):
    pass


class InvalidSubset(EvidenceError):
    """A mask has bits outside the frame, or a label is unknown."""


class MassOutOfRange(EvidenceError):
    pass


class SumNotOne(EvidenceError):
    pass


class EmptySetMass(EvidenceError):
    pass


class EmptySubset(EvidenceError):
    pass


class FrameMismatch(EvidenceError):
    pass


class TotalConflict(EvidenceError):
    pass


class EmptyInput(EvidenceError):
    pass


class NotSingleton(EvidenceError):
    pass


class EmptyCandidateSet(EvidenceError):
    pass


class ScoreOutOfRange(EvidenceError):
    pass
