"""Exception hierarchy.

Every error carries a ``code`` (the class name) so the command line can print
``ERROR <code>: <message>`` without a lookup table.
"""


class IcssError(Exception):
    """Base class for all engine errors."""

    @property
    def code(self):
        return type(self).__name__


class MalformedInput(IcssError):
    pass


class BoundarySquareNonzero(IcssError):
    pass


class DanglingCellReference(IcssError):
    pass


class NotClosedUnderBoundary(IcssError):
    pass


class IdentificationOfUnequalDimensions(IcssError):
    pass


class NotASubcomplex(IcssError):
    pass


class NotAChainMap(IcssError):
    pass


class InvalidAction(IcssError):
    pass


class RestrictionNotClosed(IcssError):
    pass


class NotActionClosed(IcssError):
    pass


class NotOrbitClosed(IcssError):
    pass


class InvalidGermModel(IcssError):
    pass


class NotNormalCrossings(InvalidGermModel):
    pass


class CellLimitExceeded(IcssError):
    pass


class NonFreeDifferentialDomain(IcssError):
    pass


class HigherDifferentialUnknown(IcssError):
    pass


class ExtensionProblemUnresolved(IcssError):
    pass


class OracleMismatch(IcssError):
    pass


class NoWitness(IcssError):
    pass


class InvalidFixture(IcssError):
    pass
