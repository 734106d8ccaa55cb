"""Exception hierarchy shared by every freikalk module."""


class FreikalkError(Exception):
    """Base class for all library errors."""


class InvalidGenerator(FreikalkError, ValueError):
    pass


class RankMismatch(FreikalkError, ValueError):
    pass


class ParseError(FreikalkError, ValueError):
    def __init__(self, message, text="", pos=0):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}")

    def annotated(self):
        return f"{self}\n  {self.text}\n  {' ' * self.pos}^"


class UnsupportedQuotient(FreikalkError, ValueError):
    pass


class InternalInconsistency(FreikalkError, RuntimeError):
    """An identity that must hold exactly failed; this is a bug."""


class NotInSubgroup(FreikalkError, ValueError):
    pass


class NotFreeBasis(FreikalkError, ValueError):
    pass


class NotInKernel(FreikalkError, ValueError):
    pass


class NotInVerbal(FreikalkError, ValueError):
    pass


class IdentityElement(FreikalkError, ValueError):
    pass


class PreconditionFailed(FreikalkError, ValueError):
    pass


class LevelOutOfRange(FreikalkError, ValueError):
    pass


class Inconclusive(FreikalkError):
    def __init__(self, message, bound=None):
        self.bound = bound
        super().__init__(message)


class ZeroElement(FreikalkError, ValueError):
    pass


class UnknownLayer(FreikalkError, KeyError):
    pass


class ZeroFactor(FreikalkError, ValueError):
    pass


class IndexOutOfRange(FreikalkError, IndexError):
    pass


class ShadowNotTriangular(FreikalkError, ValueError):
    pass


class UnsupportedRing(FreikalkError, ValueError):
    pass


class TooManyRelators(FreikalkError, ValueError):
    pass


class RankTooSmall(FreikalkError, ValueError):
    pass
