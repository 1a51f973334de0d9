"""Domain errors shared across modules."""


class TiltmutError(Exception):
    """Base class; carries a stable machine-readable code."""

    code = "Error"


class NotAdmissible(TiltmutError):
    code = "NotAdmissible"


class NotFiniteDimensional(TiltmutError):
    code = "NotFiniteDimensional"


class TermTooLong(TiltmutError):
    code = "TermTooLong"


class UnknownSpec(TiltmutError):
    code = "UnknownSpec"


class LoopAtVertex(TiltmutError):
    code = "LoopAtVertex"


class NotWeaklySymmetric(TiltmutError):
    code = "NotWeaklySymmetric"


class ZeroModule(TiltmutError):
    code = "ZeroModule"


class R5SearchExhausted(TiltmutError):
    code = "R5SearchExhausted"


class OracleMismatch(TiltmutError):
    code = "OracleMismatch"


class NotSurjective(TiltmutError):
    code = "NotSurjective"


class ApproximationZero(TiltmutError):
    code = "ApproximationZero"


class SelfExtensionNonzero(TiltmutError):
    code = "SelfExtensionNonzero"
