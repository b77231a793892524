"""Exception types shared across the package."""


class TorlocError(Exception):
    """Base class for all package errors."""


class ParseError(TorlocError):
    """Malformed polynomial or instance-file input."""


class InhomogeneousInput(TorlocError):
    """A polynomial or relation column mixes internal degrees."""


class ZeroModuleError(TorlocError):
    """An operation that requires a nonzero module received the zero module."""


class ZeroTruncationError(ZeroModuleError):
    """Truncation would produce the zero module (no nonzero pieces above q)."""


class NotFiniteLength(TorlocError):
    """Matlis duality / top-degree need a finite-length module."""


class NonStandardGrading(TorlocError):
    """The operation presumes a standard grading (all weights 1)."""


class CertificateError(TorlocError):
    """A hard consistency certificate failed (caps too small or a bug)."""


class CapExhausted(TorlocError):
    """A computation needs data beyond the configured caps."""
