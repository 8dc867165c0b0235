"""Exception types shared across the package."""


class NoceanError(Exception):
    """Base class for all package errors."""


class BadDimension(NoceanError):
    pass


class DisconnectedOcean(NoceanError):
    pass


class EmptyMask(NoceanError):
    pass


class DeltaTooLarge(NoceanError):
    pass


class UnreachableCell(NoceanError):
    pass


class NonUniformTime(NoceanError):
    pass


class OutOfRange(NoceanError):
    pass


class ThicknessCollapse(NoceanError):
    pass


class ShapeMismatch(NoceanError):
    pass


class NoEquilibrium(NoceanError):
    pass


class ParseError(NoceanError):
    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ValidationError(NoceanError):
    pass


class BadMagic(NoceanError):
    pass


class VersionMismatch(NoceanError):
    pass


class TruncatedFile(NoceanError):
    pass
