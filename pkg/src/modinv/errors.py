"""Exception hierarchy; every error carries the name of the module raising it."""
from __future__ import annotations


class ModinvError(Exception):
    module = "modinv"

    def __str__(self):
        return f"[{self.module}] {super().__str__()}"


class InputError(ModinvError):
    """Malformed user input (bad JSON, wrong shapes, entries out of range)."""
    module = "cli"


# gf
class NonPrime(ModinvError, ValueError):
    module = "gf"


class RangeExceeded(ModinvError, ValueError):
    module = "gf"


# linalg
class NotSquare(ModinvError, ValueError):
    module = "linalg"


# group
class CapExceeded(ModinvError):
    module = "group"

    def __init__(self, partial_count: int, cap: int):
        super().__init__(f"closure exceeded cap {cap} (reached {partial_count} elements)")
        self.partial_count = partial_count
        self.cap = cap


class Singular(ModinvError, ValueError):
    module = "group"


class NotStable(ModinvError, ValueError):
    module = "group"


class NotNormal(ModinvError, ValueError):
    module = "group"


# modstruct
class NotSL(ModinvError, ValueError):
    module = "modstruct"


class ClassificationAnomaly(ModinvError):
    module = "modstruct"


# polyact
class DimMismatch(ModinvError, ValueError):
    module = "polyact"


class BoundExceeded(ModinvError, ValueError):
    module = "polyact"


class NotInSubalgebra(ModinvError):
    module = "polyact"


class AmbiguousExpression(ModinvError):
    module = "polyact"


# invring
class NotElementaryFixGroup(ModinvError):
    module = "invring"


class FieldTooSmall(ModinvError, ValueError):
    module = "invring"


class NoConstructionApplies(ModinvError):
    module = "invring"


class CertificationFailed(ModinvError):
    module = "invring"

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


# gorenstein
class PresentationUncertified(ModinvError):
    module = "gorenstein"


class NoFormulaForCase(ModinvError):
    module = "gorenstein"


class Inconclusive(ModinvError):
    module = "gorenstein"


class OutOfScope(ModinvError):
    module = "gorenstein"
