"""Exception types raised across the package.

Each construction or checker raises a specific subclass so callers (and the
CLI) can map failures to meaningful outcomes.
"""


class CubeError(Exception):
    """Base class for every error raised by cubeforge."""


# shape and indexing problems
class DimensionMismatch(CubeError):
    pass


class OrderMismatch(CubeError):
    pass


class LengthMismatch(CubeError):
    pass


class PlacementOutOfRange(CubeError):
    pass


class CellOutOfRange(CubeError):
    pass


class PartitionMismatch(CubeError):
    pass


class ShapeMismatch(CubeError):
    pass


# closed-form generators
class NonCoprimeCoefficient(CubeError):
    pass


class SubsquareTooLarge(CubeError):
    pass


class SubcubeTooLarge(CubeError):
    pass


# orthogonal arrays
class NotPrimePower(CubeError):
    pass


class OrderTooSmall(CubeError):
    pass


class UnsupportedOrder(CubeError):
    """No orthogonal array construction is available for this order."""

    def __init__(self, order, factor=None, message=None):
        self.order = order
        self.factor = factor
        if message is None:
            message = f"no OA(3,5,{order}) construction available"
            if factor is not None:
                message += f" (prime-power factor {factor} is below 4)"
        super().__init__(message)


class BadC(CubeError):
    pass


# completion engines
class ForcedUnsaturable(CubeError):
    pass


class RyserViolated(CubeError):
    """A latin rectangle fails the Ryser counting condition."""

    def __init__(self, symbol, count, required):
        self.symbol = symbol
        self.count = count
        self.required = required
        super().__init__(
            f"symbol {symbol} occurs {count} times, needs at least {required}"
        )


class HypothesisViolated(CubeError):
    """A completion lemma was called on input that does not meet its premises."""

    def __init__(self, hypothesis, where=None):
        self.hypothesis = hypothesis
        self.where = where
        msg = hypothesis if where is None else f"{hypothesis} at {where}"
        super().__init__(msg)


class NotRegular(CubeError):
    pass


# catalog and constructions
class UnknownEntry(CubeError):
    pass


class CatalogCorrupt(CubeError):
    pass


class PackInvalid(CubeError):
    pass


class ExtensionInvalid(CubeError):
    pass


class OutOfTheoremRange(CubeError):
    pass


class BadResidue(CubeError):
    pass


class RuleConflict(CubeError):
    pass


class BRangeTooSmall(CubeError):
    pass


class TilingChainBroken(CubeError):
    pass


class AgreementViolated(CubeError):
    pass


class AssemblyOverlap(CubeError):
    pass


class ConstructionFailed(CubeError):
    """A construction produced output that did not verify."""


# dispatcher
class ProvablyNonexistent(CubeError):
    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__(f"no realization exists ({verdict.justification})")


class Unsupported(CubeError):
    """The partition may exist but no implemented route builds it."""

    REASONS = ("citation-only", "OA-gap", "open-problem")

    def __init__(self, reason, detail=""):
        if reason not in self.REASONS:
            raise ValueError(f"unknown reason {reason!r}")
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


class BudgetExceeded(CubeError):
    def __init__(self, nodes):
        self.nodes = nodes
        super().__init__(f"search budget exhausted after {nodes} nodes")


# file formats
class FormatError(CubeError):
    """Malformed .lcube, JSON or OA text input."""
