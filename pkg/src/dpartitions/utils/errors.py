class DPartitionsError(Exception):
    """Base class for every error raised by dpartitions."""


class CapacityError(DPartitionsError, ValueError):
    """A requested series or enumeration exceeds the configured capacity."""


class OracleCapExceeded(CapacityError):
    pass


class TruncationMismatchError(DPartitionsError, ValueError):
    pass


class HypothesisViolation(DPartitionsError, ValueError):
    """The evaluation point or parameters lie outside the region a bound is proven for."""


class QuadratureError(DPartitionsError, RuntimeError):
    """A node-doubling quadrature or series evaluation failed to converge."""


class PrecisionExhausted(DPartitionsError, RuntimeError):
    """A decision changed between working precision p and 2p."""


class ScanLimitError(DPartitionsError, RuntimeError):
    pass
