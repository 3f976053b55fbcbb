class HypBillError(Exception):
    """Base class for all errors raised by the hyperbolic billiards package"""


class ParameterError(HypBillError, ValueError):
    """Invalid parameters, unsupported parity or a violated precondition"""


class OutOfDepthError(HypBillError, LookupError):
    """Query reaches beyond the trusted part of a generated tiling"""


class NumericError(HypBillError, ArithmeticError):
    """Iterative numerical procedure did not converge"""


class PrecisionError(NumericError):
    """Floating-point ambiguity in the disk realization"""


class ResourceError(HypBillError, RuntimeError):
    """Configured size or iteration cap exceeded"""


def require_hyperbolic(p: int, q: int) -> None:
    """
    Reject (p, q) pairs that do not tile the hyperbolic plane

    Raises:
        ParameterError: If p or q is below 3 or 1/p + 1/q >= 1/2
    """
    if p < 3 or q < 3:
        raise ParameterError(f"p and q must be at least 3, got ({p},{q})")
    # 1/p + 1/q < 1/2  <=>  2(p + q) < pq
    if 2 * (p + q) >= p * q:
        raise ParameterError(
            f"({p},{q}) is not hyperbolic: 1/{p} + 1/{q} >= 1/2"
        )
