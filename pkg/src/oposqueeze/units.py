"""dB <-> linear power conversions (shot noise = 0 dB = 1)."""

import math

from .errors import DomainError


def db_to_linear(level):
    """Convert a level in dB (power) to a linear ratio."""
    level = float(level)
    if not math.isfinite(level):
        raise DomainError(f"level must be finite, got {level!r}")
    return 10.0 ** (level / 10.0)


def linear_to_db(v):
    """Convert a positive linear power ratio to dB."""
    v = float(v)
    if not (v > 0 and math.isfinite(v)):
        raise DomainError(f"linear power must be finite and > 0, got {v!r}")
    return 10.0 * math.log10(v)
