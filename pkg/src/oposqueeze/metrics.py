"""Figures of merit derived from squeezing levels.

Conventions: the squeezing degree ``r`` satisfies ``exp(-2r) = V_sq`` with
``V_sq`` the linear squeezed variance (shot noise = 1). Dense-coding
capacity is in nats.
"""

import math

from .errors import DomainError
from .units import db_to_linear

HOLEVO_CRITERION_DB = -6.78


def squeezing_parameter(squeezed_db):
    """Squeezing degree r from a squeezed level in dB (must be <= 0).

    >>> round(squeezing_parameter(-7.2), 4)
    0.8289
    """
    if not math.isfinite(squeezed_db):
        raise DomainError("squeezed level must be finite")
    if squeezed_db > 0:
        raise DomainError(
            f"squeezed level must be <= 0 dB, got {squeezed_db} dB")
    return -0.5 * math.log(db_to_linear(squeezed_db))


def squeezed_db_from_parameter(r):
    if not (math.isfinite(r) and r >= 0):
        raise DomainError("squeezing parameter must be finite and >= 0")
    return -20.0 * r / math.log(10.0)


def teleport_fidelity(n, r):
    """Coherent-state fidelity after ``n`` cascaded teleportations."""
    if int(n) != n or n < 1:
        raise DomainError(f"number of hops must be a positive integer, got {n}")
    if not (math.isfinite(r) and r >= 0):
        raise DomainError("squeezing parameter must be finite and >= 0")
    return 1.0 / (1.0 + n * math.exp(-2.0 * r))


def dense_coding_capacity(n_s, r):
    """Dense-coding information ln(1 + n_s e^{2r}) in nats."""
    if not (math.isfinite(n_s) and n_s >= 0):
        raise DomainError("mean photon number must be finite and >= 0")
    if not (math.isfinite(r) and r >= 0):
        raise DomainError("squeezing parameter must be finite and >= 0")
    return math.log1p(n_s * math.exp(2.0 * r))


def purity(pair):
    """Tr(rho^2) of the zero-mean Gaussian state with the pair's variances."""
    return 1.0 / math.sqrt(pair.squeezed * pair.anti_squeezed)


def beats_holevo(squeezed_db):
    """True when the squeezing is strictly below the -6.78 dB criterion."""
    if not math.isfinite(squeezed_db):
        raise DomainError("squeezed level must be finite")
    return squeezed_db < HOLEVO_CRITERION_DB


def holevo_assessment(pair):
    """Verdict on the criterion plus a purity advisory.

    Exceeding the level alone is not sufficient when the state is mixed, so
    ``purity_limited`` flags any purity below one.
    """
    p = purity(pair)
    return {
        "exceeded": beats_holevo(pair.squeezed_db),
        "purity": p,
        "purity_limited": p < 1.0 - 1e-12,
    }
