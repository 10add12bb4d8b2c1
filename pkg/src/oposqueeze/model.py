"""Closed-form model of a sub-threshold degenerate OPO and its homodyne readout.

All noise powers are linear variances normalized so that shot noise is 1.
Decibels appear only through :func:`db_to_linear` / :func:`linear_to_db`.

The quadrature spectrum used throughout is the single-mode below-threshold
result::

    R_pm = 1 +/- eta * 4x / ((1 -/+ x)**2 + (Omega/gamma)**2)

with ``x = sqrt(P/P_th)`` and ``gamma = c (T + L) / (2 l_rt)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .metrics import purity
from .units import db_to_linear, linear_to_db
from .errors import (
    AboveThresholdError,
    DomainError,
    InconsistentInputsError,
    InvalidLossError,
    UnphysicalMeasurementError,
)

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact

__all__ = [
    "SPEED_OF_LIGHT",
    "CavityParams",
    "DetectionChain",
    "OperatingPoint",
    "QuadraturePair",
    "Prediction",
    "SweepRow",
    "db_to_linear",
    "linear_to_db",
    "threshold_power",
    "pump_ratio",
    "cavity_decay_rate",
    "effective_loss",
    "escape_efficiency",
    "total_efficiency",
    "ideal_spectra",
    "classical_gain",
    "pump_ratio_from_gain",
    "apply_phase_jitter",
    "unmix_phase_jitter",
    "add_circuit_noise",
    "remove_circuit_noise",
    "observed_pair",
    "predict",
    "predict_observed",
    "sweep",
]


def _finite(name, value):
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class CavityParams:
    """OPO cavity geometry and losses.

    Args:
        round_trip_length: optical round-trip length in metres.
        output_coupling: output coupler power transmittance T.
        intracavity_loss: nominal round-trip loss L0 excluding T.
        nonlinear_coefficient: E_NL in 1/W.
        bliira_slope: pump-induced extra loss per watt of pump (0 means none).
    """

    round_trip_length: float
    output_coupling: float
    intracavity_loss: float
    nonlinear_coefficient: float
    bliira_slope: float = 0.0

    def __post_init__(self):
        for name in ("round_trip_length", "output_coupling", "intracavity_loss",
                     "nonlinear_coefficient", "bliira_slope"):
            _finite(name, getattr(self, name))
        if self.round_trip_length <= 0:
            raise DomainError("round_trip_length must be > 0")
        if not 0 < self.output_coupling < 1:
            raise DomainError("output_coupling must lie in (0, 1)")
        if not 0 <= self.intracavity_loss < 1:
            raise DomainError("intracavity_loss must lie in [0, 1)")
        if self.output_coupling + self.intracavity_loss >= 1:
            raise DomainError("output_coupling + intracavity_loss must be < 1")
        if self.nonlinear_coefficient <= 0:
            raise DomainError("nonlinear_coefficient must be > 0")
        if self.bliira_slope < 0:
            raise DomainError("bliira_slope must be >= 0")


@dataclass(frozen=True)
class DetectionChain:
    """Everything between the OPO output coupler and the spectrum analyzer.

    ``phase_jitter`` is the rms LO phase fluctuation in radians; use
    :meth:`with_jitter_deg` when starting from degrees.
    """

    propagation_efficiency: float
    homodyne_efficiency: float
    quantum_efficiency: float = 1.0
    circuit_noise_db: float = -18.5
    phase_jitter: float = 0.0

    def __post_init__(self):
        for name in ("propagation_efficiency", "homodyne_efficiency",
                     "quantum_efficiency", "circuit_noise_db", "phase_jitter"):
            _finite(name, getattr(self, name))
        for name in ("propagation_efficiency", "homodyne_efficiency",
                     "quantum_efficiency"):
            if not 0 < getattr(self, name) <= 1:
                raise DomainError(f"{name} must lie in (0, 1]")
        if self.circuit_noise_db >= 0:
            raise DomainError("circuit_noise_db must be negative (below shot noise)")
        _check_jitter(self.phase_jitter)

    @property
    def detection_efficiency(self):
        return (self.propagation_efficiency * self.homodyne_efficiency
                * self.quantum_efficiency)

    @property
    def phase_jitter_deg(self):
        return math.degrees(self.phase_jitter)

    @classmethod
    def with_jitter_deg(cls, theta_deg, **kwargs):
        return cls(phase_jitter=math.radians(theta_deg), **kwargs)


@dataclass(frozen=True)
class OperatingPoint:
    pump_power: float  # W
    sideband_frequency: float = 1e6  # Hz

    def __post_init__(self):
        _finite("pump_power", self.pump_power)
        _finite("sideband_frequency", self.sideband_frequency)
        if self.pump_power < 0:
            raise DomainError("pump_power must be >= 0")
        if self.sideband_frequency <= 0:
            raise DomainError("sideband_frequency must be > 0")


@dataclass(frozen=True)
class QuadraturePair:
    """Squeezed / anti-squeezed variances, shot noise = 1."""

    squeezed: float
    anti_squeezed: float

    def __post_init__(self):
        _finite("squeezed", self.squeezed)
        _finite("anti_squeezed", self.anti_squeezed)
        if self.squeezed <= 0 or self.anti_squeezed <= 0:
            raise DomainError("quadrature variances must be > 0")
        # allow rounding noise on degenerate pairs
        if self.squeezed > self.anti_squeezed * (1 + 1e-12):
            raise DomainError("squeezed variance exceeds anti-squeezed variance")

    @classmethod
    def from_db(cls, squeezed_db, anti_squeezed_db):
        return cls(db_to_linear(squeezed_db), db_to_linear(anti_squeezed_db))

    @property
    def squeezed_db(self):
        return linear_to_db(self.squeezed)

    @property
    def anti_squeezed_db(self):
        return linear_to_db(self.anti_squeezed)

    @property
    def product(self):
        return self.squeezed * self.anti_squeezed

    def as_db(self):
        return self.squeezed_db, self.anti_squeezed_db


def threshold_power(cavity):
    """Oscillation threshold ``(T + L0)**2 / (4 E_NL)`` in watts.

    Uses the nominal loss L0; pump-induced loss is not folded in.
    """
    total = cavity.output_coupling + cavity.intracavity_loss
    return total ** 2 / (4.0 * cavity.nonlinear_coefficient)


def pump_ratio(pump_power, p_th):
    """Normalized pump amplitude ``x = sqrt(P / P_th)``."""
    _finite("pump_power", pump_power)
    if pump_power < 0:
        raise DomainError("pump_power must be >= 0")
    if p_th <= 0:
        raise DomainError("threshold power must be > 0")
    if pump_power >= p_th:
        raise AboveThresholdError(
            f"pump power {pump_power * 1e3:.6g} mW is at or above threshold "
            f"{p_th * 1e3:.6g} mW; the sub-threshold model does not apply")
    return math.sqrt(pump_power / p_th)


def effective_loss(cavity, pump_power=0.0):
    """Intra-cavity loss including the linear pump-induced term."""
    if pump_power < 0:
        raise DomainError("pump_power must be >= 0")
    loss = cavity.intracavity_loss + cavity.bliira_slope * pump_power
    if loss >= 1.0 - cavity.output_coupling:
        raise InvalidLossError(
            f"effective loss {loss:.6g} at {pump_power:.6g} W reaches 1 - T")
    return loss


def cavity_decay_rate(cavity, pump_power=0.0):
    """Field decay rate gamma (rad/s), the HWHM of the cavity Lorentzian."""
    loss = effective_loss(cavity, pump_power)
    return SPEED_OF_LIGHT * (cavity.output_coupling + loss) / (2.0 * cavity.round_trip_length)


def escape_efficiency(cavity, pump_power=0.0):
    loss = effective_loss(cavity, pump_power)
    return cavity.output_coupling / (cavity.output_coupling + loss)


def total_efficiency(cavity, det, pump_power=0.0):
    """Escape efficiency times propagation, homodyne and quantum efficiency."""
    return escape_efficiency(cavity, pump_power) * det.detection_efficiency


def _check_x(x):
    _finite("x", x)
    if x < 0:
        raise DomainError(f"pump ratio must be >= 0, got {x}")
    if x >= 1:
        raise AboveThresholdError(f"pump ratio {x} >= 1 (at or above threshold)")


def ideal_spectra(x, omega_norm, eta_tot):
    """Homodyne quadrature spectra of the OPO output before jitter and electronics.

    Args:
        x: pump ratio sqrt(P/P_th), in [0, 1).
        omega_norm: sideband frequency over cavity decay rate, Omega/gamma.
        eta_tot: total detection efficiency in (0, 1].
    """
    _check_x(x)
    _finite("omega_norm", omega_norm)
    if omega_norm < 0:
        raise DomainError("omega_norm must be >= 0")
    if not 0 < eta_tot <= 1:
        raise DomainError("eta_tot must lie in (0, 1]")
    w2 = omega_norm * omega_norm
    # 1 - eta*4x/D rewritten over the common denominator; avoids cancellation as x -> 1
    minus = ((1.0 - x) ** 2 + w2 + 4.0 * x * (1.0 - eta_tot)) / ((1.0 + x) ** 2 + w2)
    plus = 1.0 + eta_tot * 4.0 * x / ((1.0 - x) ** 2 + w2)
    return QuadraturePair(minus, plus)


def classical_gain(x):
    """Seeded-probe parametric (amplification, deamplification) gains."""
    _check_x(x)
    return 1.0 / (1.0 - x) ** 2, 1.0 / (1.0 + x) ** 2


def pump_ratio_from_gain(gain_plus):
    """Invert the amplification gain to the pump ratio x."""
    _finite("gain_plus", gain_plus)
    if gain_plus < 1:
        raise DomainError("amplification gain must be >= 1")
    return 1.0 - 1.0 / math.sqrt(gain_plus)


def _check_jitter(theta):
    _finite("theta", theta)
    if not 0 <= theta < math.pi / 4:
        raise DomainError(
            f"phase jitter must lie in [0, pi/4) rad, got {theta!r}")


def apply_phase_jitter(pair, theta):
    """Mix a fraction sin^2(theta) of each quadrature into the other."""
    _check_jitter(theta)
    c2 = math.cos(theta) ** 2
    s2 = math.sin(theta) ** 2
    return QuadraturePair(
        pair.squeezed * c2 + pair.anti_squeezed * s2,
        pair.anti_squeezed * c2 + pair.squeezed * s2,
    )


def unmix_phase_jitter(pair_observed, theta):
    """Algebraic inverse of :func:`apply_phase_jitter`."""
    _check_jitter(theta)
    c2 = math.cos(theta) ** 2
    s2 = math.sin(theta) ** 2
    det = c2 - s2  # cos 2theta > 0 on [0, pi/4)
    minus = (pair_observed.squeezed * c2 - pair_observed.anti_squeezed * s2) / det
    plus = (pair_observed.anti_squeezed * c2 - pair_observed.squeezed * s2) / det
    if minus <= 0:
        raise InconsistentInputsError(
            f"observed pair {pair_observed.as_db()} dB is incompatible with "
            f"{math.degrees(theta):.4g} deg jitter (recovered variance {minus:.3g})")
    return QuadraturePair(minus, plus)


def add_circuit_noise(pair, circuit_db):
    """Add an independent electronic noise floor (dB re shot noise)."""
    if circuit_db >= 0:
        raise DomainError("circuit noise level must be negative")
    floor = db_to_linear(circuit_db)
    return QuadraturePair(pair.squeezed + floor, pair.anti_squeezed + floor)


def remove_circuit_noise(pair_measured, circuit_db):
    """Subtract the electronic noise floor from measured variances."""
    if circuit_db >= 0:
        raise DomainError("circuit noise level must be negative")
    floor = db_to_linear(circuit_db)
    if pair_measured.squeezed <= floor:
        raise UnphysicalMeasurementError(
            f"squeezed level {pair_measured.squeezed_db:.3f} dB is at or below "
            f"the {circuit_db} dB circuit noise floor")
    return QuadraturePair(pair_measured.squeezed - floor,
                          pair_measured.anti_squeezed - floor)


def observed_pair(x, omega_norm, eta_tot, theta=0.0, circuit_db=None):
    """Spectra -> phase jitter -> circuit noise, from normalized inputs.

    ``circuit_db=None`` skips the electronic floor.
    """
    pair = apply_phase_jitter(ideal_spectra(x, omega_norm, eta_tot), theta)
    if circuit_db is not None:
        pair = add_circuit_noise(pair, circuit_db)
    return pair


@dataclass(frozen=True)
class Prediction:
    """Intermediate and final quantities of one forward-model evaluation."""

    pump_power: float
    threshold: float
    x: float
    omega_norm: float
    eta_tot: float
    ideal: QuadraturePair
    jittered: QuadraturePair
    observed: QuadraturePair

    @property
    def purity(self):
        return purity(self.observed)


def predict(cavity, det, op, include_circuit_noise=True):
    """Evaluate the full measurement chain at one operating point."""
    p_th = threshold_power(cavity)
    x = pump_ratio(op.pump_power, p_th)
    gamma = cavity_decay_rate(cavity, op.pump_power)
    omega_norm = 2.0 * math.pi * op.sideband_frequency / gamma
    eta = total_efficiency(cavity, det, op.pump_power)
    ideal = ideal_spectra(x, omega_norm, eta)
    jittered = apply_phase_jitter(ideal, det.phase_jitter)
    if include_circuit_noise:
        observed = add_circuit_noise(jittered, det.circuit_noise_db)
    else:
        observed = jittered
    return Prediction(op.pump_power, p_th, x, omega_norm, eta,
                      ideal, jittered, observed)


def predict_observed(cavity, det, op, include_circuit_noise=True):
    return predict(cavity, det, op, include_circuit_noise).observed


@dataclass(frozen=True)
class SweepRow:
    pump_power: float
    squeezed_db: float
    anti_squeezed_db: float
    purity: float


def sweep(cavity, det, pump_powers, sideband_frequency=1e6,
          include_circuit_noise=True):
    """Predicted observed levels for each pump power, in input order.

    Raises:
        AboveThresholdError: naming the first offending row.
    """
    rows = []
    for i, power in enumerate(pump_powers):
        op = OperatingPoint(float(power), sideband_frequency)
        try:
            pred = predict(cavity, det, op, include_circuit_noise)
        except AboveThresholdError as exc:
            raise AboveThresholdError(
                f"row {i} ({power * 1e3:.6g} mW): {exc}") from exc
        rows.append(SweepRow(pred.pump_power, pred.observed.squeezed_db,
                             pred.observed.anti_squeezed_db, pred.purity))
    return rows
