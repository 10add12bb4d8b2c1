"""Flat ``key = value`` experiment configuration.

Lines may carry ``#`` comments. Unknown keys and duplicates are rejected and
the whole file is parsed and validated before anything is computed.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from .errors import DomainError, ParseError
from .model import CavityParams, DetectionChain, OperatingPoint

# key -> (default or None when required)
KEYS = {
    "round_trip_length": None,        # m
    "output_coupling": None,          # T
    "intracavity_loss": None,         # L0
    "nonlinear_coefficient": None,    # E_NL, 1/W
    "bliira_slope": 0.0,              # 1/W
    "propagation_efficiency": None,
    "homodyne_efficiency": None,
    "quantum_efficiency": 1.0,
    "circuit_noise_db": None,
    "phase_jitter_deg": 0.0,
    "pump_mw": 100.0,
    "sideband_hz": 1e6,
}

PAPER_VALUES = {
    "round_trip_length": 0.5,
    "output_coupling": 0.123,
    "intracavity_loss": 0.006,
    "nonlinear_coefficient": 0.023,
    "bliira_slope": 0.0,
    "propagation_efficiency": 0.99,
    "homodyne_efficiency": 0.98,
    "quantum_efficiency": 1.0,
    "circuit_noise_db": -18.5,
    "phase_jitter_deg": 3.9,
    "pump_mw": 100.0,
    "sideband_hz": 1e6,
}


@dataclass(frozen=True)
class ExperimentConfig:
    cavity: CavityParams
    detection: DetectionChain
    operating_point: OperatingPoint

    @classmethod
    def from_mapping(cls, values):
        unknown = set(values) - set(KEYS)
        if unknown:
            raise ParseError(f"unknown keys: {', '.join(sorted(unknown))}")
        merged = {k: values.get(k, d) for k, d in KEYS.items()}
        missing = [k for k, v in merged.items() if v is None]
        if missing:
            raise ParseError(f"missing keys: {', '.join(missing)}")
        cavity = CavityParams(
            merged["round_trip_length"], merged["output_coupling"],
            merged["intracavity_loss"], merged["nonlinear_coefficient"],
            merged["bliira_slope"])
        det = DetectionChain.with_jitter_deg(
            merged["phase_jitter_deg"],
            propagation_efficiency=merged["propagation_efficiency"],
            homodyne_efficiency=merged["homodyne_efficiency"],
            quantum_efficiency=merged["quantum_efficiency"],
            circuit_noise_db=merged["circuit_noise_db"])
        op = OperatingPoint(merged["pump_mw"] * 1e-3, merged["sideband_hz"])
        return cls(cavity, det, op)

    @classmethod
    def paper(cls):
        """Parameters of the 860 nm PPKTP experiment."""
        return cls.from_mapping(PAPER_VALUES)

    def to_text(self):
        c, d, op = self.cavity, self.detection, self.operating_point
        values = {
            "round_trip_length": c.round_trip_length,
            "output_coupling": c.output_coupling,
            "intracavity_loss": c.intracavity_loss,
            "nonlinear_coefficient": c.nonlinear_coefficient,
            "bliira_slope": c.bliira_slope,
            "propagation_efficiency": d.propagation_efficiency,
            "homodyne_efficiency": d.homodyne_efficiency,
            "quantum_efficiency": d.quantum_efficiency,
            "circuit_noise_db": d.circuit_noise_db,
            "phase_jitter_deg": d.phase_jitter_deg,
            "pump_mw": op.pump_power * 1e3,
            "sideband_hz": op.sideband_frequency,
        }
        return "".join(f"{k} = {v!r}\n" for k, v in values.items())


def parse_config(text):
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", line=lineno)
        key, _, val = (s.strip() for s in line.partition("="))
        if key not in KEYS:
            raise ParseError(f"unknown key {key!r}", line=lineno)
        if key in values:
            raise ParseError(f"duplicate key {key!r}", line=lineno)
        try:
            number = float(val)
        except ValueError:
            raise ParseError(f"value for {key!r} is not a number: {val!r}", line=lineno) from None
        if not math.isfinite(number):
            raise ParseError(f"value for {key!r} must be finite", line=lineno)
        values[key] = number
    try:
        return ExperimentConfig.from_mapping(values)
    except DomainError as exc:
        raise ParseError(f"invalid configuration: {exc}") from exc


def load_config(path):
    if not os.path.exists(path):
        raise ParseError(f"config file not found: {path}")
    with open(path) as fh:
        return parse_config(fh.read())
