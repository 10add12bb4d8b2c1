"""Synthetic zero-span spectrum-analyzer traces and their CSV format.

Detector statistics are modeled in the log domain: each displayed sample is
Gaussian in dB with

    sigma_dB = (10 / ln 10) / sqrt(N_eff * averages),  N_eff = RBW / (2 VBW)

This is the usual video-filtered, trace-averaged approximation for a noise
marker. It is a modeling choice and says nothing about the RF detector.

Random numbers come from numpy's PCG64 bit generator seeded with
``ZeroSpanConfig.seed``; a trace is a pure function of (seed, config, inputs).
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, EmptyTraceError, ParseError
from .units import linear_to_db

LABELS = ("shot", "squeezed", "anti_squeezed", "scan")
CSV_HEADER = ("time_s", "level_db", "label")


@dataclass(frozen=True)
class ZeroSpanConfig:
    """Analyzer settings. Defaults follow a 1 MHz zero-span measurement with
    30 kHz RBW, 300 Hz VBW and 20 trace averages."""

    center_frequency: float = 1e6
    resolution_bandwidth: float = 30e3
    video_bandwidth: float = 300.0
    sweep_duration: float = 0.2
    points: int = 401
    averages: int = 20
    seed: int = 0

    def __post_init__(self):
        if not self.resolution_bandwidth > 0 or not self.video_bandwidth > 0:
            raise DomainError("bandwidths must be > 0")
        if self.video_bandwidth > self.resolution_bandwidth:
            raise DomainError("video bandwidth must not exceed resolution bandwidth")
        if not self.sweep_duration > 0:
            raise DomainError("sweep_duration must be > 0")
        if int(self.points) != self.points or self.points < 2:
            raise DomainError("points must be an integer >= 2")
        if int(self.averages) != self.averages or self.averages < 1:
            raise DomainError("averages must be a positive integer")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must be an unsigned 64-bit integer")

    @property
    def effective_samples(self):
        return self.resolution_bandwidth / (2.0 * self.video_bandwidth)

    @property
    def sigma_db(self):
        """Per-sample standard deviation of the displayed level, in dB."""
        return (10.0 / math.log(10.0)) / math.sqrt(self.effective_samples * self.averages)

    def times(self):
        return np.linspace(0.0, self.sweep_duration, int(self.points))

    def rng(self):
        return np.random.Generator(np.random.PCG64(int(self.seed)))


@dataclass
class Trace:
    label: str
    time: np.ndarray
    level: np.ndarray

    def __post_init__(self):
        if self.label not in LABELS:
            raise DomainError(f"unknown trace label {self.label!r}")
        self.time = np.asarray(self.time, dtype=float)
        self.level = np.asarray(self.level, dtype=float)
        if self.time.shape != self.level.shape or self.time.ndim != 1:
            raise DomainError("time and level must be 1-d arrays of equal length")
        if self.time.size > 1 and np.any(np.diff(self.time) <= 0):
            raise DomainError("time must be strictly increasing")

    def __len__(self):
        return self.time.size


def synth_locked_trace(mean_level, cfg, label="squeezed"):
    """Trace with the LO phase held fixed at a quadrature of mean ``mean_level`` dB."""
    noise = cfg.rng().standard_normal(int(cfg.points))
    return Trace(label, cfg.times(), mean_level + cfg.sigma_db * noise)


def scan_mean_db(pair, t, scan_period):
    """Noise level in dB while the LO phase ramps as ``pi * t / scan_period``."""
    theta = np.pi * np.asarray(t, dtype=float) / scan_period
    c2 = np.cos(theta) ** 2
    return 10.0 * np.log10(pair.squeezed * c2 + pair.anti_squeezed * (1.0 - c2))


def synth_scan_trace(pair_observed, scan_period, cfg):
    """Trace with a linear LO phase ramp; each ``scan_period`` spans pi of phase.

    Averaging is taken from ``cfg``; a phase-scanned measurement is normally
    displayed unaveraged, so pass ``averages=1`` for that case.
    """
    if not scan_period > 0:
        raise DomainError("scan_period must be > 0")
    t = cfg.times()
    noise = cfg.rng().standard_normal(int(cfg.points))
    return Trace("scan", t, scan_mean_db(pair_observed, t, scan_period) + cfg.sigma_db * noise)


def shot_trace(cfg):
    return synth_locked_trace(0.0, cfg, label="shot")


def locked_traces(pair_observed, cfg):
    """Shot, squeezed and anti-squeezed traces with distinct derived seeds."""
    seeds = np.random.SeedSequence(int(cfg.seed)).generate_state(3, dtype=np.uint64)
    levels = (0.0, linear_to_db(pair_observed.squeezed),
              linear_to_db(pair_observed.anti_squeezed))
    return [synth_locked_trace(level, replace(cfg, seed=int(s)), label=label)
            for level, s, label in zip(levels, seeds, LABELS[:3])]


def write_trace_csv(trace, destination):
    """Write ``time_s,level_db,label`` rows with 9 significant digits.

    ``destination`` is a path or a text file object.
    """
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "w", newline="") as fh:
            _write(trace, fh)
    else:
        _write(trace, destination)


def _write(trace, fh):
    fh.write(",".join(CSV_HEADER) + "\n")
    for t, v in zip(trace.time, trace.level):
        fh.write(f"{t:.9g},{v:.9g},{trace.label}\n")


def read_trace_csv(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as fh:
            text = fh.read()
    else:
        text = source.read()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty trace file", line=1)
    if tuple(c.strip() for c in rows[0]) != CSV_HEADER:
        raise ParseError(f"expected header {','.join(CSV_HEADER)}", line=1)
    times, levels, label = [], [], None
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 columns, got {len(row)}", line=lineno)
        try:
            t, v = float(row[0]), float(row[1])
        except ValueError:
            raise ParseError("non-numeric time or level", line=lineno) from None
        if not (math.isfinite(t) and math.isfinite(v)):
            raise ParseError("non-finite value", line=lineno)
        lab = row[2].strip()
        if lab not in LABELS:
            raise ParseError(f"unknown label {lab!r}", line=lineno)
        if label is None:
            label = lab
        elif lab != label:
            raise ParseError(f"mixed labels {label!r} and {lab!r}", line=lineno)
        if times and t <= times[-1]:
            raise ParseError("time not strictly increasing", line=lineno)
        times.append(t)
        levels.append(v)
    if not times:
        raise EmptyTraceError("trace file has no samples", line=2)
    return Trace(label, np.array(times), np.array(levels))
