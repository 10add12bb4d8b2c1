"""Least-squares estimation of (P_th, eta_tot, theta) from level tables.

The objective is the sum of squared, sigma-normalized dB residuals between
measured levels and the forward model (spectra, phase jitter, circuit
floor). It is minimized with a bounded-by-penalty Nelder-Mead simplex.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError, ParseError
from .model import cavity_decay_rate, observed_pair
from .units import linear_to_db

PENALTY = 1e3
MAX_THRESHOLD = 10.0  # W
MIN_EFFICIENCY = 0.01
DEFAULT_SIGMA_DB = 0.2
MEASUREMENT_COLUMNS = ("pump_mw", "squeezed_db", "antisqueezed_db")


@dataclass
class MeasurementSet:
    """Measured levels per pump power. Powers in watts, levels in dB."""

    pump_power: np.ndarray
    squeezed_db: np.ndarray
    anti_squeezed_db: np.ndarray
    sigma_db: np.ndarray = None
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        self.pump_power = np.atleast_1d(np.asarray(self.pump_power, dtype=float))
        self.squeezed_db = np.atleast_1d(np.asarray(self.squeezed_db, dtype=float))
        self.anti_squeezed_db = np.atleast_1d(np.asarray(self.anti_squeezed_db, dtype=float))
        if self.sigma_db is None:
            self.sigma_db = np.full(self.pump_power.shape, DEFAULT_SIGMA_DB)
        self.sigma_db = np.broadcast_to(
            np.asarray(self.sigma_db, dtype=float), self.pump_power.shape).copy()
        n = self.pump_power.size
        if not (self.squeezed_db.size == self.anti_squeezed_db.size == n):
            raise DomainError("measurement columns differ in length")
        if n == 0:
            raise DomainError("measurement set is empty")
        if np.any(self.sigma_db <= 0):
            raise DomainError("sigma must be > 0")
        if self.check:
            if np.any(self.pump_power <= 0):
                raise DomainError("pump powers must be > 0")
            if np.any(self.squeezed_db > 0) or np.any(self.anti_squeezed_db < 0):
                raise DomainError("need squeezed <= 0 <= anti-squeezed in every row")

    def __len__(self):
        return self.pump_power.size


def load_measurements(source):
    """Parse ``pump_mw,squeezed_db,antisqueezed_db[,sigma_db]`` CSV.

    ``source`` is a path or a text file object. Blank lines and lines starting
    with ``#`` are skipped.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as fh:
            text = fh.read()
    else:
        text = source.read()
    lines = [(i, ln) for i, ln in enumerate(text.splitlines(), start=1)
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("no header found", line=1)
    head_no, head = lines[0]
    header = [c.strip() for c in next(csv.reader([head]))]
    if tuple(header[:3]) != MEASUREMENT_COLUMNS or len(header) > 4 or (
            len(header) == 4 and header[3] != "sigma_db"):
        raise ParseError(
            "header must be pump_mw,squeezed_db,antisqueezed_db[,sigma_db]",
            line=head_no)
    rows = []
    for lineno, ln in lines[1:]:
        cells = next(csv.reader(io.StringIO(ln)))
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} columns, got {len(cells)}", line=lineno)
        try:
            vals = [float(c) for c in cells]
        except ValueError:
            raise ParseError("non-numeric cell", line=lineno) from None
        if not all(math.isfinite(v) for v in vals):
            raise ParseError("non-finite cell", line=lineno)
        p, sq, asq = vals[:3]
        if p <= 0:
            raise ParseError("pump power must be > 0", line=lineno)
        if sq > 0:
            raise ParseError("squeezed level must be <= 0 dB", line=lineno)
        if asq < 0:
            raise ParseError("anti-squeezed level must be >= 0 dB", line=lineno)
        if len(vals) == 4 and vals[3] <= 0:
            raise ParseError("sigma_db must be > 0", line=lineno)
        rows.append(vals if len(vals) == 4 else vals + [DEFAULT_SIGMA_DB])
    if not rows:
        raise ParseError("no data rows", line=head_no + 1)
    arr = np.array(rows)
    return MeasurementSet(arr[:, 0] * 1e-3, arr[:, 1], arr[:, 2], arr[:, 3])


def write_measurements(data, destination):
    """Inverse of :func:`load_measurements` (always writes sigma_db)."""
    buf = io.StringIO()
    buf.write(",".join(MEASUREMENT_COLUMNS + ("sigma_db",)) + "\n")
    for p, sq, asq, s in zip(data.pump_power, data.squeezed_db,
                             data.anti_squeezed_db, data.sigma_db):
        buf.write(f"{p * 1e3:.9g},{sq:.9g},{asq:.9g},{s:.9g}\n")
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        destination.write(buf.getvalue())


@dataclass(frozen=True)
class FitSetup:
    """Fixed quantities the fit does not estimate."""

    cavity: object
    sideband_frequency: float = 1e6
    circuit_noise_db: float = -18.5

    def omega_norm(self, pump_power):
        return 2.0 * math.pi * self.sideband_frequency / cavity_decay_rate(self.cavity, pump_power)


def in_bounds(params, data):
    p_th, eta, theta = params
    return (data.pump_power.max() < p_th <= MAX_THRESHOLD
            and MIN_EFFICIENCY < eta <= 1.0
            and 0.0 <= theta < math.pi / 4)


def predicted_levels(params, pump_powers, setup):
    """Observed (squeezed_db, anti_squeezed_db) arrays for the given powers."""
    p_th, eta, theta = params
    sq, asq = [], []
    for p in np.atleast_1d(pump_powers):
        pair = observed_pair(math.sqrt(p / p_th), setup.omega_norm(p), eta, theta,
                             setup.circuit_noise_db)
        sq.append(linear_to_db(pair.squeezed))
        asq.append(linear_to_db(pair.anti_squeezed))
    return np.array(sq), np.array(asq)


def model_residuals(params, data, setup):
    """Sigma-normalized residuals, ``[sq_0, anti_0, sq_1, anti_1, ...]``.

    Rows at or above the candidate threshold, and every row when a parameter
    is out of bounds, get the finite sentinel ``PENALTY``.
    """
    p_th, eta, theta = (float(v) for v in params)
    n = len(data)
    res = np.full(2 * n, PENALTY)
    if not (all(math.isfinite(v) for v in (p_th, eta, theta))
            and 0 < p_th <= MAX_THRESHOLD and MIN_EFFICIENCY < eta <= 1.0
            and 0.0 <= theta < math.pi / 4):
        return res
    for i in range(n):
        p = data.pump_power[i]
        if p >= p_th:
            continue
        pair = observed_pair(math.sqrt(p / p_th), setup.omega_norm(p), eta, theta,
                             setup.circuit_noise_db)
        res[2 * i] = (linear_to_db(pair.squeezed) - data.squeezed_db[i]) / data.sigma_db[i]
        res[2 * i + 1] = (linear_to_db(pair.anti_squeezed) - data.anti_squeezed_db[i]) / data.sigma_db[i]
    return res


def objective(params, data, setup):
    r = model_residuals(params, data, setup)
    return float(r @ r)


@dataclass(frozen=True)
class FitOptions:
    max_iterations: int = 2000
    tolerance: float = 1e-10  # spread of objective values across the simplex
    restarts: int = 1  # re-launch from the best vertex to avoid simplex collapse
    initial_step: float = 0.1  # relative size of the starting simplex


@dataclass(frozen=True)
class FitResult:
    p_th: float
    eta_tot: float
    theta: float
    residual_norm: float
    iterations: int
    converged: bool
    underdetermined: bool = False
    initial_residual_norm: float = float("nan")

    @property
    def params(self):
        return np.array([self.p_th, self.eta_tot, self.theta])

    @property
    def theta_deg(self):
        return math.degrees(self.theta)

    def nonlinear_coefficient(self, cavity):
        """E_NL implied by the fitted threshold and the cavity's T + L0."""
        return nonlinear_coefficient_from_threshold(self.p_th, cavity)


def nonlinear_coefficient_from_threshold(p_th, cavity):
    return (cavity.output_coupling + cavity.intracavity_loss) ** 2 / (4.0 * p_th)


def _initial_simplex(x0, step):
    upper = np.array([MAX_THRESHOLD, 1.0, math.pi / 4])
    sim = [x0]
    for k in range(3):
        v = x0.copy()
        d = step * x0[k] if x0[k] != 0 else step * 0.1
        # step inwards when the outward vertex would leave the box
        v[k] = x0[k] + d if x0[k] + d < upper[k] else x0[k] - d
        sim.append(v)
    return np.array(sim)


def fit(data, init, setup, options=None):
    """Fit ``(p_th [W], eta_tot, theta [rad])`` to ``data``.

    Raises:
        DomainError: when ``init`` lies outside the parameter bounds.

    Non-convergence is reported through ``FitResult.converged``.
    """
    options = options or FitOptions()
    x0 = np.asarray(init, dtype=float)
    if x0.shape != (3,) or not in_bounds(x0, data):
        raise DomainError(
            f"initial parameters {tuple(x0)} outside bounds: p_th in "
            f"({data.pump_power.max():.6g}, {MAX_THRESHOLD}] W, eta in "
            f"({MIN_EFFICIENCY}, 1], theta in [0, pi/4)")
    f0 = objective(x0, data, setup)
    best_x, best_f = x0, f0
    total_iter = 0
    success = False
    for attempt in range(1 + options.restarts):
        remaining = options.max_iterations - total_iter
        if remaining <= 0:
            break
        res = minimize(objective, best_x, args=(data, setup), method="Nelder-Mead",
                       options={"maxiter": remaining, "maxfev": 10 * options.max_iterations,
                                "fatol": options.tolerance, "xatol": np.inf,
                                "initial_simplex": _initial_simplex(best_x, options.initial_step)})
        total_iter += int(res.nit)
        success = res.status == 0
        if res.fun <= best_f:
            improved = best_f - res.fun
            best_x, best_f = res.x, float(res.fun)
            if attempt > 0 and improved <= options.tolerance:
                break
        if not success:
            break
    underdetermined = 2 * len(data) < 3 or len(data) < 3
    converged = (success and math.isfinite(best_f) and in_bounds(best_x, data)
                 and not underdetermined)
    return FitResult(float(best_x[0]), float(best_x[1]), float(best_x[2]), best_f,
                     total_iter, converged, underdetermined, f0)


@dataclass
class BootstrapResult:
    samples: np.ndarray  # (replicates, 3): p_th, eta_tot, theta
    converged: np.ndarray

    def interval(self, level=0.95):
        """Percentile interval per parameter from converged replicates."""
        good = self.samples[self.converged]
        if good.size == 0:
            return np.full((3, 2), np.nan)
        alpha = (1.0 - level) / 2.0
        return np.quantile(good, [alpha, 1.0 - alpha], axis=0).T

    def write_csv(self, destination):
        lines = ["replicate,p_th_w,eta_tot,theta_rad,converged"]
        for i, (row, ok) in enumerate(zip(self.samples, self.converged)):
            lines.append(f"{i},{row[0]:.9g},{row[1]:.9g},{row[2]:.9g},{int(ok)}")
        text = "\n".join(lines) + "\n"
        if isinstance(destination, (str, os.PathLike)):
            with open(destination, "w", newline="") as fh:
                fh.write(text)
        else:
            destination.write(text)


def bootstrap(data, result, setup, replicates=100, seed=0, options=None):
    """Residual-resampling parametric bootstrap around a fitted result.

    Replicate ``b`` draws from ``SeedSequence(seed).spawn(replicates)[b]``, so
    the output does not depend on evaluation order.
    """
    sq_fit, asq_fit = predicted_levels(result.params, data.pump_power, setup)
    resid = np.concatenate([data.squeezed_db - sq_fit, data.anti_squeezed_db - asq_fit])
    scaled = resid / np.concatenate([data.sigma_db, data.sigma_db])
    n = len(data)
    # fitted residuals are shrunk by the 3 estimated parameters
    if 2 * n > 3:
        scaled = scaled * math.sqrt(2 * n / (2 * n - 3))
    samples = np.empty((replicates, 3))
    ok = np.zeros(replicates, dtype=bool)
    for b, child in enumerate(np.random.SeedSequence(seed).spawn(replicates)):
        rng = np.random.Generator(np.random.PCG64(child))
        draw = rng.choice(scaled, size=2 * n, replace=True)
        rep = MeasurementSet(data.pump_power, sq_fit + draw[:n] * data.sigma_db,
                             asq_fit + draw[n:] * data.sigma_db, data.sigma_db, check=False)
        r = fit(rep, result.params, setup, options)
        samples[b] = r.params
        ok[b] = r.converged
    return BootstrapResult(samples, ok)


def jitter_from_error_rms(rms_error, slope):
    """Phase jitter (rad) from a lock error-signal rms and its slope (V/rad)."""
    if not (math.isfinite(slope) and slope > 0):
        raise DomainError("error-signal slope must be > 0")
    if not (math.isfinite(rms_error) and rms_error >= 0):
        raise DomainError("rms error must be >= 0")
    return rms_error / slope
