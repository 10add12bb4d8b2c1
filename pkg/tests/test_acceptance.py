"""Exit criteria for the package.

Every test records one PASS/FAIL line; the collected lines are printed as a
table at the end of the module (visible with ``pytest -s`` or ``-v``).
"""

import math
import time

import numpy as np
import pytest

from oposqueeze import (CavityParams, DetectionChain, ExperimentConfig, FitSetup,
                        MeasurementSet, OperatingPoint, QuadraturePair, ZeroSpanConfig,
                        add_circuit_noise, apply_phase_jitter, beats_holevo, fit,
                        ideal_spectra, predict_observed, purity, remove_circuit_noise,
                        squeezing_parameter, synth_locked_trace, synth_scan_trace,
                        teleport_fidelity, threshold_power, unmix_phase_jitter)
from oposqueeze.estimation import predicted_levels

LINES = []


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    reporter = request.config.pluginmanager.getplugin("terminalreporter")
    if reporter is not None:
        reporter.write_line("")
        reporter.write_line("acceptance summary")
        for line in LINES:
            reporter.write_line("  " + line)


def check(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def paper():
    return ExperimentConfig.paper()


def test_threshold():
    cav = CavityParams(0.5, 0.123, 0.006, 0.023)
    p_mw = threshold_power(cav) * 1e3
    check("threshold", abs(p_mw - 181) <= 0.5, f"{p_mw:.3f} mW (target 181 +/- 0.5)")


def test_zero_jitter_prediction(paper):
    det = DetectionChain(paper.detection.propagation_efficiency,
                         paper.detection.homodyne_efficiency,
                         paper.detection.quantum_efficiency,
                         paper.detection.circuit_noise_db, 0.0)
    level = predict_observed(paper.cavity, det, OperatingPoint(0.1, 1e6)).squeezed_db
    check("zero-jitter squeezing at 100 mW", abs(level + 9.3) <= 0.15,
          f"{level:.3f} dB (target -9.3 +/- 0.15)")


def test_circuit_noise_correction():
    corrected = remove_circuit_noise(QuadraturePair.from_db(-7.2, 11.6), -18.5)
    level = corrected.squeezed_db
    check("circuit-noise correction", abs(level + 7.5) <= 0.1,
          f"{level:.3f} dB (target -7.5 +/- 0.1)")


def test_fidelity():
    r = squeezing_parameter(-7.2)
    f1, f5 = teleport_fidelity(1, r), teleport_fidelity(5, r)
    check("teleportation fidelity", abs(f1 - 0.84) <= 0.005 and f5 > 0.5,
          f"F(1)={f1:.4f} (target 0.84 +/- 0.005), F(5)={f5:.4f} (> 0.5)")


def test_holevo_verdict():
    a, b = beats_holevo(-7.2), beats_holevo(-6.0)
    check("Holevo criterion", a is True and b is False,
          f"-7.2 dB -> {a}, -6.0 dB -> {b}")


def test_purity():
    # oracle written out from the definition, not via the package
    v_minus = 10 ** (-7.2 / 10)
    v_plus = 10 ** (11.6 / 10)
    oracle = 1 / math.sqrt(v_minus * v_plus)
    got = purity(QuadraturePair.from_db(-7.2, 11.6))
    check("purity", abs(got - 0.603) <= 0.002 and abs(got - oracle) <= 1e-12,
          f"{got:.5f} (oracle {oracle:.5f}, target 0.603 +/- 0.002)")


def test_property_suite():
    t0 = time.perf_counter()
    failures = []
    xs = np.round(np.arange(0, 1.0, 0.1), 10)
    omegas = (0.0, 0.5, 1.0, 5.0)
    for x in xs:
        for w in omegas:
            prod = ideal_spectra(x, w, 1.0).product
            if abs(prod - 1) > 1e-12:
                failures.append(f"lossless x={x} w={w}: {prod!r}")
            for eta in (0.3, 0.7, 0.925, 1.0):
                pair = ideal_spectra(x, w, eta)
                if pair.product < 1 - 1e-12:
                    failures.append(f"heisenberg x={x} w={w} eta={eta}")
                for theta_deg in (0.0, 1.0, 3.9, 10.0, 20.0, 30.0):
                    theta = math.radians(theta_deg)
                    mixed = apply_phase_jitter(pair, theta)
                    total = pair.squeezed + pair.anti_squeezed
                    if abs(mixed.squeezed + mixed.anti_squeezed - total) > 1e-12 * total:
                        failures.append(f"sum x={x} eta={eta} theta={theta_deg}")
                    back = unmix_phase_jitter(mixed, theta)
                    for got, want in ((back.squeezed, pair.squeezed),
                                      (back.anti_squeezed, pair.anti_squeezed)):
                        if abs(got - want) > 1e-12 * max(want, 1.0):
                            failures.append(f"unmix x={x} eta={eta} theta={theta_deg}")
                for floor in (-30.0, -18.5, -10.0):
                    back = remove_circuit_noise(add_circuit_noise(pair, floor), floor)
                    if (abs(back.squeezed - pair.squeezed) > 1e-12 * pair.squeezed
                            or abs(back.anti_squeezed - pair.anti_squeezed) > 1e-12 * pair.anti_squeezed):
                        failures.append(f"circuit x={x} eta={eta} floor={floor}")
    elapsed = time.perf_counter() - t0
    check("property suite", not failures and elapsed < 1.0,
          f"{len(failures)} violations, {elapsed:.3f} s (< 1 s)"
          + (f"; first: {failures[0]}" if failures else ""))


def test_fit_recovery():
    t0 = time.perf_counter()
    setup = FitSetup(CavityParams(0.5, 0.123, 0.006, 0.023), 1e6, -18.5)
    truth = np.array([0.181, 0.925, math.radians(3.9)])
    init = np.array([0.25, 0.8, math.radians(2.0)])
    powers = np.linspace(0.02, 0.16, 8)
    sq, asq = predicted_levels(truth, powers, setup)

    clean = fit(MeasurementSet(powers, sq, asq), init, setup)
    rel = np.max(np.abs(clean.params / truth - 1))

    hits = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        data = MeasurementSet(powers, sq + rng.normal(0, 0.2, 8),
                              asq + rng.normal(0, 0.2, 8), check=False)
        result = fit(data, init, setup)
        hits += abs(result.p_th / truth[0] - 1) <= 0.05
    elapsed = time.perf_counter() - t0
    check("fit recovery",
          clean.converged and rel <= 1e-4 and hits >= 90 and elapsed < 30,
          f"noiseless max rel err {rel:.2e} (<= 1e-4); noisy p_th within 5% in "
          f"{hits}/100 (>= 90); {elapsed:.1f} s (< 30 s)")


def test_trace_statistics():
    t0 = time.perf_counter()
    locked = synth_locked_trace(-7.2, ZeroSpanConfig(points=10**5, seed=20240601))
    mean_err = abs(locked.level.mean() + 7.2)

    quiet = ZeroSpanConfig(video_bandwidth=1e-7, averages=1, points=20001, seed=1)
    scan = synth_scan_trace(QuadraturePair.from_db(-7.2, 11.6), 0.05, quiet)
    lo_err = abs(scan.level.min() + 7.2)
    hi_err = abs(scan.level.max() - 11.6)
    elapsed = time.perf_counter() - t0
    check("trace statistics",
          mean_err <= 0.02 and lo_err <= 0.1 and hi_err <= 0.1 and elapsed < 5,
          f"locked mean err {mean_err:.4f} dB (<= 0.02); scan extrema err "
          f"{lo_err:.4f}/{hi_err:.4f} dB (<= 0.1); {elapsed:.2f} s (< 5 s)")
