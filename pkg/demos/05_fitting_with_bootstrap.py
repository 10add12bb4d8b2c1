"""
Fitting threshold, efficiency and jitter
========================================

Make a noisy level table from the forward model, fit (P_th, eta_tot, theta)
with the simplex fit and put bootstrap intervals on the result.
"""

import math

import numpy as np

from oposqueeze import (ExperimentConfig, FitSetup, MeasurementSet, bootstrap, fit,
                        threshold_power, total_efficiency)
from oposqueeze.estimation import predicted_levels

cfg = ExperimentConfig.paper()
setup = FitSetup(cfg.cavity, cfg.operating_point.sideband_frequency,
                 cfg.detection.circuit_noise_db)
truth = np.array([threshold_power(cfg.cavity), total_efficiency(cfg.cavity, cfg.detection),
                  cfg.detection.phase_jitter])

powers = np.linspace(0.02, 0.16, 8)
sq, asq = predicted_levels(truth, powers, setup)
rng = np.random.default_rng(7)
data = MeasurementSet(powers, sq + rng.normal(0, 0.2, 8), asq + rng.normal(0, 0.2, 8),
                      check=False)

result = fit(data, [0.25, 0.8, math.radians(2)], setup)
print(f"converged {result.converged} after {result.iterations} iterations")
print(f"P_th  {result.p_th * 1e3:7.2f} mW   (true {truth[0] * 1e3:.2f})")
print(f"eta   {result.eta_tot:7.4f}      (true {truth[1]:.4f})")
print(f"theta {result.theta_deg:7.3f} deg  (true {math.degrees(truth[2]):.3f})")
print(f"E_NL  {result.nonlinear_coefficient(cfg.cavity):7.4f} /W")

boot = bootstrap(data, result, setup, replicates=100, seed=1)
(p_lo, p_hi), (e_lo, e_hi), (t_lo, t_hi) = boot.interval(0.95)
print(f"95% intervals: P_th {p_lo * 1e3:.1f}-{p_hi * 1e3:.1f} mW, "
      f"eta {e_lo:.3f}-{e_hi:.3f}, theta {math.degrees(t_lo):.2f}-{math.degrees(t_hi):.2f} deg")
