"""
Threshold and quadrature spectra of the OPO
===========================================

Start from the cavity numbers of the 860 nm PPKTP oscillator, compute its
threshold and linewidth, and look at how the squeezed and anti-squeezed
spectra depend on pump power and sideband frequency.
"""

import math

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from oposqueeze import (ExperimentConfig, cavity_decay_rate, ideal_spectra,
                        pump_ratio, threshold_power, total_efficiency)

cfg = ExperimentConfig.paper()
cav, det = cfg.cavity, cfg.detection

# %%
# Threshold from (T + L)^2 / 4 E_NL, and the cavity half-width.
p_th = threshold_power(cav)
gamma = cavity_decay_rate(cav)
print(f"threshold          {p_th * 1e3:.1f} mW")
print(f"cavity HWHM        {gamma / 2 / math.pi / 1e6:.3f} MHz")
print(f"finesse            {2 * math.pi / (cav.output_coupling + cav.intracavity_loss):.1f}")
print(f"total efficiency   {total_efficiency(cav, det):.4f}")

# %%
# Spectra at 100 mW over sideband frequency. Squeezing is best inside the
# cavity linewidth and vanishes well outside it.
x = pump_ratio(0.1, p_th)
eta = total_efficiency(cav, det)
freqs = np.linspace(0.05e6, 30e6, 400)
sq, asq = [], []
for f in freqs:
    pair = ideal_spectra(x, 2 * math.pi * f / gamma, eta)
    sq.append(pair.squeezed_db)
    asq.append(pair.anti_squeezed_db)

fig, ax = plt.subplots()
ax.plot(freqs / 1e6, sq, label="squeezed")
ax.plot(freqs / 1e6, asq, label="anti-squeezed")
ax.axvline(1.0, color="k", lw=0.5)
ax.set_xlabel("sideband frequency (MHz)")
ax.set_ylabel("noise re shot noise (dB)")
ax.legend()
fig.savefig("spectra_vs_frequency.png", dpi=120)

# %%
# At 1 MHz the ideal (jitter-free, no electronics) levels are
pair = ideal_spectra(x, 2 * math.pi * 1e6 / gamma, eta)
print(f"ideal at 100 mW    {pair.squeezed_db:.2f} dB / {pair.anti_squeezed_db:+.2f} dB")
