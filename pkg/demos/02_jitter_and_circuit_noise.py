"""
Phase jitter and detector electronics
=====================================

Two effects separate the ideal spectrum from what the analyzer shows: the
residual LO phase fluctuation, which leaks anti-squeezing into the squeezed
quadrature, and the homodyne circuit noise floor. This script sweeps the
pump power with and without jitter and then walks a measured pair back to
the generated state.
"""

import math

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from dataclasses import replace

from oposqueeze import (ExperimentConfig, QuadraturePair, remove_circuit_noise, sweep,
                        unmix_phase_jitter)

cfg = ExperimentConfig.paper()
powers = np.arange(10, 171, 10) * 1e-3

with_jitter = sweep(cfg.cavity, cfg.detection, powers)
no_jitter = sweep(cfg.cavity, replace(cfg.detection, phase_jitter=0.0), powers)

fig, (ax, ax2) = plt.subplots(2, 1, sharex=True, figsize=(5, 6))
ax.plot(powers * 1e3, [r.squeezed_db for r in no_jitter], "o", label="no jitter")
ax.plot(powers * 1e3, [r.squeezed_db for r in with_jitter], "^", label="3.9 deg jitter")
ax.plot(powers * 1e3, [r.anti_squeezed_db for r in with_jitter], "^")
ax.axhline(0, color="k", lw=0.5)
ax.set_ylabel("level (dB)")
ax.legend()
ax2.plot(powers * 1e3, [r.purity for r in with_jitter], "^")
ax2.set_xlabel("pump power (mW)")
ax2.set_ylabel("purity")
fig.savefig("levels_vs_pump.png", dpi=120)

best = min(with_jitter, key=lambda r: r.squeezed_db)
print(f"with jitter the squeezing bottoms out at {best.squeezed_db:.2f} dB "
      f"near {best.pump_power * 1e3:.0f} mW")
print(f"without jitter, 100 mW gives {no_jitter[9].squeezed_db:.2f} dB")

# %%
# Backing out the generated state from the 100 mW measurement.
measured = QuadraturePair.from_db(-7.2, 11.6)
generated = remove_circuit_noise(measured, -18.5)
underlying = unmix_phase_jitter(generated, math.radians(3.9))
print(f"measured            {measured.squeezed_db:.2f} / {measured.anti_squeezed_db:+.2f} dB")
print(f"minus circuit noise {generated.squeezed_db:.2f} / {generated.anti_squeezed_db:+.2f} dB")
print(f"minus jitter        {underlying.squeezed_db:.2f} / {underlying.anti_squeezed_db:+.2f} dB")
