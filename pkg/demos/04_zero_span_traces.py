"""
Synthetic zero-span traces
==========================

Generates the four traces of a typical squeezing measurement at 1 MHz
(shot noise, locked squeezed, locked anti-squeezed, phase scan) with
30 kHz RBW / 300 Hz VBW, and writes them as CSV.
"""

from dataclasses import replace

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from oposqueeze import QuadraturePair, ZeroSpanConfig, read_trace_csv, write_trace_csv
from oposqueeze.traces import locked_traces, synth_scan_trace

pair = QuadraturePair.from_db(-7.2, 11.6)
cfg = ZeroSpanConfig(seed=2024)
print(f"per-sample spread with 20 averages: {cfg.sigma_db:.3f} dB")

traces = locked_traces(pair, cfg)
traces.append(synth_scan_trace(pair, cfg.sweep_duration / 4, replace(cfg, averages=1)))

fig, ax = plt.subplots()
for tr in traces:
    path = f"trace_{tr.label}.csv"
    write_trace_csv(tr, path)
    assert read_trace_csv(path).label == tr.label
    ax.plot(tr.time * 1e3, tr.level, lw=0.7, label=tr.label)
ax.set_xlabel("time (ms)")
ax.set_ylabel("noise re shot noise (dB)")
ax.legend(loc="upper right")
fig.savefig("zero_span_traces.png", dpi=120)
