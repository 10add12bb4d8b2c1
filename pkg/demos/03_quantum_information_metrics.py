"""
What a given squeezing level buys
=================================

Squeezing parameter, cascaded teleportation fidelity, dense-coding
information and the Holevo-criterion check for the measured levels.
"""

import math

from oposqueeze import (QuadraturePair, dense_coding_capacity, holevo_assessment,
                        squeezing_parameter, teleport_fidelity)

measured = QuadraturePair.from_db(-7.2, 11.6)
r = squeezing_parameter(measured.squeezed_db)
print(f"r = {r:.4f}")

for n in range(1, 7):
    f = teleport_fidelity(n, r)
    print(f"{n} hop(s): F = {f:.3f}{'' if f > 0.5 else '  (no better than classical)'}")

for n_s in (0.5, 1.0, 5.0):
    info = dense_coding_capacity(n_s, r)
    print(f"n_s = {n_s}: I = {info:.3f} nats = {info / math.log(2):.3f} bits")

verdict = holevo_assessment(measured)
print(f"beats -6.78 dB criterion: {verdict['exceeded']}, purity {verdict['purity']:.3f}")
if verdict["purity_limited"]:
    print("the state is mixed, so the level alone is not enough")
