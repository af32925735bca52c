"""
Multi-resonant transmit network
===============================

Build a coil network that resonates at 1 MHz and 5 MHz, then check where
its reactance crosses zero.
"""
import numpy as np

from micg.circuit import CoilSpec, coil_inductance_air, coil_resistance, reactance, synthesize_hz

# 1 m radius, 10 turns, 3 mm wire
coil = CoilSpec(radius=1.0, turns=10, wire_radius=3e-3)
L = coil_inductance_air(coil)
R = coil_resistance(coil)
print(f"coil inductance {L * 1e6:.1f} uH, resistance {R * 1e3:.1f} mOhm")

net = synthesize_hz(L, R, [1e6, 5e6])
print(f"series C = {net.series_capacitance:.4e} F")
for (li, ci), fp in zip(net.branches, net.poles_hz):
    print(f"branch L = {li:.4e} H, C = {ci:.4e} F, pole at {fp / 1e6:.4f} MHz")

# the reactance changes sign at each resonance
f = np.geomspace(0.3e6, 10e6, 4000)
x = reactance(net, 2 * np.pi * f)
crossings = f[1:][(np.sign(x[1:]) != np.sign(x[:-1])) & (np.abs(x[1:]) < 1e3)]
print("zero crossings near", np.round(crossings / 1e6, 4), "MHz")
