"""
Field across the air-soil boundary
==================================

The transmit loop hangs 2 m above ground; the receiver is buried 8 m deep.
Compare the axial field with the receiver off to one side.
"""
import math

import numpy as np

from micg.channel import AIR, LinkGeometry, Medium, axial_field_closed_form, mutual_inductance
from micg.circuit import CoilSpec

soil = Medium.from_relative(5.343, conductivity=7.68e-8)
tx = CoilSpec(1.0, 10, 3e-3)
rx = CoilSpec(0.15, 10, 1e-3)
w = 2 * math.pi * 5e6

# a static dipole's axial field vanishes at 54.7 deg; here the 1/d^2 terms
# and the longer slant path keep it small but finite
for deg in (0, 15, 30, 45, 54.7, 60):
    geom = LinkGeometry.from_heights(2.0, 8.0, math.radians(deg))
    hz = axial_field_closed_form(tx, AIR, soil, geom, w)
    print(f"theta {deg:5.1f} deg: |h_z| = {abs(hz):.3e} A/m")

geom = LinkGeometry.from_heights(2.0, 8.0)
for f in (1e6, 5e6):
    M = mutual_inductance(tx, rx, AIR, soil, geom, 2 * np.pi * f)
    print(f"{f / 1e6:g} MHz: M = {M:.3e} H")
