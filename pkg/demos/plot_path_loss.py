"""
Path loss, bandwidth and capacity
=================================

Sweep the bundled scenario, locate the two resonant dips and compare a
multi-resonant receiver with a receiver tuned to 5 MHz alone.
"""
import numpy as np

from micg import link
from micg.scenario import build_link, load_scenario

scn = load_scenario("paper_position1")

for mode in ("multi", "single"):
    lk = build_link(scn, receiver_mode=mode)
    res = link.sweep(lk, 0.5e6, 10e6, 2000)
    print(f"\n{mode}-resonant receiver, lowest loss {np.min(res.loss_db):.2f} dB")
    for fc in lk.rx_network.resonances_hz:
        band = link.three_db_band(res, fc)
        c = link.capacity(lk, fc, tx_power=1.0, noise_psd=1e-9, band=band)
        print(f"  {fc / 1e6:g} MHz: min {band.min_db:.2f} dB, "
              f"3 dB band {band.width / 1e3:.1f} kHz, capacity {c / 1e6:.2f} Mbit/s")

# moving the receiver 45 degrees off axis
lk = build_link(scn, "position2")
print(f"\nposition2 loss at 1 MHz: {link.path_loss_db(lk, 1e6):.2f} dB")
