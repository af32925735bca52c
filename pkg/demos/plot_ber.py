"""
Two users: shared band against separate bands
=============================================

With a single resonance both users share the band and the transmit power,
costing 10 log10(2) dB.  Monte Carlo confirms the analytic curves.
"""
import numpy as np

from micg import multiuser

snr_db = np.arange(0, 12.5, 1.0)
print(" snr  multi(analytic)  multi(MC)   single(analytic)  single(MC)")
for s in snr_db:
    row = [f"{s:4.1f}"]
    for scheme in ("multi_frequency", "single_resonant"):
        snr = multiuser.effective_snr(scheme, 2, float(multiuser.db_to_linear(s)))
        est = multiuser.monte_carlo_ber(scheme, 2, s, 200_000, seed=1)
        row += [f"{multiuser.ber_bpsk(snr):.3e}", f"{est.ber:.3e}"]
    print("   ".join(row))

for t in (1e-2, 1e-3, 1e-4):
    gap = (multiuser.required_snr("single_resonant", 2, t)
           - multiuser.required_snr("multi_frequency", 2, t))
    print(f"BER {t:g}: gap {gap:.4f} dB")
