"""A coherent, linearly polarized driver: where does the plateau end?

With no squeezing the ensemble has a single realization, so this is the
plain strong-field dipole spectrum.  We compare the measured cutoff order
with the three-step estimate (I_p + 3.17 U_p) / w_L, then double the field
and check that the cutoff moves by the ponderomotive shift.

Run:  python3 demos/01_coherent_spectrum.py
"""
import math

from sqhhg import DriverConfig, SfaGrid, compute_dipole, realizations
from sqhhg.spectra import accumulate, cutoff_order, harmonic_intensities

for eps in (0.053, 0.106):
    cfg = DriverConfig(mean_amplitude=eps, squeezing_intensity=0.0)
    rec = compute_dipole(realizations(cfg)[0], cfg, SfaGrid.for_driver(cfg))
    spec = accumulate([rec], config=cfg)
    law = (cfg.ionization_potential + 3.17 * cfg.ponderomotive_energy) / cfg.omega
    print(f"eps = {eps}: U_p = {cfg.ponderomotive_energy:.3f} a.u., "
          f"three-step cutoff {law:.1f}, measured {cutoff_order(spec)}")

    orders = list(range(1, 40, 2))
    levels = harmonic_intensities(spec, orders)
    top = levels.max()
    for q, v in zip(orders, levels):
        bar = "#" * max(0, int(12 + 1.2 * math.log10(v / top + 1e-300)))
        print(f"   q={q:2d}  {v / top:9.2e}  {bar}")
