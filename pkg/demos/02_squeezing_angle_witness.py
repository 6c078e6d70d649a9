"""How the harmonic yield depends on the squeezing angle.

For an elliptical squeezed driver (A = 0.9) the relative change
Delta S(phi) = |1 - S_phi / S_pi| is small for phase squeezing and grows
sharply as phi approaches 0 (amplitude squeezing).  This demo uses a coarse
phi grid and fewer quadrature nodes than the production default so that it
finishes in about a minute; pass a node count to change that.

Run:  python3 demos/02_squeezing_angle_witness.py [n_samples]
"""
import math
import sys
from dataclasses import replace

from sqhhg import DriverConfig
from sqhhg.config import RunConfig
from sqhhg.experiments import ensemble_spectrum
from sqhhg.spectra import delta_s

n = int(sys.argv[1]) if len(sys.argv) > 1 else 48
run = RunConfig()
run = replace(run, sampling=replace(run.sampling, n_samples=n))

phis = [0.0, math.pi / 3, 2 * math.pi / 3, math.pi]
runs = {}
for phi in phis:
    runs[(0.9, phi)] = ensemble_spectrum(DriverConfig(ellipticity=0.9, squeezing_angle=phi), run)

print("phi/pi   " + "  ".join(f"q={q:<8d}" for q in (17, 19, 21)))
for phi in phis:
    cells = [delta_s(q, 0.9, phi, runs) for q in (17, 19, 21)]
    print(f"{phi / math.pi:5.2f}   " + "  ".join(f"{c:<10.3g}" for c in cells))
