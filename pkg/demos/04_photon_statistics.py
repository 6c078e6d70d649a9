"""Photon statistics of the harmonics, first in a toy model, then in the SFA.

Toy model: if a harmonic's intensity scales as |eps|^(2p) and eps is
Gaussian, g2 follows from Gaussian moments.  With zero mean it has a closed
form that grows without bound with p; a mean field pulls it back toward 1.

SFA: for a weakly elliptical driver the plateau stays mildly
super-Poissonian, while near the cutoff of a strongly elliptical driver
g2 reaches very large values.

Run:  python3 demos/04_photon_statistics.py [n_samples]
"""
import sys
from dataclasses import replace

from sqhhg import DriverConfig
from sqhhg.config import RunConfig
from sqhhg.experiments import ensemble_spectrum
from sqhhg.observables import g2
from sqhhg.toy import ToyModelParams, g2_bsv_closed_form, g2_toy_quadrature

print("toy model, sigma = 1")
print("   p    mean=0 (closed)   mean=0 (quad)   mean=2")
for p in (0, 0.5, 1, 2, 4, 8):
    print(f"  {p:3}   {g2_bsv_closed_form(p):14.6g}   "
          f"{g2_toy_quadrature(ToyModelParams(p)):13.6g}   "
          f"{g2_toy_quadrature(ToyModelParams(p, 1.0, 2.0)):8.4g}")

n = int(sys.argv[1]) if len(sys.argv) > 1 else 48
run = RunConfig()
run = replace(run, sampling=replace(run.sampling, n_samples=n))
for a in (0.1, 0.9):
    spec = ensemble_spectrum(DriverConfig(ellipticity=a, squeezing_angle=0.0), run)
    cells = ", ".join(f"q{q}: {g2(spec, q, 'perp'):.3g}" for q in (11, 15, 19, 23))
    print(f"\nSFA, A = {a}, g2 of the perpendicular component\n  {cells}")
