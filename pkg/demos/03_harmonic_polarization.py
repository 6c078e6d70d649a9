"""Polarization of the emitted harmonics.

Amplitude squeezing (phi = 0) of a nearly circular driver yields harmonics
that are themselves close to circular: the Stokes ellipticity E_q is near 1
and the intensity imbalance V between the two components is near 0.  Phase
squeezing (phi = pi) leaves one component dominant, so V is clearly positive.

Run:  python3 demos/03_harmonic_polarization.py [n_samples]
"""
import math
import sys
from dataclasses import replace

from sqhhg import DriverConfig
from sqhhg.config import RunConfig
from sqhhg.experiments import ensemble_spectrum
from sqhhg.observables import harmonic_reports

n = int(sys.argv[1]) if len(sys.argv) > 1 else 48
run = RunConfig()
run = replace(run, sampling=replace(run.sampling, n_samples=n))

for label, phi in (("amplitude squeezing", 0.0), ("phase squeezing", math.pi)):
    spec = ensemble_spectrum(DriverConfig(ellipticity=0.9, squeezing_angle=phi), run)
    print(f"\n{label}")
    print("  q     E_q      V")
    for r in harmonic_reports(spec, range(5, 26, 2)):
        e = "-" if r.ellipticity is None else f"{r.ellipticity:.3f}"
        v = "-" if r.visibility is None else f"{r.visibility:+.3f}"
        print(f"  {r.q:2d}  {e:>6}  {v:>6}")
