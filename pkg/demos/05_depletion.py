"""Ground-state depletion and the saturation of g2.

With a short sin^2 pulse and ADK depletion switched on, compare g2 of
harmonic 13 for a bright squeezed vacuum (mean field 0) and two displaced
squeezed states.  The same study is available as ``sqhhg depletion-sweep``.

Run:  python3 demos/05_depletion.py [n_samples]
"""
import sys
from dataclasses import replace

from sqhhg.config import RunConfig
from sqhhg.experiments import depletion_driver, ensemble_spectrum
from sqhhg.observables import g2

n = int(sys.argv[1]) if len(sys.argv) > 1 else 32
run = RunConfig()
run = replace(run, sampling=replace(run.sampling, n_samples=n),
              grid=replace(run.grid, depletion=True))

print("I_sq      " + "  ".join(f"eps={m:<7}" for m in (0.0, 0.03, 0.053)))
for isq in (1e-5, 1e-4):
    row = []
    for m in (0.0, 0.03, 0.053):
        spec = ensemble_spectrum(depletion_driver(run, m, isq), run)
        row.append(g2(spec, 13, "par"))
    print(f"{isq:<8.0e}  " + "  ".join(f"{v:<11.4g}" for v in row))
