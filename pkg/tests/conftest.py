import math

import numpy as np
import pytest

from sqhhg.config import RunConfig
from sqhhg.experiments import ensemble_spectrum
from sqhhg.phase_space import DriverConfig
from sqhhg.sfa import DipoleRecord
from sqhhg.spectra import accumulate


def make_record(spec_par, spec_perp, weight=1.0, d_omega=0.01):
    """A synthetic DipoleRecord with the given spectral amplitudes."""
    spec_par = np.asarray(spec_par, dtype=complex)
    spec_perp = np.asarray(spec_perp, dtype=complex)
    n = len(spec_par)
    omega = d_omega * np.arange(n)
    spectrum = np.stack([spec_par, spec_perp], axis=1)
    return DipoleRecord(np.arange(n, dtype=float), np.zeros((n, 2)), omega, spectrum, weight)


def synthetic_set(pairs, weights=None, omega_l=0.1, d_omega=0.01):
    if weights is None:
        weights = [1.0 / len(pairs)] * len(pairs)
    recs = [make_record(a, b, w, d_omega) for (a, b), w in zip(pairs, weights)]
    return accumulate(recs, omega_l=omega_l)


_CACHE = {}


@pytest.fixture(scope="session")
def ensemble():
    """Full 140-node ensemble spectra of the reference driver, cached per (A, phi)."""

    def get(a, phi, **driver_kw):
        key = (round(a, 12), round(phi, 12), tuple(sorted(driver_kw.items())))
        if key not in _CACHE:
            driver = DriverConfig(ellipticity=a, squeezing_angle=phi, **driver_kw)
            _CACHE[key] = ensemble_spectrum(driver, RunConfig())
        return _CACHE[key]

    return get


PI = math.pi
