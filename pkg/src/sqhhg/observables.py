"""Per-harmonic polarization and photon-statistics observables.

Everything here is a reduction of a :class:`~sqhhg.spectra.SpectrumSet`:
Stokes-based ellipticity, the intensity visibility between the two
polarizations and the zero-delay autocorrelation ``g2``.
"""
from __future__ import annotations

import csv
import cmath
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .spectra import (
    SpectrumSet,
    fmt,
    harmonic_cross_moment,
    harmonic_intensity,
    harmonic_window,
    record_intensities,
)

DARK_FRACTION = 1e-300
G2_MODES = ("windowed", "pointwise")


class DarkHarmonicError(ValueError):
    """The harmonic carries (numerically) no intensity."""


def _dark_scale(spectrum: SpectrumSet, polarization="total"):
    s = spectrum.selected(polarization)
    return float(s.max() * spectrum.d_omega) if s.size else 0.0


def _check_lit(value, spectrum, q, what):
    if not value > DARK_FRACTION * _dark_scale(spectrum) or value <= 0:
        raise DarkHarmonicError(f"harmonic {q} is dark in {what}")


def ellipticity(spectrum: SpectrumSet, q, half_width=0.5):
    """``E_q = |S3 / S0| = |2 Im X_q| / (I_par + I_perp)``."""
    i0 = harmonic_intensity(spectrum, q, "total", half_width)
    _check_lit(i0, spectrum, q, "total intensity")
    x = harmonic_cross_moment(spectrum, q, half_width)
    return min(1.0, abs(2 * x.imag) / i0)


def visibility(spectrum: SpectrumSet, q, half_width=0.5):
    """``V = (I_par - I_perp) / (I_par + I_perp)``."""
    ip = harmonic_intensity(spectrum, q, "par", half_width)
    iq = harmonic_intensity(spectrum, q, "perp", half_width)
    _check_lit(ip + iq, spectrum, q, "total intensity")
    return (ip - iq) / (ip + iq)


def relative_phase(spectrum: SpectrumSet, q, half_width=0.5):
    """Argument of the window-integrated cross moment ``<a_par^+ a_perp>``."""
    return cmath.phase(harmonic_cross_moment(spectrum, q, half_width))


def g2(spectrum: SpectrumSet, q, polarization, half_width=0.5, mode="windowed"):
    """Zero-delay autocorrelation of harmonic ``q`` in polarization ``par``/``perp``.

    ``windowed`` integrates each realization's intensity over the harmonic
    window before forming ``sum w I^2 / (sum w I)^2``; ``pointwise`` uses the
    ensemble moments at the grid point nearest ``q * w_L``.
    """
    if polarization not in ("par", "perp"):
        raise ValueError("polarization must be 'par' or 'perp'")
    mu = 0 if polarization == "par" else 1
    if mode == "windowed":
        inten = record_intensities(spectrum, q, half_width)[:, mu]
        w = spectrum.weights
        num = float(w @ (inten * inten))
        den = float(w @ inten)
    elif mode == "pointwise":
        harmonic_window(spectrum, q, half_width)
        k = int(np.argmin(np.abs(spectrum.omega - q * spectrum.omega_l)))
        num = float((spectrum.m4_par if mu == 0 else spectrum.m4_perp)[k])
        den = float(spectrum.selected(polarization)[k])
        scale = float(spectrum.selected("total").max())
        if not den > DARK_FRACTION * scale or den <= 0:
            raise DarkHarmonicError(f"harmonic {q} is dark in {polarization}")
        return num / (den * den)
    else:
        raise ValueError(f"mode must be one of {G2_MODES}")
    _check_lit(den, spectrum, q, polarization)
    return num / (den * den)


@dataclass(frozen=True)
class HarmonicReport:
    """Observables of one harmonic order; ``None`` marks a dark quantity."""

    q: int
    i_par: float
    i_perp: float
    ellipticity: Optional[float]
    visibility: Optional[float]
    g2_par: Optional[float]
    g2_perp: Optional[float]
    phase: Optional[float]

    def row(self):
        return [str(self.q), fmt(self.i_par), fmt(self.i_perp), fmt(self.ellipticity),
                fmt(self.visibility), fmt(self.g2_par), fmt(self.g2_perp), fmt(self.phase)]


REPORT_COLUMNS = ("q", "I_par", "I_perp", "E_q", "V", "g2_par", "g2_perp", "phase")


def _or_none(fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except DarkHarmonicError:
        return None


def harmonic_report(spectrum: SpectrumSet, q, half_width=0.5, mode="windowed"):
    ip = harmonic_intensity(spectrum, q, "par", half_width)
    iq = harmonic_intensity(spectrum, q, "perp", half_width)
    lit = _or_none(visibility, spectrum, q, half_width) is not None
    return HarmonicReport(
        int(q), ip, iq,
        _or_none(ellipticity, spectrum, q, half_width),
        _or_none(visibility, spectrum, q, half_width),
        _or_none(g2, spectrum, q, "par", half_width, mode),
        _or_none(g2, spectrum, q, "perp", half_width, mode),
        relative_phase(spectrum, q, half_width) if lit else None,
    )


def harmonic_reports(spectrum: SpectrumSet, orders, half_width=0.5, mode="windowed"):
    return [harmonic_report(spectrum, q, half_width, mode) for q in orders]


def write_reports_csv(reports, path, prefix_columns=(), prefixes=None):
    """Write reports as CSV; optional leading columns (e.g. ``A``, ``phi``) per row."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(prefix_columns) + list(REPORT_COLUMNS))
        for i, r in enumerate(reports):
            pre = [fmt(v) for v in prefixes[i]] if prefixes is not None else []
            w.writerow(pre + r.row())
