"""Ensemble spectra, per-order intensities and the squeezing-angle witness."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .phase_space import reduce_angle

WEIGHT_SUM_TOL = 1e-12
POLARIZATIONS = ("par", "perp", "total")


class MixedGridError(ValueError):
    """Records sampled on different frequency grids were combined."""


class UndefinedReferenceError(ZeroDivisionError):
    """The reference spectrum at ``phi = pi`` vanishes at the requested order."""


@dataclass(frozen=True, eq=False)
class SpectrumSet:
    """Weighted moments of an ensemble of dipole spectra.

    ``s_*`` are second moments ``sum w |d|^2``, ``m4_*`` fourth moments
    ``sum w |d|^4`` and ``x`` the cross moment ``sum w conj(d_par) d_perp``.
    ``record_spectra`` keeps the per-realization amplitudes (shape
    ``(n_records, n_freq, 2)``) so that per-order photon statistics can be
    formed from window-integrated intensities.
    """

    omega: np.ndarray
    s_par: np.ndarray
    s_perp: np.ndarray
    m4_par: np.ndarray
    m4_perp: np.ndarray
    x: np.ndarray
    weights: np.ndarray
    record_spectra: np.ndarray
    omega_l: float
    config: Any = None
    meta: dict = field(default_factory=dict)

    @property
    def n_samples(self):
        return len(self.weights)

    @property
    def s_total(self):
        return self.s_par + self.s_perp

    @property
    def d_omega(self):
        return self.omega[1] - self.omega[0]

    def selected(self, polarization):
        if polarization == "par":
            return self.s_par
        if polarization == "perp":
            return self.s_perp
        if polarization == "total":
            return self.s_total
        raise ValueError(f"polarization must be one of {POLARIZATIONS}")

    def scaled(self, factor):
        """Same ensemble with every dipole multiplied by ``factor``."""
        f2 = abs(factor) ** 2
        return SpectrumSet(
            self.omega, self.s_par * f2, self.s_perp * f2, self.m4_par * f2 * f2,
            self.m4_perp * f2 * f2, self.x * f2, self.weights,
            self.record_spectra * factor, self.omega_l, self.config, dict(self.meta),
        )


def accumulate(records, omega_l=None, config=None) -> SpectrumSet:
    """Weighted ensemble moments of ``records`` (a sequence of ``DipoleRecord``).

    The reduction runs in record order, so the result is independent of how
    the records were produced.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to accumulate")
    omega = records[0].omega
    for r in records[1:]:
        if r.omega.shape != omega.shape or not np.array_equal(r.omega, omega):
            raise MixedGridError("records do not share one frequency grid")
    w = np.array([r.weight for r in records], dtype=float)
    if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
    if omega_l is None:
        omega_l = config.omega if config is not None else 1.0
    spec = np.stack([r.spectrum for r in records])
    p = spec.real**2 + spec.imag**2
    s = np.einsum("r,rkm->km", w, p)
    m4 = np.einsum("r,rkm->km", w, p * p)
    x = np.einsum("r,rk->k", w, np.conj(spec[:, :, 0]) * spec[:, :, 1])
    return SpectrumSet(
        omega, s[:, 0], s[:, 1], m4[:, 0], m4[:, 1], x, w, spec, float(omega_l), config,
        {"n_samples": len(records)},
    )


def harmonic_window(spectrum: SpectrumSet, q, half_width=0.5):
    """Boolean mask of grid points in ``[(q - hw) w_L, (q + hw) w_L]``."""
    if half_width <= 0:
        raise ValueError("half_width must be positive")
    lo = (q - half_width) * spectrum.omega_l
    hi = (q + half_width) * spectrum.omega_l
    om = spectrum.omega
    if lo < om[0] - 1e-12 * spectrum.omega_l or hi > om[-1] + 1e-12 * spectrum.omega_l:
        raise ValueError(
            f"harmonic window [{lo:.4g}, {hi:.4g}] exceeds the grid [{om[0]:.4g}, {om[-1]:.4g}]"
        )
    tol = 1e-9 * spectrum.d_omega
    return (om >= lo - tol) & (om <= hi + tol)


def harmonic_intensity(spectrum: SpectrumSet, q, polarization="total", half_width=0.5):
    """Window integral of the selected ensemble spectrum around ``q * w_L``."""
    m = harmonic_window(spectrum, q, half_width)
    return float(spectrum.selected(polarization)[m].sum() * spectrum.d_omega)


def harmonic_cross_moment(spectrum: SpectrumSet, q, half_width=0.5):
    m = harmonic_window(spectrum, q, half_width)
    return complex(spectrum.x[m].sum() * spectrum.d_omega)


def record_intensities(spectrum: SpectrumSet, q, half_width=0.5):
    """Per-realization window-integrated intensities, shape ``(n_records, 2)``."""
    m = harmonic_window(spectrum, q, half_width)
    a = spectrum.record_spectra[:, m, :]
    return (a.real**2 + a.imag**2).sum(axis=1) * spectrum.d_omega


def delta_s_ratio(intensity, reference):
    """``|1 - S / S_ref|`` with an explicit error for a vanishing reference."""
    if reference == 0 or not math.isfinite(reference):
        raise UndefinedReferenceError("reference intensity at phi = pi is zero")
    return abs(1.0 - intensity / reference)


def _lookup(runs, a, phi):
    phi = reduce_angle(phi)
    for (ka, kphi), v in runs.items():
        if math.isclose(ka, a, abs_tol=1e-12) and abs(reduce_angle(kphi - phi)) < 1e-9:
            return v
    raise KeyError(f"no run for A={a}, phi={phi}")


def delta_s(q, a, phi, runs, half_width=0.5):
    """Normalized intensity difference ``|1 - S_phi(q) / S_pi(q)|``.

    ``runs`` maps ``(A, phi)`` to a :class:`SpectrumSet`; both ``phi`` and the
    reference ``pi`` must be present for ellipticity ``a``.  Uses the total
    (par + perp) harmonic intensity.
    """
    s = _lookup(runs, a, phi)
    ref = _lookup(runs, a, math.pi)
    return delta_s_ratio(
        harmonic_intensity(s, q, "total", half_width),
        harmonic_intensity(ref, q, "total", half_width),
    )


def fourier_of_delta_s(phis, values):
    """Discrete Fourier coefficients of a ``2 pi``-periodic sample of ``Delta S``.

    ``phis`` must be a uniform grid covering one period (``n * dphi = 2 pi``).
    Returns ``(k, c_k)`` with ``values(phi) = sum_k c_k exp(i k phi)``; the
    coefficients are referred to ``phi = 0`` whatever the grid origin.
    """
    phis = np.asarray(phis, dtype=float)
    values = np.asarray(values, dtype=float)
    n = len(phis)
    if n < 2 or values.shape != phis.shape:
        raise ValueError("need matching phi and value arrays with at least two points")
    step = np.diff(phis)
    dphi = 2 * np.pi / n
    if not np.allclose(step, dphi, rtol=0, atol=1e-9):
        raise ValueError("phi grid must be uniform with n * dphi = 2 pi")
    k = np.rint(np.fft.fftfreq(n, 1.0 / n)).astype(int)
    c = np.fft.fft(values) / n * np.exp(-1j * k * phis[0])
    return k, c


def harmonic_intensities(spectrum: SpectrumSet, orders, polarization="total", half_width=0.5):
    return np.array([harmonic_intensity(spectrum, q, polarization, half_width) for q in orders])


def cutoff_order(spectrum: SpectrumSet, q_min=7, fraction=0.1, lookback=4, floor=1e-8,
                 half_width=0.5):
    """Highest odd order that has not yet fallen off the plateau.

    An order ``q > q_min`` counts as on the plateau when its intensity is at
    least ``fraction`` of the largest of the ``lookback`` odd orders below it.
    Orders under ``floor`` times the overall maximum (numerical noise) are
    ignored.
    """
    q_max = int(spectrum.omega[-1] / spectrum.omega_l - half_width)
    orders = np.arange(q_min | 1, q_max + 1, 2)
    if len(orders) < 2:
        raise ValueError("grid does not reach past q_min")
    inten = harmonic_intensities(spectrum, orders, "total", half_width)
    top = inten.max()
    if not top > 0:
        raise ValueError("spectrum is dark above q_min")
    best = int(orders[0])
    for i in range(1, len(orders)):
        level = fraction * inten[max(0, i - lookback):i].max()
        if inten[i] >= level and inten[i] >= floor * top:
            best = int(orders[i])
    return best


def fmt(v):
    """Shortest round-trip text for a float; empty cell for ``None``."""
    if v is None:
        return ""
    return repr(float(v))


SPECTRUM_COLUMNS = ("omega", "harmonic", "S_par", "S_perp", "M4_par", "M4_perp", "ReX", "ImX")


def write_spectrum_csv(spectrum: SpectrumSet, path, max_order=None):
    """CSV with one row per frequency bin (optionally up to ``max_order``)."""
    om = spectrum.omega
    n = len(om)
    if max_order is not None:
        n = int(np.searchsorted(om, max_order * spectrum.omega_l, side="right"))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SPECTRUM_COLUMNS)
        for k in range(n):
            w.writerow([
                fmt(om[k]), fmt(om[k] / spectrum.omega_l), fmt(spectrum.s_par[k]),
                fmt(spectrum.s_perp[k]), fmt(spectrum.m4_par[k]), fmt(spectrum.m4_perp[k]),
                fmt(spectrum.x[k].real), fmt(spectrum.x[k].imag),
            ])


def read_spectrum_csv(path):
    """Columns of a spectrum CSV as float arrays keyed by header name."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array([[float(v) for v in r] for r in body]) if body else np.empty((0, len(header)))
    return {h: data[:, i] for i, h in enumerate(header)}
