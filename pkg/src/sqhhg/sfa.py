"""Semiclassical (Lewenstein) dipole of a hydrogenic 1s target in a 2D field.

The momentum integral is reduced by stationary phase to the return momentum
``p_st``; the remaining integral over the excursion time ``tau = t - t1`` is a
direct sum on the uniform time grid, capped at ``max_excursion`` with a smooth
taper.  Optional ground-state depletion uses the instantaneous hydrogen ADK rate.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from ._kernels import lewenstein_sum
from .phase_space import DriverConfig, FieldRealization, evaluate_field

REGULARIZATION = 1e-4  # a.u., tames the tau -> 0 spreading factor
TAPER_PERIODS = 0.25  # width of the sin^2 roll-off at the excursion cap
MIN_POINTS_PER_5_CYCLES = 4096
MIN_NYQUIST_HARMONIC = 60


class ConfigurationError(ValueError):
    """Grid or option combination that cannot resolve the requested physics."""


@dataclass(frozen=True)
class SfaGrid:
    """Uniform output grid ``t_k = t_start + k * dt``, ``dt = (t_end - t_start) / n_t``.

    The end point is excluded so that a periodic signal sampled over whole
    periods has its harmonics on exact FFT bins.  ``max_excursion`` caps the
    ionization-to-recombination delay.
    """

    t_start: float
    t_end: float
    n_t: int
    max_excursion: float

    def __post_init__(self):
        if self.t_end <= self.t_start:
            raise ValueError("t_end must exceed t_start")
        if self.n_t < 4:
            raise ValueError("n_t must be >= 4")
        if self.max_excursion <= 0:
            raise ValueError("max_excursion must be positive")

    @property
    def dt(self):
        return (self.t_end - self.t_start) / self.n_t

    @property
    def times(self):
        return self.t_start + self.dt * np.arange(self.n_t)

    @classmethod
    def for_driver(cls, config: DriverConfig, n_t=None, excursion_periods=1.5):
        t0, t1 = config.envelope.analysis_window(config.omega)
        if n_t is None:
            cycles = (t1 - t0) / config.period
            n_t = max(MIN_POINTS_PER_5_CYCLES, int(np.ceil(MIN_POINTS_PER_5_CYCLES * cycles / 5)))
        return cls(t0, t1, int(n_t), excursion_periods * config.period)

    def validate(self, config: DriverConfig):
        period = config.period
        if self.max_excursion < period * (1 - 1e-12):
            raise ConfigurationError("max_excursion must cover at least one laser period")
        needed = MIN_POINTS_PER_5_CYCLES * (self.t_end - self.t_start) / (5 * period)
        if self.n_t < needed * (1 - 1e-9):
            raise ConfigurationError(
                f"n_t={self.n_t} is below {MIN_POINTS_PER_5_CYCLES} points per 5 cycles "
                f"({needed:.0f} needed)"
            )
        if np.pi / self.dt < MIN_NYQUIST_HARMONIC * config.omega:
            raise ConfigurationError(
                f"time step {self.dt:.4g} a.u. does not resolve harmonic {MIN_NYQUIST_HARMONIC}"
            )


class FieldContext:
    """Field, vector potential and their running integrals on a uniform grid.

    ``A(t) = a_offset - int_{t[0]}^{t} E``; ``IA`` and ``IA2`` are running
    integrals of ``A`` and ``|A|^2``.  All three come from cubic-spline
    antiderivatives, which the dipole sum and :func:`action` share.
    """

    def __init__(self, t, field, ionization_potential, a_offset=(0.0, 0.0)):
        t = np.asarray(t, dtype=float)
        field = np.asarray(field, dtype=float)
        self.t = t
        self.field = field
        self.ionization_potential = float(ionization_potential)
        self._a = CubicSpline(t, field).antiderivative()
        self._a_offset = np.asarray(a_offset, dtype=float)
        a = self.vector_potential(t)
        self._ia = CubicSpline(t, a).antiderivative()
        self._ia2 = CubicSpline(t, (a * a).sum(axis=-1)).antiderivative()

    @classmethod
    def from_realization(cls, realization: FieldRealization, config: DriverConfig, t):
        return cls(t, evaluate_field(realization, config, t), config.ionization_potential)

    def vector_potential(self, t):
        return self._a_offset - self._a(t)

    def integral_a(self, t):
        return self._ia(t)

    def integral_a2(self, t):
        return self._ia2(t)


def action(p, t, t1, ctx: FieldContext):
    """Semiclassical action ``int_{t1}^{t} [(p + A)^2 / 2 + I_p] dtau``."""
    t = np.asarray(t, dtype=float)
    t1 = np.asarray(t1, dtype=float)
    if np.any(t1 > t):
        raise ValueError("ionization time t1 must not exceed t")
    p = np.asarray(p, dtype=float)
    tau = t - t1
    d_ia = ctx.integral_a(t) - ctx.integral_a(t1)
    d_ia2 = ctx.integral_a2(t) - ctx.integral_a2(t1)
    return (
        0.5 * (p * p).sum(axis=-1) * tau
        + (p * d_ia).sum(axis=-1)
        + 0.5 * d_ia2
        + ctx.ionization_potential * tau
    )


def stationary_momentum(t, t1, ctx: FieldContext):
    """Return momentum ``p_st = -(1/tau) int_{t1}^{t} A``."""
    t = np.asarray(t, dtype=float)
    t1 = np.asarray(t1, dtype=float)
    tau = t - t1
    if np.any(tau <= 0):
        raise ValueError("excursion time must be positive")
    return -(ctx.integral_a(t) - ctx.integral_a(t1)) / np.asarray(tau)[..., None]


def _dipole_constant(ip):
    return 2**3.5 * (2 * ip) ** 1.25 / np.pi


def bound_continuum_dipole(v, ionization_potential):
    """Hydrogenic 1s bound-continuum matrix element ``d(v)`` (complex, along ``v``)."""
    v = np.asarray(v, dtype=float)
    ip = ionization_potential
    v2 = (v * v).sum(axis=-1, keepdims=True)
    return 1j * _dipole_constant(ip) * v / (v2 + 2 * ip) ** 3


def adk_rate(field_strength, ionization_potential):
    """Static hydrogen-like ADK rate ``4 k^5 / E * exp(-2 k^3 / (3 E))``, ``k = sqrt(2 I_p)``.

    Exactly zero at zero field.
    """
    e = np.abs(np.asarray(field_strength, dtype=float))
    kappa = np.sqrt(2 * ionization_potential)
    out = np.zeros_like(e)
    nz = e > 0
    out[nz] = 4 * kappa**5 / e[nz] * np.exp(-2 * kappa**3 / (3 * e[nz]))
    return out if out.ndim else float(out)


def depletion_amplitude(t, field, ionization_potential):
    """Ground-state amplitude ``exp(-1/2 int Gamma_ADK)`` along a uniform grid."""
    rate = adk_rate(np.linalg.norm(field, axis=-1), ionization_potential)
    dt = t[1] - t[0]
    cum = np.concatenate(([0.0], np.cumsum(0.5 * (rate[1:] + rate[:-1])) * dt))
    return np.exp(-0.5 * cum)


@dataclass(frozen=True, eq=False)
class DipoleRecord:
    """Dipole of one realization: real time series and its spectrum.

    ``spectrum[k, mu]`` is ``dt * rfft(window * d_mu)[k]`` on ``omega``.
    """

    t: np.ndarray
    dipole: np.ndarray
    omega: np.ndarray
    spectrum: np.ndarray
    weight: float

    @property
    def d_par(self):
        return self.dipole[:, 0]

    @property
    def d_perp(self):
        return self.dipole[:, 1]

    @property
    def spectrum_par(self):
        return self.spectrum[:, 0]

    @property
    def spectrum_perp(self):
        return self.spectrum[:, 1]


def _excursion_weights(dt, n_tau, ip, period, regularization, taper_periods):
    j = np.arange(n_tau + 1)
    taus = j * dt
    taus[0] = 1.0  # placeholder, j = 0 is skipped by the kernel
    c = _dipole_constant(ip)
    w = (np.pi / (regularization + 0.5j * taus)) ** 1.5 * (c * c * dt)
    n_taper = int(round(taper_periods * period / dt))
    if n_taper > 0:
        ramp = j > n_tau - n_taper
        w[ramp] *= np.sin(0.5 * np.pi * (n_tau - j[ramp]) / n_taper) ** 2
    w[0] = 0.0
    return taus, np.ascontiguousarray(w.real), np.ascontiguousarray(w.imag)


def compute_dipole(
    realization: FieldRealization,
    config: DriverConfig,
    grid: SfaGrid,
    depletion=False,
    window=None,
    pad_factor=1,
    regularization=REGULARIZATION,
    taper_periods=TAPER_PERIODS,
) -> DipoleRecord:
    """SFA dipole of one field realization on ``grid``.

    The sum over ionization times looks back ``max_excursion`` before
    ``grid.t_start``; the field there is whatever the envelope prescribes.
    ``window`` is ``None`` or ``"hann"`` and is applied before the FFT.
    """
    grid.validate(config)
    if window not in (None, "hann"):
        raise ConfigurationError(f"unknown window {window!r}")
    if pad_factor < 1:
        raise ConfigurationError("pad_factor must be >= 1")
    dt = grid.dt
    n_tau = int(round(grid.max_excursion / dt))
    t_ext = grid.t_start + dt * np.arange(-n_tau, grid.n_t)
    ctx = FieldContext.from_realization(realization, config, t_ext)
    ip = config.ionization_potential
    a = np.ascontiguousarray(ctx.vector_potential(t_ext))
    ia = np.ascontiguousarray(ctx.integral_a(t_ext))
    ia2 = np.ascontiguousarray(ctx.integral_a2(t_ext))
    e_dep = ctx.field
    amp = None
    if depletion:
        amp = depletion_amplitude(t_ext, ctx.field, ip)
        e_dep = ctx.field * amp[:, None]
    taus, w_re, w_im = _excursion_weights(dt, n_tau, ip, config.period, regularization, taper_periods)
    d = lewenstein_sum(np.ascontiguousarray(e_dep), a, ia, ia2, ip, taus, w_re, w_im, n_tau)
    if amp is not None:
        d *= amp[n_tau:, None]
    x = d * np.hanning(grid.n_t)[:, None] if window == "hann" else d
    n_fft = pad_factor * grid.n_t
    spec = np.fft.rfft(x, n=n_fft, axis=0) * dt
    omega = 2 * np.pi * np.fft.rfftfreq(n_fft, dt)
    return DipoleRecord(t_ext[n_tau:], d, omega, spec, realization.weight)


def compute_dipoles(realizations, config, grid, threads=1, **kwargs):
    """Dipoles for many realizations; result order follows the input order."""
    realizations = list(realizations)
    if threads <= 1 or len(realizations) < 2:
        return [compute_dipole(r, config, grid, **kwargs) for r in realizations]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda r: compute_dipole(r, config, grid, **kwargs), realizations))
