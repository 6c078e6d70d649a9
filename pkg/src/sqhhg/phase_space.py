"""Squeezed elliptical driver and its classical-limit field realizations.

The driver is a coherent ``par`` mode plus a displaced squeezed vacuum in the
``perp`` mode.  In the classical limit the Husimi function of the squeezed mode
collapses onto a one-dimensional Gaussian along the anti-squeezed quadrature
``tilde_x`` (variance ``4 * I_sq``) while the squeezed quadrature ``tilde_y`` is
pinned to zero.  Each Gauss-Hermite node on ``tilde_x`` becomes one classical
two-component field with a quadrature weight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Union

import numpy as np
from scipy.special import roots_hermite

FS_TO_AU = 41.341373335  # 1 fs in atomic units of time

GEOMETRIES = ("elliptical", "collinear")


class DegenerateDistributionError(ValueError):
    """Raised when a zero-variance Gaussian density is requested."""


@dataclass(frozen=True)
class Monochromatic:
    """Constant-amplitude carrier analysed over ``n_cycles`` periods.

    The carrier is switched on ``lead_in_cycles`` periods before the analysis
    window opens at ``t = 0``.  When the lead-in covers the excursion cap of the
    SFA integral, the dipole inside the window is the periodic steady state.
    """

    n_cycles: float = 5.0
    lead_in_cycles: float = 2.0

    def __post_init__(self):
        if self.n_cycles <= 0:
            raise ValueError("n_cycles must be positive")
        if self.lead_in_cycles < 0:
            raise ValueError("lead_in_cycles must be non-negative")

    def support(self, omega):
        period = 2 * np.pi / omega
        return -self.lead_in_cycles * period, self.n_cycles * period

    def analysis_window(self, omega):
        return 0.0, self.n_cycles * 2 * np.pi / omega

    def __call__(self, t, omega):
        lo, hi = self.support(omega)
        t = np.asarray(t, dtype=float)
        return np.where((t >= lo) & (t <= hi), 1.0, 0.0)


@dataclass(frozen=True)
class Sin2:
    """``sin^2`` pulse of total duration ``duration_fs`` starting at ``t = 0``."""

    duration_fs: float = 13.0

    def __post_init__(self):
        if self.duration_fs <= 0:
            raise ValueError("duration_fs must be positive")

    @property
    def duration(self):
        return self.duration_fs * FS_TO_AU

    def support(self, omega):
        return 0.0, self.duration

    def analysis_window(self, omega):
        return self.support(omega)

    def __call__(self, t, omega):
        t = np.asarray(t, dtype=float)
        d = self.duration
        f = np.sin(np.pi * t / d) ** 2
        return np.where((t >= 0.0) & (t <= d), f, 0.0)


Envelope = Union[Monochromatic, Sin2]


def reduce_angle(phi):
    """Map ``phi`` into ``(-pi, pi]``."""
    r = math.remainder(float(phi), 2 * math.pi)
    if r <= -math.pi:
        r += 2 * math.pi
    return r


@dataclass(frozen=True)
class DriverConfig:
    """Quantum driver in atomic units.

    ``ellipticity`` (``A``) scales the ``perp`` displacement ``i*A*mean_amplitude``.
    ``squeezing_angle`` (``phi``) is 0 for amplitude and ``pi`` for phase
    squeezing.  ``geometry="collinear"`` puts the squeezed fluctuation on the
    ``par`` mode itself (a linearly polarized displaced squeezed vacuum) and
    leaves ``perp`` empty; ``ellipticity`` is then ignored.
    """

    mean_amplitude: float = 0.053
    omega: float = 0.057
    ellipticity: float = 0.0
    squeezing_intensity: float = 1e-5
    squeezing_angle: float = 0.0
    envelope: Envelope = field(default_factory=Monochromatic)
    ionization_potential: float = 0.5
    handedness: int = 1
    geometry: str = "elliptical"

    def __post_init__(self):
        if not 0.0 <= self.ellipticity <= 1.0:
            raise ValueError(f"ellipticity must lie in [0, 1], got {self.ellipticity}")
        if self.squeezing_intensity < 0:
            raise ValueError("squeezing_intensity must be >= 0")
        if self.mean_amplitude < 0:
            raise ValueError("mean_amplitude must be >= 0")
        if self.omega <= 0:
            raise ValueError("omega must be > 0")
        if self.ionization_potential <= 0:
            raise ValueError("ionization_potential must be > 0")
        if self.handedness not in (1, -1):
            raise ValueError("handedness must be +1 or -1")
        if self.geometry not in GEOMETRIES:
            raise ValueError(f"geometry must be one of {GEOMETRIES}")
        object.__setattr__(self, "squeezing_angle", reduce_angle(self.squeezing_angle))

    @property
    def period(self):
        return 2 * np.pi / self.omega

    @property
    def ponderomotive_energy(self):
        return self.mean_amplitude**2 / (4 * self.omega**2)


class QuadratureSample(NamedTuple):
    tilde_x: float
    weight: float


@dataclass(frozen=True)
class FieldRealization:
    eps_par: complex
    eps_perp: complex
    weight: float
    tilde_x: float


def husimi_marginal_density(tilde_x, squeezing_intensity):
    """Classical-limit marginal of the squeezed-mode Husimi function.

    A zero-mean Gaussian in ``tilde_x`` with variance ``4 * squeezing_intensity``.
    """
    if squeezing_intensity <= 0:
        raise DegenerateDistributionError(
            "zero squeezing intensity: the marginal is a delta, use a single sample"
        )
    x = np.asarray(tilde_x, dtype=float)
    return np.exp(-(x**2) / (8 * squeezing_intensity)) / np.sqrt(
        8 * np.pi * squeezing_intensity
    )


@lru_cache(maxsize=32)
def _hermite_rule(n):
    x, w = roots_hermite(n)
    x = np.sqrt(2.0) * x
    w = w / np.sqrt(np.pi)
    # symmetrize so odd moments cancel to rounding
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def build_quadrature_samples(squeezing_intensity, n=140):
    """Gauss-Hermite nodes for the ``tilde_x`` marginal.

    Deterministic: identical inputs give bit-identical samples.  For
    ``squeezing_intensity == 0`` the single node ``(0, 1)`` is returned.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if squeezing_intensity < 0:
        raise ValueError("squeezing_intensity must be >= 0")
    if squeezing_intensity == 0:
        return [QuadratureSample(0.0, 1.0)]
    x, w = _hermite_rule(int(n))
    sigma = 2.0 * math.sqrt(squeezing_intensity)
    xs = (sigma * x).tolist()
    return [QuadratureSample(a, b) for a, b in zip(xs, w.tolist())]


def realize_field(config: DriverConfig, sample: QuadratureSample) -> FieldRealization:
    """Invert the tilde-frame rotation with ``tilde_y = 0``.

    ``eps - mean = tilde_x * exp(-i phi / 2)``.
    """
    shift = sample.tilde_x * complex(
        math.cos(config.squeezing_angle / 2), -math.sin(config.squeezing_angle / 2)
    )
    mean = complex(config.mean_amplitude, 0.0)
    if config.geometry == "collinear":
        return FieldRealization(mean + shift, 0j, sample.weight, sample.tilde_x)
    perp_mean = complex(0.0, config.handedness * config.ellipticity * config.mean_amplitude)
    return FieldRealization(mean, perp_mean + shift, sample.weight, sample.tilde_x)


def realizations(config: DriverConfig, n_samples=140, weight_floor=0.0):
    """All field realizations for ``config``; nodes with ``weight <= weight_floor`` are dropped."""
    samples = build_quadrature_samples(config.squeezing_intensity, n_samples)
    return [realize_field(config, s) for s in samples if s.weight > weight_floor]


def evaluate_field(realization: FieldRealization, config: DriverConfig, t):
    """Field components ``(E_par, E_perp)`` at times ``t``; shape ``t.shape + (2,)``.

    ``E_mu = f(t) * (Re eps_mu * cos(w t) + Im eps_mu * sin(w t))``; zero outside
    the envelope support.
    """
    t = np.asarray(t, dtype=float)
    w = config.omega
    f = config.envelope(t, w)
    c, s = np.cos(w * t), np.sin(w * t)
    out = np.empty(t.shape + (2,))
    out[..., 0] = f * (realization.eps_par.real * c + realization.eps_par.imag * s)
    out[..., 1] = f * (realization.eps_perp.real * c + realization.eps_perp.imag * s)
    return out
