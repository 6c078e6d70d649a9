"""Photon statistics of a power-law harmonic response to a Gaussian field.

A harmonic whose amplitude scales as ``|eps|^p`` is driven by a field
amplitude distributed as a Gaussian of variance ``sigma`` around ``mean``.
Its zero-delay autocorrelation is the intensity moment ratio

    g2 = <|eps|^{4p}> / <|eps|^{2p}>^2 .

For zero mean the ratio is ``sqrt(pi) Gamma(1/2 + 2p) / Gamma(1/2 + p)^2``,
independent of ``sigma``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln

QUAD_RTOL = 1e-10


class ToyQuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested accuracy."""


@dataclass(frozen=True)
class ToyModelParams:
    p: float
    sigma: float = 1.0
    mean: float = 0.0

    def __post_init__(self):
        if self.p < 0:
            raise ValueError("p must be >= 0")
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")


def g2_bsv_closed_form(p):
    """Zero-mean (bright squeezed vacuum) limit, ``sqrt(pi) G(1/2+2p) / G(1/2+p)^2``."""
    if p < 0:
        raise ValueError("p must be >= 0")
    return math.exp(0.5 * math.log(math.pi) + gammaln(0.5 + 2 * p) - 2 * gammaln(0.5 + p))


def g2_bsv_printed_form(p, sigma):
    """The same expression carrying an explicit ``sigma`` prefactor.

    Coincides with :func:`g2_bsv_closed_form` only at ``sigma = 1``; kept for
    comparison with that normalization.
    """
    return sigma * g2_bsv_closed_form(p)


def _integration_half_width(params):
    # the 4p moment peaks near sqrt(4p * sigma) from the origin; keep a wide
    # Gaussian margin beyond it
    return math.sqrt(params.sigma) * max(12.0, 2.0 * math.sqrt(params.p) + 10.0)


def _log_intensity_factory(p, eps_crit, exponent):
    def log_i(eps):
        a = abs(eps)
        if p == 0:
            out = 0.0
        elif a == 0.0:
            return -math.inf
        else:
            out = 2 * p * math.log(a)
        if eps_crit is not None:
            out -= 2.0 * (a / eps_crit) ** exponent
        return out

    return log_i


def _log_moment(log_i, power, params, lo, hi, points):
    """``log int exp(-(e - m)^2 / 2 s) * I(e)^power de`` with a stable shift."""
    m, s = params.mean, params.sigma

    def log_f(e):
        li = log_i(e)
        if li == -math.inf:
            return -math.inf
        return power * li - (e - m) ** 2 / (2 * s)

    grid = np.linspace(lo, hi, 2001)
    shift = max(log_f(float(e)) for e in np.concatenate([grid, points]))

    def f(e):
        v = log_f(e)
        return 0.0 if v == -math.inf else math.exp(v - shift)

    pts = sorted(set(float(x) for x in points if lo < x < hi))
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(f, lo, hi, points=pts or None, epsabs=0.0,
                                      epsrel=1e-12, limit=400)
        except integrate.IntegrationWarning as exc:
            raise ToyQuadratureError(
                f"quadrature failed for power={power}, params={params}: {exc}"
            ) from exc
    if not val > 0 or err > QUAD_RTOL * val:
        raise ToyQuadratureError(
            f"quadrature error {err:.3g} exceeds {QUAD_RTOL:g} of value {val:.3g} "
            f"(power={power}, params={params})"
        )
    return shift + math.log(val)


def _g2_quadrature(params: ToyModelParams, eps_crit=None, exponent=2.0):
    hw = _integration_half_width(params)
    # cover both the Gaussian around the mean and the moment peaks around 0
    lo, hi = min(params.mean - hw, -hw), max(params.mean + hw, hw)
    root_s = math.sqrt(params.sigma)
    peaks = [0.0, params.mean]
    for k in (2 * params.p, 4 * params.p):
        r = math.sqrt(k * params.sigma)
        peaks += [r, -r, params.mean + r, params.mean - r]
    peaks += [params.mean + j * root_s for j in (-6, -3, 3, 6)]
    log_i = _log_intensity_factory(params.p, eps_crit, exponent)
    l2 = _log_moment(log_i, 1, params, lo, hi, peaks)
    l4 = _log_moment(log_i, 2, params, lo, hi, peaks)
    return math.exp(0.5 * math.log(2 * math.pi * params.sigma) + l4 - 2 * l2)


def g2_toy_quadrature(params: ToyModelParams):
    """Moment ratio by adaptive quadrature (intensity ``|eps|^{2p}``)."""
    return _g2_quadrature(params)


def g2_toy_depleted(params: ToyModelParams, eps_crit, exponent=2.0):
    """Moment ratio for the saturating response ``|eps|^p exp(-(|eps|/eps_crit)^s)``.

    ``eps_crit = inf`` recovers :func:`g2_toy_quadrature`.
    """
    if not eps_crit > 0:
        raise ValueError("eps_crit must be > 0")
    if exponent <= 0:
        raise ValueError("suppression exponent must be > 0")
    if math.isinf(eps_crit):
        return _g2_quadrature(params)
    return _g2_quadrature(params, eps_crit, exponent)


def g2_table(p_values, means, sigma=1.0, eps_crit=None, exponent=2.0):
    """Rows ``(p, mean, g2)`` for every combination, in input order."""
    rows = []
    for m in means:
        for p in p_values:
            par = ToyModelParams(float(p), sigma, float(m))
            if eps_crit is None:
                rows.append((float(p), float(m), g2_toy_quadrature(par)))
            else:
                rows.append((float(p), float(m), g2_toy_depleted(par, eps_crit, exponent)))
    return rows
