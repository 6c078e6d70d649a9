"""Compiled inner loop of the stationary-phase SFA dipole."""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def lewenstein_sum(e_dep, a, ia, ia2, ip, taus, w_re, w_im, i0):
    """Sum over excursion times for every output index ``i >= i0``.

    ``e_dep`` is the field already multiplied by the ionization-time depletion
    amplitude.  ``w_re + i w_im`` carries the step, the spreading prefactor, the
    squared matrix-element constant and the excursion taper; ``w[0]`` is unused.
    Returns ``x(t) = i * sum + c.c.`` for each polarization.  The inner sum runs
    in a fixed order, so the result does not depend on how callers schedule it.
    """
    n = e_dep.shape[0]
    n_tau = taus.shape[0] - 1
    out = np.zeros((n - i0, 2))
    two_ip = 2.0 * ip
    for i in range(i0, n):
        sxr = 0.0
        sxi = 0.0
        syr = 0.0
        syi = 0.0
        ax = a[i, 0]
        ay = a[i, 1]
        jmax = min(i, n_tau)
        for j in range(1, jmax + 1):
            k = i - j
            tau = taus[j]
            dx = ia[i, 0] - ia[k, 0]
            dy = ia[i, 1] - ia[k, 1]
            px = -dx / tau
            py = -dy / tau
            s = -(dx * dx + dy * dy) / (2.0 * tau) + 0.5 * (ia2[i] - ia2[k]) + ip * tau
            v1x = px + a[k, 0]
            v1y = py + a[k, 1]
            vx = px + ax
            vy = py + ay
            q1 = v1x * v1x + v1y * v1y + two_ip
            q = vx * vx + vy * vy + two_ip
            g = (e_dep[k, 0] * v1x + e_dep[k, 1] * v1y) / (q1 * q1 * q1 * q * q * q)
            cs = np.cos(s)
            sn = np.sin(s)
            zr = (w_re[j] * cs + w_im[j] * sn) * g
            zi = (w_im[j] * cs - w_re[j] * sn) * g
            sxr += zr * vx
            sxi += zi * vx
            syr += zr * vy
            syi += zi * vy
        out[i - i0, 0] = -2.0 * sxi
        out[i - i0, 1] = -2.0 * syi
    return out
