"""Numpy fallback for the transmission grid kernel.

Evaluates, pointwise over flat arrays,

    C_i = sum_j g2_j / (hw + i (w_class[i,j] - w_probe[i]))
    t_i = kappa / (kappa + kappa_l + i (w_c[i] - w_probe[i]) + C_i)

Chunked so peak memory stays bounded for million-point grids.
"""

import numpy as np

_CHUNK = 1 << 16


def transmission_grid(omega_probe, omega_c, class_omegas, class_g_sq,
                      halfwidth, kappa, kappa_loss, out):
    n = omega_probe.shape[0]
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        probe = omega_probe[lo:hi, None]
        c_sum = (class_g_sq[None, :]
                 / (halfwidth + 1j * (class_omegas[lo:hi] - probe))).sum(axis=1)
        delta = omega_c[lo:hi] - omega_probe[lo:hi]
        out[lo:hi] = kappa / (kappa + kappa_loss + 1j * delta + c_sum)
    return out
