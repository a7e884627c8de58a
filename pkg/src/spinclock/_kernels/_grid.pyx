# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled transmission grid kernel.

Same contract as the numpy fallback: flat pointwise evaluation of the
ensemble susceptibility sum and the cavity transmission, writing into a
caller-provided complex output array.  Releases the GIL so callers can
shard the flat range across threads.
"""

cimport cython


def transmission_grid(const double[::1] omega_probe,
                      const double[::1] omega_c,
                      const double[:, ::1] class_omegas,
                      const double[::1] class_g_sq,
                      double halfwidth,
                      double kappa,
                      double kappa_loss,
                      double complex[::1] out):
    cdef Py_ssize_t n = omega_probe.shape[0]
    cdef Py_ssize_t k = class_g_sq.shape[0]
    cdef Py_ssize_t i, j
    cdef double complex c_sum
    cdef double detuning
    cdef double kappa_tot = kappa + kappa_loss

    with nogil:
        for i in range(n):
            c_sum = 0
            for j in range(k):
                detuning = class_omegas[i, j] - omega_probe[i]
                c_sum = c_sum + class_g_sq[j] / (halfwidth + 1j * detuning)
            out[i] = kappa / (kappa_tot + 1j * (omega_c[i] - omega_probe[i]) + c_sum)
    return out
