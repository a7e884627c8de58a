"""Grid-evaluation backends.

The hot loop of a spectrum sweep (susceptibility sum + cavity transmission
over ~10^6 grid points) lives either in a compiled Cython kernel or in a
numpy fallback; the import below picks the compiled one when present.
``SPINCLOCK_FORCE_PYTHON=1`` forces the fallback, ``SPINCLOCK_THREADS=n``
shards the flat grid range across n worker threads (the kernel releases the
GIL).  Output ordering is deterministic either way.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._grid_fallback import transmission_grid as transmission_grid_python

try:
    from ._grid import transmission_grid as transmission_grid_compiled
except ImportError:
    transmission_grid_compiled = None

HAVE_COMPILED = transmission_grid_compiled is not None


def _force_python() -> bool:
    return os.environ.get("SPINCLOCK_FORCE_PYTHON", "0") not in ("", "0")


def active_backend() -> str:
    return "compiled" if (HAVE_COMPILED and not _force_python()) else "python"


def _thread_count() -> int:
    raw = os.environ.get("SPINCLOCK_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def transmission_grid(omega_probe, omega_c, class_omegas, class_g_sq,
                      halfwidth, kappa, kappa_loss, threads=None):
    """Evaluate t(omega) pointwise over flat arrays; returns complex128 (n,)."""
    omega_probe = np.ascontiguousarray(omega_probe, dtype=np.float64)
    omega_c = np.ascontiguousarray(omega_c, dtype=np.float64)
    class_omegas = np.ascontiguousarray(class_omegas, dtype=np.float64)
    class_g_sq = np.ascontiguousarray(class_g_sq, dtype=np.float64)
    n = omega_probe.shape[0]
    out = np.empty(n, dtype=np.complex128)

    kernel = (transmission_grid_compiled
              if active_backend() == "compiled"
              else transmission_grid_python)
    n_threads = _thread_count() if threads is None else max(1, int(threads))

    if n_threads == 1 or n < 4 * n_threads:
        kernel(omega_probe, omega_c, class_omegas, class_g_sq,
               halfwidth, kappa, kappa_loss, out)
        return out

    bounds = np.linspace(0, n, n_threads + 1, dtype=int)
    with ThreadPoolExecutor(max_workers=n_threads) as pool:
        futures = [
            pool.submit(kernel,
                        omega_probe[lo:hi], omega_c[lo:hi], class_omegas[lo:hi],
                        class_g_sq, halfwidth, kappa, kappa_loss, out[lo:hi])
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        for fut in futures:
            fut.result()
    return out


__all__ = [
    "transmission_grid",
    "transmission_grid_python",
    "transmission_grid_compiled",
    "HAVE_COMPILED",
    "active_backend",
]
