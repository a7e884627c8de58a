"""Polariton eigenfrequencies, thermal sensitivity, and insensitive operating points.

The lossless coupled-mode matrix in the (cavity, spin+, spin-) basis is

    H = [[w_c, g+, g-],
         [g+,  w+, 0 ],
         [g-,  0,  w-]]

whose eigenvalues are the three polariton branch frequencies.  Damping is
deliberately absent here (it enters only through the transmission model);
that keeps every derivative real and lets sensitivities come out of
Hellmann-Feynman expectation values, dL/dx = v^T (dH/dx) v.

With degenerate spin branches (B = 0) the bright modes reduce to

    nu_pm = (w_c + w_a)/2 +/- sqrt((w_c - w_a)^2/4 + g+^2 + g-^2)

and, for equal couplings g and thermal coefficients dw_a/dT = a,
dw_c/dT = R*a, the branch-resolved thermal slope is

    dnu_pm/dT = [a + R*a +/- a*(R - 1)*(w_c - w_a)/sqrt((w_c - w_a)^2 + 8 g^2)] / 2.

(The +/- orientation here tracks the nu_pm branches of the bright-mode
formula; it is fixed by the decoupled limit, where the upper branch at
positive detuning must shift like the bare cavity, R*a.)  Setting the slope
to zero gives the insensitive detunings

    D_pm = +/- sqrt(2) g (sqrt|R| - 1/sqrt|R|),    R < 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .params import CavityParams, EnvironmentState, SpinEnsembleParams
from .params import instantaneous_frequencies

BRANCHES = ("lower", "middle", "upper")

_B_STEP = 1e-9   # tesla
_T_STEP = 1e-3   # kelvin


class NoOperatingPointError(RuntimeError):
    """No zero of dnu/dT exists in the searched detuning range."""


@dataclass(frozen=True)
class PolaritonSolution:
    """Eigen solution: frequencies ascending, eigenvectors as columns."""

    lambdas: np.ndarray        # (3,) rad/s, ascending
    eigvecs: np.ndarray        # (3, 3), column j belongs to lambdas[j]
    branch_labels: tuple[str, str, str] = BRANCHES

    def branch(self, name: str) -> float:
        return float(self.lambdas[self.branch_labels.index(name)])


@dataclass(frozen=True)
class OperatingPoint:
    """A spin-cavity detuning where the branch's thermal slope vanishes."""

    detuning_D: float        # rad/s, omega_c - omega_a
    branch: str
    curvature_T: float       # rad/s per K^2
    curvature_B: float       # rad/s per T^2
    dnudT_residual: float    # rad/s per K at the returned detuning


def mode_matrix(omega_c, omega_plus, omega_minus, g_plus, g_minus) -> np.ndarray:
    return np.array([
        [omega_c, g_plus, g_minus],
        [g_plus, omega_plus, 0.0],
        [g_minus, 0.0, omega_minus],
    ])


def _branch_couplings(spins: SpinEnsembleParams) -> tuple[float, float]:
    # The eigenproblem keeps one aggregate line per branch; multi-class
    # structure is a transmission-module concern.
    g = spins.branch_coupling
    has_plus = any(c.branch.value == "plus" for c in spins.spin_classes)
    has_minus = any(c.branch.value == "minus" for c in spins.spin_classes)
    return (g if has_plus else 0.0), (g if has_minus else 0.0)


def _solve(omega_c, omega_p, omega_m, g_p, g_m):
    """eigh of the mode matrix, shifted to the detuning frame for accuracy."""
    ref = (omega_c + omega_p + omega_m) / 3.0
    h = mode_matrix(omega_c - ref, omega_p - ref, omega_m - ref, g_p, g_m)
    lam, vec = np.linalg.eigh(h)
    return lam + ref, vec


def eigenfrequencies(
    spins: SpinEnsembleParams, cavity: CavityParams, env: EnvironmentState
) -> PolaritonSolution:
    """Polariton branch frequencies under the given environment."""
    omega_p, omega_m, omega_c = instantaneous_frequencies(spins, cavity, env)
    g_p, g_m = _branch_couplings(spins)
    lam, vec = _solve(omega_c, omega_p, omega_m, g_p, g_m)
    return PolaritonSolution(lambdas=lam, eigvecs=vec)


def polariton_energies_degenerate(omega_c, omega_a, g_plus, g_minus):
    """Bright-mode closed form for degenerate spin branches (B = 0)."""
    mean = 0.5 * (omega_c + omega_a)
    split = math.sqrt(0.25 * (omega_c - omega_a) ** 2 + g_plus ** 2 + g_minus ** 2)
    return mean + split, mean - split


def track_branches(prev_vecs: np.ndarray, cur_vecs: np.ndarray) -> np.ndarray:
    """Permutation aligning current eigenvectors to the previous step.

    Greedy maximum-overlap assignment; robust at avoided crossings where
    plain eigenvalue ordering would swap labels.
    """
    overlap = np.abs(prev_vecs.T @ cur_vecs)
    perm = np.full(3, -1, dtype=int)
    taken = np.zeros(3, dtype=bool)
    for _ in range(3):
        i, j = np.unravel_index(np.argmax(overlap), overlap.shape)
        perm[i] = j
        taken[j] = True
        overlap[i, :] = -1.0
        overlap[:, j] = -1.0
    return perm


def eigen_path(matrices) -> tuple[np.ndarray, np.ndarray]:
    """Eigen solve along a parameter path with continuity-ordered branches."""
    lams = []
    vecs = []
    prev = None
    for h in matrices:
        lam, vec = np.linalg.eigh(h)
        if prev is not None:
            perm = track_branches(prev, vec)
            lam, vec = lam[perm], vec[:, perm]
        lams.append(lam)
        vecs.append(vec)
        prev = vec
    return np.array(lams), np.array(vecs)


def _branch_index(name: str) -> int:
    if name not in BRANCHES:
        raise ValueError(f"unknown branch {name!r}; choose from {BRANCHES}")
    return BRANCHES.index(name)


def dnu_dT(
    spins: SpinEnsembleParams,
    cavity: CavityParams,
    env: EnvironmentState,
    branch: str,
) -> float:
    """Thermal slope of one polariton branch via Hellmann-Feynman.

    dH/dT = diag(R*a, a, a), so dL/dT = a * (R*vc^2 + vp^2 + vm^2).
    """
    idx = _branch_index(branch)
    sol = eigenfrequencies(spins, cavity, env)
    v = sol.eigvecs[:, idx]
    a = env.dwa_dT
    return float(a * (env.R_ratio * v[0] ** 2 + v[1] ** 2 + v[2] ** 2))


def dnu_dT_degenerate(omega_c, omega_a, g, R, dwa_dT, branch: str) -> float:
    """Closed-form thermal slope of the bright modes (equal couplings, B = 0)."""
    if branch not in ("upper", "lower"):
        raise ValueError("closed form covers the bright branches 'upper'/'lower'")
    sign = 1.0 if branch == "upper" else -1.0
    delta = omega_c - omega_a
    root = math.sqrt(delta ** 2 + 8.0 * g ** 2)
    a = dwa_dT
    return 0.5 * (a + R * a + sign * a * (R - 1.0) * delta / root)


def operating_point_closed_form(g: float, R: float) -> tuple[float, float]:
    """Insensitive detunings D_pm = +/- sqrt(2) g (sqrt|R| - 1/sqrt|R|).

    Real solutions require thermal coefficients of opposite sign (R < 0);
    for |R| < 1 the magnitude is sqrt(2) g (1/sqrt|R| - sqrt|R|).
    """
    if R == 0:
        raise NoOperatingPointError(
            "R = 0: cavity has no thermal response, no finite cancellation detuning"
        )
    if R > 0:
        raise NoOperatingPointError(
            f"R = {R} > 0: spin and cavity shift the same way; "
            "the thermal slope of the bright branches cannot vanish"
        )
    r = math.sqrt(abs(R))
    d = math.sqrt(2.0) * g * (r - 1.0 / r)
    return d, -d


def _dnudT_at_detuning(spins, env, detuning, branch):
    cavity = CavityParams(
        omega_c_ref=spins.omega_zfs + detuning,
        kappa_out=1.0,  # unused by the lossless eigenproblem
    )
    return dnu_dT(spins, cavity, env, branch)


def branch_frequency_rel(spins, env, detuning, branch, delta_T=0.0, b_field=0.0):
    """One branch frequency relative to the line center.

    Eigenvalue of the coupled-mode matrix built directly in the line-center
    frame (an exact constant shift), so differences across small temperature
    or field offsets never round at the GHz carrier scale.
    """
    idx = _branch_index(branch)
    g_p, g_m = _branch_couplings(spins)
    thermal = env.dwa_dT * delta_T
    zeeman = env.gyromagnetic * b_field
    h = mode_matrix(
        detuning + env.R_ratio * thermal,
        thermal + zeeman,
        thermal - zeeman,
        g_p, g_m,
    )
    return float(np.linalg.eigvalsh(h)[idx])


def branch_frequency_at(spins, env, detuning, branch, delta_T=0.0, b_field=0.0):
    """Absolute branch frequency at a reference spin-cavity detuning."""
    return spins.omega_zfs + branch_frequency_rel(
        spins, env, detuning, branch, delta_T=delta_T, b_field=b_field
    )


def dnu_dT_central_difference(
    spins: SpinEnsembleParams,
    env: EnvironmentState,
    detuning: float,
    branch: str,
    step: float,
) -> float:
    """Central difference of one branch frequency w.r.t. temperature.

    Both displaced solves happen in the line-center frame so the GHz carrier
    cancels before rounding; the difference is then accurate at the detuning
    scale, not the carrier scale.
    """
    up = branch_frequency_rel(spins, env, detuning, branch,
                              delta_T=env.delta_T + step, b_field=env.B_field)
    dn = branch_frequency_rel(spins, env, detuning, branch,
                              delta_T=env.delta_T - step, b_field=env.B_field)
    return (up - dn) / (2.0 * step)


def second_difference(f, step: float) -> float:
    """Richardson-improved central second difference, (4F(h) - F(2h)) / 3."""
    def central(h):
        return (f(h) - 2.0 * f(0.0) + f(-h)) / h ** 2

    return (4.0 * central(step) - central(2.0 * step)) / 3.0


def operating_point_numeric(
    spins: SpinEnsembleParams,
    env: EnvironmentState,
    branch: str = "upper",
    detuning_range: tuple[float, float] | None = None,
    scan_points: int = 241,
    t_step: float = _T_STEP,
    b_step: float = _B_STEP,
) -> OperatingPoint:
    """Root of dnu/dT over spin-cavity detuning for one branch.

    Scans the range for a sign change, polishes with Brent, then attaches
    the local temperature and field curvatures (Richardson-improved central
    second differences of the full eigen solve).
    """
    g = spins.branch_coupling
    if detuning_range is None:
        detuning_range = (-20.0 * g, 20.0 * g)
    lo, hi = detuning_range
    if not hi > lo:
        raise ValueError("detuning_range must be increasing")

    grid = np.linspace(lo, hi, scan_points)
    slopes = np.array([_dnudT_at_detuning(spins, env, d, branch) for d in grid])
    crossings = np.nonzero(np.sign(slopes[:-1]) * np.sign(slopes[1:]) < 0)[0]
    if crossings.size == 0:
        hint = (
            " (R >= 0: spin and cavity thermal shifts have the same sign, "
            "so no cancellation exists on the bright branches)"
            if env.R_ratio >= 0 else ""
        )
        raise NoOperatingPointError(
            f"dnu/dT has no sign change on branch {branch!r} in "
            f"[{lo:.3e}, {hi:.3e}] rad/s{hint}"
        )
    i = int(crossings[0])
    root = brentq(
        lambda d: _dnudT_at_detuning(spins, env, d, branch),
        grid[i], grid[i + 1], xtol=1e-3, rtol=1e-15, maxiter=200,
    )
    residual = _dnudT_at_detuning(spins, env, root, branch)
    if abs(residual) > 1e-6 * abs(env.dwa_dT):
        raise NoOperatingPointError(
            f"root polish failed: |dnu/dT| = {abs(residual):.3e} rad/s/K"
        )

    curv_t = second_difference(
        lambda h: branch_frequency_rel(spins, env, root, branch,
                                       delta_T=env.delta_T + h,
                                       b_field=env.B_field), t_step
    )
    curv_b = second_difference(
        lambda h: branch_frequency_rel(spins, env, root, branch,
                                       delta_T=env.delta_T,
                                       b_field=env.B_field + h), b_step
    )
    return OperatingPoint(
        detuning_D=float(root),
        branch=branch,
        curvature_T=float(curv_t),
        curvature_B=float(curv_b),
        dnudT_residual=float(residual),
    )


def curvature_T_degenerate(detuning, g, R, dwa_dT) -> float:
    """Analytic d2nu/dT2 of the bright modes at fixed detuning.

    With f(d) = sqrt(d^2/4 + 2 g^2), f'' = g^2 / (2 f^3) and the chain rule
    over d(T) = D + (R - 1) a T gives |d2nu/dT2| = a^2 (1-R)^2 g^2 / (2 f^3).
    """
    f = math.sqrt(0.25 * detuning ** 2 + 2.0 * g ** 2)
    return (dwa_dT ** 2) * (1.0 - R) ** 2 * g ** 2 / (2.0 * f ** 3)


def magnetic_response(
    spins: SpinEnsembleParams,
    cavity: CavityParams,
    env: EnvironmentState,
    branch: str,
    b_step: float = _B_STEP,
) -> tuple[float, float]:
    """(dnu/dB, d2nu/dB2) of one branch at the ``env`` field point.

    The slope is a Hellmann-Feynman expectation, dH/dB = gyro*diag(0, 1, -1),
    exactly zero at B = 0 for symmetric couplings (spin-1 protection); the
    curvature is a Richardson-improved second difference.
    """
    idx = _branch_index(branch)
    sol = eigenfrequencies(spins, cavity, env)
    v = sol.eigvecs[:, idx]
    dnu_db = float(env.gyromagnetic * (v[1] ** 2 - v[2] ** 2))

    detuning = cavity.omega_c_ref - spins.omega_zfs
    d2 = second_difference(
        lambda h: branch_frequency_rel(spins, env, detuning, branch,
                                       delta_T=env.delta_T,
                                       b_field=env.B_field + h),
        b_step,
    )
    return dnu_db, float(d2)


__all__ = [
    "BRANCHES",
    "NoOperatingPointError",
    "PolaritonSolution",
    "OperatingPoint",
    "mode_matrix",
    "eigenfrequencies",
    "polariton_energies_degenerate",
    "track_branches",
    "eigen_path",
    "branch_frequency_at",
    "branch_frequency_rel",
    "dnu_dT",
    "dnu_dT_central_difference",
    "dnu_dT_degenerate",
    "operating_point_closed_form",
    "operating_point_numeric",
    "curvature_T_degenerate",
    "magnetic_response",
    "second_difference",
]
