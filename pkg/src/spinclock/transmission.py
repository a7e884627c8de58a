"""Cavity transmission of the coupled spin-cavity system.

The probe response is

    t(omega) = kappa / (kappa + kappa_l + i*Delta + C(omega)),   Delta = omega_c - omega

with the ensemble susceptibility summed over spectral classes,

    C(omega) = sum_j g_j^2 / ((Gamma + gamma)/2 + i*(omega_j - omega)).

Re[C] > 0 for any passive ensemble, which pins |t| <= 1.  Homodyne readout
selects the quadrature Re[exp(-i*phi) * t]; phi = pi/2 returns Im[t], the
most phase-sensitive choice and the default everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import transmission_grid
from .params import (
    CavityParams,
    ConfigError,
    EnvironmentState,
    SpinEnsembleParams,
    class_frequencies,
    instantaneous_frequencies,
)

AXIS_VARIABLES = ("probe_offset", "cavity_offset", "delta_T", "B_field")


@dataclass(frozen=True)
class TransmissionPoint:
    """Transmission at a single probe frequency."""

    omega_probe: float
    t_complex: complex
    quadrature: float
    delta_cavity: float


@dataclass(frozen=True)
class SusceptibilityTerm:
    """One class's contribution g^2 / (halfwidth + i*detuning) to C."""

    coupling_sq: float
    halfwidth: float
    detuning: float

    def __post_init__(self):
        if self.halfwidth <= 0:
            raise ConfigError("susceptibility halfwidth must be > 0")

    @property
    def value(self) -> complex:
        return self.coupling_sq / (self.halfwidth + 1j * self.detuning)


@dataclass(frozen=True)
class SweepAxis:
    """One sweep axis: which variable, over what range, how many points.

    Frequency-like variables (probe_offset, cavity_offset) are offsets from
    the zero-field line center, in rad/s; delta_T is kelvin, B_field tesla.
    """

    variable: str
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.variable not in AXIS_VARIABLES:
            raise ConfigError(
                f"unknown axis variable {self.variable!r}; "
                f"choose from {', '.join(AXIS_VARIABLES)}"
            )
        if self.points < 1:
            raise ConfigError("axis needs at least one point")
        if not (self.stop >= self.start):
            raise ConfigError("axis range must be monotone (stop >= start)")

    def grid(self) -> np.ndarray:
        if self.points == 1:
            return np.array([0.5 * (self.start + self.stop)])
        return np.linspace(self.start, self.stop, self.points)


def quadrature_of(t, phase: float):
    """Homodyne quadrature Re[exp(-i*phase) * t]."""
    return np.real(np.exp(-1j * phase) * t)


def susceptibility(
    spins: SpinEnsembleParams, env: EnvironmentState, omega_probe
):
    """Ensemble susceptibility C(omega); accepts scalar or array probe."""
    hw = spins.halfwidth
    if hw <= 0:
        raise ConfigError("total spin linewidth Gamma + gamma must be > 0")
    omega_cls, g_cls = class_frequencies(spins, env)
    omega = np.asarray(omega_probe, dtype=np.float64)
    detuning = omega_cls - omega[..., None]
    c = (g_cls ** 2 / (hw + 1j * detuning)).sum(axis=-1)
    return c if omega.ndim else complex(c)


def susceptibility_terms(
    spins: SpinEnsembleParams, env: EnvironmentState, omega_probe: float
) -> tuple[SusceptibilityTerm, ...]:
    """Per-class decomposition of C at one probe frequency."""
    hw = spins.halfwidth
    if hw <= 0:
        raise ConfigError("total spin linewidth Gamma + gamma must be > 0")
    omega_cls, g_cls = class_frequencies(spins, env)
    return tuple(
        SusceptibilityTerm(g ** 2, hw, w - omega_probe)
        for w, g in zip(omega_cls, g_cls)
    )


def transmission_amplitude(cavity: CavityParams, c_value, omega_probe, omega_c):
    """t = kappa / (kappa + kappa_l + i(omega_c - omega) + C); array friendly."""
    delta = np.asarray(omega_c) - np.asarray(omega_probe)
    return cavity.kappa_out / (
        cavity.kappa_out + cavity.kappa_loss + 1j * delta + c_value
    )


def transmit(
    cavity: CavityParams,
    c_value: complex,
    omega_probe: float,
    env: EnvironmentState,
    quadrature_phase: float = math.pi / 2,
) -> TransmissionPoint:
    """Single-point transmission under the given environment."""
    omega_c = cavity.omega_c_ref + env.R_ratio * env.dwa_dT * env.delta_T
    t = complex(transmission_amplitude(cavity, c_value, omega_probe, omega_c))
    return TransmissionPoint(
        omega_probe=omega_probe,
        t_complex=t,
        quadrature=float(quadrature_of(t, quadrature_phase)),
        delta_cavity=omega_c - omega_probe,
    )


def transmission_spectrum(
    spins: SpinEnsembleParams,
    cavity: CavityParams,
    env: EnvironmentState,
    omega_probe,
):
    """Complex t over an array of probe frequencies (convenience 1-D path)."""
    _, _, omega_c = instantaneous_frequencies(spins, cavity, env)
    c = susceptibility(spins, env, omega_probe)
    return transmission_amplitude(cavity, c, omega_probe, omega_c)


@dataclass(frozen=True)
class SweepResult:
    """Dense transmission grid over two axes, row-major in (axis1, axis2)."""

    axis1: SweepAxis
    axis2: SweepAxis
    values1: np.ndarray
    values2: np.ndarray
    t: np.ndarray  # complex, shape (axis1.points, axis2.points)
    quadrature_phase: float
    probe_base: float = float("nan")  # absolute frequency probe offsets add to
    omega_c: np.ndarray | None = None  # per-point cavity frequency, same shape

    @property
    def abs_t(self) -> np.ndarray:
        return np.abs(self.t)

    @property
    def quadrature(self) -> np.ndarray:
        return quadrature_of(self.t, self.quadrature_phase)

    def point(self, i: int, j: int) -> TransmissionPoint:
        omega = self._probe_omega(i, j)
        t = complex(self.t[i, j])
        delta = float("nan") if self.omega_c is None \
            else float(self.omega_c[i, j]) - omega
        return TransmissionPoint(
            omega_probe=omega,
            t_complex=t,
            quadrature=float(quadrature_of(t, self.quadrature_phase)),
            delta_cavity=delta,
        )

    def _probe_omega(self, i, j):
        if self.axis1.variable == "probe_offset":
            return self.probe_base + float(self.values1[i])
        if self.axis2.variable == "probe_offset":
            return self.probe_base + float(self.values2[j])
        return self.probe_base

    def row_trace(self, axis1_value: float) -> tuple[float, np.ndarray, np.ndarray]:
        """1-D cut at the axis1 grid point nearest ``axis1_value``.

        Returns (actual axis1 value, axis2 grid, complex t row); used for the
        operating-point slice of temperature/field sweeps.
        """
        i = int(np.argmin(np.abs(self.values1 - axis1_value)))
        return float(self.values1[i]), self.values2.copy(), self.t[i].copy()


def _axis_fields(axis: SweepAxis, values):
    """Split one axis into (probe, cavity, delta_T, B) contributions."""
    zeros = np.zeros_like(values)
    fields = {name: zeros for name in AXIS_VARIABLES}
    fields[axis.variable] = values
    return (fields["probe_offset"], fields["cavity_offset"],
            fields["delta_T"], fields["B_field"])


def spectrum_sweep(
    spins: SpinEnsembleParams,
    cavity: CavityParams,
    env: EnvironmentState,
    axis1: SweepAxis,
    axis2: SweepAxis,
    quadrature_phase: float = math.pi / 2,
    omega_probe_fixed: float | None = None,
    threads: int | None = None,
) -> SweepResult:
    """Evaluate the transmission over a 2-D grid of swept variables.

    Sweep variables override the corresponding entry of ``env`` (or the
    cavity/probe offset); everything not swept is held at its ``env`` value.
    When the probe is not a sweep axis it sits at ``omega_probe_fixed``
    (default: the line center).  The heavy per-point loop runs in the
    selected grid kernel.
    """
    if axis1.variable == axis2.variable:
        raise ConfigError("sweep axes must differ")
    hw = spins.halfwidth
    if hw <= 0:
        raise ConfigError("total spin linewidth Gamma + gamma must be > 0")

    v1 = axis1.grid()
    v2 = axis2.grid()
    g1 = np.repeat(v1, v2.size)
    g2 = np.tile(v2, v1.size)

    p1, c1, t1, z1 = _axis_fields(axis1, g1)
    p2, c2, t2, z2 = _axis_fields(axis2, g2)

    swept = {axis1.variable, axis2.variable}
    base_thermal = 0.0 if "delta_T" in swept else env.delta_T
    base_b = 0.0 if "B_field" in swept else env.B_field

    delta_T = t1 + t2 + base_thermal
    b_field = z1 + z2 + base_b
    thermal_shift = env.dwa_dT * delta_T
    zeeman = env.gyromagnetic * b_field

    if "probe_offset" in swept:
        omega_probe = spins.omega_zfs + p1 + p2
    else:
        fixed = spins.omega_zfs if omega_probe_fixed is None else omega_probe_fixed
        omega_probe = np.full(g1.shape, fixed)
    if "cavity_offset" in swept:
        omega_c = spins.omega_zfs + c1 + c2 + env.R_ratio * thermal_shift
    else:
        omega_c = cavity.omega_c_ref + env.R_ratio * thermal_shift

    # Class centers: branch sign on the Zeeman term, fixed offset per class.
    env0 = EnvironmentState(
        delta_T=0.0, B_field=0.0, dwa_dT=env.dwa_dT,
        R_ratio=env.R_ratio, gyromagnetic=env.gyromagnetic,
    )
    omega_cls0, g_cls = class_frequencies(spins, env0)
    signs = np.array([
        1.0 if c.branch.value == "plus" else -1.0 for c in spins.spin_classes
    ])
    class_omegas = (omega_cls0[None, :]
                    + thermal_shift[:, None]
                    + signs[None, :] * zeeman[:, None])

    flat_t = transmission_grid(
        omega_probe, omega_c, class_omegas, g_cls ** 2,
        hw, cavity.kappa_out, cavity.kappa_loss, threads=threads,
    )
    if "probe_offset" in swept:
        probe_base = spins.omega_zfs
    else:
        probe_base = float(omega_probe[0])
    return SweepResult(
        axis1=axis1,
        axis2=axis2,
        values1=v1,
        values2=v2,
        t=flat_t.reshape(v1.size, v2.size),
        quadrature_phase=quadrature_phase,
        probe_base=probe_base,
        omega_c=np.asarray(omega_c).reshape(v1.size, v2.size),
    )


__all__ = [
    "AXIS_VARIABLES",
    "TransmissionPoint",
    "SusceptibilityTerm",
    "SweepAxis",
    "SweepResult",
    "quadrature_of",
    "susceptibility",
    "susceptibility_terms",
    "transmission_amplitude",
    "transmission_spectrum",
    "transmit",
    "spectrum_sweep",
]
