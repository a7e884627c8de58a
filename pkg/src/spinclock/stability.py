"""Measurement precision, probe bounds, polarization, and stability budgets.

Shot-noise-limited precision of a homodyne frequency measurement:

    dnu = (kappa / sqrt(tau * I)) * sqrt(1 + xi^2 / 2),   xi = kappa_l / kappa

with I the source power in photons/s and tau the integration time.  The
fractional form divides by the carrier (the zero-field line center).

The probe amplitude must stay low enough that the ensemble remains
polarized; per spin, beta << sqrt(kappa * gamma * (gamma + Gamma)) / (4 g0 |t|).

Environmental floors are evaluated as the actual polariton shift for a
static offset of the stabilization magnitude from the operating point (full
eigen solve, so exact at any offset), and combine with shot noise in
quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import CavityParams, EnvironmentState, ProbeParams, SpinEnsembleParams
from .polariton import (
    BRANCHES,
    OperatingPoint,
    branch_frequency_rel,
    eigenfrequencies,
)
from .presets import Preset


@dataclass(frozen=True)
class NoiseBudget:
    """Fractional-frequency noise components; total is the quadrature sum."""

    shot_sigma: float
    thermal_floor: float
    magnetic_floor: float
    pump_floor: float

    @property
    def floor_total(self) -> float:
        return math.sqrt(
            self.thermal_floor ** 2 + self.magnetic_floor ** 2 + self.pump_floor ** 2
        )

    @property
    def total(self) -> float:
        return math.sqrt(self.shot_sigma ** 2 + self.floor_total ** 2)


@dataclass(frozen=True)
class PolarizationState:
    """Steady state of the optically pumped ensemble."""

    P: float               # fraction of population in the polarized level
    rabi_drive: float      # microwave Rabi term Omega = g_single * alpha (rad/s)
    dP_dgamma: float       # sensitivity to the pump rate, per (rad/s)


@dataclass(frozen=True)
class BetaBound:
    """Low-excitation probe amplitude bound."""

    beta_max: float        # sqrt(photons/s)
    beta_sq_max: float     # photons/s
    unbounded: bool


@dataclass(frozen=True)
class StabilityCurve:
    """Fractional frequency deviation vs integration time."""

    taus: np.ndarray
    sigma_y: np.ndarray
    sigma_shot: np.ndarray
    budget: NoiseBudget

    @property
    def floor_total(self) -> float:
        return self.budget.floor_total

    @property
    def floor_markers(self) -> dict:
        """Named asymptotic floors, for annotating curves."""
        return {
            "thermal": self.budget.thermal_floor,
            "magnetic": self.budget.magnetic_floor,
            "pump": self.budget.pump_floor,
            "total": self.budget.floor_total,
        }

    @property
    def crossover_tau(self) -> float:
        """Integration time where shot noise meets the environmental floor."""
        floor = self.floor_total
        if floor <= 0:
            return math.inf
        return float((self.sigma_shot[0] * math.sqrt(self.taus[0]) / floor) ** 2)


def shot_noise_precision(cavity: CavityParams, probe: ProbeParams) -> float:
    """Frequency precision dnu (rad/s) after integrating for probe.tau."""
    if probe.photon_flux <= 0:
        raise ValueError("photon_flux must be > 0 for a shot-noise estimate")
    if probe.tau <= 0:
        raise ValueError("tau must be > 0")
    xi = cavity.loss_ratio
    return (cavity.kappa_out / math.sqrt(probe.tau * probe.photon_flux)) \
        * math.sqrt(1.0 + 0.5 * xi ** 2)


def shot_noise_fractional(
    cavity: CavityParams, probe: ProbeParams, carrier: float
) -> float:
    """dnu / nu against the given carrier frequency (rad/s)."""
    return shot_noise_precision(cavity, probe) / carrier


def low_excitation_bound(
    spins: SpinEnsembleParams, cavity: CavityParams, t_mag: float = 1.0
) -> BetaBound:
    """Largest probe amplitude keeping every spin class weakly excited."""
    g0 = spins.g0_single
    gamma = spins.gamma_pump
    if g0 == 0 or t_mag == 0:
        return BetaBound(math.inf, math.inf, True)
    numerator = math.sqrt(cavity.kappa_out * gamma * (gamma + spins.Gamma_deph))
    beta = numerator / (4.0 * g0 * abs(t_mag))
    return BetaBound(beta, beta ** 2, False)


def polarization_steady_state(
    gamma_pump: float, gamma_0: float, g_single: float, alpha_drive: float
) -> PolarizationState:
    """Rate-equation steady state P = (gamma + Omega) / (gamma + 2 Omega + gamma_0).

    Omega = g_single * alpha is the microwave Rabi term.  The pump-rate
    sensitivity is dP/dgamma = gamma_0 / (gamma + Omega + gamma_0)^2.
    """
    omega_r = g_single * alpha_drive
    denom = gamma_pump + 2.0 * omega_r + gamma_0
    if denom == 0:
        raise ValueError("all rates zero: steady state undefined")
    p = (gamma_pump + omega_r) / denom
    dp = gamma_0 / (gamma_pump + omega_r + gamma_0) ** 2
    return PolarizationState(P=p, rabi_drive=omega_r, dP_dgamma=dp)


def _dnu_dg(spins, env, detuning, branch):
    """Hellmann-Feynman coupling sensitivity: both branch couplings move together."""
    cavity = CavityParams(omega_c_ref=spins.omega_zfs + detuning, kappa_out=1.0)
    sol = eigenfrequencies(spins, cavity, env)
    v = sol.eigvecs[:, BRANCHES.index(branch)]
    return 2.0 * v[0] * (v[1] + v[2])


def coupling_sensitivity_to_pump(
    spins: SpinEnsembleParams,
    alpha_drive: float = 0.0,
) -> tuple[float, float]:
    """(dg/g per dgamma/gamma, nominal 1e-8) for side-by-side reporting.

    g tracks sqrt(P), so dg/g = dP / (2 P).  The nominal 1e-8 design figure
    is not recoverable from the rate model; both numbers are returned and
    the computed one is used downstream.
    """
    state = polarization_steady_state(
        spins.gamma_pump, spins.gamma_0, spins.g0_single, alpha_drive
    )
    dP = state.dP_dgamma * spins.gamma_pump  # dgamma = gamma * (dgamma/gamma)
    ratio = 0.5 * dP / state.P if state.P > 0 else 0.0
    return ratio, 1e-8


def environmental_floors(
    spins: SpinEnsembleParams,
    cavity: CavityParams,
    env: EnvironmentState,
    op: OperatingPoint,
    dT_stab: float,
    dB_stab: float,
    alpha_drive: float = 0.0,
    laser_stability: float = 1e-6,
) -> NoiseBudget:
    """Fractional floors for static offsets of the stabilization magnitudes.

    Thermal and magnetic floors come from full eigen solves displaced by
    dT_stab / dB_stab about the operating point; the pump floor converts
    laser power fluctuations into a coupling shift via the polarization
    steady state (g proportional to sqrt(P)).
    """
    d = op.detuning_D
    # differences taken in the line-center frame (no carrier rounding),
    # then normalized by the absolute branch frequency
    rel0 = branch_frequency_rel(spins, env, d, op.branch,
                                delta_T=env.delta_T, b_field=env.B_field)
    rel_t = branch_frequency_rel(spins, env, d, op.branch,
                                 delta_T=env.delta_T + dT_stab,
                                 b_field=env.B_field)
    rel_b = branch_frequency_rel(spins, env, d, op.branch,
                                 delta_T=env.delta_T,
                                 b_field=env.B_field + dB_stab)
    nu0 = spins.omega_zfs + rel0
    thermal = abs(rel_t - rel0) / nu0
    magnetic = abs(rel_b - rel0) / nu0

    dg_over_g, _ = coupling_sensitivity_to_pump(spins, alpha_drive)
    dg = dg_over_g * laser_stability * spins.branch_coupling
    pump = abs(_dnu_dg(spins, env, d, op.branch)) * dg / nu0

    return NoiseBudget(
        shot_sigma=0.0,
        thermal_floor=float(thermal),
        magnetic_floor=float(magnetic),
        pump_floor=float(pump),
    )


def stability_curve(
    preset: Preset,
    taus=None,
    dB_stab: float = 0.0,
    op: OperatingPoint | None = None,
) -> StabilityCurve:
    """Fractional frequency deviation vs integration time for a preset.

    sigma_y(tau) = sqrt(sigma_shot(tau)^2 + floor^2); the shot term follows
    the exact tau^(-1/2) law, the floor is the quadrature sum of the
    environmental components at the preset's operating point.
    """
    from .polariton import operating_point_numeric
    from .params import ProbeParams

    if taus is None:
        taus = np.logspace(-1, 4, 81)
    taus = np.asarray(taus, dtype=np.float64)
    if np.any(taus <= 0):
        raise ValueError("integration times must be > 0")

    if op is None:
        op = operating_point_numeric(preset.spins, preset.env)
    budget = environmental_floors(
        preset.spins, preset.cavity, preset.env, op,
        dT_stab=preset.dT_stab, dB_stab=dB_stab,
    )
    carrier = preset.spins.omega_zfs
    sigma_1s = shot_noise_fractional(
        preset.cavity,
        ProbeParams(
            omega_probe=preset.probe.omega_probe,
            photon_flux=preset.probe.photon_flux,
            beta_amplitude=preset.probe.beta_amplitude,
            tau=1.0,
            quadrature_phase=preset.probe.quadrature_phase,
        ),
        carrier,
    )
    sigma_shot = sigma_1s / np.sqrt(taus)
    floor = budget.floor_total
    sigma_y = np.sqrt(sigma_shot ** 2 + floor ** 2)
    return StabilityCurve(
        taus=taus, sigma_y=sigma_y, sigma_shot=sigma_shot, budget=budget
    )


__all__ = [
    "NoiseBudget",
    "PolarizationState",
    "BetaBound",
    "StabilityCurve",
    "shot_noise_precision",
    "shot_noise_fractional",
    "low_excitation_bound",
    "polarization_steady_state",
    "coupling_sensitivity_to_pump",
    "environmental_floors",
    "stability_curve",
]
