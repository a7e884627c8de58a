"""Built-in parameter sets.

``table1_preset`` returns the two reference configurations used throughout
(the demonstrated "current" hardware set and the projected "outlook" set).
The ensemble coupling g is pinned explicitly in both; g0*sqrt(N) lands within
a factor ~1.6 of it and the discrepancy is reported via
``SpinEnsembleParams.coupling_consistency_ratio`` rather than enforced.

Rates the reference sets leave open (optical pump rate, intrinsic 1/T1) are
pinned here: microsecond-scale pumping and a 10 ms ensemble lifetime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .params import (
    CavityParams,
    ConfigError,
    EnvironmentState,
    ProbeParams,
    SpinEnsembleParams,
    params_from_config,
    params_to_config,
)
from .units import from_hz

_T1_SECONDS = 10e-3


@dataclass(frozen=True)
class Preset:
    """One named, fully resolved parameter set."""

    name: str
    spins: SpinEnsembleParams
    cavity: CavityParams
    env: EnvironmentState
    probe: ProbeParams
    dT_stab: float  # achievable temperature stability, kelvin

    def to_config(self) -> dict:
        cfg = params_to_config(self.spins, self.cavity, self.env, self.probe)
        cfg["preset_name"] = self.name
        cfg["dt_stab_k"] = self.dT_stab
        return cfg

    @classmethod
    def from_config(cls, cfg: dict) -> "Preset":
        cfg = dict(cfg)
        name = cfg.pop("preset_name", "custom")
        dT_stab = cfg.pop("dt_stab_k", 0.0)
        spins, cavity, env, probe = params_from_config(cfg)
        return cls(name, spins, cavity, env, probe, dT_stab)


def _build(name, kappa_hz, Gamma_hz, g_hz, R, g0_hz, n_spins, flux, dT_stab):
    omega_zfs = from_hz(2.87e9)
    spins = SpinEnsembleParams(
        omega_zfs=omega_zfs,
        gamma_pump=from_hz(1e6),
        Gamma_deph=from_hz(Gamma_hz),
        gamma_0=1.0 / _T1_SECONDS,
        g0_single=from_hz(g0_hz),
        n_spins=n_spins,
        g_collective=from_hz(g_hz),
    )
    cavity = CavityParams(
        omega_c_ref=omega_zfs,
        kappa_out=from_hz(kappa_hz),
        kappa_loss=0.0,
    )
    env = EnvironmentState(R_ratio=R)
    probe = ProbeParams(
        omega_probe=omega_zfs,
        photon_flux=flux,
        beta_amplitude=math.sqrt(flux / 2.0),  # half the source goes to the LO
        tau=1.0,
    )
    return Preset(name, spins, cavity, env, probe, dT_stab)


_PRESETS = {
    "current": dict(
        kappa_hz=200e3, Gamma_hz=3e6, g_hz=1e6, R=-0.1,
        g0_hz=0.1, n_spins=2.5e14, flux=1e18, dT_stab=10e-3,
    ),
    "outlook": dict(
        kappa_hz=50e3, Gamma_hz=1e6, g_hz=5e6, R=-0.05,
        g0_hz=0.3, n_spins=4e14, flux=1e20, dT_stab=1e-3,
    ),
}

PRESET_NAMES = tuple(_PRESETS)


def table1_preset(which: str) -> Preset:
    """Return the named reference parameter set ('current' or 'outlook')."""
    try:
        spec = _PRESETS[which]
    except KeyError:
        raise ConfigError(
            f"unknown preset {which!r}; choose from {', '.join(_PRESETS)}"
        ) from None
    return _build(which, **spec)


__all__ = ["Preset", "PRESET_NAMES", "table1_preset"]
