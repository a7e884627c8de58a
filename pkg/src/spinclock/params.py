"""Physical parameter types and the environment-to-frequency mapping.

The model couples an ensemble of spin-1 defects (two microwave transitions,
labelled ``plus`` and ``minus``) to a single microwave cavity mode.  The
ensemble is represented by weighted spectral classes per branch; the default
is one delta-function class per branch, which reproduces a homogeneous line.

All values stored here are angular (rad/s); see :mod:`spinclock.units`.
Temperatures are kelvin, magnetic fields tesla, times seconds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .units import from_hz, to_hz

_REL_TOL = 1e-12


class Branch(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


class ConfigError(ValueError):
    """Raised for invalid or unknown configuration entries."""


@dataclass(frozen=True)
class SpinClass:
    """One spectral class: a weighted line offset from its branch center.

    ``detuning_offset`` is relative to the Zeeman-shifted branch center
    (rad/s); ``weight`` is the fraction of the branch population it carries.
    """

    detuning_offset: float
    weight: float
    branch: Branch

    def __post_init__(self):
        if not (0.0 <= self.weight <= 1.0):
            raise ConfigError(f"class weight must be in [0, 1], got {self.weight}")
        if not math.isfinite(self.detuning_offset):
            raise ConfigError("class detuning_offset must be finite")


def _default_classes() -> tuple[SpinClass, ...]:
    return (SpinClass(0.0, 1.0, Branch.PLUS), SpinClass(0.0, 1.0, Branch.MINUS))


@dataclass(frozen=True)
class SpinEnsembleParams:
    """Collective parameters of the spin ensemble.

    ``g_collective`` is the per-branch ensemble coupling actually used by the
    model.  When omitted it is derived as ``g0_single * sqrt(n_spins)``; a
    preset may pin it explicitly (measured ensemble coupling), in which case
    ``coupling_consistency_ratio`` reports how far g0*sqrt(N) sits from it.
    """

    omega_zfs: float = from_hz(2.87e9)
    spin_classes: tuple[SpinClass, ...] = field(default_factory=_default_classes)
    gamma_pump: float = from_hz(1e6)
    Gamma_deph: float = from_hz(3e6)
    gamma_0: float = 100.0
    g0_single: float = from_hz(0.1)
    n_spins: float = 2.5e14
    g_collective: float | None = None

    def __post_init__(self):
        if self.omega_zfs <= 0:
            raise ConfigError("omega_zfs must be > 0")
        if self.n_spins < 1:
            raise ConfigError("n_spins must be >= 1")
        for name in ("gamma_pump", "Gamma_deph", "gamma_0", "g0_single"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.g_collective is not None and self.g_collective < 0:
            raise ConfigError("g_collective must be >= 0")
        if not isinstance(self.spin_classes, tuple):
            object.__setattr__(self, "spin_classes", tuple(self.spin_classes))
        for br in Branch:
            weights = [c.weight for c in self.spin_classes if c.branch is br]
            if weights and abs(sum(weights) - 1.0) > _REL_TOL:
                raise ConfigError(
                    f"weights of branch {br.value!r} sum to {sum(weights)}, expected 1"
                )
        # Class couplings g_j = g*sqrt(w_j) must recompose the branch coupling.
        g = self.branch_coupling
        for br in Branch:
            gj2 = sum(self.class_coupling(c) ** 2 for c in self.classes(br))
            if gj2 and abs(math.sqrt(gj2) - g) > _REL_TOL * g:
                raise ConfigError("class couplings do not recompose branch coupling")

    @property
    def branch_coupling(self) -> float:
        """Effective collective coupling g of one branch (rad/s)."""
        if self.g_collective is not None:
            return self.g_collective
        return self.g0_single * math.sqrt(self.n_spins)

    @property
    def coupling_consistency_ratio(self) -> float:
        """g0*sqrt(N) over the coupling in use; 1 when they agree."""
        return self.g0_single * math.sqrt(self.n_spins) / self.branch_coupling

    @property
    def halfwidth(self) -> float:
        """Spin line halfwidth (Gamma + gamma)/2 entering the susceptibility."""
        return 0.5 * (self.Gamma_deph + self.gamma_pump)

    def classes(self, branch: Branch) -> tuple[SpinClass, ...]:
        return tuple(c for c in self.spin_classes if c.branch is branch)

    def class_coupling(self, cls: SpinClass) -> float:
        return self.branch_coupling * math.sqrt(cls.weight)


@dataclass(frozen=True)
class CavityParams:
    """Microwave cavity: resonance at reference temperature, output and loss rates."""

    omega_c_ref: float = from_hz(2.87e9)
    kappa_out: float = from_hz(200e3)
    kappa_loss: float = 0.0

    def __post_init__(self):
        if self.kappa_out <= 0:
            raise ConfigError("kappa_out must be > 0")
        if self.kappa_loss < 0:
            raise ConfigError("kappa_loss must be >= 0")

    @property
    def loss_ratio(self) -> float:
        """xi = kappa_loss / kappa_out."""
        return self.kappa_loss / self.kappa_out


@dataclass(frozen=True)
class EnvironmentState:
    """Temperature offset, magnetic field, and the thermal/magnetic coefficients.

    ``R_ratio`` relates the cavity thermal coefficient to the spin one:
    d(omega_c)/dT = R * d(omega_a)/dT.  A negative R (opposite shifts) is what
    makes a temperature-insensitive operating point possible.
    """

    delta_T: float = 0.0
    B_field: float = 0.0
    dwa_dT: float = from_hz(77e3)
    R_ratio: float = -0.1
    gyromagnetic: float = from_hz(28e9)

    def __post_init__(self):
        for name in ("delta_T", "B_field", "dwa_dT", "R_ratio", "gyromagnetic"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")


@dataclass(frozen=True)
class ProbeParams:
    """Probe drive: frequency, source power, amplitude, integration time, phase."""

    omega_probe: float = from_hz(2.87e9)
    photon_flux: float = 1e18
    beta_amplitude: float = math.sqrt(0.5e18)
    tau: float = 1.0
    quadrature_phase: float = math.pi / 2

    def __post_init__(self):
        if self.photon_flux < 0:
            raise ConfigError("photon_flux must be >= 0")
        if self.tau <= 0:
            raise ConfigError("tau must be > 0")
        if self.beta_amplitude ** 2 > self.photon_flux * (1.0 + 1e-12):
            raise ConfigError("beta_amplitude^2 exceeds photon_flux")


def instantaneous_frequencies(
    spins: SpinEnsembleParams, cavity: CavityParams, env: EnvironmentState
) -> tuple[float, float, float]:
    """Environment-resolved transition and cavity frequencies.

    omega_pm = omega_zfs + (dwa/dT) dT +/- gyromagnetic * B
    omega_c  = omega_c_ref + R (dwa/dT) dT
    """
    thermal = env.dwa_dT * env.delta_T
    zeeman = env.gyromagnetic * env.B_field
    omega_plus = spins.omega_zfs + thermal + zeeman
    omega_minus = spins.omega_zfs + thermal - zeeman
    omega_c = cavity.omega_c_ref + env.R_ratio * thermal
    return omega_plus, omega_minus, omega_c


def class_frequencies(
    spins: SpinEnsembleParams, env: EnvironmentState
) -> tuple[np.ndarray, np.ndarray]:
    """Per-class line centers and couplings under the given environment.

    Returns (omega (M,), g (M,)) over all classes of both branches.
    """
    thermal = env.dwa_dT * env.delta_T
    zeeman = env.gyromagnetic * env.B_field
    omegas = []
    gs = []
    for cls in spins.spin_classes:
        sign = 1.0 if cls.branch is Branch.PLUS else -1.0
        omegas.append(spins.omega_zfs + thermal + sign * zeeman + cls.detuning_offset)
        gs.append(spins.class_coupling(cls))
    return np.asarray(omegas, dtype=np.float64), np.asarray(gs, dtype=np.float64)


# --- flat JSON config mapping -------------------------------------------------
#
# Keys carry explicit SI unit suffixes; frequencies are in Hz (cycles/s).

_SPIN_KEYS = {
    "omega_zfs_hz": "omega_zfs",
    "gamma_pump_hz": "gamma_pump",
    "gamma_dephasing_hz": "Gamma_deph",
    "gamma_relax_hz": "gamma_0",
    "g0_single_hz": "g0_single",
    "g_collective_hz": "g_collective",
}
_CAVITY_KEYS = {
    "omega_c_ref_hz": "omega_c_ref",
    "kappa_out_hz": "kappa_out",
    "kappa_loss_hz": "kappa_loss",
}
_ENV_SCALED = {
    "dwa_dt_hz_per_k": "dwa_dT",
    "gyromagnetic_hz_per_t": "gyromagnetic",
}
_ENV_PLAIN = {
    "delta_t_k": "delta_T",
    "b_field_t": "B_field",
    "r_ratio": "R_ratio",
}
_PROBE_KEYS = {
    "omega_probe_hz": "omega_probe",
}
_PROBE_PLAIN = {
    "photon_flux_per_s": "photon_flux",
    "beta_amplitude_sqrt_per_s": "beta_amplitude",
    "tau_s": "tau",
    "quadrature_phase_rad": "quadrature_phase",
}
_CLASS_KEYS = (
    "class_offsets_plus_hz",
    "class_weights_plus",
    "class_offsets_minus_hz",
    "class_weights_minus",
)

KNOWN_CONFIG_KEYS = frozenset(
    list(_SPIN_KEYS)
    + ["n_spins"]
    + list(_CAVITY_KEYS)
    + list(_ENV_SCALED)
    + list(_ENV_PLAIN)
    + list(_PROBE_KEYS)
    + list(_PROBE_PLAIN)
    + list(_CLASS_KEYS)
)


def params_to_config(
    spins: SpinEnsembleParams,
    cavity: CavityParams,
    env: EnvironmentState,
    probe: ProbeParams,
) -> dict:
    """Flatten the four parameter objects into one Hz-facing key-value dict."""
    cfg: dict = {}
    for key, attr in _SPIN_KEYS.items():
        value = getattr(spins, attr)
        cfg[key] = None if value is None else to_hz(value)
    cfg["n_spins"] = spins.n_spins
    cfg["class_offsets_plus_hz"] = [
        to_hz(c.detuning_offset) for c in spins.classes(Branch.PLUS)
    ]
    cfg["class_weights_plus"] = [c.weight for c in spins.classes(Branch.PLUS)]
    cfg["class_offsets_minus_hz"] = [
        to_hz(c.detuning_offset) for c in spins.classes(Branch.MINUS)
    ]
    cfg["class_weights_minus"] = [c.weight for c in spins.classes(Branch.MINUS)]
    for key, attr in _CAVITY_KEYS.items():
        cfg[key] = to_hz(getattr(cavity, attr))
    for key, attr in _ENV_SCALED.items():
        cfg[key] = to_hz(getattr(env, attr))
    for key, attr in _ENV_PLAIN.items():
        cfg[key] = getattr(env, attr)
    for key, attr in _PROBE_KEYS.items():
        cfg[key] = to_hz(getattr(probe, attr))
    for key, attr in _PROBE_PLAIN.items():
        cfg[key] = getattr(probe, attr)
    return cfg


def params_from_config(
    cfg: dict,
) -> tuple[SpinEnsembleParams, CavityParams, EnvironmentState, ProbeParams]:
    """Rebuild parameter objects from a flat config dict.

    Unknown keys are rejected so a typo cannot silently fall back to a
    default value.
    """
    unknown = sorted(set(cfg) - KNOWN_CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")

    def angular(key, default):
        if key not in cfg:
            return default
        value = cfg[key]
        return None if value is None else from_hz(value)

    def plain(key, default):
        return cfg.get(key, default)

    classes = []
    for branch, off_key, w_key in (
        (Branch.PLUS, "class_offsets_plus_hz", "class_weights_plus"),
        (Branch.MINUS, "class_offsets_minus_hz", "class_weights_minus"),
    ):
        offsets = cfg.get(off_key, [0.0])
        weights = cfg.get(w_key, [1.0])
        if len(offsets) != len(weights):
            raise ConfigError(f"{off_key} and {w_key} differ in length")
        for off, w in zip(offsets, weights):
            classes.append(SpinClass(from_hz(off), w, branch))

    spin_defaults = SpinEnsembleParams()
    spins = SpinEnsembleParams(
        omega_zfs=angular("omega_zfs_hz", spin_defaults.omega_zfs),
        spin_classes=tuple(classes),
        gamma_pump=angular("gamma_pump_hz", spin_defaults.gamma_pump),
        Gamma_deph=angular("gamma_dephasing_hz", spin_defaults.Gamma_deph),
        gamma_0=angular("gamma_relax_hz", spin_defaults.gamma_0),
        g0_single=angular("g0_single_hz", spin_defaults.g0_single),
        n_spins=plain("n_spins", spin_defaults.n_spins),
        g_collective=angular("g_collective_hz", None),
    )
    cavity_defaults = CavityParams()
    cavity = CavityParams(
        omega_c_ref=angular("omega_c_ref_hz", cavity_defaults.omega_c_ref),
        kappa_out=angular("kappa_out_hz", cavity_defaults.kappa_out),
        kappa_loss=angular("kappa_loss_hz", cavity_defaults.kappa_loss),
    )
    env_defaults = EnvironmentState()
    env = EnvironmentState(
        delta_T=plain("delta_t_k", env_defaults.delta_T),
        B_field=plain("b_field_t", env_defaults.B_field),
        dwa_dT=angular("dwa_dt_hz_per_k", env_defaults.dwa_dT),
        R_ratio=plain("r_ratio", env_defaults.R_ratio),
        gyromagnetic=angular("gyromagnetic_hz_per_t", env_defaults.gyromagnetic),
    )
    probe_defaults = ProbeParams()
    probe = ProbeParams(
        omega_probe=angular("omega_probe_hz", probe_defaults.omega_probe),
        photon_flux=plain("photon_flux_per_s", probe_defaults.photon_flux),
        beta_amplitude=plain("beta_amplitude_sqrt_per_s", probe_defaults.beta_amplitude),
        tau=plain("tau_s", probe_defaults.tau),
        quadrature_phase=plain("quadrature_phase_rad", probe_defaults.quadrature_phase),
    )
    return spins, cavity, env, probe


def save_config(path, cfg: dict) -> None:
    """Write a flat config dict as JSON (sorted keys, trailing newline)."""
    import json
    from pathlib import Path

    Path(path).write_text(json.dumps(cfg, sort_keys=True, indent=1) + "\n",
                          encoding="utf-8")


def load_config(path) -> dict:
    import json
    from pathlib import Path

    return json.loads(Path(path).read_text(encoding="utf-8"))


__all__ = [
    "Branch",
    "ConfigError",
    "SpinClass",
    "SpinEnsembleParams",
    "CavityParams",
    "EnvironmentState",
    "ProbeParams",
    "instantaneous_frequencies",
    "class_frequencies",
    "params_to_config",
    "params_from_config",
    "save_config",
    "load_config",
    "KNOWN_CONFIG_KEYS",
]
