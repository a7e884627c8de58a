"""Numerical model of a cavity-stabilized spin-ensemble microwave clock.

Modules
-------
params        parameter types, environment mapping, flat JSON configs
presets       reference parameter sets ('current', 'outlook')
transmission  probe transmission, susceptibility, 2-D sweeps
polariton     coupled-mode eigenfrequencies and insensitive operating points
stability     shot-noise precision, probe bounds, noise floors, sigma_y(tau)
figures       pinned sweep setups for the reference spectrum panels
cli           command-line interface (spectrum / operating-point / stability)
"""

__version__ = "0.1.0"

from . import figures
from ._kernels import HAVE_COMPILED, active_backend
from .params import (
    Branch,
    CavityParams,
    ConfigError,
    EnvironmentState,
    ProbeParams,
    SpinClass,
    SpinEnsembleParams,
    class_frequencies,
    instantaneous_frequencies,
    params_from_config,
    params_to_config,
)
from .polariton import (
    NoOperatingPointError,
    OperatingPoint,
    PolaritonSolution,
    branch_frequency_at,
    dnu_dT,
    dnu_dT_degenerate,
    eigenfrequencies,
    magnetic_response,
    operating_point_closed_form,
    operating_point_numeric,
    polariton_energies_degenerate,
)
from .presets import Preset, table1_preset
from .stability import (
    BetaBound,
    NoiseBudget,
    PolarizationState,
    StabilityCurve,
    environmental_floors,
    low_excitation_bound,
    polarization_steady_state,
    shot_noise_fractional,
    shot_noise_precision,
    stability_curve,
)
from .transmission import (
    SweepAxis,
    SweepResult,
    TransmissionPoint,
    spectrum_sweep,
    susceptibility,
    transmission_spectrum,
    transmit,
)
from .units import from_hz, to_hz
