"""Command-line front end: sweeps, operating-point reports, stability curves.

Every run writes its fully resolved configuration to a JSON provenance
sidecar next to the output; ``spinclock replay sidecar.json --out X``
re-executes from the sidecar and reproduces the output byte for byte.
Outputs contain no timestamps and use shortest round-trip float formatting,
so identical configurations give identical bytes.

Exit codes: 0 success, 2 configuration error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._kernels import active_backend
from .figures import FIGURE_NAMES, figure_setup
from .params import ConfigError
from .polariton import (
    NoOperatingPointError,
    operating_point_closed_form,
    operating_point_numeric,
)
from .presets import PRESET_NAMES, Preset, table1_preset
from .stability import environmental_floors, stability_curve
from .transmission import SweepAxis, quadrature_of, spectrum_sweep
from .units import from_hz, to_hz

_AXIS_UNIT = {
    "probe_offset": "hz",
    "cavity_offset": "hz",
    "delta_T": "k",
    "B_field": "t",
}


def _fmt(value) -> str:
    return repr(float(value))


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _write_table(path: Path, header, columns, fmt: str) -> None:
    """Write named columns as CSV or JSON with deterministic formatting."""
    if fmt == "json":
        doc = {name: [float(v) for v in col] for name, col in zip(header, columns)}
        _write_text(path, json.dumps(doc, sort_keys=True, indent=1) + "\n")
        return
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    _write_text(path, "\n".join(lines) + "\n")


def _sidecar_path(out: Path) -> Path:
    return out.with_name(out.name + ".provenance.json")


def _write_sidecar(out: Path, doc: dict) -> Path:
    path = _sidecar_path(out)
    _write_text(path, json.dumps(doc, sort_keys=True, indent=1) + "\n")
    return path


def _axis_to_doc(axis: SweepAxis) -> dict:
    unit = _AXIS_UNIT[axis.variable]
    scale = to_hz if unit == "hz" else float
    return {
        "variable": axis.variable,
        "start": scale(axis.start),
        "stop": scale(axis.stop),
        "points": axis.points,
        "unit": unit,
    }


def _axis_from_doc(doc: dict) -> SweepAxis:
    unit = _AXIS_UNIT.get(doc["variable"], "hz")
    scale = from_hz if unit == "hz" else float
    return SweepAxis(doc["variable"], scale(doc["start"]),
                     scale(doc["stop"]), doc["points"])


# --- configuration resolution ---------------------------------------------


def _base_preset(args) -> Preset:
    return table1_preset(getattr(args, "preset", None) or "current")


def _apply_overrides(preset: Preset, args, stability_mode: bool) -> Preset:
    spins, cavity, env, probe = preset.spins, preset.cavity, preset.env, preset.probe
    dT_stab = preset.dT_stab
    if getattr(args, "g_hz", None) is not None:
        spins = dataclasses.replace(spins, g_collective=from_hz(args.g_hz))
    if getattr(args, "kappa_hz", None) is not None:
        cavity = dataclasses.replace(cavity, kappa_out=from_hz(args.kappa_hz))
    if getattr(args, "R", None) is not None:
        env = dataclasses.replace(env, R_ratio=args.R)
    if getattr(args, "power_photons_per_s", None) is not None:
        flux = args.power_photons_per_s
        if flux <= 0:
            raise ConfigError("--power-photons-per-s must be > 0")
        probe = dataclasses.replace(
            probe, photon_flux=flux, beta_amplitude=math.sqrt(flux / 2.0)
        )
    if getattr(args, "dT_mk", None) is not None:
        if stability_mode:
            dT_stab = args.dT_mk * 1e-3
        else:
            env = dataclasses.replace(env, delta_T=args.dT_mk * 1e-3)
    if getattr(args, "B_nt", None) is not None and not stability_mode:
        env = dataclasses.replace(env, B_field=args.B_nt * 1e-9)
    return Preset(preset.name, spins, cavity, env, probe, dT_stab)


def _provenance(command: str, preset: Preset, args, extra: dict) -> dict:
    doc = {
        "tool": "spinclock",
        "version": __version__,
        "command": command,
        "seed": getattr(args, "seed", None),
        "config": preset.to_config(),
    }
    doc.update(extra)
    return doc


# --- spectrum ---------------------------------------------------------------


def _spectrum_from_doc(doc: dict, out: Path) -> None:
    preset = Preset.from_config(doc["config"])
    axis1 = _axis_from_doc(doc["axis1"])
    axis2 = _axis_from_doc(doc["axis2"])
    phase = doc["quadrature_phase_rad"]
    result = spectrum_sweep(
        preset.spins, preset.cavity, preset.env, axis1, axis2,
        quadrature_phase=phase,
    )

    unit1 = _AXIS_UNIT[axis1.variable]
    unit2 = _AXIS_UNIT[axis2.variable]
    v1 = result.values1 / (2.0 * math.pi) if unit1 == "hz" else result.values1
    v2 = result.values2 / (2.0 * math.pi) if unit2 == "hz" else result.values2
    n1, n2 = v1.size, v2.size
    flat = result.t.reshape(-1)
    _write_table(
        out,
        ("axis1", "axis2", "re_t", "im_t", "abs_t"),
        (
            np.repeat(v1, n2),
            np.tile(v2, n1),
            flat.real,
            flat.imag,
            np.abs(flat),
        ),
        doc["format"],
    )

    slice_value = doc.get("slice_axis1_value")
    if slice_value is not None:
        scale = from_hz(slice_value) if unit1 == "hz" else slice_value
        actual, grid2, row = result.row_trace(scale)
        g2 = grid2 / (2.0 * math.pi) if unit2 == "hz" else grid2
        _write_table(
            _slice_path(out),
            ("axis2", "re_t", "im_t", "abs_t", "quadrature"),
            (g2, row.real, row.imag, np.abs(row), quadrature_of(row, phase)),
            doc["format"],
        )


def _slice_path(out: Path) -> Path:
    return out.with_name(out.stem + "_slice" + out.suffix)


def _cmd_spectrum(args) -> int:
    out = Path(args.out)
    phase = math.radians(args.quadrature_deg)
    points = args.points

    if args.figure is not None:
        setup = figure_setup(args.figure, points=points)
        preset = Preset("figure-" + args.figure, setup.spins, setup.cavity,
                        setup.env, table1_preset("current").probe, 0.0)
        preset = _apply_overrides(preset, args, stability_mode=False)
        axis1, axis2 = setup.axis1, setup.axis2
        slice_value = setup.slice_axis1_value
    else:
        preset = _apply_overrides(_base_preset(args), args, stability_mode=False)
        axis1 = _parse_axis(args.axis1, points, "--axis1")
        axis2 = _parse_axis(args.axis2, points, "--axis2")
        slice_value = None

    unit1 = _AXIS_UNIT[axis1.variable]
    doc = _provenance(
        "spectrum", preset, args,
        {
            "format": args.format,
            "quadrature_phase_rad": phase,
            "axis1": _axis_to_doc(axis1),
            "axis2": _axis_to_doc(axis2),
            "slice_axis1_value": (
                None if slice_value is None
                else (to_hz(slice_value) if unit1 == "hz" else slice_value)
            ),
        },
    )
    _spectrum_from_doc(doc, out)
    _write_sidecar(out, doc)
    print(f"wrote {out} ({active_backend()} kernel)")
    return 0


def _parse_axis(spec: str | None, points: int, flag: str) -> SweepAxis:
    if spec is None:
        raise ConfigError(f"{flag} is required unless --figure is given "
                          "(format: variable:start:stop, external units)")
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ConfigError(f"{flag} must be variable:start:stop[:points]")
    variable = parts[0]
    if variable not in _AXIS_UNIT:
        raise ConfigError(
            f"{flag}: unknown variable {variable!r}; "
            f"choose from {', '.join(_AXIS_UNIT)}"
        )
    try:
        start, stop = float(parts[1]), float(parts[2])
        n = int(parts[3]) if len(parts) == 4 else points
    except ValueError as exc:
        raise ConfigError(f"{flag}: {exc}") from None
    scale = from_hz if _AXIS_UNIT[variable] == "hz" else float
    return SweepAxis(variable, scale(start), scale(stop), n)


# --- operating point ---------------------------------------------------------


def _operating_point_doc(doc: dict) -> dict:
    preset = Preset.from_config(doc["config"])
    op = operating_point_numeric(preset.spins, preset.env, branch=doc["branch"])
    budget = environmental_floors(
        preset.spins, preset.cavity, preset.env, op,
        dT_stab=preset.dT_stab, dB_stab=doc["db_stab_t"],
    )
    report = {
        "D_hz": to_hz(op.detuning_D),
        "branch": op.branch,
        "dnudT_residual_hz_per_K": to_hz(op.dnudT_residual),
        "curvature_hz_per_K2": to_hz(op.curvature_T),
        "curvature_hz_per_T2": to_hz(op.curvature_B),
        "thermal_floor_fractional": budget.thermal_floor,
        "magnetic_floor_fractional": budget.magnetic_floor,
        "params": doc["config"],
    }
    if preset.env.R_ratio < 0:
        d_closed = abs(operating_point_closed_form(
            preset.spins.branch_coupling, preset.env.R_ratio)[0])
        report["closed_form_D_hz"] = to_hz(d_closed)
        report["closed_form_delta_rel"] = abs(op.detuning_D - d_closed) / d_closed
    return report


def _cmd_operating_point(args) -> int:
    preset = _apply_overrides(_base_preset(args), args, stability_mode=True)
    doc = _provenance(
        "operating-point", preset, args,
        {"branch": args.branch, "db_stab_t": (args.B_nt or 0.0) * 1e-9},
    )
    report = _operating_point_doc(doc)
    text = json.dumps(report, sort_keys=True, indent=1) + "\n"
    if args.out:
        out = Path(args.out)
        _write_text(out, text)
        _write_sidecar(out, doc)
        print(f"wrote {out}")
    else:
        sys.stdout.write(text)
    return 0


# --- stability ----------------------------------------------------------------


def _stability_from_doc(doc: dict, out: Path) -> None:
    preset = Preset.from_config(doc["config"])
    taus = np.logspace(
        math.log10(doc["tau_start_s"]),
        math.log10(doc["tau_stop_s"]),
        doc["tau_points"],
    )
    curve = stability_curve(preset, taus=taus, dB_stab=doc["db_stab_t"])
    n = curve.taus.size
    _write_table(
        out,
        ("tau_s", "sigma_total", "sigma_shot",
         "floor_thermal", "floor_magnetic", "floor_pump"),
        (
            curve.taus,
            curve.sigma_y,
            curve.sigma_shot,
            np.full(n, curve.budget.thermal_floor),
            np.full(n, curve.budget.magnetic_floor),
            np.full(n, curve.budget.pump_floor),
        ),
        doc["format"],
    )


def _parse_tau_range(spec: str) -> tuple[float, float]:
    try:
        lo, hi = spec.split("..")
        lo, hi = float(lo), float(hi)
    except ValueError:
        raise ConfigError("--tau must look like 0.1..1e4") from None
    if lo <= 0 or hi <= lo:
        raise ConfigError("--tau range must be positive and increasing")
    return lo, hi


def _cmd_stability(args) -> int:
    preset = _apply_overrides(_base_preset(args), args, stability_mode=True)
    if preset.probe.photon_flux <= 0:
        raise ConfigError("--power-photons-per-s must be > 0")
    lo, hi = _parse_tau_range(args.tau)
    out = Path(args.out)
    doc = _provenance(
        "stability", preset, args,
        {
            "format": args.format,
            "tau_start_s": lo,
            "tau_stop_s": hi,
            "tau_points": args.tau_points,
            "db_stab_t": (args.B_nt or 0.0) * 1e-9,
        },
    )
    _stability_from_doc(doc, out)
    _write_sidecar(out, doc)
    print(f"wrote {out}")
    return 0


# --- replay -------------------------------------------------------------------


def _cmd_replay(args) -> int:
    doc = json.loads(Path(args.sidecar).read_text(encoding="utf-8"))
    command = doc.get("command")
    out = Path(args.out)
    if command == "spectrum":
        _spectrum_from_doc(doc, out)
    elif command == "stability":
        _stability_from_doc(doc, out)
    elif command == "operating-point":
        report = _operating_point_doc(doc)
        _write_text(out, json.dumps(report, sort_keys=True, indent=1) + "\n")
    else:
        raise ConfigError(f"sidecar has unknown command {command!r}")
    _write_sidecar(out, doc)
    print(f"wrote {out}")
    return 0


# --- parser -------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, stability: bool) -> None:
    p.add_argument("--preset", choices=PRESET_NAMES, default=None,
                   help="base parameter set (default: current)")
    p.add_argument("--g-hz", type=float, dest="g_hz",
                   help="override ensemble coupling g (Hz)")
    p.add_argument("--kappa-hz", type=float, dest="kappa_hz",
                   help="override cavity output rate kappa (Hz)")
    p.add_argument("--R", type=float, dest="R",
                   help="override cavity/spin thermal-coefficient ratio")
    p.add_argument("--power-photons-per-s", type=float,
                   dest="power_photons_per_s", help="override source power I")
    p.add_argument("--dT-mk", type=float, dest="dT_mk",
                   help=("temperature stability (mK)" if stability
                         else "static temperature offset (mK)"))
    p.add_argument("--B-nt", type=float, dest="B_nt",
                   help=("magnetic stability (nT)" if stability
                         else "static axial field (nT)"))
    p.add_argument("--seed", type=int, default=None,
                   help="recorded in provenance (sampling helpers only)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinclock",
        description="Coupled spin-cavity clock model: spectra, operating "
                    "points, stability curves.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser(
        "spectrum", help="2-D transmission sweep",
        description="Transmission grid over two swept variables. "
                    "--figure pins the reference panels: 2a/2b probe vs "
                    "cavity offset at +/-10 / +/-1 MHz spin splitting "
                    "(kappa=500 kHz, Gamma=3 MHz, g=5 MHz, probe and cavity "
                    "axes +/-25 MHz); 2c probe vs dT in [-200, 200] K at "
                    "|R|=0.3 with the cavity at the insensitive detuning; "
                    "2d probe vs B in [-500, 500] uT at the pinned "
                    "9.25 MHz detuning. 2c/2d also write a *_slice file "
                    "(the operating-point trace).",
    )
    sp.add_argument("--figure", choices=FIGURE_NAMES)
    sp.add_argument("--axis1", help="variable:start:stop[:points], "
                    "units Hz / K / T")
    sp.add_argument("--axis2", help="variable:start:stop[:points]")
    sp.add_argument("--points", type=int, default=1001,
                    help="grid points per axis (default 1001)")
    sp.add_argument("--quadrature-deg", type=float, default=90.0,
                    dest="quadrature_deg",
                    help="homodyne phase in degrees (90 = Im[t])")
    sp.add_argument("--out", required=True)
    _add_common(sp, stability=False)
    sp.set_defaults(func=_cmd_spectrum)

    op = sub.add_parser("operating-point",
                        help="find the temperature-insensitive detuning")
    op.add_argument("--branch", choices=("lower", "middle", "upper"),
                    default="upper")
    op.add_argument("--out", default=None,
                    help="report path (default: stdout)")
    _add_common(op, stability=True)
    op.set_defaults(func=_cmd_operating_point)

    st = sub.add_parser("stability",
                        help="fractional frequency deviation vs time")
    st.add_argument("--tau", default="0.1..1e4",
                    help="integration-time range, e.g. 0.1..1e4")
    st.add_argument("--tau-points", type=int, default=81, dest="tau_points")
    st.add_argument("--out", required=True)
    _add_common(st, stability=True)
    st.set_defaults(func=_cmd_stability)

    rp = sub.add_parser("replay", help="re-run from a provenance sidecar")
    rp.add_argument("sidecar")
    rp.add_argument("--out", required=True)
    rp.set_defaults(func=_cmd_replay)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NoOperatingPointError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
