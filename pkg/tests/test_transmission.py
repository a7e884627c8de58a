import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinclock.figures import figure_setup
from spinclock.params import (
    Branch,
    CavityParams,
    ConfigError,
    EnvironmentState,
    SpinClass,
    SpinEnsembleParams,
)
from spinclock.transmission import (
    SweepAxis,
    quadrature_of,
    spectrum_sweep,
    susceptibility,
    susceptibility_terms,
    transmission_spectrum,
    transmit,
)
from spinclock.units import from_hz, to_hz

ZFS = from_hz(2.87e9)


def _single_line(g_hz, total_width_hz):
    # one class on the plus branch only; Gamma carries the whole linewidth
    return SpinEnsembleParams(
        spin_classes=(SpinClass(0.0, 1.0, Branch.PLUS),),
        gamma_pump=0.0,
        Gamma_deph=from_hz(total_width_hz),
        g_collective=from_hz(g_hz),
    )


def test_susceptibility_on_resonance_is_real():
    spins = _single_line(1e6, 8e6)
    c = susceptibility(spins, EnvironmentState(), ZFS)
    expected = from_hz(1e6) ** 2 / (from_hz(8e6) / 2)
    assert c.imag == pytest.approx(0.0, abs=1e-6)
    assert c.real == pytest.approx(expected, rel=1e-12)


def test_susceptibility_vanishes_without_coupling():
    spins = SpinEnsembleParams(g_collective=0.0)
    omegas = ZFS + np.linspace(-from_hz(20e6), from_hz(20e6), 7)
    c = susceptibility(spins, EnvironmentState(), omegas)
    assert np.all(c == 0)


def test_susceptibility_antisymmetric_at_midpoint():
    # two branches at +/-10 MHz with equal coupling: Im C = 0 midway
    spins = SpinEnsembleParams(g_collective=from_hz(1e6))
    env = EnvironmentState(B_field=10e6 / 28e9)
    c_mid = susceptibility(spins, env, ZFS)
    assert abs(c_mid.imag) <= 1e-9 * abs(c_mid.real)
    # and antisymmetric about the midpoint
    delta = from_hz(3e6)
    c_hi = susceptibility(spins, env, ZFS + delta)
    c_lo = susceptibility(spins, env, ZFS - delta)
    assert c_hi.imag == pytest.approx(-c_lo.imag, rel=1e-9)
    assert c_hi.real == pytest.approx(c_lo.real, rel=1e-9)


def test_zero_linewidth_rejected():
    spins = SpinEnsembleParams(gamma_pump=0.0, Gamma_deph=0.0)
    with pytest.raises(ConfigError):
        susceptibility(spins, EnvironmentState(), ZFS)
    with pytest.raises(ConfigError):
        susceptibility_terms(spins, EnvironmentState(), ZFS)


def test_susceptibility_terms_recompose_the_sum():
    spins = SpinEnsembleParams(g_collective=from_hz(2e6))
    env = EnvironmentState(B_field=5e6 / 28e9)
    omega = ZFS + from_hz(1.7e6)
    terms = susceptibility_terms(spins, env, omega)
    assert len(terms) == 2
    assert all(term.halfwidth == spins.halfwidth for term in terms)
    total = sum(term.value for term in terms)
    assert total == pytest.approx(susceptibility(spins, env, omega), rel=1e-12)


def test_transmit_unit_on_resonance_lossless():
    cavity = CavityParams(omega_c_ref=ZFS, kappa_out=from_hz(200e3))
    tp = transmit(cavity, 0.0, ZFS, EnvironmentState())
    assert tp.t_complex == pytest.approx(1.0 + 0j)
    assert tp.delta_cavity == 0.0


def test_transmit_matched_loss_is_half():
    kappa = from_hz(200e3)
    cavity = CavityParams(omega_c_ref=ZFS, kappa_out=kappa, kappa_loss=kappa)
    tp = transmit(cavity, 0.0, ZFS, EnvironmentState())
    assert tp.t_complex == pytest.approx(0.5 + 0j)


def test_transmit_halfwidth_detuning():
    kappa = from_hz(200e3)
    cavity = CavityParams(omega_c_ref=ZFS + kappa, kappa_out=kappa)
    tp = transmit(cavity, 0.0, ZFS, EnvironmentState())
    assert tp.t_complex == pytest.approx(1.0 / (1.0 + 1.0j), rel=1e-12)
    assert abs(tp.t_complex) ** 2 == pytest.approx(0.5, rel=1e-12)


def test_quadrature_selects_imaginary_part_by_default():
    cavity = CavityParams(omega_c_ref=ZFS + from_hz(100e3), kappa_out=from_hz(200e3))
    tp = transmit(cavity, 0.0, ZFS, EnvironmentState())
    assert tp.quadrature == pytest.approx(tp.t_complex.imag, rel=1e-12)
    tp0 = transmit(cavity, 0.0, ZFS, EnvironmentState(), quadrature_phase=0.0)
    assert tp0.quadrature == pytest.approx(tp.t_complex.real, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    g_hz=st.floats(0.0, 20e6),
    width_hz=st.floats(1e3, 20e6),
    kappa_hz=st.floats(1e3, 5e6),
    loss_ratio=st.floats(0.0, 3.0),
    split_hz=st.floats(0.0, 30e6),
    probe_off_hz=st.floats(-60e6, 60e6),
    cav_off_hz=st.floats(-40e6, 40e6),
)
def test_passivity_property(g_hz, width_hz, kappa_hz, loss_ratio,
                            split_hz, probe_off_hz, cav_off_hz):
    """|t| <= 1 for any passive ensemble and lossy cavity."""
    spins = SpinEnsembleParams(
        gamma_pump=0.0, Gamma_deph=from_hz(width_hz), g_collective=from_hz(g_hz)
    )
    kappa = from_hz(kappa_hz)
    cavity = CavityParams(
        omega_c_ref=ZFS + from_hz(cav_off_hz),
        kappa_out=kappa,
        kappa_loss=loss_ratio * kappa,
    )
    env = EnvironmentState(B_field=split_hz / 28e9)
    t = transmission_spectrum(spins, cavity, env, ZFS + from_hz(probe_off_hz))
    assert abs(t) <= 1.0 + 1e-12
    c = susceptibility(spins, env, ZFS + from_hz(probe_off_hz))
    assert c.real >= 0.0


def test_quadrature_completeness_on_grid():
    setup = figure_setup("2a", points=61)
    res = spectrum_sweep(setup.spins, setup.cavity, setup.env,
                         setup.axis1, setup.axis2)
    lhs = res.t.real ** 2 + res.t.imag ** 2
    assert np.allclose(lhs, res.abs_t ** 2, rtol=1e-12, atol=0)


def test_reciprocity_in_probe_detuning():
    # symmetric lines, cavity on the line center: |t| even in probe offset
    spins = SpinEnsembleParams(g_collective=from_hz(2e6), gamma_pump=0.0)
    cavity = CavityParams(omega_c_ref=ZFS, kappa_out=from_hz(500e3))
    env = EnvironmentState(B_field=5e6 / 28e9)
    offsets = np.linspace(from_hz(0.1e6), from_hz(20e6), 40)
    t_hi = transmission_spectrum(spins, cavity, env, ZFS + offsets)
    t_lo = transmission_spectrum(spins, cavity, env, ZFS - offsets)
    assert np.allclose(np.abs(t_hi), np.abs(t_lo), rtol=1e-10)


def _visible_peaks(row, floor=0.05):
    peaks = []
    for j in range(1, row.size - 1):
        if row[j] > row[j - 1] and row[j] > row[j + 1] and row[j] >= floor:
            peaks.append(j)
    return peaks


def test_panel_2a_shows_three_branches():
    setup = figure_setup("2a", points=601)
    res = spectrum_sweep(setup.spins, setup.cavity, setup.env,
                         setup.axis1, setup.axis2)
    row = res.abs_t[np.argmin(np.abs(res.values1))]
    assert len(_visible_peaks(row)) == 3


def test_panel_2b_shows_two_branches():
    # nearly degenerate transitions: the dark middle feature drops out
    setup = figure_setup("2b", points=601)
    res = spectrum_sweep(setup.spins, setup.cavity, setup.env,
                         setup.axis1, setup.axis2)
    row = res.abs_t[np.argmin(np.abs(res.values1))]
    assert len(_visible_peaks(row)) == 2


def test_panel_2d_even_in_field():
    setup = figure_setup("2d", points=201)
    res = spectrum_sweep(setup.spins, setup.cavity, setup.env,
                         setup.axis1, setup.axis2)
    # axis1 is the field: |t|(B) == |t|(-B) columnwise
    assert np.allclose(res.abs_t, res.abs_t[::-1], rtol=1e-9, atol=1e-12)


def test_operating_point_slice_trace():
    setup = figure_setup("2c", points=101)
    res = spectrum_sweep(setup.spins, setup.cavity, setup.env,
                         setup.axis1, setup.axis2)
    value, grid, row = res.row_trace(0.0)
    assert value == 0.0
    assert grid.size == row.size == 101
    # the slice keeps a sharp phase response: quadrature swings sign
    quad = quadrature_of(row, math.pi / 2)
    assert quad.max() > 0.05 and quad.min() < -0.05


def _interpolated_peak(values, row):
    j = int(np.argmax(row))
    if j in (0, row.size - 1):
        return values[j]
    # parabolic refinement through the three points around the maximum
    y0, y1, y2 = row[j - 1], row[j], row[j + 1]
    denom = y0 - 2 * y1 + y2
    frac = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
    step = values[1] - values[0]
    return values[j] + frac * step


def test_panel_2c_peak_frozen_against_temperature():
    # at the insensitive detuning the branch moves quadratically: over
    # +/-50 K the peak shifts by a few hundred kHz while the bare line
    # moves by 77 kHz/K * 50 K = 3.85 MHz
    setup = figure_setup("2c", points=601)
    res = spectrum_sweep(setup.spins, setup.cavity, setup.env,
                         setup.axis1, setup.axis2)
    i0 = int(np.argmin(np.abs(res.values1)))
    i_hi = int(np.argmin(np.abs(res.values1 - 50.0)))
    peak0 = _interpolated_peak(res.values2, res.abs_t[i0])
    peak_hi = _interpolated_peak(res.values2, res.abs_t[i_hi])
    bare_shift = setup.env.dwa_dT * 50.0
    assert abs(peak_hi - peak0) < 0.15 * bare_shift


def test_sweep_rejects_empty_axis_and_duplicates():
    with pytest.raises(ConfigError):
        SweepAxis("probe_offset", 0.0, 1.0, 0)
    with pytest.raises(ConfigError):
        SweepAxis("nonsense", 0.0, 1.0, 5)
    spins = SpinEnsembleParams()
    cavity = CavityParams()
    ax = SweepAxis("probe_offset", -1.0, 1.0, 3)
    with pytest.raises(ConfigError):
        spectrum_sweep(spins, cavity, EnvironmentState(), ax, ax)


def test_sweep_point_accessor():
    setup = figure_setup("2a", points=21)
    res = spectrum_sweep(setup.spins, setup.cavity, setup.env,
                         setup.axis1, setup.axis2)
    tp = res.point(3, 4)
    assert tp.t_complex == res.t[3, 4]
    assert tp.omega_probe == pytest.approx(
        setup.spins.omega_zfs + res.values2[4]
    )
    # cavity detuning of the grid point: cavity offset minus probe offset
    assert tp.delta_cavity == pytest.approx(
        res.values1[3] - res.values2[4], rel=1e-9, abs=1e-3
    )


def test_non_probe_sweep_axes():
    # temperature vs field grid at fixed probe
    spins = SpinEnsembleParams(g_collective=from_hz(1e6), gamma_pump=0.0)
    cavity = CavityParams(omega_c_ref=ZFS + from_hz(5e6), kappa_out=from_hz(500e3))
    ax1 = SweepAxis("delta_T", -10.0, 10.0, 5)
    ax2 = SweepAxis("B_field", -1e-4, 1e-4, 7)
    res = spectrum_sweep(spins, cavity, EnvironmentState(R_ratio=-0.3),
                         ax1, ax2, omega_probe_fixed=ZFS + from_hz(6e6))
    assert res.t.shape == (5, 7)
    assert np.all(np.abs(res.t) <= 1.0)
