import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import TABLE2
from powerlife.electrical import MachineParameters, OperatingPoint, operating_points
from powerlife.losses import (
    DeviceCharacteristics,
    EnergyCurve,
    Resolution,
    VICurve,
    fit_device,
    fit_line,
    loss_output_period,
    loss_switching_period,
    output_period_average,
    read_energy_curve,
    read_vi_curve,
    switching_period_series,
)

SIMPLE = DeviceCharacteristics(
    u_ce=1.0, r_ce=0.05, u_f=1.0, r_f=0.05, e_on_ref=2e-3, e_off_ref=1e-3, e_rec_ref=1e-3, i_ref=25, u_ref=600, i_rated=25
)


def make_op(i_m, m, phi, omega_e=2 * math.pi * 50, u_dc=200.0, f_sw=10e3):
    a = lambda x: np.asarray(x, dtype=float)  # noqa: E731
    return OperatingPoint(
        i_m=a(i_m), omega_e=a(omega_e), m=a(m), phi=a(phi), u_d=a(0), u_q=a(0), i_d=a(0), i_q=a(i_m),
        m_raw=a(m), overmodulated=np.asarray(False), u_dc=u_dc, f_sw=f_sw,
    )


def test_two_point_vi_fit():
    u, r = fit_line([10, 20], [1.5, 2.0])
    assert u == pytest.approx(1.0, rel=1e-12) and r == pytest.approx(0.05, rel=1e-12)


def test_singular_fit():
    with pytest.raises(ValueError):
        fit_line([10, 10], [1.0, 2.0])


def test_curve_validation():
    with pytest.raises(ValueError):
        VICurve(np.array([1.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        EnergyCurve(np.array([2.0, 1.0]), np.array([1.0, 2.0]))


def test_energy_read_at_reference():
    vi = VICurve(np.array([10.0, 20.0]), np.array([1.5, 2.0]))
    e = EnergyCurve(np.array([12.5, 25.0]), np.array([2e-3, 4e-3]))
    dev = fit_device(vi, vi, e, e, i_ref=25, u_ref=600)
    assert dev.e_on_ref == pytest.approx(4e-3) and dev.e_off_ref == 0.0
    assert dev.e_sw_ref == pytest.approx(4e-3)
    with pytest.raises(ValueError):
        fit_device(vi, vi, e, e, i_ref=30, u_ref=600)


def test_fixture_device_fit_against_lsq_oracle(data_dir):
    dev = fit_device(
        read_vi_curve(data_dir / "fs25r12kt3_vi_igbt.csv"),
        read_vi_curve(data_dir / "fs25r12kt3_vi_diode.csv"),
        read_energy_curve(data_dir / "fs25r12kt3_esw.csv"),
        read_energy_curve(data_dir / "fs25r12kt3_erec.csv"),
        i_ref=25,
        u_ref=600,
    )
    # normal-equation least squares evaluated separately
    assert dev.u_ce == pytest.approx(0.953526011560694, rel=0.05)
    assert dev.r_ce == pytest.approx(0.040111753371868966, rel=0.05)
    assert dev.u_f == pytest.approx(0.8812716763005788, rel=0.05)
    assert dev.r_f == pytest.approx(0.026870905587668567, rel=0.05)
    assert (dev.e_on_ref, dev.e_off_ref, dev.e_rec_ref) == pytest.approx((2.6e-3, 2.4e-3, 1.8e-3))


def test_device_validation():
    with pytest.raises(ValueError):
        DeviceCharacteristics(0, 1, 1, 1, 1, 1, 1, 1, 1, 1)
    with pytest.raises(ValueError):
        DeviceCharacteristics(1, 1, 1, 1, 1, -1, 1, 1, 1, 1)


def test_output_period_zero_current():
    s = loss_output_period(make_op(0.0, 0.5, 0.3), SIMPLE)
    assert all(float(v) == 0 for v in s.terms().values())
    assert s.resolution is Resolution.OutputPeriod


def test_output_period_m0():
    s = loss_output_period(make_op(10.0, 0.0, 0.0), SIMPLE)
    assert float(s.p_cs) == pytest.approx(10 / (2 * math.pi) + 0.05 * 100 / 8, rel=1e-14)
    assert float(s.p_cs) == pytest.approx(2.2165, abs=5e-5)
    assert float(s.p_sws) == pytest.approx(10e3 * 3e-3 * (10 / 25) * (200 / 600) / math.pi, rel=1e-14)


def test_switching_period_zero_and_m0():
    op = make_op(10.0, 0.0, 0.0)
    z = loss_switching_period(op, SIMPLE, 0.0, 0.0)
    assert all(float(v) == 0 for v in z.terms().values())
    neg = loss_switching_period(op, SIMPLE, -4.0, 0.0)
    assert all(float(v) == 0 for v in neg.terms().values())
    s = loss_switching_period(op, SIMPLE, 10.0, math.pi / 2)
    assert float(s.p_cs) == pytest.approx(7.5, rel=1e-14)
    assert float(s.p_sws) == pytest.approx(10e3 * 3e-3 * (10 / 25) * (200 / 600), rel=1e-14)


def test_modulation_precondition():
    with pytest.raises(ValueError):
        loss_output_period(make_op(1.0, 1.2, 0.0), SIMPLE)


def test_complementarity_at_zero_mcos():
    s = loss_output_period(make_op(17.0, 0.8, math.pi / 2), SIMPLE)
    assert float(s.p_cs) == pytest.approx(float(s.p_cd), rel=1e-12)


def test_dc_hold_series():
    op = operating_points(0.0, 3.367, MachineParameters(), warn=False)
    s = switching_period_series(op, SIMPLE, 5)
    assert np.ptp(s.p_cs) == 0 and float(s.p_cs[0]) > 0
    avg = output_period_average(op, SIMPLE)
    assert avg.p_cs == pytest.approx(float(s.p_cs[0]))


def _quad_oracle(op, dev):
    """Continuous-time average of the instantaneous expressions over the positive half-wave."""
    from scipy.integrate import quad

    im, w, m, phi = float(op.i_m), float(op.omega_e), float(op.m), float(op.phi)
    T = 2 * math.pi / w
    i = lambda t: im * math.sin(w * t)  # noqa: E731
    k = float(op.f_sw) * float(op.u_dc) / (dev.i_ref * dev.u_ref)
    f = {
        "P_cS": lambda t: (dev.u_ce * i(t) + dev.r_ce * i(t) ** 2) * (1 + m * math.sin(w * t + phi)) / 2,
        "P_swS": lambda t: k * dev.e_sw_ref * i(t),
        "P_cD": lambda t: (dev.u_f * i(t) + dev.r_f * i(t) ** 2) * (1 - m * math.sin(w * t + phi)) / 2,
        "P_recD": lambda t: k * dev.e_rec_ref * i(t),
    }
    return {name: quad(g, 0, T / 2, limit=200)[0] / T for name, g in f.items()}


@pytest.mark.parametrize("point", sorted(TABLE2))
def test_closed_form_matches_quadrature(point, machine, device):
    op = operating_points(*TABLE2[point], machine)
    closed = loss_output_period(op, device).terms()
    oracle = _quad_oracle(op, device)
    for k in closed:
        assert float(closed[k]) == pytest.approx(oracle[k], rel=1e-9)


def test_frozen_hwfet_i_values(machine, device):
    # quadrature oracle values, frozen
    op = operating_points(362.78, 3.335, machine)
    s = loss_output_period(op, device).terms()
    expect = {"P_cS": 7.718304316692161, "P_swS": 5.361431668802735, "P_cD": 5.13841138922175, "P_recD": 1.9301154007689847}
    for k, v in expect.items():
        assert float(s[k]) == pytest.approx(v, rel=1e-6)


ops = st.builds(
    make_op,
    i_m=st.floats(0.1, 60),
    m=st.floats(0, 1),
    phi=st.floats(-math.pi, math.pi),
    omega_e=st.floats(2 * math.pi * 1, 2 * math.pi * 500),
)


@settings(max_examples=150, deadline=None)
@given(ops)
def test_switching_average_matches_output_period(op):
    closed = loss_output_period(op, SIMPLE).terms()
    avg = output_period_average(op, SIMPLE).terms()
    for k in closed:
        assert avg[k] == pytest.approx(float(closed[k]), rel=0.02)


@given(ops, st.floats(1.0, 3.0))
def test_monotone_in_current(op, factor):
    a = loss_output_period(op, SIMPLE).terms()
    bigger = make_op(float(op.i_m) * factor, float(op.m), float(op.phi), float(op.omega_e))
    b = loss_output_period(bigger, SIMPLE).terms()
    for k in a:
        assert float(b[k]) >= float(a[k])


@given(ops, st.floats(-1e3, 1e3), st.floats(-10, 10))
def test_non_negative(op, i_t, theta):
    for s in (loss_output_period(op, SIMPLE), loss_switching_period(op, SIMPLE, i_t, theta)):
        assert all(float(v) >= 0 for v in s.terms().values())
