import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from powerlife.electrical import (
    MachineParameters,
    OvermodulationWarning,
    instantaneous_current,
    operating_point,
    operating_points,
    wrap_angle,
)
from powerlife.mission import MissionSample

M = MachineParameters()


def test_machine_defaults_and_validation():
    assert (M.r_s, M.l_d, M.l_q, M.psi_f, M.pole_pairs, M.u_dc, M.f_sw) == (0.34, 5e-3, 5e-3, 0.022, 4, 200.0, 10e3)
    with pytest.raises(ValueError):
        MachineParameters(r_s=0)
    with pytest.raises(ValueError):
        MachineParameters(pole_pairs=0)
    with pytest.raises(ValueError):
        MachineParameters(pole_pairs=2.5)


def test_nycc_point_current():
    op = operating_point(MissionSample(0, 41.89, 3.367), M)
    assert op.i_q == pytest.approx(25.507575757575758, rel=1e-12)
    assert op.i_m == op.i_q and op.i_d == 0.0
    assert op.f_e == pytest.approx(4 * 41.89 / 60, rel=1e-12)
    assert isinstance(op.m, float)


def test_zero_torque():
    op = operating_point(MissionSample(0, 500.0, 0.0), M)
    w = 4 * 2 * math.pi * 500 / 60
    assert op.i_m == 0 and op.u_d == 0
    assert op.u_q == pytest.approx(w * 0.022, rel=1e-14)


def test_standstill_with_torque():
    op = operating_point(MissionSample(0, 0.0, 2.0), M)
    iq = 2 * 2.0 / (3 * 4 * 0.022)
    assert op.omega_e == 0
    assert op.m == pytest.approx(2 * 0.34 * iq / 200, rel=1e-14)
    assert op.phi == 0.0


def test_hand_evaluated_point():
    # HWFET situation I, evaluated by hand
    op = operating_point(MissionSample(0, 362.78, 3.335), M)
    iq = 2 * 3.335 / (3 * 4 * 0.022)
    w = 4 * 2 * math.pi * 362.78 / 60
    ud, uq = -w * 5e-3 * iq, 0.34 * iq + w * 0.022
    assert op.m == pytest.approx(2 * math.hypot(ud, uq) / 200, rel=1e-14)
    assert op.phi == pytest.approx(math.atan2(-ud, uq), rel=1e-14)
    assert op.m == pytest.approx(0.22603365490632293, rel=1e-12)
    assert op.phi == pytest.approx(1.0146194644271922, rel=1e-12)


def test_overmodulation_is_clamped_and_flagged():
    with pytest.warns(OvermodulationWarning):
        op = operating_points(np.array([100.0, 20000.0]), np.array([1.0, 1.0]), M)
    assert op.m[1] == 1.0 and op.m_raw[1] > 1.0
    assert list(op.overmodulated) == [False, True]
    assert op.n_overmodulated == 1
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        operating_points(np.array([20000.0]), np.array([1.0]), M, warn=False)


def test_torque_limit_enforced():
    with pytest.raises(ValueError):
        operating_points(1.0, 6.0, MachineParameters(torque_max=5.0))


def test_instantaneous_current():
    op = operating_points(0.0, 0.0, M)
    op = type(op)(**{**op.__dict__, "i_m": 10.0, "omega_e": 2 * math.pi})
    assert instantaneous_current(op, 0.25) == pytest.approx(10.0)
    assert instantaneous_current(op, 0.5) == pytest.approx(0.0, abs=1e-12)
    dc = operating_point(MissionSample(0, 0.0, 3.367), M)
    np.testing.assert_allclose(instantaneous_current(dc, np.linspace(0, 5, 7)), 25.507575757575758)


def test_wrap_angle_interval():
    x = np.array([-np.pi, np.pi, 3 * np.pi, -3 * np.pi, 0.0, 7.0])
    w = wrap_angle(x)
    assert np.all(w > -np.pi) and np.all(w <= np.pi)
    np.testing.assert_allclose(np.cos(w), np.cos(x), atol=1e-12)
    assert w[0] == pytest.approx(np.pi)


@given(st.floats(0, 3000), st.floats(-40, 40))
def test_sign_flip(speed, torque):
    a = operating_points(speed, torque, M, warn=False)
    b = operating_points(speed, -torque, M, warn=False)
    assert b.i_q == -a.i_q
    assert b.i_m == a.i_m


def test_current_slope_on_random_grid():
    rng = np.random.default_rng(7)
    tq = rng.uniform(-50, 50, 2000)
    op = operating_points(rng.uniform(0, 5000, tq.size), tq, M, warn=False)
    slope = np.polyfit(np.abs(tq), op.i_m, 1)[0]
    assert abs(slope - 2 / (3 * 4 * 0.022)) <= 1e-12 * (2 / (3 * 4 * 0.022))
    assert np.all(op.phi > -np.pi) and np.all(op.phi <= np.pi)


def test_modulation_monotone_in_speed_for_motoring():
    speed = np.linspace(0, 6000, 601)
    for tq in (0.0, 0.5, 2.0, 3.4, 20.0):
        m = operating_points(speed, np.full_like(speed, tq), M, warn=False).m
        assert np.all(np.diff(m) >= 0)
