"""Quasi-steady PMSM operating points under i_d = 0 control.

All functions broadcast over numpy arrays so a whole resampled profile can
be mapped in one call.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .mission import MissionSample

TWO_PI = 2.0 * np.pi


class OvermodulationWarning(UserWarning):
    """Modulation index above 1 was clamped."""


@dataclass(frozen=True)
class MachineParameters:
    r_s: float = 0.34
    l_d: float = 5e-3
    l_q: float = 5e-3
    psi_f: float = 0.022
    pole_pairs: int = 4
    u_dc: float = 200.0
    f_sw: float = 10e3
    torque_max: float = float("inf")

    def __post_init__(self):
        for name in ("r_s", "l_d", "l_q", "psi_f", "u_dc", "f_sw", "torque_max"):
            if not getattr(self, name) > 0:
                raise ValueError(f"machine parameter {name} must be positive")
        if int(self.pole_pairs) != self.pole_pairs or self.pole_pairs < 1:
            raise ValueError("pole_pairs must be an integer >= 1")

    @property
    def torque_constant(self) -> float:
        """q-axis current per unit torque, A/(N*m)."""
        return 2.0 / (3.0 * self.pole_pairs * self.psi_f)


@dataclass(frozen=True, eq=False)
class OperatingPoint:
    """Electrical state of the inverter leg; fields may be scalars or arrays.

    ``m`` is clamped to [0, 1]; ``m_raw`` keeps the unclamped value and
    ``overmodulated`` flags the samples where clamping happened.  ``u_dc``
    and ``f_sw`` are carried along because the loss formulas need them.
    """

    i_m: np.ndarray
    omega_e: np.ndarray
    m: np.ndarray
    phi: np.ndarray
    u_d: np.ndarray
    u_q: np.ndarray
    i_d: np.ndarray
    i_q: np.ndarray
    m_raw: np.ndarray
    overmodulated: np.ndarray
    u_dc: float
    f_sw: float

    @property
    def f_e(self):
        return self.omega_e / TWO_PI

    @property
    def n_overmodulated(self) -> int:
        return int(np.count_nonzero(self.overmodulated))


def wrap_angle(x):
    """Wrap to the half-open interval (-pi, pi]."""
    return x - TWO_PI * np.ceil((x - np.pi) / TWO_PI)


def operating_points(speed_rpm, torque_nm, machine: MachineParameters, warn: bool = True) -> OperatingPoint:
    speed_rpm = np.asarray(speed_rpm, dtype=float)
    torque_nm = np.asarray(torque_nm, dtype=float)
    if np.any(np.abs(torque_nm) > machine.torque_max):
        raise ValueError(f"|torque| exceeds the machine limit of {machine.torque_max:g} N*m")

    i_q = machine.torque_constant * torque_nm
    i_d = np.zeros_like(i_q)
    omega_e = machine.pole_pairs * speed_rpm * (TWO_PI / 60.0)
    # steady state: derivative terms dropped
    u_d = machine.r_s * i_d - omega_e * machine.l_q * i_q
    u_q = machine.r_s * i_q - omega_e * machine.l_d * i_d + omega_e * machine.psi_f
    m_raw = 2.0 * np.hypot(u_d, u_q) / machine.u_dc
    over = m_raw > 1.0
    if warn and np.any(over):
        warnings.warn(
            f"{int(np.count_nonzero(over))} sample(s) overmodulated (m > 1); clamped to 1",
            OvermodulationWarning,
            stacklevel=2,
        )
    phi = wrap_angle(np.arctan2(-u_d, u_q) - np.arctan2(-i_d, i_q))
    return OperatingPoint(
        i_m=np.abs(i_q),
        omega_e=omega_e,
        m=np.minimum(m_raw, 1.0),
        phi=phi,
        u_d=u_d,
        u_q=u_q,
        i_d=i_d,
        i_q=i_q,
        m_raw=m_raw,
        overmodulated=over,
        u_dc=machine.u_dc,
        f_sw=machine.f_sw,
    )


def operating_point(sample: MissionSample, machine: MachineParameters) -> OperatingPoint:
    """Operating point of a single mission sample (scalar fields)."""
    op = operating_points(sample.speed, sample.torque, machine)
    return OperatingPoint(
        **{
            k: (v.item() if isinstance(v, np.ndarray) else v)
            for k, v in op.__dict__.items()
        }
    )


def instantaneous_current(op: OperatingPoint, t):
    """Phase current ``I_m*sin(omega_e*t)``; held at ``I_m`` when omega_e is 0."""
    i = op.i_m * np.sin(op.omega_e * np.asarray(t, dtype=float))
    return np.where(op.omega_e == 0, op.i_m, i)
