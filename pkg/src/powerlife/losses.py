"""IGBT and diode loss models at two time resolutions.

* output-period average: closed-form average over one fundamental period
  (SPWM application-note formulas), constant within the period;
* switching-period average: losses held constant within one PWM period and
  driven by the instantaneous phase current.

Switching energies scale linearly from the datasheet reference point,
``E(i) = E_ref * (i / I*) * (U_dc / U*)``.  Both models describe the upper
IGBT and its complementary freewheeling diode, which only carry current on
the positive half-wave of the phase current.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .electrical import OperatingPoint


class Resolution(enum.Enum):
    OutputPeriod = "t_o"
    SwitchingPeriod = "t_sw"


@dataclass(frozen=True)
class DeviceCharacteristics:
    """Fitted conduction and switching parameters of one IGBT/diode pair.

    Energies are in joules at the datasheet test point (``i_ref``, ``u_ref``).
    ``e_off_ref`` is 0 when the device was fitted from a combined
    ``E_on + E_off`` curve.
    """

    u_ce: float
    r_ce: float
    u_f: float
    r_f: float
    e_on_ref: float
    e_off_ref: float
    e_rec_ref: float
    i_ref: float
    u_ref: float
    i_rated: float

    def __post_init__(self):
        for name in ("u_ce", "r_ce", "u_f", "r_f", "e_on_ref", "e_rec_ref", "i_ref", "u_ref", "i_rated"):
            if not getattr(self, name) > 0:
                raise ValueError(f"device parameter {name} must be positive, got {getattr(self, name)!r}")
        if self.e_off_ref < 0:
            raise ValueError("e_off_ref must be non-negative")

    @property
    def e_sw_ref(self) -> float:
        return self.e_on_ref + self.e_off_ref


@dataclass(frozen=True, eq=False)
class VICurve:
    current: np.ndarray
    voltage: np.ndarray

    def __post_init__(self):
        _check_curve(self.current, self.voltage)


@dataclass(frozen=True, eq=False)
class EnergyCurve:
    """Energy vs current; ``energy`` is the sum of all columns in ``parts``."""

    current: np.ndarray
    energy: np.ndarray
    parts: dict | None = None

    def __post_init__(self):
        _check_curve(self.current, self.energy)


def _check_curve(x, y):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError("curve columns must be 1-D and of equal length")
    if x.size < 2:
        raise ValueError("a curve needs at least two points")
    if np.any(np.diff(x) <= 0):
        raise ValueError("curve currents must be strictly increasing")


def _read_columns(path: str | Path) -> dict[str, np.ndarray]:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise ValueError(f"{path}: no data rows")
    header = [h.strip() for h in rows[0]]
    try:
        data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
    if data.shape[1] != len(header):
        raise ValueError(f"{path}: row width does not match header")
    return {h: data[:, k] for k, h in enumerate(header)}


def read_vi_curve(path: str | Path) -> VICurve:
    """Read a ``current_a,voltage_v`` table."""
    cols = _read_columns(path)
    return VICurve(cols["current_a"], cols["voltage_v"])


def read_energy_curve(path: str | Path) -> EnergyCurve:
    """Read ``current_a,energy_j`` or ``current_a,eon_j,eoff_j[,...]`` tables."""
    cols = _read_columns(path)
    current = cols.pop("current_a")
    if "energy_j" in cols:
        return EnergyCurve(current, cols["energy_j"])
    if not cols:
        raise ValueError(f"{path}: no energy columns")
    return EnergyCurve(current, sum(cols.values()), parts=cols)


def fit_line(current, voltage) -> tuple[float, float]:
    """Least-squares ``v = u0 + r*i``; returns ``(u0, r)``."""
    i = np.asarray(current, dtype=float)
    v = np.asarray(voltage, dtype=float)
    if i.size < 2 or np.ptp(i) == 0:
        raise ValueError("singular V-I fit: need at least two distinct currents")
    r, u0 = np.polyfit(i, v, 1)
    return float(u0), float(r)


def _energy_at(curve_i, curve_e, i_ref) -> float:
    if not curve_i[0] <= i_ref <= curve_i[-1]:
        raise ValueError(f"reference current {i_ref:g} A lies outside the energy curve")
    return float(np.interp(i_ref, curve_i, curve_e))


def fit_device(
    vi_igbt: VICurve,
    vi_diode: VICurve,
    e_sw: EnergyCurve,
    e_rec: EnergyCurve,
    i_ref: float,
    u_ref: float,
    i_rated: float | None = None,
) -> DeviceCharacteristics:
    u_ce, r_ce = fit_line(vi_igbt.current, vi_igbt.voltage)
    u_f, r_f = fit_line(vi_diode.current, vi_diode.voltage)
    if e_sw.parts and {"eon_j", "eoff_j"} <= set(e_sw.parts):
        e_on = _energy_at(e_sw.current, e_sw.parts["eon_j"], i_ref)
        e_off = _energy_at(e_sw.current, e_sw.parts["eoff_j"], i_ref)
    else:
        e_on, e_off = _energy_at(e_sw.current, e_sw.energy, i_ref), 0.0
    return DeviceCharacteristics(
        u_ce=u_ce,
        r_ce=r_ce,
        u_f=u_f,
        r_f=r_f,
        e_on_ref=e_on,
        e_off_ref=e_off,
        e_rec_ref=_energy_at(e_rec.current, e_rec.energy, i_ref),
        i_ref=float(i_ref),
        u_ref=float(u_ref),
        i_rated=float(i_ref if i_rated is None else i_rated),
    )


@dataclass(frozen=True, eq=False)
class LossSample:
    """Loss terms in watts; fields may be scalars or equally shaped arrays."""

    p_cs: np.ndarray
    p_sws: np.ndarray
    p_cd: np.ndarray
    p_recd: np.ndarray
    resolution: Resolution
    t: np.ndarray | None = None

    @property
    def p_igbt(self):
        return self.p_cs + self.p_sws

    @property
    def p_diode(self):
        return self.p_cd + self.p_recd

    def terms(self) -> dict[str, np.ndarray]:
        return {"P_cS": self.p_cs, "P_swS": self.p_sws, "P_cD": self.p_cd, "P_recD": self.p_recd}


def _check_m(m):
    if np.any(np.asarray(m) < 0) or np.any(np.asarray(m) > 1):
        raise ValueError("modulation index must lie in [0, 1]")


def loss_output_period(op: OperatingPoint, dev: DeviceCharacteristics) -> LossSample:
    _check_m(op.m)
    i_m = np.asarray(op.i_m, dtype=float)
    mcos = op.m * np.cos(op.phi)
    p_cs = (1 / (2 * np.pi) + mcos / 8) * dev.u_ce * i_m + (1 / 8 + mcos / (3 * np.pi)) * dev.r_ce * i_m**2
    p_cd = (1 / (2 * np.pi) - mcos / 8) * dev.u_f * i_m + (1 / 8 - mcos / (3 * np.pi)) * dev.r_f * i_m**2
    scale = op.f_sw * (i_m / dev.i_ref) * (op.u_dc / dev.u_ref) / np.pi
    return LossSample(
        p_cs=p_cs,
        p_sws=scale * dev.e_sw_ref,
        p_cd=p_cd,
        p_recd=scale * dev.e_rec_ref,
        resolution=Resolution.OutputPeriod,
    )


def loss_switching_period(op: OperatingPoint, dev: DeviceCharacteristics, i_t, theta) -> LossSample:
    """Losses averaged over the switching period at current ``i_t`` and angle ``theta``.

    ``theta`` is the electrical angle of the phase current (``i_t = I_m*sin(theta)``).
    Samples with ``i_t <= 0`` carry no loss in this device pair.
    """
    _check_m(op.m)
    i = np.maximum(np.asarray(i_t, dtype=float), 0.0)
    duty = 0.5 * (1.0 + op.m * np.sin(np.asarray(theta, dtype=float) + op.phi))
    p_cs = (dev.u_ce * i + dev.r_ce * i**2) * duty
    p_cd = (dev.u_f * i + dev.r_f * i**2) * (1.0 - duty)
    scale = op.f_sw * (i / dev.i_ref) * (op.u_dc / dev.u_ref)
    return LossSample(
        p_cs=p_cs,
        p_sws=scale * dev.e_sw_ref,
        p_cd=p_cd,
        p_recd=scale * dev.e_rec_ref,
        resolution=Resolution.SwitchingPeriod,
    )


def switching_period_series(op: OperatingPoint, dev: DeviceCharacteristics, n: int, theta0: float = 0.0) -> LossSample:
    """``n`` consecutive switching-period samples for a constant operating point."""
    t = np.arange(n) / op.f_sw
    theta = theta0 + op.omega_e * t
    i_t = np.where(op.omega_e == 0, op.i_m, op.i_m * np.sin(theta))
    s = loss_switching_period(op, dev, i_t, theta)
    return LossSample(s.p_cs, s.p_sws, s.p_cd, s.p_recd, s.resolution, t=t)


def output_period_average(op: OperatingPoint, dev: DeviceCharacteristics) -> LossSample:
    """Time average of switching-period samples over exactly one output period.

    The switching-period losses are piecewise constant, so the integral over
    ``[0, T)`` is a sum of whole switching periods plus a fractional last one.
    At standstill the single dc sample is returned.
    """
    if float(op.omega_e) == 0.0:
        s = switching_period_series(op, dev, 1)
        return LossSample(*(float(v[0]) for v in (s.p_cs, s.p_sws, s.p_cd, s.p_recd)), s.resolution)
    n_exact = float(op.f_sw) * 2 * np.pi / float(op.omega_e)
    n = math.ceil(n_exact - 1e-9)
    w = np.ones(n)
    w[-1] = n_exact - (n - 1)
    s = switching_period_series(op, dev, n)
    avg = [float(np.dot(w, v) / n_exact) for v in (s.p_cs, s.p_sws, s.p_cd, s.p_recd)]
    return LossSample(*avg, resolution=Resolution.SwitchingPeriod)
