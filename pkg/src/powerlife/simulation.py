"""Mission profile -> loss series -> junction temperature, for one loss model."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .electrical import MachineParameters, operating_points
from .losses import DeviceCharacteristics, LossSample, Resolution, loss_output_period, loss_switching_period
from .mission import MissionProfile, uniform_grid
from .thermal import TemperatureSeries, ThermalNetwork, ThermalState, simulate

CHUNK = 1 << 20
TWO_PI = 2.0 * np.pi


@dataclass
class ProfileRun:
    """Junction temperatures and loss statistics of one profile under one loss model.

    ``tj_*`` are full-resolution; ``export`` holds the loss and temperature
    traces decimated to ``export_stride`` samples.
    """

    model: Resolution
    dt: float
    t0: float
    tj_igbt: np.ndarray
    tj_diode: np.ndarray
    mean_losses: dict[str, float]
    n_overmodulated: int
    export_stride: int
    export: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def temperatures(self) -> TemperatureSeries:
        return TemperatureSeries(dt=self.dt, tj_igbt=self.tj_igbt, tj_diode=self.tj_diode, t0=self.t0)

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(1, self.tj_igbt.size + 1)


def model_dt(model: Resolution, machine: MachineParameters, dt_electrical: float) -> float:
    return 1.0 / machine.f_sw if model is Resolution.SwitchingPeriod else dt_electrical


def chunk_losses(
    speed, torque, machine: MachineParameters, device: DeviceCharacteristics, model: Resolution, theta
) -> tuple[LossSample, int]:
    """Losses for a block of grid samples; ``theta`` is only used by the switching-period model."""
    op = operating_points(speed, torque, machine, warn=False)
    if model is Resolution.OutputPeriod:
        losses = loss_output_period(op, device)
    else:
        i_t = np.where(op.omega_e == 0, op.i_m, op.i_m * np.sin(theta))
        losses = loss_switching_period(op, device, i_t, theta)
    return losses, op.n_overmodulated


def run_profile(
    profile: MissionProfile,
    machine: MachineParameters,
    device: DeviceCharacteristics,
    net: ThermalNetwork,
    model: Resolution | str,
    dt_electrical: float = 1e-3,
    export_dt: float | None = 0.01,
    chunk: int = CHUNK,
) -> ProfileRun:
    """Evaluate ``model`` along the profile on its own grid and integrate the thermal ladders.

    The output-period model is re-evaluated every ``dt_electrical``; the
    switching-period model once per switching period, with the current angle
    integrated from the electrical frequency.
    """
    model = Resolution(model)
    dt = model_dt(model, machine, dt_electrical)
    grid = uniform_grid(profile.t[0], profile.t[-1], dt)
    n = grid.size
    stride = max(1, int(round(export_dt / dt))) if export_dt else 1

    tj_s = np.empty(n)
    tj_d = np.empty(n)
    sums = dict.fromkeys(("P_cS", "P_swS", "P_cD", "P_recD"), 0.0)
    export = {k: [] for k in sums}
    state = ThermalState.equilibrium(net, t=float(grid[0]))
    theta0 = 0.0
    n_over = 0
    for lo in range(0, n, chunk):
        t = grid[lo : lo + chunk]
        speed = np.interp(t, profile.t, profile.speed)
        torque = np.interp(t, profile.t, profile.torque)
        theta = None
        if model is Resolution.SwitchingPeriod:
            omega = machine.pole_pairs * speed * (TWO_PI / 60.0)
            steps = omega * dt
            theta = theta0 + np.concatenate(([0.0], np.cumsum(steps[:-1])))
            theta0 = float(np.mod(theta[-1] + steps[-1], TWO_PI))
        losses, n_c = chunk_losses(speed, torque, machine, device, model, theta)
        n_over += n_c
        series = simulate(losses, net, dt, initial=state)
        state = series.final
        tj_s[lo : lo + t.size] = series.tj_igbt
        tj_d[lo : lo + t.size] = series.tj_diode
        # decimation phase is tied to the global index so chunking does not change exports
        first = (-(lo + 1)) % stride
        for k, v in losses.terms().items():
            v = np.broadcast_to(v, t.shape)
            sums[k] += float(v.sum())
            export[k].append(v[first::stride])

    sel = np.arange(stride - 1, n, stride)
    out = {k: np.concatenate(v) for k, v in export.items()}
    out["t_s"] = grid[sel]
    out["t_tj_s"] = grid[sel] + dt
    out["Tj_igbt_C"] = tj_s[sel]
    out["Tj_diode_C"] = tj_d[sel]
    return ProfileRun(
        model=model,
        dt=dt,
        t0=float(grid[0]),
        tj_igbt=tj_s,
        tj_diode=tj_d,
        mean_losses={k: v / n for k, v in sums.items()},
        n_overmodulated=n_over,
        export_stride=stride,
        export=out,
    )
