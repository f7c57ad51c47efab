"""Cauer RC-ladder junction temperature model.

Each device has its own ladder from the junction (node 1) towards the case,
followed by a purely resistive case-to-heatsink link into a heatsink held at
constant temperature.  Integration is backward Euler.  The temperature rise
over the heatsink is the state, so the recurrence is linear in power.

:func:`step` solves the implicit system directly.  :func:`simulate`
diagonalises the same recurrence once and runs each mode as a first-order
recursive filter, which is exact for backward Euler and fast enough for
switching-period grids of several million samples.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import linalg, signal

#: maximum step accepted by :func:`step`
MAX_DT = 10e-3


@dataclass(frozen=True)
class CauerLadder:
    """Junction-side-first ladder: ``r[k]`` links node k to node k+1."""

    r: tuple[float, ...]
    c: tuple[float, ...]
    r_ch: float = 0.0

    def __post_init__(self):
        r, c = tuple(float(x) for x in self.r), tuple(float(x) for x in self.c)
        if len(r) == 0 or len(r) != len(c):
            raise ValueError("ladder needs equal, non-zero numbers of resistances and capacitances")
        if min(r) <= 0 or min(c) <= 0:
            raise ValueError("ladder resistances and capacitances must be positive")
        if self.r_ch < 0:
            raise ValueError("r_ch must be non-negative")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "c", c)

    @property
    def order(self) -> int:
        return len(self.r)

    @property
    def r_total(self) -> float:
        return sum(self.r) + self.r_ch

    def conductance(self) -> np.ndarray:
        n = self.order
        g = np.zeros((n, n))
        links = [1.0 / rk for rk in self.r[:-1]]
        for k, gk in enumerate(links):
            g[k, k] += gk
            g[k + 1, k + 1] += gk
            g[k, k + 1] -= gk
            g[k + 1, k] -= gk
        g[-1, -1] += 1.0 / (self.r[-1] + self.r_ch)
        return g


@dataclass(frozen=True)
class ThermalNetwork:
    igbt: CauerLadder
    diode: CauerLadder
    t_heatsink: float = 55.0


@dataclass(frozen=True, eq=False)
class ThermalState:
    """Node temperatures in deg C, junction first."""

    igbt: np.ndarray
    diode: np.ndarray
    t: float = 0.0

    @classmethod
    def equilibrium(cls, net: ThermalNetwork, t: float = 0.0) -> "ThermalState":
        return cls(
            np.full(net.igbt.order, float(net.t_heatsink)), np.full(net.diode.order, float(net.t_heatsink)), t
        )

    @property
    def tj_igbt(self) -> float:
        return float(self.igbt[0])

    @property
    def tj_diode(self) -> float:
        return float(self.diode[0])


def _step_ladder(temps, power, ladder: CauerLadder, t_h, dt):
    c = np.asarray(ladder.c)
    a = np.diag(c / dt) + ladder.conductance()
    rhs = c / dt * (np.asarray(temps, dtype=float) - t_h)
    rhs[0] += power
    return linalg.solve(a, rhs, assume_a="pos") + t_h


def step(state: ThermalState, p_s: float, p_d: float, net: ThermalNetwork, dt: float) -> ThermalState:
    """One backward-Euler step with powers ``p_s`` (IGBT) and ``p_d`` (diode)."""
    if not 0 < dt <= MAX_DT:
        raise ValueError(f"dt must lie in (0, {MAX_DT}] s, got {dt!r}")
    if not (np.isfinite(p_s) and np.isfinite(p_d)):
        raise ValueError("power input must be finite")
    return ThermalState(
        _step_ladder(state.igbt, p_s, net.igbt, net.t_heatsink, dt),
        _step_ladder(state.diode, p_d, net.diode, net.t_heatsink, dt),
        state.t + dt,
    )


@dataclass(frozen=True)
class _Modes:
    lam: np.ndarray  # per-step decay factor of each mode
    gain: np.ndarray  # power -> mode input
    to_nodes: np.ndarray  # mode -> node temperature rise

    @classmethod
    def of(cls, ladder: CauerLadder, dt: float) -> "_Modes":
        s_inv = 1.0 / np.sqrt(np.asarray(ladder.c))
        k = s_inv[:, None] * ladder.conductance() * s_inv[None, :]
        kappa, q = np.linalg.eigh(k)
        lam = 1.0 / (1.0 + dt * kappa)
        w = q.T @ (s_inv * np.eye(ladder.order)[0])
        return cls(lam=lam, gain=lam * dt * w, to_nodes=s_inv[:, None] * q)


def _run_ladder(power: np.ndarray, temps0: np.ndarray, ladder: CauerLadder, t_h: float, dt: float):
    modes = _Modes.of(ladder, dt)
    z0 = np.linalg.solve(modes.to_nodes, np.asarray(temps0, dtype=float) - t_h)
    tj = np.zeros(power.size)
    z_end = np.empty_like(z0)
    for k in range(ladder.order):
        z, _ = signal.lfilter([modes.gain[k]], [1.0, -modes.lam[k]], power, zi=[modes.lam[k] * z0[k]])
        tj += modes.to_nodes[0, k] * z
        z_end[k] = z[-1] if z.size else z0[k]
    return tj + t_h, modes.to_nodes @ z_end + t_h


@dataclass(frozen=True, eq=False)
class TemperatureSeries:
    """Junction temperatures on a uniform grid; sample k is at ``t0 + (k+1)*dt``."""

    dt: float
    tj_igbt: np.ndarray
    tj_diode: np.ndarray
    t0: float = 0.0
    final: ThermalState | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return self.tj_igbt.size

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(1, len(self) + 1)


def simulate(losses, net: ThermalNetwork, dt: float, initial: ThermalState | None = None) -> TemperatureSeries:
    """Drive both ladders with a uniform loss series.

    ``losses`` is a :class:`~powerlife.losses.LossSample` with array fields
    or a ``(p_igbt, p_diode)`` pair of arrays.  The state is initialised at
    heatsink temperature unless ``initial`` is given; ``final`` on the result
    allows chunked runs to continue.
    """
    if hasattr(losses, "p_igbt"):
        p_s, p_d = losses.p_igbt, losses.p_diode
    else:
        p_s, p_d = losses
    p_s = np.asarray(p_s, dtype=float).ravel()
    p_d = np.asarray(p_d, dtype=float).ravel()
    if p_s.shape != p_d.shape:
        raise ValueError("IGBT and diode loss series differ in length")
    if not 0 < dt <= MAX_DT:
        raise ValueError(f"dt must lie in (0, {MAX_DT}] s, got {dt!r}")
    if not (np.all(np.isfinite(p_s)) and np.all(np.isfinite(p_d))):
        raise ValueError("power input must be finite")
    state = ThermalState.equilibrium(net) if initial is None else initial
    tj_s, end_s = _run_ladder(p_s, state.igbt, net.igbt, net.t_heatsink, dt)
    tj_d, end_d = _run_ladder(p_d, state.diode, net.diode, net.t_heatsink, dt)
    final = ThermalState(end_s, end_d, state.t + dt * p_s.size)
    return TemperatureSeries(dt=dt, tj_igbt=tj_s, tj_diode=tj_d, t0=state.t, final=final)


def write_temperature_csv(series: TemperatureSeries, path: str | Path, stride: int = 1) -> None:
    """Write ``t_s,Tj_igbt_C,Tj_diode_C``, keeping every ``stride``-th sample."""
    t = series.t[stride - 1 :: stride]
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t_s", "Tj_igbt_C", "Tj_diode_C"])
        for row in zip(t, series.tj_igbt[stride - 1 :: stride], series.tj_diode[stride - 1 :: stride]):
            w.writerow([f"{x:.9g}" for x in row])
