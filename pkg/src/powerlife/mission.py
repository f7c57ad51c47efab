"""Driving-cycle mission profiles at the motor shaft.

Profiles are read from a three-column CSV (``time_s,speed_rpm,torque_nm``),
validated, resampled on a uniform grid and classified into the four
speed/torque situations used throughout the package.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, TextIO

import numpy as np

HEADER = ("time_s", "speed_rpm", "torque_nm")

#: relative tolerance used to decide whether a time grid is uniform
UNIFORM_RTOL = 1e-9


class ProfileError(ValueError):
    """Raised for malformed or inconsistent mission profile data."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class MissionSample:
    t: float
    speed: float
    torque: float


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MissionProfile:
    """Time series of shaft speed (rpm) and torque (N*m).

    ``dt_native`` is the grid spacing when the samples are uniformly spaced
    and ``None`` otherwise.
    """

    t: np.ndarray
    speed: np.ndarray
    torque: np.ndarray
    name: str = ""
    dt_native: float | None = field(default=None)

    def __post_init__(self):
        t, speed, torque = (_readonly(a) for a in (self.t, self.speed, self.torque))
        if t.ndim != 1 or not (t.shape == speed.shape == torque.shape):
            raise ProfileError("time, speed and torque must be 1-D arrays of equal length")
        if t.size == 0:
            raise ProfileError("profile is empty")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(speed)) and np.all(np.isfinite(torque))):
            raise ProfileError("profile contains non-finite values")
        if np.any(np.diff(t) <= 0):
            raise ProfileError("time must be strictly increasing")
        if np.any(speed < 0):
            raise ProfileError("negative speed is not supported")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "speed", speed)
        object.__setattr__(self, "torque", torque)
        if self.dt_native is None:
            object.__setattr__(self, "dt_native", _uniform_step(t))

    def __len__(self) -> int:
        return self.t.size

    def __getitem__(self, k: int) -> MissionSample:
        return MissionSample(float(self.t[k]), float(self.speed[k]), float(self.torque[k]))

    def __iter__(self) -> Iterator[MissionSample]:
        for k in range(len(self)):
            yield self[k]

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])

    def check_torque_limit(self, torque_max: float) -> None:
        """Raise ProfileError at the first sample with ``|torque| > torque_max``."""
        bad = np.flatnonzero(np.abs(self.torque) > torque_max)
        if bad.size:
            k = int(bad[0])
            raise ProfileError(
                f"|torque| {abs(self.torque[k]):g} N*m at t={self.t[k]:g} s exceeds the machine "
                f"limit {torque_max:g} N*m"
            )


def _uniform_step(t: np.ndarray) -> float | None:
    if t.size < 2:
        return None
    d = np.diff(t)
    step = (t[-1] - t[0]) / (t.size - 1)
    if np.all(np.abs(d - step) <= UNIFORM_RTOL * max(step, abs(t[-1]))):
        return float(step)
    return None


def parse_profile(source: TextIO | str, name: str = "") -> MissionProfile:
    """Parse a profile CSV stream.

    ``source`` is a text stream or a string holding the CSV text.  Native
    timestamps are kept; no resampling is applied.  Errors name the
    offending line (1-based, counting the header).
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ProfileError("empty input", line=1) from None
    if tuple(h.strip() for h in header) != HEADER:
        raise ProfileError(f"expected header {','.join(HEADER)!r}, got {','.join(header)!r}", line=1)

    rows: list[tuple[float, float, float]] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise ProfileError(f"expected 3 fields, got {len(row)}", line=lineno)
        try:
            vals = tuple(float(c) for c in row)
        except ValueError:
            raise ProfileError(f"non-numeric field in {row!r}", line=lineno) from None
        if not all(math.isfinite(v) for v in vals):
            raise ProfileError("non-finite value", line=lineno)
        if rows and vals[0] <= rows[-1][0]:
            raise ProfileError(f"time {vals[0]:g} s does not increase (previous {rows[-1][0]:g} s)", line=lineno)
        if vals[1] < 0:
            raise ProfileError(f"negative speed {vals[1]:g} rpm", line=lineno)
        rows.append(vals)
    if not rows:
        raise ProfileError("profile has no samples", line=2)
    data = np.asarray(rows)
    return MissionProfile(data[:, 0], data[:, 1], data[:, 2], name=name)


def load_profile(path: str | Path, name: str | None = None) -> MissionProfile:
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as fh:
        return parse_profile(fh, name=path.stem.upper() if name is None else name)


def write_profile(profile: MissionProfile, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(HEADER) + "\n")
        for t, s, q in zip(profile.t, profile.speed, profile.torque):
            fh.write(f"{t:.10g},{s:.10g},{q:.10g}\n")


def uniform_grid(t0: float, t1: float, dt: float) -> np.ndarray:
    """Uniform grid ``t0 + k*dt`` covering ``[t0, t1]`` without overshooting ``t1``."""
    n = int(math.floor((t1 - t0) / dt + 1e-9)) + 1
    return t0 + dt * np.arange(n)


def resample(profile: MissionProfile, dt: float) -> MissionProfile:
    """Linear resampling onto a uniform grid starting at the first timestamp."""
    if not dt > 0:
        raise ProfileError(f"dt must be positive, got {dt!r}")
    if dt > profile.duration:
        raise ProfileError(f"dt={dt:g} s exceeds the profile duration {profile.duration:g} s")
    grid = uniform_grid(profile.t[0], profile.t[-1], dt)
    return MissionProfile(
        grid,
        np.interp(grid, profile.t, profile.speed),
        np.interp(grid, profile.t, profile.torque),
        name=profile.name,
        dt_native=float(dt),
    )


def scale_torque(profile: MissionProfile, factor: float) -> MissionProfile:
    if not factor > 0:
        raise ProfileError(f"torque scale factor must be positive, got {factor!r}")
    return MissionProfile(
        profile.t, profile.speed, profile.torque * factor, name=profile.name, dt_native=profile.dt_native
    )


def rated_current_scale(profile: MissionProfile, pole_pairs: int, flux_linkage: float, i_rated: float) -> float:
    """Torque factor that brings the profile's peak q-axis current to ``i_rated``.

    Inverts ``i_q = 2*tau / (3*p_n*psi_f)`` at the largest ``|torque|``.
    """
    peak = float(np.max(np.abs(profile.torque)))
    if peak == 0:
        raise ProfileError("cannot scale an all-zero torque profile to rated current")
    return i_rated * 3.0 * pole_pairs * flux_linkage / (2.0 * peak)


class SituationClass(enum.Enum):
    LowSpeedHighTorque = "I"
    LowSpeedLowTorque = "II"
    HighSpeedLowTorque = "III"
    HighSpeedHighTorque = "IV"


@dataclass(frozen=True)
class SituationThresholds:
    speed_split: float
    torque_split: float

    def __post_init__(self):
        if not (self.speed_split > 0 and self.torque_split > 0):
            raise ValueError("situation thresholds must be positive")


def default_thresholds(profile: MissionProfile) -> SituationThresholds:
    """Midpoints of the profile's speed and |torque| ranges."""
    s, q = profile.speed, np.abs(profile.torque)
    return SituationThresholds(
        speed_split=0.5 * float(s.min() + s.max()), torque_split=0.5 * float(q.min() + q.max())
    )


def classify(sample: MissionSample, thresholds: SituationThresholds) -> SituationClass:
    """Quadrant of a sample; values on a split count as High."""
    high_speed = sample.speed >= thresholds.speed_split
    high_torque = abs(sample.torque) >= thresholds.torque_split
    if high_speed:
        return SituationClass.HighSpeedHighTorque if high_torque else SituationClass.HighSpeedLowTorque
    return SituationClass.LowSpeedHighTorque if high_torque else SituationClass.LowSpeedLowTorque


_CODES = (
    SituationClass.LowSpeedLowTorque,
    SituationClass.LowSpeedHighTorque,
    SituationClass.HighSpeedLowTorque,
    SituationClass.HighSpeedHighTorque,
)


def classify_array(speed, torque, thresholds: SituationThresholds) -> np.ndarray:
    """Vectorised :func:`classify`; returns an object array of SituationClass."""
    code = 2 * (np.asarray(speed) >= thresholds.speed_split) + (np.abs(torque) >= thresholds.torque_split)
    return np.array(_CODES, dtype=object)[code]


def situation_shares(
    profile: MissionProfile, thresholds: SituationThresholds | None = None
) -> dict[SituationClass, float]:
    """Fraction of samples falling into each situation class."""
    if thresholds is None:
        thresholds = default_thresholds(profile)
    code = 2 * (profile.speed >= thresholds.speed_split) + (np.abs(profile.torque) >= thresholds.torque_split)
    counts = np.bincount(code, minlength=4)
    return {cls: counts[k] / code.size for k, cls in enumerate(_CODES)}
