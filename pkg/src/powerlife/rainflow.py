"""Rainflow counting of junction-temperature histories.

The history is first reduced to alternating reversals with a hysteresis
gate, then counted with the four-point method: a range is closed as a full
cycle when it is no larger than both neighbouring ranges.  Whatever is left
on the stack is emitted as half cycles.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

PEAK, VALLEY = 1, -1

DEFAULT_HYSTERESIS = 0.1


@dataclass(frozen=True)
class Extremum:
    t: float
    value: float
    kind: int  # PEAK or VALLEY


@dataclass(frozen=True, eq=False)
class Extrema:
    """Alternating reversal points of a series."""

    t: np.ndarray
    value: np.ndarray

    def __len__(self) -> int:
        return self.value.size

    def __iter__(self) -> Iterator[Extremum]:
        kinds = self.kinds
        for k in range(len(self)):
            yield Extremum(float(self.t[k]), float(self.value[k]), int(kinds[k]))

    @property
    def kinds(self) -> np.ndarray:
        v = self.value
        if v.size < 2:
            return np.full(v.size, VALLEY)
        kinds = np.where(np.diff(v) < 0, PEAK, VALLEY)
        return np.append(kinds, -kinds[-1])


def turning_points(values: np.ndarray) -> np.ndarray:
    """Indices of the endpoints and the local extrema (first index of plateaus)."""
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        return np.arange(v.size)
    keep = np.flatnonzero(np.concatenate(([True], v[1:] != v[:-1])))
    if keep.size == 1:
        return keep
    d = np.sign(np.diff(v[keep]))
    inner = np.flatnonzero(d[1:] != d[:-1]) + 1
    return keep[np.concatenate(([0], inner, [keep.size - 1]))]


def find_extrema(values, t=None, hysteresis: float = DEFAULT_HYSTERESIS) -> Extrema:
    """Reduce a series to alternating peaks and valleys.

    A reversal is accepted once the series has moved back by at least
    ``hysteresis`` from the running extreme, so swings smaller than the
    gate are merged into their surroundings.  The first sample is always
    kept; the last retained point is the final running extreme.  A series
    that never moves by more than the gate reduces to its first sample.
    """
    if hysteresis < 0:
        raise ValueError("hysteresis must be non-negative")
    v = np.asarray(values, dtype=float)
    times = np.arange(v.size, dtype=float) if t is None else np.asarray(t, dtype=float)
    if v.size == 0:
        return Extrema(np.empty(0), np.empty(0))
    idx = turning_points(v)
    tp = v[idx].tolist()

    out = [0]
    start = tp[0]
    cand = 0
    direction = 0
    for k in range(1, len(tp)):
        x = tp[k]
        if direction == 0:
            if x - start >= hysteresis and x > start:
                direction, cand = 1, k
            elif start - x >= hysteresis and x < start:
                direction, cand = -1, k
        elif direction > 0:
            if x > tp[cand]:
                cand = k
            elif tp[cand] - x >= hysteresis and x < tp[cand]:
                out.append(cand)
                direction, cand = -1, k
        else:
            if x < tp[cand]:
                cand = k
            elif x - tp[cand] >= hysteresis and x > tp[cand]:
                out.append(cand)
                direction, cand = 1, k
    if direction != 0:
        out.append(cand)
    sel = idx[np.asarray(out)]
    return Extrema(times[sel], v[sel])


@dataclass(frozen=True)
class ThermalCycle:
    dtj: float
    tjmax: float
    tjm: float
    ton: float
    count: float


@dataclass(frozen=True, eq=False)
class CycleTable:
    """Counted cycles as parallel arrays."""

    dtj: np.ndarray
    tjmax: np.ndarray
    tjm: np.ndarray
    ton: np.ndarray
    count: np.ndarray
    label: str = ""

    def __len__(self) -> int:
        return self.count.size

    def __iter__(self) -> Iterator[ThermalCycle]:
        for k in range(len(self)):
            yield ThermalCycle(
                float(self.dtj[k]), float(self.tjmax[k]), float(self.tjm[k]), float(self.ton[k]), float(self.count[k])
            )

    @property
    def total_count(self) -> float:
        return float(self.count.sum())

    @classmethod
    def empty(cls, label: str = "") -> "CycleTable":
        z = np.empty(0)
        return cls(z, z, z, z, z, label)

    @classmethod
    def concatenate(cls, tables, label: str = "") -> "CycleTable":
        tables = list(tables)
        if not tables:
            return cls.empty(label)
        cat = {f: np.concatenate([getattr(tb, f) for tb in tables]) for f in ("dtj", "tjmax", "tjm", "ton", "count")}
        return cls(label=label, **cat)

    def to_csv(self, path: str | Path) -> None:
        with Path(path).open("w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["dTj_K", "Tjmax_C", "Tjm_C", "ton_s", "count"])
            for c in self:
                w.writerow([f"{c.dtj:.9g}", f"{c.tjmax:.9g}", f"{c.tjm:.9g}", f"{c.ton:.9g}", f"{c.count:g}"])

    def histogram(self, bins) -> tuple[np.ndarray, np.ndarray]:
        """Cycle counts per ``dtj`` bin."""
        counts, edges = np.histogram(self.dtj, bins=bins, weights=self.count)
        return counts, edges


def count_cycles(extrema: Extrema, label: str = "") -> CycleTable:
    """Four-point rainflow count of an alternating reversal sequence."""
    values = np.asarray(extrema.value, dtype=float).tolist()
    times = np.asarray(extrema.t, dtype=float).tolist()
    full: list[tuple[int, int]] = []
    stack: list[int] = []
    for k in range(len(values)):
        stack.append(k)
        while len(stack) >= 4:
            a, b, c, d = (values[j] for j in stack[-4:])
            inner = abs(b - c)
            if inner <= abs(a - b) and inner <= abs(c - d):
                full.append((stack[-3], stack[-2]))
                del stack[-3:-1]
            else:
                break
    half = list(zip(stack[:-1], stack[1:]))

    pairs = full + half
    if not pairs:
        return CycleTable.empty(label)
    i = np.array([p[0] for p in pairs])
    j = np.array([p[1] for p in pairs])
    v = np.asarray(values)
    tt = np.asarray(times)
    hi = np.maximum(v[i], v[j])
    lo = np.minimum(v[i], v[j])
    count = np.concatenate((np.ones(len(full)), np.full(len(half), 0.5)))
    return CycleTable(
        dtj=hi - lo,
        tjmax=hi,
        tjm=0.5 * (hi + lo),
        ton=np.abs(tt[j] - tt[i]),
        count=count,
        label=label,
    )


def rainflow(values, t=None, hysteresis: float = DEFAULT_HYSTERESIS, label: str = "") -> CycleTable:
    """Extrema reduction followed by cycle counting."""
    return count_cycles(find_extrema(values, t, hysteresis), label=label)
