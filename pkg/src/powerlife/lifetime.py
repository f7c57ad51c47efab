"""Cycles to failure, Miner damage and the loss-model comparison."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rainflow import CycleTable, ThermalCycle

KELVIN = 273.0
DEVICES = ("igbt", "diode")
MODELS = ("t_o", "t_sw")


@dataclass(frozen=True)
class LifetimeParams:
    a: float = 1.42e12
    beta1: float = -7.14
    beta2: float = 5154.0
    beta3: float = -0.3
    ton_min: float = 0.1
    ton_max: float = 60.0
    ton_ref: float = 1.5

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("A must be positive")
        if not 0 < self.ton_min <= self.ton_max:
            raise ValueError("t_on bounds must satisfy 0 < min <= max")


def cycles_to_failure(dtj, tjmax, ton, p: LifetimeParams = LifetimeParams()):
    """Cycles to failure; ``t_on`` is clamped into the model's validity range.

    Zero-range cycles return ``inf`` so they drop out of the damage sum.
    """
    dtj = np.asarray(dtj, dtype=float)
    if np.any(dtj < 0):
        raise ValueError("temperature swing must be non-negative")
    ton = np.clip(np.asarray(ton, dtype=float), p.ton_min, p.ton_max)
    with np.errstate(divide="ignore"):
        nf = (
            p.a
            * dtj**p.beta1
            * np.exp(p.beta2 / (np.asarray(tjmax, dtype=float) + KELVIN))
            * (ton / p.ton_ref) ** p.beta3
        )
    return np.where(dtj > 0, nf, np.inf)


def cycle_to_failure(cycle: ThermalCycle, p: LifetimeParams = LifetimeParams()) -> float:
    return float(cycles_to_failure(cycle.dtj, cycle.tjmax, cycle.ton, p))


def accumulate_damage(table: CycleTable, p: LifetimeParams = LifetimeParams()) -> float:
    """Palmgren-Miner sum of ``count / N_f``."""
    if len(table) == 0:
        return 0.0
    return float(np.sum(table.count / cycles_to_failure(table.dtj, table.tjmax, table.ton, p)))


def annualize(d_run: float, profile_duration: float, annual_driving_hours: float) -> float:
    if not (profile_duration > 0 and annual_driving_hours > 0):
        raise ValueError("profile duration and annual hours must be positive")
    if d_run < 0:
        raise ValueError("damage must be non-negative")
    return d_run * annual_driving_hours * 3600.0 / profile_duration


#: default dTj bin edges (K) for reported histograms
HIST_BINS = np.array([0, 1, 2, 3, 5, 10, 15, 20, 30, 40, 60, 100, np.inf])


@dataclass
class DamageResult:
    """Damage of one device in one (profile, loss model) scenario."""

    device: str
    profile: str
    model: str
    d_run: float
    d_annual: float
    n_cycles: float
    max_dtj: float
    histogram: list[float] = field(default_factory=list)
    dominant: dict = field(default_factory=dict)

    @classmethod
    def from_table(
        cls,
        table: CycleTable,
        device: str,
        profile: str,
        model: str,
        profile_duration: float,
        annual_hours: float,
        p: LifetimeParams = LifetimeParams(),
    ) -> "DamageResult":
        d = accumulate_damage(table, p)
        hist, _ = table.histogram(HIST_BINS)
        dominant: dict = {}
        if len(table):
            contrib = table.count / cycles_to_failure(table.dtj, table.tjmax, table.ton, p)
            k = int(np.argmax(contrib))
            dominant = {
                "dTj_K": float(table.dtj[k]),
                "Tjmax_C": float(table.tjmax[k]),
                "ton_s": float(table.ton[k]),
                "damage_share": float(contrib[k] / d) if d > 0 else 0.0,
            }
        return cls(
            device=device,
            profile=profile,
            model=model,
            d_run=d,
            d_annual=annualize(d, profile_duration, annual_hours),
            n_cycles=table.total_count,
            max_dtj=float(table.dtj.max()) if len(table) else 0.0,
            histogram=[float(x) for x in hist],
            dominant=dominant,
        )


class MissingScenarioError(KeyError):
    pass


@dataclass(frozen=True)
class ModelComparison:
    profile: str
    device: str
    d_to: float
    d_tsw: float
    ratio: float | None
    needs_switching_model: bool


def damage_ratio(d_tsw: float, d_to: float) -> float | None:
    """``D(t_sw) / D(t_o)``; undefined (None) when the output-period damage is 0."""
    if d_to > 0 and np.isfinite(d_to) and np.isfinite(d_tsw):
        return d_tsw / d_to
    return None


def compare(results, threshold: float = 2.0, profiles=None) -> list[ModelComparison]:
    """Cross-model ratios per profile and device.

    Every profile in ``profiles`` (default: all profiles present) needs a
    result for both models and both devices.  A flag is raised when the
    ratio exceeds ``threshold`` or when only the switching-period model
    predicts any damage.
    """
    by_key = {(r.profile, r.model, r.device): r for r in results}
    if profiles is None:
        profiles = sorted({r.profile for r in results})
    out = []
    for prof in profiles:
        for dev in DEVICES:
            missing = [f"{prof}/{m}/{dev}" for m in MODELS if (prof, m, dev) not in by_key]
            if missing:
                raise MissingScenarioError(f"missing scenario result(s): {', '.join(missing)}")
            d_to = by_key[(prof, "t_o", dev)].d_run
            d_sw = by_key[(prof, "t_sw", dev)].d_run
            ratio = damage_ratio(d_sw, d_to)
            flag = ratio > threshold if ratio is not None else d_sw > 0
            out.append(ModelComparison(prof, dev, d_to, d_sw, ratio, bool(flag)))
    return out
