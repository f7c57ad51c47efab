"""End-to-end runs: profile -> operating points -> losses -> T_j -> cycles -> damage."""
from __future__ import annotations

import csv
import hashlib
import json
import logging
import os
import platform
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .config import RunConfig
from .lifetime import DEVICES, DamageResult, MissingScenarioError, compare
from .losses import Resolution
from .mission import load_profile, rated_current_scale, scale_torque
from .rainflow import rainflow
from .simulation import ProfileRun, run_profile

log = logging.getLogger(__name__)

THREADS_ENV = "POWERLIFE_THREADS"


class StageError(RuntimeError):
    """A scenario failed; ``stage`` names the pipeline stage."""

    def __init__(self, scenario: str, stage: str, cause: BaseException):
        self.scenario, self.stage, self.cause = scenario, stage, cause
        super().__init__(f"{scenario}: {stage} stage failed: {cause}")


@dataclass
class ScenarioOutcome:
    profile: str
    model: str
    duration: float = 0.0
    run: ProfileRun | None = None
    damage: dict[str, DamageResult] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    files: list[Path] = field(default_factory=list)
    error: StageError | None = None

    @property
    def key(self) -> str:
        return f"{self.profile}/{self.model}"

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class RunManifest:
    config_sha256: str
    versions: dict[str, str]
    timings: dict[str, dict[str, float]]
    warnings: dict[str, list[str]]
    failures: dict[str, dict[str, str]]
    outputs: list[dict]
    output_dir: Path
    outcomes: list[ScenarioOutcome] = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 2

    def to_json(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "outcomes"}
        d["output_dir"] = str(self.output_dir)
        return d


def _max_workers(n: int) -> int:
    env = os.environ.get(THREADS_ENV)
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(cap, n))


def _write_csv(path: Path, columns: dict[str, np.ndarray]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(columns))
        for row in zip(*columns.values()):
            w.writerow([f"{x:.9g}" for x in row])


def _scenario_dir(out: Path, profile: str, model: str) -> Path:
    return out / f"{profile}_{model}"


def run_scenario(cfg: RunConfig, spec, model: Resolution, out: Path) -> ScenarioOutcome:
    res = ScenarioOutcome(spec.name, model.value)
    stage = "ingest"
    try:
        t0 = time.perf_counter()
        profile = load_profile(spec.path, name=spec.name)
        factor = spec.torque_scale
        if factor == "rated":
            factor = rated_current_scale(profile, cfg.machine.pole_pairs, cfg.machine.psi_f, cfg.device.i_rated)
        profile = scale_torque(profile, float(factor))
        res.duration = profile.duration
        stage = "electrical"
        profile.check_torque_limit(cfg.machine.torque_max)
        res.timings["ingest"] = time.perf_counter() - t0

        stage = "losses+thermal"
        t0 = time.perf_counter()
        run = run_profile(profile, cfg.machine, cfg.device, cfg.thermal, model, cfg.dt_electrical, cfg.export_dt)
        res.run = run
        res.timings["losses+thermal"] = time.perf_counter() - t0
        if run.n_overmodulated:
            res.warnings.append(f"{run.n_overmodulated} overmodulated sample(s) clamped to m=1")

        stage = "rainflow"
        t0 = time.perf_counter()
        t = run.t
        tables = {
            dev: rainflow(tj, t, cfg.hysteresis, label=f"{res.key}/{dev}")
            for dev, tj in (("igbt", run.tj_igbt), ("diode", run.tj_diode))
        }
        res.timings["rainflow"] = time.perf_counter() - t0

        stage = "damage"
        t0 = time.perf_counter()
        for dev, table in tables.items():
            res.damage[dev] = DamageResult.from_table(
                table, dev, spec.name, model.value, profile.duration, cfg.annual_driving_hours, cfg.lifetime
            )
        res.timings["damage"] = time.perf_counter() - t0

        stage = "output"
        t0 = time.perf_counter()
        sdir = _scenario_dir(out, spec.name, model.value)
        sdir.mkdir(parents=True, exist_ok=True)
        ex = run.export
        _write_csv(
            sdir / "losses.csv",
            {
                "t_s": ex["t_s"],
                "P_cS_W": ex["P_cS"],
                "P_swS_W": ex["P_swS"],
                "P_cD_W": ex["P_cD"],
                "P_recD_W": ex["P_recD"],
            },
        )
        _write_csv(sdir / "tj.csv", {"t_s": ex["t_tj_s"], "Tj_igbt_C": ex["Tj_igbt_C"], "Tj_diode_C": ex["Tj_diode_C"]})
        res.files += [sdir / "losses.csv", sdir / "tj.csv"]
        for dev, table in tables.items():
            p = sdir / f"cycles_{dev}.csv"
            table.to_csv(p)
            res.files.append(p)
        res.timings["output"] = time.perf_counter() - t0
    except Exception as exc:  # isolate scenarios from each other
        res.error = StageError(res.key, stage, exc)
        log.error("%s", res.error)
    return res


def _clean(x):
    if isinstance(x, float) and not np.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_clean(v) for v in x]
    return x


def build_report(cfg: RunConfig, outcomes: list[ScenarioOutcome]) -> dict:
    """JSON-ready damage report with cross-model ratios ``D(t_sw)/D(t_o)``."""
    ok = [o for o in outcomes if o.ok]
    results = [d for o in ok for d in o.damage.values()]
    comparison = []
    for prof in sorted({o.profile for o in ok}):
        try:
            comparison += compare(results, cfg.ratio_threshold, profiles=[prof])
        except MissingScenarioError as exc:
            log.warning("no comparison for %s: %s", prof, exc)
    ratios = {(c.profile, c.device): c.ratio for c in comparison}

    scenarios = {}
    for o in ok:
        entry = {
            "profile_duration_s": o.duration,
            "mean_losses_W": o.run.mean_losses,
            "Tj_mean_C": {"igbt": float(o.run.tj_igbt.mean()), "diode": float(o.run.tj_diode.mean())},
            "overmodulated_samples": o.run.n_overmodulated,
        }
        for dev in DEVICES:
            d = o.damage[dev]
            entry[dev] = {
                "D_run": d.d_run,
                "D_annual": d.d_annual,
                "n_cycles": d.n_cycles,
                "max_dTj_K": d.max_dtj,
                "ratio": ratios.get((o.profile, dev)),
                "histogram": d.histogram,
                "dominant_cycle": d.dominant,
            }
        scenarios[o.key] = entry
    return _clean(
        {
            "ratio_definition": "D(t_sw)/D(t_o)",
            "annual_driving_hours": cfg.annual_driving_hours,
            "ratio_threshold": cfg.ratio_threshold,
            "scenarios": scenarios,
            "comparison": [
                {
                    "profile": c.profile,
                    "device": c.device,
                    "D_t_o": c.d_to,
                    "D_t_sw": c.d_tsw,
                    "ratio": c.ratio,
                    "switching_period_model_required": c.needs_switching_model,
                }
                for c in comparison
            ],
        }
    )


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _select(cfg: RunConfig, scenario: str | None):
    pairs = [(p, m) for p in cfg.profiles for m in cfg.loss_models]
    if scenario is None:
        return pairs
    want = scenario.split("/")
    sel = [(p, m) for p, m in pairs if p.name == want[0] and (len(want) == 1 or m.value == want[1])]
    if not sel:
        raise ValueError(f"no scenario matches {scenario!r}; known: {[f'{p.name}/{m.value}' for p, m in pairs]}")
    return sel


def run(cfg: RunConfig, scenario: str | None = None, out_dir: str | Path | None = None, plots: bool = False) -> RunManifest:
    """Execute every selected (profile, loss model) scenario and write all artifacts.

    ``scenario`` may be a profile name (``"NYCC"``) or ``"NYCC/t_sw"``.
    A failing scenario is reported in the manifest; the others still run
    and write their outputs.
    """
    out = Path(out_dir) if out_dir is not None else cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    pairs = _select(cfg, scenario)
    with ThreadPoolExecutor(max_workers=_max_workers(len(pairs))) as pool:
        outcomes = list(pool.map(lambda pm: run_scenario(cfg, pm[0], pm[1], out), pairs))

    report = build_report(cfg, outcomes)
    report_path = out / "report.json"
    report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    files = [f for o in outcomes for f in o.files] + [report_path]

    if plots:
        from .plots import emit_plots

        files += emit_plots(out, out / "plots")

    manifest = RunManifest(
        config_sha256=cfg.digest(),
        versions={
            "powerlife": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        timings={o.key: o.timings for o in outcomes},
        warnings={o.key: o.warnings for o in outcomes if o.warnings},
        failures={o.key: {"stage": o.error.stage, "error": str(o.error.cause)} for o in outcomes if o.error},
        outputs=[{"path": str(f.relative_to(out)), "sha256": _sha256(f), "bytes": f.stat().st_size} for f in files]
        + [{"path": "manifest.json"}],
        output_dir=out,
        outcomes=outcomes,
    )
    (out / "manifest.json").write_text(json.dumps(manifest.to_json(), indent=2) + "\n", encoding="utf-8")
    return manifest


def main_exit_code(manifest: RunManifest) -> int:  # pragma: no cover - thin helper for the CLI
    if manifest.failures:
        for k, v in manifest.failures.items():
            print(f"scenario {k} failed in {v['stage']}: {v['error']}", file=sys.stderr)
    return manifest.exit_code
