"""SVG figures from a finished run directory."""
from __future__ import annotations

import json
import warnings
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .lifetime import DEVICES  # noqa: E402

# fixed metadata keeps the SVG bytes reproducible
_SVG_META = {"Date": None, "Creator": "powerlife"}
LOSS_COLUMNS = ("P_cS_W", "P_swS_W", "P_cD_W", "P_recD_W")


class MissingSeriesWarning(UserWarning):
    pass


def _read(path: Path) -> dict[str, np.ndarray] | None:
    if not path.is_file():
        return None
    data = np.genfromtxt(path, delimiter=",", names=True, ndmin=1)
    if data.size == 0:
        return None
    return {k: np.atleast_1d(data[k]) for k in data.dtype.names}


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context({"svg.hashsalt": "powerlife", "svg.fonttype": "none"}):
        fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)
    return path


def trace_plot(scenario_dir: Path, dest: Path) -> Path | None:
    """Loss terms (top) and junction temperatures (bottom) of one scenario."""
    losses = _read(scenario_dir / "losses.csv")
    tj = _read(scenario_dir / "tj.csv")
    if losses is None and tj is None:
        warnings.warn(f"{scenario_dir.name}: no loss or temperature series, plot skipped", MissingSeriesWarning)
        return None
    fig, (ax_p, ax_t) = plt.subplots(2, 1, sharex=True, figsize=(8, 5.5))
    if losses is None:
        warnings.warn(f"{scenario_dir.name}: losses.csv missing", MissingSeriesWarning)
    else:
        for col in LOSS_COLUMNS:
            if col in losses:
                ax_p.plot(losses["t_s"], losses[col], lw=0.6, label=col[:-2])
        ax_p.legend(loc="upper right", fontsize=8)
    ax_p.set_ylabel("loss (W)")
    if tj is None:
        warnings.warn(f"{scenario_dir.name}: tj.csv missing", MissingSeriesWarning)
    else:
        ax_t.plot(tj["t_s"], tj["Tj_igbt_C"], lw=0.6, label="IGBT")
        ax_t.plot(tj["t_s"], tj["Tj_diode_C"], lw=0.6, label="diode")
        ax_t.legend(loc="upper right", fontsize=8)
    ax_t.set_ylabel("T_j (°C)")
    ax_t.set_xlabel("time (s)")
    fig.suptitle(scenario_dir.name)
    fig.tight_layout()
    return _save(fig, dest)


def damage_bars(report: dict, dest: Path, key: str = "D_annual") -> Path:
    """Grouped bars: one group per scenario, one bar per device.

    Each bar carries the SVG id ``bar-<scenario>-<device>``.  The axis is
    logarithmic unless some value is zero.
    """
    scen = sorted(report.get("scenarios", {}))
    values = np.array([[report["scenarios"][s][d][key] or 0.0 for d in DEVICES] for s in scen]).reshape(-1, len(DEVICES))
    fig, ax = plt.subplots(figsize=(max(4, 1.6 * len(scen) + 1), 4))
    x = np.arange(len(scen))
    width = 0.8 / len(DEVICES)
    for j, dev in enumerate(DEVICES):
        bars = ax.bar(x + (j - (len(DEVICES) - 1) / 2) * width, values[:, j], width, label=dev)
        for s, bar in zip(scen, bars):
            bar.set_gid(f"bar-{s.replace('/', '_')}-{dev}")
    if values.size and np.all(values > 0):
        ax.set_yscale("log")
    ax.set_xticks(x, scen, rotation=15)
    ax.set_ylabel(f"{key} (-)")
    ax.legend()
    fig.tight_layout()
    return _save(fig, dest)


def emit_plots(out_dir: str | Path, plot_dir: str | Path | None = None) -> list[Path]:
    """Write every figure for a run directory; returns the files written."""
    out = Path(out_dir)
    dest = Path(plot_dir) if plot_dir is not None else out / "plots"
    written = []
    report_path = out / "report.json"
    report = json.loads(report_path.read_text()) if report_path.is_file() else None
    if report is None:
        warnings.warn("report.json missing, damage chart skipped", MissingSeriesWarning)
        names = sorted(p.name for p in out.iterdir() if p.is_dir() and p != dest)
    else:
        names = [s.replace("/", "_") for s in sorted(report["scenarios"])]
        written.append(damage_bars(report, dest / "damage.svg"))
    for name in names:
        p = trace_plot(out / name, dest / f"trace_{name}.svg")
        if p is not None:
            written.append(p)
    return written
