"""TOML run configuration.

Relative input paths are resolved against the directory of the config file;
the output directory is relative to the working directory.
See ``data/default.toml`` for a complete example with every key.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .electrical import MachineParameters
from .lifetime import LifetimeParams
from .losses import DeviceCharacteristics, Resolution, fit_device, read_energy_curve, read_vi_curve
from .thermal import CauerLadder, ThermalNetwork

DATA_DIR = Path(__file__).parent / "data"
DEFAULT_CONFIG = DATA_DIR / "default.toml"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ProfileSpec:
    name: str
    path: Path
    torque_scale: float | str = 1.0  # a factor, or "rated"


@dataclass
class RunConfig:
    profiles: list[ProfileSpec]
    machine: MachineParameters
    device: DeviceCharacteristics
    thermal: ThermalNetwork
    lifetime: LifetimeParams = field(default_factory=LifetimeParams)
    loss_models: tuple[Resolution, ...] = (Resolution.OutputPeriod, Resolution.SwitchingPeriod)
    dt_electrical: float = 1e-3
    annual_driving_hours: float = 500.0
    ratio_threshold: float = 2.0
    hysteresis: float = 0.1
    export_dt: float | None = 0.01
    output_dir: Path = Path("powerlife-out")
    source: Path | None = None
    inputs: tuple[Path, ...] = ()

    def digest(self) -> str:
        """SHA-256 over the config file and every file it references."""
        h = hashlib.sha256()
        for p in ((self.source,) if self.source else ()) + tuple(sorted(self.inputs)):
            h.update(str(p.name).encode())
            h.update(Path(p).read_bytes())
        return h.hexdigest()


def _need(table: dict, key: str, where: str):
    if key not in table:
        raise ConfigError(f"missing key {where}.{key}")
    return table[key]


def _path(base: Path, value: str, where: str) -> Path:
    p = Path(value)
    p = p if p.is_absolute() else base / p
    if not p.is_file():
        raise ConfigError(f"{where}: file not found: {p}")
    return p


def _ladder(t: dict, where: str) -> CauerLadder:
    try:
        return CauerLadder(tuple(_need(t, "r", where)), tuple(_need(t, "c", where)), float(t.get("r_ch", 0.0)))
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def parse_config(data: dict, base: Path) -> RunConfig:
    inputs: list[Path] = []
    run = data.get("run", {})
    grid = data.get("grid", {})

    profiles = []
    for k, p in enumerate(_need(data, "profiles", "")):
        where = f"profiles[{k}]"
        path = _path(base, _need(p, "path", where), where)
        inputs.append(path)
        scale = p.get("torque_scale", 1.0)
        if scale != "rated" and not (isinstance(scale, (int, float)) and scale > 0):
            raise ConfigError(f"{where}.torque_scale must be a positive number or 'rated'")
        profiles.append(ProfileSpec(p.get("name", path.stem.upper()), path, scale))
    if not profiles:
        raise ConfigError("no profiles configured")
    names = [p.name for p in profiles]
    if len(set(names)) != len(names):
        raise ConfigError("profile names must be unique")

    try:
        machine = MachineParameters(**data.get("machine", {}))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"machine: {exc}") from None

    dev = _need(data, "device", "")
    try:
        if "curves" in dev:
            c = dev["curves"]
            paths = {k: _path(base, _need(c, k, "device.curves"), "device.curves") for k in ("vi_igbt", "vi_diode", "esw", "erec")}
            inputs.extend(paths.values())
            device = fit_device(
                read_vi_curve(paths["vi_igbt"]),
                read_vi_curve(paths["vi_diode"]),
                read_energy_curve(paths["esw"]),
                read_energy_curve(paths["erec"]),
                i_ref=float(_need(dev, "i_ref", "device")),
                u_ref=float(_need(dev, "u_ref", "device")),
                i_rated=dev.get("i_rated"),
            )
        else:
            device = DeviceCharacteristics(**dev)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"device: {exc}") from None

    th = _need(data, "thermal", "")
    thermal = ThermalNetwork(
        igbt=_ladder(_need(th, "igbt", "thermal"), "thermal.igbt"),
        diode=_ladder(_need(th, "diode", "thermal"), "thermal.diode"),
        t_heatsink=float(th.get("t_heatsink", 55.0)),
    )
    try:
        lifetime = LifetimeParams(**data.get("lifetime", {}))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"lifetime: {exc}") from None

    try:
        models = tuple(Resolution(m) for m in run.get("loss_models", ["t_o", "t_sw"]))
    except ValueError as exc:
        raise ConfigError(f"run.loss_models: {exc}") from None
    if not models:
        raise ConfigError("run.loss_models must not be empty")

    dt_el = float(grid.get("dt_electrical", 1e-3))
    if not dt_el > 0:
        raise ConfigError("grid.dt_electrical must be positive")
    export_dt = run.get("export_dt", 0.01)
    export_dt = float(export_dt) if export_dt else None
    hours = float(run.get("annual_driving_hours", 500.0))
    if not hours > 0:
        raise ConfigError("run.annual_driving_hours must be positive")
    out = Path(run.get("output_dir", "powerlife-out"))

    return RunConfig(
        profiles=profiles,
        machine=machine,
        device=device,
        thermal=thermal,
        lifetime=lifetime,
        loss_models=models,
        dt_electrical=dt_el,
        annual_driving_hours=hours,
        ratio_threshold=float(run.get("ratio_threshold", 2.0)),
        hysteresis=float(run.get("hysteresis_k", 0.1)),
        export_dt=export_dt,
        output_dir=out,
        inputs=tuple(inputs),
    )


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    cfg = parse_config(data, path.parent)
    cfg.source = path
    return cfg
