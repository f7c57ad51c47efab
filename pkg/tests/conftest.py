from pathlib import Path

import numpy as np
import pytest

from powerlife.config import DATA_DIR, DEFAULT_CONFIG, load_config
from powerlife.mission import MissionProfile

# downscaled steady operating points, (rpm, N*m)
TABLE2 = {
    "HWFET-I": (362.78, 3.335),
    "HWFET-II": (362.80, 0.554),
    "HWFET-III": (906.68, 0.557),
    "HWFET-IV": (816.18, 2.781),
    "NYCC-I": (41.89, 3.367),
    "NYCC-II": (41.89, 0.556),
    "NYCC-III": (377.43, 0.752),
    "NYCC-IV": (377.43, 2.714),
}


def const_profile(rpm: float, torque: float, duration: float, name: str = "HOLD") -> MissionProfile:
    return MissionProfile(np.array([0.0, duration]), np.array([rpm, rpm]), np.array([torque, torque]), name=name)


def write_const_csv(path: Path, rpm: float, torque: float, duration: int) -> Path:
    lines = ["time_s,speed_rpm,torque_nm"] + [f"{k},{rpm},{torque}" for k in range(duration + 1)]
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture(scope="session")
def cfg():
    return load_config(DEFAULT_CONFIG)


@pytest.fixture(scope="session")
def machine(cfg):
    return cfg.machine


@pytest.fixture(scope="session")
def device(cfg):
    return cfg.device


@pytest.fixture(scope="session")
def net(cfg):
    return cfg.thermal


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR
