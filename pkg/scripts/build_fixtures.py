"""Regenerate the shaft-level driving-cycle fixtures shipped with powerlife.

HWFET uses the EPA second-by-second speed schedule (scripts/data).  The NYCC
fixture is a synthetic, deterministic stop-and-go schedule built to the
published NYCC statistics (598 s, about 1.9 km, 44.6 km/h top speed,
2.68 m/s^2 peak acceleration) because the official table is not bundled in
any package available here.

Vehicle speed is mapped to motor speed through a direct drive with the
wheel radius below; shaft torque follows a road-load model.  Torque in the
files is NOT downscaled; runs scale it to the device rating.

    python scripts/build_fixtures.py
"""
from pathlib import Path

import numpy as np

HERE = Path(__file__).parent
OUT = HERE.parent / "src" / "powerlife" / "data"

MASS = 1091.0  # kg
WHEEL_RADIUS = 0.282  # m
G = 9.81
C_RR = 0.009
RHO_AIR = 1.2
CD_A = 0.5  # m^2

# (idle s, top speed km/h, accel m/s^2, cruise s, decel m/s^2)
NYCC_TRIPS = [
    (14, 18.0, 1.6, 4, 1.6),
    (10, 27.0, 2.2, 9, 1.9),
    (18, 12.0, 1.3, 3, 1.2),
    (13, 44.6, 2.68, 43, 2.4),
    (16, 21.0, 1.8, 6, 1.5),
    (22, 33.0, 2.0, 31, 2.1),
    (13, 15.0, 1.4, 6, 1.4),
    (19, 24.0, 1.9, 19, 1.7),
    (15, 38.0, 2.5, 34, 2.2),
    (12, 10.0, 1.1, 4, 1.0),
    (17, 29.0, 2.1, 12, 2.0),
]
NYCC_DURATION = 598


def nycc_speed() -> np.ndarray:
    """1 Hz vehicle speed (m/s) of the synthetic city schedule."""
    v = []
    for idle, top_kmh, acc, cruise, dec in NYCC_TRIPS:
        v += [0.0] * idle
        top = top_kmh / 3.6
        n_up = int(np.ceil(top / acc))
        v += list(np.minimum(acc * np.arange(1, n_up + 1), top))
        v += [top] * cruise
        n_dn = int(np.ceil(top / dec))
        v += list(np.maximum(top - dec * np.arange(1, n_dn + 1), 0.0))
    v = np.asarray(v)
    if v.size > NYCC_DURATION + 1:
        raise SystemExit(f"trip list too long: {v.size} s")
    return np.concatenate((v, np.zeros(NYCC_DURATION + 1 - v.size)))


def road_load_torque(v: np.ndarray, dt: float = 1.0) -> np.ndarray:
    a = np.gradient(v, dt)
    force = MASS * a + np.where(v > 0, MASS * G * C_RR, 0.0) + 0.5 * RHO_AIR * CD_A * v**2
    return force * WHEEL_RADIUS


def write(name: str, v: np.ndarray) -> None:
    rpm = v / (2 * np.pi * WHEEL_RADIUS) * 60.0
    tq = road_load_torque(v)
    path = OUT / f"{name}.csv"
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write("time_s,speed_rpm,torque_nm\n")
        for k, (s, q) in enumerate(zip(rpm, tq)):
            fh.write(f"{k},{s:.6f},{q:.6f}\n")
    print(f"{path}: {v.size} samples, {np.trapezoid(v) / 1000:.2f} km, top {v.max() * 3.6:.1f} km/h, "
          f"mean {v.mean() * 3.6:.1f} km/h, max |torque| {np.abs(tq).max():.1f} N*m")


def main() -> None:
    hw = np.genfromtxt(HERE / "data" / "hwfet_speed_mps.csv", delimiter=",", skip_header=1)
    write("hwfet", hw[:, 1])
    write("nycc", nycc_speed())


if __name__ == "__main__":
    main()
