"""Command line entry point: ``powerlife run | fit-device | classify``."""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys

from .config import DEFAULT_CONFIG, ConfigError, load_config
from .losses import fit_device, read_energy_curve, read_vi_curve
from .mission import ProfileError, SituationThresholds, default_thresholds, load_profile, situation_shares


def _run(args) -> int:
    from .pipeline import run

    cfg = load_config(args.config)
    manifest = run(cfg, scenario=args.scenario, out_dir=args.out, plots=args.plots)
    report = json.loads((manifest.output_dir / "report.json").read_text())
    for c in report["comparison"]:
        ratio = "n/a" if c["ratio"] is None else f"{c['ratio']:.3g}"
        flag = "  switching-period model required" if c["switching_period_model_required"] else ""
        print(f"{c['profile']:>8} {c['device']:>6}  D(t_sw)/D(t_o) = {ratio}{flag}")
    for key, fail in manifest.failures.items():
        print(f"scenario {key} failed in stage {fail['stage']}: {fail['error']}", file=sys.stderr)
    print(f"outputs in {manifest.output_dir}")
    return manifest.exit_code


def _fit(args) -> int:
    dev = fit_device(
        read_vi_curve(args.vi_igbt),
        read_vi_curve(args.vi_diode),
        read_energy_curve(args.esw),
        read_energy_curve(args.erec),
        i_ref=args.i_ref,
        u_ref=args.u_ref,
        i_rated=args.i_rated,
    )
    print(json.dumps(dataclasses.asdict(dev), indent=2))
    return 0


def _classify(args) -> int:
    profile = load_profile(args.profile)
    th = default_thresholds(profile)
    if args.speed_split is not None or args.torque_split is not None:
        th = SituationThresholds(
            speed_split=args.speed_split if args.speed_split is not None else th.speed_split,
            torque_split=args.torque_split if args.torque_split is not None else th.torque_split,
        )
    shares = situation_shares(profile, th)
    out = {
        "profile": profile.name,
        "speed_split_rpm": th.speed_split,
        "torque_split_nm": th.torque_split,
        "shares": {cls.value: float(v) for cls, v in sorted(shares.items(), key=lambda kv: kv[0].value)},
    }
    print(json.dumps(out, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="powerlife", description="Inverter loss, junction temperature and lifetime runs.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run every (profile, loss model) scenario of a config")
    r.add_argument("--config", default=str(DEFAULT_CONFIG), help="TOML config (default: bundled fixtures)")
    r.add_argument("--scenario", help="profile name, or PROFILE/model such as NYCC/t_sw")
    r.add_argument("--out", help="output directory (overrides run.output_dir)")
    r.add_argument("--plots", action="store_true", help="also write SVG figures")
    r.set_defaults(func=_run)

    f = sub.add_parser("fit-device", help="fit loss characteristics from datasheet curves, print JSON")
    f.add_argument("--vi-igbt", required=True)
    f.add_argument("--vi-diode", required=True)
    f.add_argument("--esw", required=True)
    f.add_argument("--erec", required=True)
    f.add_argument("--i-ref", type=float, default=25.0)
    f.add_argument("--u-ref", type=float, default=600.0)
    f.add_argument("--i-rated", type=float)
    f.set_defaults(func=_fit)

    c = sub.add_parser("classify", help="share of samples per situation class of a profile")
    c.add_argument("--profile", required=True)
    c.add_argument("--speed-split", type=float, help="rpm (default: mid-range)")
    c.add_argument("--torque-split", type=float, help="N*m (default: mid-range)")
    c.set_defaults(func=_classify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ProfileError, ValueError, OSError) as exc:
        print(f"powerlife: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
