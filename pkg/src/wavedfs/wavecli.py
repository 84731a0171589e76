"""
wavedfs.wavecli — command-line front end.

Verbs: build-dfs, circular, placement, scaling, bounds, spectrum.
Global flags: --config PATH, --out DIR, --seed N, --format {csv,json}, --svg.
Exit codes: 0 success, 1 usage/config error, 2 assertion/violation.

All outputs are written atomically (temp file + rename); every CSV carries a
header row and the scenario hash as a comment, so a run can be reproduced
from its recorded config.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import __version__
from .wavefield import PlaneWave, SensorArray, SignString
from .control import coupling_strength, lockin_sequence
from .dfsbuild import (DegenerateSignal, build_dfs_plan, placement, snr)
from .bounds import (lemma_oracle_suite, unique_dfs_check,
                     verify_product_bound, ProductDistribution,
                     minimal_sensor_count)
from .comparison import scaling_point
from .dfsbuild import enumerate_affine_dfs
from .metrology import ProductState
from .scenarios import NOISY_ARC, Scenario, circular_scenario
from .svgplot import line_plot

__all__ = ["main"]


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows, scenario_hash="") -> str:
    lines = []
    if scenario_hash:
        lines.append(f"# scenario: {scenario_hash}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def _load_scenario(args) -> Scenario:
    if not args.config:
        raise SystemExit(_usage_error("this command requires --config"))
    with open(args.config) as fh:
        return Scenario.from_json_dict(json.load(fh))


def _usage_error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 1


def cmd_build_dfs(args) -> int:
    scenario = _load_scenario(args)
    mode = args.mode
    try:
        plan = build_dfs_plan(scenario, mode=mode)
    except DegenerateSignal as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = Path(args.out)
    _atomic_write(out / "plan.json",
                  json.dumps({"scenario_hash": scenario.scenario_hash(),
                              **plan.to_json_dict()}, indent=2) + "\n")

    alphas = np.linspace(0.0, 2 * math.pi, args.grid, endpoint=False)
    rows = []
    series = {"fast_cos": [], "fast_sin": [], "slow_cos": [], "slow_sin": []}
    for a in alphas:
        k = (math.cos(a), math.sin(a))
        record = [f"{a:.10g}"]
        for name, control in (("fast", plan.fast), ("slow", plan.slow)):
            for comp, phi in (("cos", 0.0), ("sin", math.pi / 2)):
                probe = PlaneWave(scenario.omega, k, phi)
                g = coupling_strength(plan.z, control, scenario.sensors,
                                      probe).g
                record.append(str(g * g))
                series[f"{name}_{comp}"].append(g * g)
        rows.append(record)
    _atomic_write(out / "spectrum.csv",
                  _csv_text(["alpha", "g2_fast_cos", "g2_fast_sin",
                             "g2_slow_cos", "g2_slow_sin"], rows,
                            scenario.scenario_hash()))
    if args.svg:
        svg = line_plot([{"x": alphas, "y": series["fast_cos"],
                          "label": "fast cos"},
                         {"x": alphas, "y": series["slow_cos"],
                          "label": "slow cos"}],
                        title="coupling spectrum", xlabel="alpha",
                        ylabel="g^2")
        _atomic_write(out / "spectrum.svg", svg)
    return 0


def cmd_circular(args) -> int:
    n_list = [int(v) for v in args.n_list.split(",")] if args.n_list else \
        list(range(2, 27, 2))
    if any(n < 2 or n % 2 for n in n_list):
        return _usage_error("n values must be even and at least 2")
    rows, ns, sig2s, snrs = [], [], [], []
    for n in n_list:
        scenario = circular_scenario(n)
        plan = build_dfs_plan(scenario)
        result = snr(scenario, plan.fast, plan.z, NOISY_ARC, args.grid)
        virt = max(abs(coupling_strength(plan.z, plan.fast, scenario.sensors,
                                         w).g) for w in scenario.noises)
        rows.append([n, str(result.signal_g2), str(result.max_noise_g2),
                     str(result.value), str(virt)])
        ns.append(n)
        sig2s.append(result.signal_g2)
        snrs.append(result.value)
    out = Path(args.out)
    _atomic_write(out / "circular.csv",
                  _csv_text(["n", "signal_g2", "max_noise_g2", "snr",
                             "max_virtual_g"], rows))
    if args.svg:
        svg = line_plot([{"x": ns, "y": snrs, "label": "SNR"},
                         {"x": ns, "y": sig2s, "label": "signal g^2"}],
                        title="circular aDFS", xlabel="n", ylabel="value",
                        logy=True)
        _atomic_write(out / "circular.svg", svg)
    return 0


def cmd_placement(args) -> int:
    if args.config:
        with open(args.config) as fh:
            doc = json.load(fh)
        omega = float(doc.get("omega", 1.0))
        waves = [PlaneWave(omega, tuple(w["k"]), float(w.get("phi", 0.0)))
                 for w in doc["waves"] if w.get("role", "noise") == "noise"]
        x0 = tuple(doc.get("x0", (0.0, 0.0)))
    else:
        waves = [PlaneWave(1.0, (1.0, 0.0)), PlaneWave(1.0, (0.0, 1.0)),
                 PlaneWave(1.0, (math.cos(1.0), math.sin(1.0)))]
        x0 = (0.0, 0.0)
    if len(waves) > 10:
        return _usage_error("placement capped at 10 noise waves (2^d sensors)")
    sensors = placement(waves, x0)
    T = 2 * math.pi / waves[0].omega
    control = lockin_sequence(waves[0].omega, T, sensors.n)
    z = SignString.ones(sensors.n)
    worst = 0.0
    for w in waves:
        for phi in np.linspace(0.0, 2 * math.pi, 16, endpoint=False):
            probe = PlaneWave(w.omega, w.kvec, phi)
            worst = max(worst, abs(coupling_strength(z, control, sensors,
                                                     probe).g))
    out = Path(args.out)
    payload = {"positions": [list(p) for p in sensors.positions],
               "max_noise_coupling": worst}
    _atomic_write(out / "placement.json", json.dumps(payload, indent=2) + "\n")
    alphas = np.linspace(0.0, 2 * math.pi, args.grid, endpoint=False)
    g2 = []
    for a in alphas:
        probe = PlaneWave(waves[0].omega, (math.cos(a), math.sin(a)), 0.0)
        g = coupling_strength(z, control, sensors, probe).g
        g2.append(g * g)
    _atomic_write(out / "placement.csv",
                  _csv_text(["alpha", "g2"],
                            [[f"{a:.10g}", str(v)]
                             for a, v in zip(alphas, g2)]))
    if args.svg:
        _atomic_write(out / "placement.svg",
                      line_plot([{"x": alphas, "y": g2, "label": "g^2"}],
                                title="placement sensitivity",
                                xlabel="alpha", ylabel="g^2"))
    if worst > 1e-10:
        print(f"violation: residual noise coupling {worst:.3e}",
              file=sys.stderr)
        return 2
    return 0


def cmd_scaling(args) -> int:
    m_list = [int(v) for v in args.m_list.split(",")]
    rows = []
    ms, ent_per_n, prod_per_n, cfi_per_n = [], [], [], []
    for m in m_list:
        point = scaling_point(m, args.scaling, restarts=args.restarts,
                              budget=args.budget, seed=args.seed)
        rows.append([m, point.n, str(point.qfi_ent), str(point.qfi_prod),
                     str(point.cfi_prod)])
        ms.append(m)
        ent_per_n.append(point.qfi_ent / point.n)
        prod_per_n.append(point.qfi_prod / point.n)
        cfi_per_n.append(point.cfi_prod / point.n)
    out = Path(args.out)
    _atomic_write(out / "scaling.csv",
                  _csv_text(["m", "n", "qfi_ent", "qfi_prod", "cfi_prod"],
                            rows))
    if args.svg:
        svg = line_plot([{"x": ms, "y": ent_per_n, "label": "QFI ent / n"},
                         {"x": ms, "y": prod_per_n, "label": "QFI prod / n"},
                         {"x": ms, "y": cfi_per_n, "label": "CFI prod / n"}],
                        title=f"{args.scaling} scaling", xlabel="m",
                        ylabel="per-sensor information", logy=True)
        _atomic_write(out / "scaling.svg", svg)
    return 0


def cmd_bounds(args) -> int:
    report = lemma_oracle_suite(n_max=args.n_max, samples=args.samples,
                                seed=args.seed)
    sweeps = []
    rng = np.random.default_rng(args.seed)
    violations = list(report.detail["violations"])
    # product-bound sweep over the unique-DFS minimal scenarios
    for n in (2, 3, 4):
        scenario = _minimal_scenario(n)
        plan = build_dfs_plan(scenario)
        partition = enumerate_affine_dfs(scenario, plan.fast)
        m = minimal_sensor_count(scenario, plan.fast)
        for key, members in partition.classes.items():
            if len(members) < 2:
                continue
            for _ in range(8):
                dist = ProductDistribution(tuple(rng.random(n)))
                rep = verify_product_bound(dist, members, m)
                sweeps.append(rep.ok)
                if not rep.ok:
                    violations.append({"lemma": "product_bound",
                                       "n": n, "margin": rep.margin})
        gamma = plan.amplitudes  # noqa: F841  (kept for the record payload)
        unique = unique_dfs_check(
            scenario, plan.fast,
            lambda z: coupling_strength(z, plan.fast, scenario.sensors,
                                        scenario.signal).g)
        if not unique.ok:
            violations.append({"lemma": "unique_dfs", "n": n})
    payload = {
        "version": __version__,
        "samples": report.detail["samples"],
        "worst_margin": report.margin,
        "product_bound_checks": len(sweeps),
        "violations": violations,
    }
    _atomic_write(Path(args.out) / "bounds.json",
                  json.dumps(payload, indent=2, default=str) + "\n")
    if violations:
        print(f"violations: {len(violations)}", file=sys.stderr)
        return 2
    return 0


def _minimal_scenario(n: int) -> Scenario:
    """n sensors on a line with n−1 generic noise directions: m = n."""
    sensors = SensorArray(tuple((0.7 * i, 0.31 * i * i) for i in range(n)))
    signal = PlaneWave(1.0, (math.cos(0.4), math.sin(0.4)), 0.0)
    noises = tuple(PlaneWave(1.0, (math.cos(2.0 + 0.5 * j),
                                   math.sin(2.0 + 0.5 * j)), 0.1 * j)
                   for j in range(n - 1))
    return Scenario(sensors, signal, noises, 3)


def cmd_spectrum(args) -> int:
    scenario = _load_scenario(args)
    plan = build_dfs_plan(scenario, mode=args.mode)
    control = plan.fast if args.control == "fast" else plan.slow
    if args.sweep == "angle":
        grid = np.linspace(0.0, 2 * math.pi, args.grid, endpoint=False)
        probes = [PlaneWave(scenario.omega, (math.cos(a), math.sin(a)), 0.0)
                  for a in grid]
    else:
        grid = np.linspace(0.25 * scenario.omega, 6.0 * scenario.omega,
                           args.grid)
        probes = [PlaneWave(w, scenario.signal.kvec, scenario.signal.phi)
                  for w in grid]
    rows = []
    for x, probe in zip(grid, probes):
        g = coupling_strength(plan.z, control, scenario.sensors, probe).g
        rows.append([f"{x:.10g}", str(g * g)])
    _atomic_write(Path(args.out) / "spectrum.csv",
                  _csv_text([args.sweep, "g2"], rows,
                            scenario.scenario_hash()))
    if args.svg:
        _atomic_write(Path(args.out) / "spectrum.svg",
                      line_plot([{"x": grid, "y": [float(r[1]) for r in rows],
                                  "label": "g^2"}],
                                title="coupling spectrum", xlabel=args.sweep,
                                ylabel="g^2"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavedfs",
        description="DFS control design for qubit sensor networks")
    parser.add_argument("--version", action="version",
                        version=f"wavedfs {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="scenario JSON path")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--svg", action="store_true")
    common.add_argument("--grid", type=int, default=256)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-dfs", parents=[common],
                       help="three-step DFS construction + spectrum")
    p.add_argument("--mode", default="known_phases",
                   choices=("known_phases", "unknown_phases",
                            "point_symmetric"))
    p.set_defaults(func=cmd_build_dfs)

    p = sub.add_parser("circular", parents=[common],
                       help="circular approximate DFS sweep over n")
    p.add_argument("--n-list", default=None,
                   help="comma-separated even n values (default 2..26)")
    p.set_defaults(func=cmd_circular, grid=1024)

    p = sub.add_parser("placement", parents=[common],
                       help="noise-cancelling sensor placement")
    p.set_defaults(func=cmd_placement)

    p = sub.add_parser("scaling", parents=[common],
                       help="entangled vs product scaling comparison")
    p.add_argument("--m-list", default="2,4,6")
    p.add_argument("--scaling", default="minimal",
                   choices=("minimal", "linear", "quadratic"))
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--budget", type=int, default=2000)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("bounds", parents=[common],
                       help="randomized verification of the tail bounds")
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--n-max", type=int, default=12)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("spectrum", parents=[common],
                       help="coupling spectrum for a scenario")
    p.add_argument("--mode", default="known_phases",
                   choices=("known_phases", "unknown_phases",
                            "point_symmetric"))
    p.add_argument("--control", default="fast", choices=("fast", "slow"))
    p.add_argument("--sweep", default="angle", choices=("angle", "frequency"))
    p.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors; remap to 1
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
