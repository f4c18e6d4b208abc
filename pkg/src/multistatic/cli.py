"""Command-line surface: scenario files in, estimates and sweep curves out.

Commands:
    simulate  one noisy trial plus ground truth, key-value text report
    sweep     Monte-Carlo noise sweep to CSV
    oracle    randomized cross-validation suites, nonzero exit on breach
    plot      sweep CSV to a standalone SVG line chart

Exit codes: 0 success, 1 usage/parse, 2 validation, 3 estimation failure,
4 oracle-threshold breach.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

from .errors import (
    DegenerateGeometry,
    InsufficientPairs,
    NoUsablePairs,
    OutOfBounds,
    ParseError,
    SingularGeometry,
    ValidationError,
)
from .estimator import estimate
from .geometry import ground_truth
from .measurement import NoiseSpec, derive_stream, generate_measurements
from .montecarlo import override_sigma, run_sweep
from .oracle import run_oracle_suite
from .scenario import ScenarioFile, parse_scenario
from .svgplot import CSV_HEADER, plot_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_ESTIMATION = 3
EXIT_ORACLE = 4

_ESTIMATION_ERRORS = (DegenerateGeometry, NoUsablePairs, InsufficientPairs, SingularGeometry)


class _Parser(argparse.ArgumentParser):
    # Usage errors are exit code 1, not argparse's default 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt6(x: float) -> str:
    return f"{x:.6f}"


def _fmt9(x: float) -> str:
    return f"{x:.9g}"


def _apply_overrides(sc: ScenarioFile, args) -> ScenarioFile:
    if getattr(args, "seed", None) is not None:
        sc = replace(sc, seed=args.seed)
    if getattr(args, "trials", None) is not None:
        if args.trials < 1:
            raise ValidationError(f"trials: must be >= 1, got {args.trials}")
        sc = replace(sc, trials=args.trials)
    if getattr(args, "noise_off", False):
        sc = replace(sc, noise=NoiseSpec(0.0, 0.0, 0.0))
    return sc


def cmd_simulate(args) -> int:
    sc = _apply_overrides(parse_scenario(args.scenario), args)
    scene = sc.scene()
    state = sc.target_state()
    truth = ground_truth(scene, state)
    stream = derive_stream(sc.seed, 0, 0)
    meas = generate_measurements(truth, state.position.angle_rad, sc.noise, stream)

    lines = [
        f"scene.pairs = {scene.n_pairs}",
        f"scene.max_range_m = {_fmt6(scene.max_range_m)}",
        f"scene.max_speed_mps = {_fmt6(scene.max_speed_mps)}",
    ]
    for i in range(1, scene.n_pairs + 1):
        tx = scene.tx(i)
        lines += [
            f"tx{i}.range_m = {_fmt6(tx.range_m)}",
            f"tx{i}.angle_deg = {_fmt6(math.degrees(tx.angle_rad))}",
        ]
    lines += [
        f"truth.range_m = {_fmt6(state.position.range_m)}",
        f"truth.angle_deg = {_fmt6(math.degrees(state.position.angle_rad))}",
        f"truth.speed_mps = {_fmt6(state.velocity.speed_mps)}",
        f"truth.heading_deg = {_fmt6(math.degrees(state.velocity.heading_rad))}",
    ]
    for i, pair in enumerate(truth, start=1):
        lines += [
            f"pair{i}.target_path_m = {_fmt6(pair.target_path_range_m)}",
            f"pair{i}.br_m = {_fmt6(pair.bistatic_range_m)}",
            f"pair{i}.brr_mps = {_fmt6(pair.bistatic_range_rate_mps)}",
            f"pair{i}.tx_angle_deg = {_fmt6(math.degrees(pair.tx_angle_rad))}",
        ]
    for i in range(1, scene.n_pairs + 1):
        lines += [
            f"meas{i}.br_m = {_fmt6(meas.br_m[i - 1])}",
            f"meas{i}.brr_mps = {_fmt6(meas.brr_mps[i - 1])}",
            f"meas{i}.doa_deg = {_fmt6(math.degrees(meas.doa_rad[i - 1]))}",
        ]

    est = estimate(scene, meas, args.heading_domain)
    pos = est.position_part
    lines += [
        f"est.range_m = {_fmt6(pos.position.range_m)}",
        f"est.angle_deg = {_fmt6(math.degrees(pos.position.angle_rad))}",
    ]
    for i, a in enumerate(pos.per_pair_range_m, start=1):
        lines.append(f"est.pair{i}.range_m = {_fmt6(a)}")
    if pos.degenerate_pairs:
        lines.append(
            "est.degenerate_pairs = " + ",".join(str(i) for i in pos.degenerate_pairs)
        )
    if est.velocity_part is None:
        lines.append("note = velocity requires >= 2 pairs")
    else:
        vel = est.velocity_part
        lines += [
            f"est.speed_mps = {_fmt6(vel.velocity.speed_mps)}",
            f"est.heading_deg = {_fmt6(math.degrees(vel.velocity.heading_rad))}",
            f"est.velocity_residual_mps = {_fmt6(vel.residual_mps)}",
        ]
        if vel.dropped_pairs:
            lines.append(
                "est.velocity_dropped_pairs = " + ",".join(str(i) for i in vel.dropped_pairs)
            )
        if vel.heading_degenerate:
            lines.append("est.heading_degenerate = true")
    print("\n".join(lines))
    return EXIT_OK


def cmd_sweep(args) -> int:
    sc = _apply_overrides(parse_scenario(args.scenario), args)
    spec = sc.sweep_spec(args.heading_domain)
    results = run_sweep(spec, workers=args.workers)
    lines = [CSV_HEADER]
    for sigma, report in results:
        noise = override_sigma(sc.noise, spec.swept_channel, sigma)
        vel = "" if report.rmse_velocity_mps is None else _fmt9(report.rmse_velocity_mps)
        lines.append(
            ",".join(
                [
                    spec.swept_channel,
                    _fmt9(noise.sigma_br_m),
                    _fmt9(noise.sigma_brr_mps),
                    _fmt9(noise.sigma_doa_deg),
                    _fmt9(report.rmse_position_m),
                    vel,
                    str(sc.trials),
                    str(report.trials_failed),
                    str(len(sc.txs)),
                ]
            )
        )
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_oracle(args) -> int:
    sc = _apply_overrides(parse_scenario(args.scenario), args)
    if args.samples < 1:
        raise ValidationError(f"samples: must be >= 1, got {args.samples}")
    report = run_oracle_suite(args.samples, seed=sc.seed)
    print(f"samples = {report.samples}")
    print(f"max_brr_fd_dev_mps = {report.max_brr_fd_dev_mps:.6e}")
    print(f"max_position_roundtrip_m = {report.max_position_roundtrip_m:.6e}")
    print(f"max_velocity_roundtrip_mps = {report.max_velocity_roundtrip_mps:.6e}")
    print(f"max_grid_speed_cells = {report.max_grid_speed_cells:.6e}")
    print(f"max_grid_heading_cells = {report.max_grid_heading_cells:.6e}")
    if report.ok:
        print("result = ok")
        return EXIT_OK
    print("result = breach", file=sys.stderr)
    for failure in report.failures:
        print(f"breach: {failure}", file=sys.stderr)
    return EXIT_ORACLE


def cmd_plot(args) -> int:
    try:
        plot_csv(args.csv, args.out, metric=args.metric)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="multistatic",
        description="Multistatic localization: forward models, estimators, Monte-Carlo sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, heading=True, trials=False, workers=False, noise_off=False):
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        if heading:
            p.add_argument(
                "--heading-domain",
                choices=("full", "half"),
                default="full",
                help="estimator heading domain: full [0, 2pi) or half [0, pi]",
            )
        if trials:
            p.add_argument("--trials", type=int, default=None, help="override the trial count")
        if workers:
            p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
        if noise_off:
            p.add_argument(
                "--noise-off", action="store_true", help="zero all noise channels"
            )

    p_sim = sub.add_parser("simulate", help="run one noisy trial and print a report")
    p_sim.add_argument("scenario", type=Path)
    add_common(p_sim, noise_off=True)
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="run the scenario's noise sweep to CSV")
    p_sweep.add_argument("scenario", type=Path)
    p_sweep.add_argument("out", type=Path, help="output CSV path")
    add_common(p_sweep, trials=True, workers=True)
    p_sweep.set_defaults(func=cmd_sweep)

    p_oracle = sub.add_parser("oracle", help="run randomized cross-validation suites")
    p_oracle.add_argument("scenario", type=Path)
    p_oracle.add_argument("--samples", type=int, default=1000, help="random instances to draw")
    add_common(p_oracle, heading=False)
    p_oracle.set_defaults(func=cmd_oracle)

    p_plot = sub.add_parser("plot", help="render a sweep CSV as an SVG line chart")
    p_plot.add_argument("csv", type=Path)
    p_plot.add_argument("out", type=Path, help="output SVG path")
    p_plot.add_argument("--metric", choices=("pos", "vel"), default="pos")
    p_plot.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, OutOfBounds, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except _ESTIMATION_ERRORS as exc:
        print(f"error: estimation failed: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION


if __name__ == "__main__":
    sys.exit(main())
