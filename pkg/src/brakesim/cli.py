"""Command line front end.

Subcommands: ``extract`` (recording CSVs to start scenes), ``simulate``
(scenes to collision-rate tables), ``synth`` (random scenes) and
``oracle-check`` (engine vs closed-form equivalence suite).

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from .dataset_ingest import DataError, load_recording, parse_column_map
from .harness import (
    SweepSpec,
    emit_report,
    generate_synthetic_scenes,
    run_sweep,
    write_records_csv,
)
from .pair_extraction import (
    FilterConfig,
    extract_following_pairs,
    read_scenes_csv,
    write_scenes_csv,
    write_start_scenes_csv,
)
from .sim_engine import FollowerModel, NumericalFailure, SimConfig
from .verification import sbm_oracle_check

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors on exit code 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")


def _float_pair(text: str) -> tuple[float, float]:
    values = _float_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected lo,hi - got {text!r}")
    return values[0], values[1]


def _models(text: str) -> list[FollowerModel]:
    out = []
    for part in text.split(","):
        try:
            out.append(FollowerModel[part.strip().upper()])
        except KeyError:
            raise argparse.ArgumentTypeError(f"unknown model {part!r} (sbm or idm)")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="brakesim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="recording CSVs -> start scenes CSV")
    p.add_argument("--tracks", required=True)
    p.add_argument("--meta", required=True)
    p.add_argument("--column-map", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--heading-max", type=float, default=15.0)
    p.add_argument("--bearing-max", type=float, default=15.0)
    p.add_argument("--lateral-max", type=float, default=1.0)
    p.add_argument("--min-follow", type=float, default=1.0)
    p.add_argument("--vru-margin", type=float, default=2.0)
    p.add_argument("--frame-rate", type=float, default=None,
                   help="override the column-map frame rate")

    p = sub.add_parser("simulate", help="scenes CSV -> collision-rate table")
    p.add_argument("--scenes", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--reaction-times", type=_float_list,
                   default=[0.0, 0.5, 1.0, 1.5, 2.0, 2.5])
    p.add_argument("--lead-decels", type=_float_list, default=[-3.41, -1.71])
    p.add_argument("--models", type=_models,
                   default=[FollowerModel.SBM, FollowerModel.IDM])
    p.add_argument("--follower-decel", type=float, default=-3.41)
    p.add_argument("--dt", type=float, default=0.04)
    p.add_argument("--max-duration", type=float, default=60.0)
    p.add_argument("--per-scenario", default=None,
                   help="also write one row per (scene, cell) to this CSV")
    p.add_argument("--format", choices=("csv", "markdown"), default="csv")
    p.add_argument("--engine", choices=("batch", "scalar"), default="batch")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("synth", help="seeded random start scenes CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--gap-range", type=_float_pair, default=(2.0, 60.0))
    p.add_argument("--speed-range", type=_float_pair, default=(0.0, 13.89))
    p.add_argument("--out", required=True)

    p = sub.add_parser("oracle-check", help="engine vs closed-form braking kinematics")
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--dt", type=float, default=0.04)

    return parser


def _cmd_extract(args) -> int:
    cmap = parse_column_map(args.column_map)
    if args.frame_rate is not None:
        cmap.frame_rate_hz = args.frame_rate
    rec = load_recording(args.tracks, args.meta, cmap)
    cfg = FilterConfig(
        heading_max_deg=args.heading_max,
        bearing_max_deg=args.bearing_max,
        lateral_offset_max_m=args.lateral_max,
        min_follow_duration_s=args.min_follow,
        vru_corridor_margin_m=args.vru_margin,
    )
    pairs, diag = extract_following_pairs(rec, cfg)
    write_scenes_csv(args.out, pairs, rec.tracks_meta, rec.recording_id)
    print(
        f"extracted {diag.n_emitted} scenes from {diag.n_frames} frames "
        f"({diag.n_degenerate} degenerate pairs dropped) -> {args.out}"
    )
    return EXIT_OK


def _cmd_simulate(args) -> int:
    scenes = read_scenes_csv(args.scenes)
    if not scenes:
        print(f"{args.scenes}: no scenes", file=sys.stderr)
        return EXIT_DATA
    spec = SweepSpec(
        reaction_times_s=tuple(args.reaction_times),
        lead_decels_mps2=tuple(args.lead_decels),
        follower_models=tuple(args.models),
        follower_decel_mps2=args.follower_decel,
        engine=SimConfig(dt_s=args.dt, max_duration_s=args.max_duration),
    )
    table, records = run_sweep(
        scenes,
        spec,
        engine=args.engine,
        workers=args.workers,
        keep_records=args.per_scenario is not None,
    )
    emit_report(table, args.format, args.out)
    if args.per_scenario is not None:
        write_records_csv(args.per_scenario, records)
    print(f"simulated {len(scenes)} scenes x {len(table.cells)} cells -> {args.out}")
    return EXIT_OK


def _cmd_synth(args) -> int:
    scenes = generate_synthetic_scenes(
        args.n, args.seed, gap_range_m=args.gap_range, speed_range_mps=args.speed_range
    )
    write_start_scenes_csv(args.out, scenes)
    print(f"wrote {len(scenes)} synthetic scenes -> {args.out}")
    return EXIT_OK


def _cmd_oracle_check(args) -> int:
    result = sbm_oracle_check(args.n, args.seed, dt_s=args.dt)
    print(result.summary())
    return EXIT_OK if result.ok else EXIT_NUMERICAL


_COMMANDS = {
    "extract": _cmd_extract,
    "simulate": _cmd_simulate,
    "synth": _cmd_synth,
    "oracle-check": _cmd_oracle_check,
}

_NEGATIVE_VALUE = re.compile(r"^-\d")


def _merge_negative_values(argv: list[str]) -> list[str]:
    """Join '--flag -3.41,-1.71' into '--flag=-3.41,-1.71' so argparse does
    not read the leading dash of a negative value as an option."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (
            tok.startswith("--")
            and "=" not in tok
            and i + 1 < len(argv)
            and _NEGATIVE_VALUE.match(argv[i + 1])
        ):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _merge_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"brakesim: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DataError as exc:
        print(f"brakesim: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalFailure as exc:
        print(f"brakesim: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"brakesim: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
