"""Command-line entry point: build, randgen, coverage, inspect, evaluate,
selfcheck.

Every subcommand is hermetic (no network, no state outside the named output
paths), exits 0 on success, and reports machine-parsable key<TAB>value
lines; failures print a single "error<TAB>..." line to stderr and exit
nonzero.  CWM_WORKERS overrides the default worker count.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import codec, engine, evalkit, fen, pgn, pipeline, randgen, shardio, split
from .rng import Xoshiro256StarStar


def _emit(lines, report_path=None):
    text = "\n".join(lines)
    print(text)
    if report_path:
        Path(report_path).write_text(text + "\n")


def cmd_build(args) -> int:
    skipped: list = []
    if args.input == "-":
        games = pgn.parse_pgn_stream(sys.stdin, skipped, id_source=args.id_source)
        report = pipeline.build_corpus(
            games, args.out_dir, args.shard_size, args.workers,
            args.min_full_moves, not args.raw_ep,
        )
    else:
        with open(args.input, encoding="utf-8", errors="replace") as fh:
            games = pgn.parse_pgn_stream(fh, skipped, id_source=args.id_source)
            report = pipeline.build_corpus(
                games, args.out_dir, args.shard_size, args.workers,
                args.min_full_moves, not args.raw_ep,
            )
    report.skipped_parse = len(skipped)
    lines = report.to_lines()
    for skip in skipped[:20]:
        lines.append(f"skipped_game\t{skip.index}\t{skip.reason}")
    _emit(lines, args.split_report)
    return 0


def cmd_randgen(args) -> int:
    cfg = randgen.GenConfig(
        master_seed=args.seed,
        target_games=args.games,
        min_full_moves=args.min_full_moves,
        max_plies=args.max_plies,
    )
    report = randgen.generate_test_set(
        cfg, args.out_dir, args.shard_size, args.workers, not args.raw_ep
    )
    _emit(report.to_lines())
    return 0


def cmd_coverage(args) -> int:
    trajs, _ = shardio.read_shards(args.shards)
    seen = set()
    for traj in trajs:
        seen.update(int(t) for t in traj.move_tokens[1:])
    possible = codec.enumerate_possible_moves()
    outside = sorted(seen - possible)
    lines = [
        f"games\t{len(trajs)}",
        f"unique_move_ids\t{len(seen)}",
        f"vocabulary\t{codec.MOVE_VOCAB}",
        f"coverage_percent\t{100.0 * len(seen) / codec.MOVE_VOCAB:.2f}",
        f"outside_possible\t{len(outside)}",
    ]
    for mid in outside[:20]:
        lines.append(f"outside_id\t{mid}")
    if args.against:
        other_trajs, _ = shardio.read_shards(args.against)
        other = set()
        for traj in other_trajs:
            other.update(int(t) for t in traj.move_tokens[1:])
        lines += [
            f"against_unique\t{len(other)}",
            f"both\t{len(seen & other)}",
            f"only_primary\t{len(seen - other)}",
            f"only_against\t{len(other - seen)}",
        ]
    _emit(lines, args.report)
    return 0


def cmd_inspect(args) -> int:
    for path in args.paths:
        with open(path, "rb") as fh:
            magic = fh.read(4)
        if magic == shardio.MAGIC:
            print(shardio.describe_shard(path, samples=args.samples))
        elif magic == shardio.PRED_MAGIC:
            print(shardio.describe_predictions(path))
        else:
            raise shardio.BadMagic(f"{path}: magic {magic!r}")
    return 0


def cmd_evaluate(args) -> int:
    trajs, _ = shardio.read_shards(args.shard)
    preds = shardio.read_predictions(args.predictions)
    report = evalkit.evaluate(trajs, preds)
    _emit(report.to_lines(), args.report)
    return 0


def _selfcheck_rows():
    """(name, ok) pairs for the hermetic sanity battery."""
    rows = []
    p = engine.initial_position()
    rows.append(("perft_initial_d3", engine.perft(p, 3) == 8902))
    kiwi = fen.parse_fen("r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1")
    rows.append(("perft_kiwipete_d2", engine.perft(kiwi, 2) == 2039))
    rows.append(("move_geometry_count", len(codec.enumerate_possible_moves()) == 1968))

    ok = True
    for uci, token in (("e2e4", 16820), ("e7e8q", 3861), ("a8b8", 5)):
        move = engine.Move.from_uci(uci)
        ok = ok and codec.encode_move(move) == token and codec.decode_move(token) == move
    rows.append(("move_codec_roundtrip", ok))

    state = codec.encode_state(p)
    rows.append(("state_codec_roundtrip", codec.encode_state(codec.decode_state(state)) == state))

    rows.append(("md5_split_golden", split.split_residue("abc") == 3570
                 and split.split_of("abc") is split.Split.TRAIN))
    rng = Xoshiro256StarStar(0)
    rows.append(("prng_golden", rng.next_u64() == 11091344671253066420))
    rows.append(("prng_first_move", Xoshiro256StarStar(0).next_u64() % 20 == 0))

    trajs = [randgen.generate_random_game(seed) for seed in range(3)]
    oracle = evalkit.evaluate(trajs, evalkit.oracle_predict(trajs))
    lag = evalkit.evaluate(trajs, evalkit.lagk_predict(trajs, 1))
    rows.append(("oracle_metrics_exact", oracle.cross_entropy == 0.0
                 and oracle.exact_state_rate == 1.0 and oracle.trajectory_exact_rate == 1.0))
    rows.append(("lag1_exact_rate", lag.exact_state_rate == lag.games / lag.timesteps))
    rows.append(("oracle_dominates_lag1", oracle.exact_state_rate >= lag.exact_state_rate
                 and oracle.labelwise_accuracy >= lag.labelwise_accuracy))
    return rows


def cmd_selfcheck(args) -> int:
    rows = _selfcheck_rows()
    failures = 0
    for name, ok in rows:
        print(f"{name}\t{'PASS' if ok else 'FAIL'}")
        failures += 0 if ok else 1
    print(f"selfcheck\t{'PASS' if failures == 0 else 'FAIL'}\t{len(rows) - failures}/{len(rows)}")
    return 1 if failures else 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chessworld",
        description="Move-to-state chess trajectory benchmark toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="PGN to train/validation trajectory shards")
    p.add_argument("--input", required=True, help="PGN file path, or - for stdin")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--shard-size", type=int, default=65536, help="games per shard")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--min-full-moves", type=int, default=10)
    p.add_argument("--split-report", default=None, help="also write the report here")
    p.add_argument("--id-source", choices=("segment", "site"), default="segment",
                   help="hash the Site URL tail segment (default) or the full value")
    p.add_argument("--raw-ep", action="store_true",
                   help="encode raw en passant squares instead of legality-gated")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("randgen", help="seeded random legal self-play shards")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--games", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--min-full-moves", type=int, default=10)
    p.add_argument("--max-plies", type=int, default=2048)
    p.add_argument("--shard-size", type=int, default=65536)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--raw-ep", action="store_true")
    p.set_defaults(func=cmd_randgen)

    p = sub.add_parser("coverage", help="move-token coverage of shard sets")
    p.add_argument("--shards", nargs="+", required=True)
    p.add_argument("--against", nargs="*", default=None,
                   help="second shard set for a coverage diff")
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("inspect", help="pretty-print shard/prediction headers")
    p.add_argument("paths", nargs="+")
    p.add_argument("--samples", type=int, default=1)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("evaluate", help="score a prediction file against a shard")
    p.add_argument("--shard", nargs="+", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("selfcheck", help="hermetic engine/codec/metric sanity battery")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # one-line machine-parsable failure
        print(f"error\t{type(exc).__name__}\t{exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
