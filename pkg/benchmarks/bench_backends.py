"""Benchmark the compiled engine kernels against the pure-Python fallback.

Run from the repo root:

    python3 benchmarks/bench_backends.py [--quick]

Reports perft node rates, random-playout throughput, and trajectory
replay+encode throughput for both backends, and verifies they agree on
the benchmarked inputs.
"""

from __future__ import annotations

import argparse
import time

from chessworld.engine import _pure

try:
    from chessworld.engine import _core
except ImportError:
    _core = None


def timed(fn, *args, repeat=1):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return result, best


def bench_perft(backend, depth):
    board = bytes(_pure.START_BOARD)
    nodes, secs = timed(backend.perft, board, 0, 15, -1, depth)
    return nodes, secs


def bench_playout(backend, n_games, max_plies=512):
    t0 = time.perf_counter()
    plies = 0
    results = []
    for seed in range(n_games):
        ids, term, n = backend.playout(seed, max_plies)
        plies += n
        results.append((ids[:4], term, n))
    return results, plies, time.perf_counter() - t0


def bench_replay(backend, games):
    t0 = time.perf_counter()
    blobs = []
    plies = 0
    for ids in games:
        blobs.append(backend.replay_states(ids, True))
        plies += len(ids)
    return blobs, plies, time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args()

    if _core is None:
        print("compiled backend unavailable; nothing to compare")
        return

    perft_depth = 4 if args.quick else 5
    pure_depth = 3 if args.quick else 4
    n_games = 20 if args.quick else 100

    print(f"{'kernel':<28}{'backend':<10}{'work':>16}{'time':>10}{'rate':>16}")

    nodes, secs = bench_perft(_core, perft_depth)
    print(f"{'perft d' + str(perft_depth):<28}{'compiled':<10}{nodes:>10} leaves"
          f"{secs:>9.2f}s{nodes / secs / 1e6:>12.2f} M/s")
    nodes_p, secs_p = bench_perft(_pure, pure_depth)
    print(f"{'perft d' + str(pure_depth):<28}{'pure':<10}{nodes_p:>10} leaves"
          f"{secs_p:>9.2f}s{nodes_p / secs_p / 1e6:>12.3f} M/s")

    res_c, plies_c, secs = bench_playout(_core, n_games)
    print(f"{'random playout':<28}{'compiled':<10}{plies_c:>11} plies"
          f"{secs:>9.2f}s{plies_c / secs / 1e3:>12.1f} k/s")
    res_p, plies_p, secs_p = bench_playout(_pure, n_games)
    print(f"{'random playout':<28}{'pure':<10}{plies_p:>11} plies"
          f"{secs_p:>9.2f}s{plies_p / secs_p / 1e3:>12.1f} k/s")
    assert res_c == res_p, "backends disagree on playouts"

    games = [_core.playout(seed, 512)[0] for seed in range(n_games // 2)]
    blobs_c, plies, secs = bench_replay(_core, games)
    print(f"{'replay+encode':<28}{'compiled':<10}{plies:>11} plies"
          f"{secs:>9.2f}s{plies / secs / 1e3:>12.1f} k/s")
    blobs_p, _, secs_p = bench_replay(_pure, games)
    print(f"{'replay+encode':<28}{'pure':<10}{plies:>11} plies"
          f"{secs_p:>9.2f}s{plies / secs_p / 1e3:>12.1f} k/s")
    assert blobs_c == blobs_p, "backends disagree on replay encoding"

    print("\nbackends agree on all benchmarked outputs")


if __name__ == "__main__":
    main()
