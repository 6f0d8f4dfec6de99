"""Deterministic uniformly-random legal self-play generation.

Each game is driven by its own xoshiro256** stream (seeded via splitmix64
from the per-game seed); at every ply the move index is next_u64() modulo
the legal-move count over the engine's ascending-id ordering.  Games end at
the first non-ongoing status, claimable draws included.  Test-set seeds run
master_seed, master_seed+1, ... with rejected games (too short, or safety
cap reached) skipped while the seed counter still advances, so regeneration
is independent of acceptance history and of worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import shardio
from .engine import TERMINATION_BY_CODE, Termination, backend
from .pipeline import Trajectory, default_workers, passes_length_filter, trajectory_from_ids


class CapReached(Exception):
    """The safety cap was hit while the game was still ongoing."""


@dataclass
class GenConfig:
    master_seed: int
    target_games: int
    min_full_moves: int = 10
    max_plies: int = 2048

    def __post_init__(self):
        if self.target_games <= 0:
            raise ValueError("target_games must be positive")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must fit in 64 bits")


_RESULT_FOR_TERMINATION = {
    Termination.CHECKMATE: None,  # depends on the mated side
    Termination.STALEMATE: "1/2-1/2",
    Termination.INSUFFICIENT_MATERIAL: "1/2-1/2",
    Termination.SEVENTYFIVE_MOVE: "1/2-1/2",
    Termination.FIVEFOLD_REPETITION: "1/2-1/2",
    Termination.CLAIMABLE_FIFTY_MOVE: "1/2-1/2",
    Termination.CLAIMABLE_THREEFOLD: "1/2-1/2",
}


def _result_string(term: Termination, plies: int) -> str:
    if term is Termination.CHECKMATE:
        # the side that delivered mate moved last
        return "1-0" if plies % 2 == 1 else "0-1"
    return _RESULT_FOR_TERMINATION.get(term) or "*"


def generate_random_game(seed: int, max_plies: int = 2048, ep_gate: bool = True) -> Trajectory:
    """One complete random game as a trajectory; game id is "rand<seed>".

    Raises CapReached when `max_plies` is hit before termination; such
    games are discarded by the caller, never truncated.
    """
    ids, term_code, plies = backend.playout(seed, max_plies)
    term = TERMINATION_BY_CODE[term_code]
    if term is Termination.ONGOING:
        raise CapReached(f"seed {seed}: still ongoing after {plies} plies")
    return trajectory_from_ids(f"rand{seed}", _result_string(term, plies), ids, ep_gate)


@dataclass
class GenReport:
    master_seed: int
    accepted: int = 0
    rejected: int = 0
    shards: list = field(default_factory=list)
    manifest_path: str = ""

    def to_lines(self) -> list[str]:
        lines = [
            f"master_seed\t{self.master_seed}",
            f"accepted\t{self.accepted}",
            f"rejected\t{self.rejected}",
            f"manifest\t{self.manifest_path}",
        ]
        lines += [f"shard\t{p}" for p in self.shards]
        return lines


def _playout_block(args):
    start, count, max_plies = args
    return [backend.playout(start + i, max_plies) for i in range(count)]


def generate_test_set(
    cfg: GenConfig,
    out_dir: str | Path,
    shard_size: int = 65536,
    workers: int | None = None,
    ep_gate: bool = True,
) -> GenReport:
    """Generate shards until `target_games` acceptances; fully deterministic.

    The manifest is line-delimited text: a master_seed line, one row per
    attempted seed (seed, accepted flag, plies, termination kind), and
    accepted/rejected totals.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = workers or default_workers()
    min_plies = 2 * cfg.min_full_moves
    flags = 0 if ep_gate else shardio.FLAG_RAW_EP
    writer = shardio.RollingShardWriter(out_dir, "random", shard_size, flags)
    report = GenReport(master_seed=cfg.master_seed)
    manifest_path = out_dir / "manifest.txt"
    block = max(workers * 16, 64)

    def consume(seed, ids, term_code, plies, manifest):
        term = TERMINATION_BY_CODE[term_code]
        ok = term is not Termination.ONGOING and plies >= min_plies
        manifest.append(f"seed\t{seed}\t{int(ok)}\t{plies}\t{term.value}")
        if not ok:
            report.rejected += 1
            return False
        writer.add(trajectory_from_ids(f"rand{seed}", _result_string(term, plies), ids, ep_gate))
        report.accepted += 1
        return report.accepted >= cfg.target_games

    manifest = [f"master_seed\t{cfg.master_seed}"]
    next_seed = cfg.master_seed
    done = False
    if workers <= 1:
        while not done:
            ids, term_code, plies = backend.playout(next_seed, cfg.max_plies)
            done = consume(next_seed, ids, term_code, plies, manifest)
            next_seed += 1
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            while not done:
                starts = [(next_seed + i * block, block, cfg.max_plies) for i in range(workers)]
                next_seed += workers * block
                for results, (start, _, _) in zip(pool.map(_playout_block, starts), starts):
                    for offset, (ids, term_code, plies) in enumerate(results):
                        done = consume(start + offset, ids, term_code, plies, manifest)
                        if done:
                            break
                    if done:
                        break
    manifest.append(f"accepted\t{report.accepted}")
    manifest.append(f"rejected\t{report.rejected}")
    manifest_path.write_text("\n".join(manifest) + "\n")
    report.manifest_path = str(manifest_path)
    report.shards = [str(p) for p in writer.close()]
    return report
