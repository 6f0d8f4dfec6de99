"""Trajectory construction and the deterministic corpus build.

A trajectory aligns move tokens x_0..x_T (x_0 = START) with encoded states
s_0..s_T, where s_t is the position after replaying the first t moves.
Corpus building parallelises SAN resolution per game but writes shards in
input order, so output bytes are identical for any worker count.
"""

from __future__ import annotations

import os
from array import array
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from . import codec, pgn, shardio
from .engine import backend
from .engine._pure import START_BOARD
from .pgn import RawGame
from .split import Split, split_of


class IllegalGame(Exception):
    """A game's SAN text does not resolve to a legal move sequence."""


@dataclass
class Trajectory:
    """Aligned move-token / state-label sequences for one game."""

    game_id: str
    result: str
    move_tokens: array  # uint16, length T+1, starts with START
    states: bytes  # (T+1) * 75 label bytes

    @property
    def T(self) -> int:
        return len(self.move_tokens) - 1

    def state(self, t: int) -> bytes:
        return self.states[t * 75 : (t + 1) * 75]


def resolve_san_game(san_moves: Iterable[str]) -> list[int]:
    """SAN move list to packed move ids, replaying from the start."""
    board, stm, castling, ep = bytes(START_BOARD), 0, 15, -1
    halfmove, fullmove = 0, 1
    ids = []
    for ply, san in enumerate(san_moves, 1):
        legal = backend.legal_moves(board, stm, castling, ep)
        matches = pgn._match_san(board, stm, legal, san)
        if len(matches) != 1:
            why = "ambiguous" if matches else "no legal match"
            raise IllegalGame(f"ply {ply}: SAN {san!r} {why}")
        src, tgt, promo = matches[0]
        ids.append(src * 320 + tgt * 5 + promo)
        board, stm, castling, ep, halfmove, fullmove, _ = backend.apply_move(
            board, stm, castling, ep, halfmove, fullmove, src, tgt, promo
        )
    return ids


def trajectory_from_ids(game_id: str, result: str, ids: list[int], ep_gate: bool = True) -> Trajectory:
    states = backend.replay_states(ids, ep_gate)
    tokens = array("H", [codec.START_TOKEN])
    tokens.extend(ids)
    return Trajectory(game_id, result, tokens, states)


def build_trajectory(game: RawGame, ep_gate: bool = True) -> Trajectory:
    """Replay a parsed game into an aligned trajectory.

    Raises IllegalGame when any SAN fails to resolve; length filtering is a
    separate concern (`passes_length_filter`).
    """
    ids = resolve_san_game(game.san_moves)
    return trajectory_from_ids(game.game_id, game.result, ids, ep_gate)


def passes_length_filter(traj: Trajectory, min_full_moves: int = 10) -> bool:
    """True iff the game has at least `min_full_moves` completed full moves."""
    return traj.T >= 2 * min_full_moves


@dataclass
class BuildReport:
    games_seen: int = 0
    games_kept: int = 0
    skipped_parse: int = 0
    skipped_illegal: int = 0
    filtered_short: int = 0
    train_games: int = 0
    validation_games: int = 0
    train_shards: list = field(default_factory=list)
    validation_shards: list = field(default_factory=list)

    def validation_fraction(self) -> float:
        return self.validation_games / self.games_kept if self.games_kept else 0.0

    def to_lines(self) -> list[str]:
        lines = [
            f"games_seen\t{self.games_seen}",
            f"games_kept\t{self.games_kept}",
            f"skipped_parse\t{self.skipped_parse}",
            f"skipped_illegal\t{self.skipped_illegal}",
            f"filtered_short\t{self.filtered_short}",
            f"train_games\t{self.train_games}",
            f"validation_games\t{self.validation_games}",
            f"validation_fraction\t{self.validation_fraction():.6f}",
        ]
        for path in self.train_shards + self.validation_shards:
            lines.append(f"shard\t{path}")
        return lines


def default_workers() -> int:
    env = os.environ.get("CWM_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _resolve_chunk(chunk):
    """Worker: SAN lists to packed-id lists; errors become strings."""
    out = []
    for sans in chunk:
        try:
            out.append(resolve_san_game(sans))
        except IllegalGame as exc:
            out.append(str(exc))
    return out


def build_corpus(
    games: Iterable[RawGame],
    out_dir: str | Path,
    shard_size: int = 65536,
    workers: int | None = None,
    min_full_moves: int = 10,
    ep_gate: bool = True,
) -> BuildReport:
    """Build train/validation shards from parsed games.

    Games are resolved in parallel but consumed in input order; each kept
    game goes to the shard stream chosen by split_of(game_id).  Returns the
    build report; shard files land in `out_dir`.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = workers or default_workers()
    flags = 0 if ep_gate else shardio.FLAG_RAW_EP
    report = BuildReport()
    writers = {
        Split.TRAIN: shardio.RollingShardWriter(out_dir, "train", shard_size, flags),
        Split.VALIDATION: shardio.RollingShardWriter(out_dir, "validation", shard_size, flags),
    }
    try:
        for game, resolved in _iter_resolved(games, workers):
            report.games_seen += 1
            if isinstance(resolved, str):
                report.skipped_illegal += 1
                continue
            traj = trajectory_from_ids(game.game_id, game.result, resolved, ep_gate)
            if not passes_length_filter(traj, min_full_moves):
                report.filtered_short += 1
                continue
            report.games_kept += 1
            side = split_of(game.game_id)
            if side is Split.TRAIN:
                report.train_games += 1
            else:
                report.validation_games += 1
            writers[side].add(traj)
    finally:
        for side, writer in writers.items():
            paths = writer.close()
            if side is Split.TRAIN:
                report.train_shards = [str(p) for p in paths]
            else:
                report.validation_shards = [str(p) for p in paths]
    return report


def _iter_resolved(games: Iterable[RawGame], workers: int, chunk_games: int = 256):
    """(game, packed ids | error string) pairs, in input order."""
    if workers <= 1:
        for game in games:
            try:
                yield game, resolve_san_game(game.san_moves)
            except IllegalGame as exc:
                yield game, str(exc)
        return
    games_iter = iter(games)

    def chunked():
        while True:
            buf = []
            for game in games_iter:
                buf.append(game)
                if len(buf) >= chunk_games:
                    break
            if not buf:
                return
            yield buf

    with ProcessPoolExecutor(max_workers=workers) as pool:
        pending = []
        chunk_src = chunked()
        # keep a bounded window of in-flight chunks to cap memory
        window = workers * 2
        done = False
        while True:
            while not done and len(pending) < window:
                try:
                    batch = next(chunk_src)
                except StopIteration:
                    done = True
                    break
                pending.append((batch, pool.submit(_resolve_chunk, [g.san_moves for g in batch])))
            if not pending:
                return
            batch, fut = pending.pop(0)
            for game, resolved in zip(batch, fut.result()):
                yield game, resolved
