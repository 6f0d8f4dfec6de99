"""Synthetic Lichess-style PGN corpus builder for fixtures.

The sandbox has no real game archives, so fixture "real games" are random
legal playouts truncated to plausible lengths, rendered as SAN movetext
with Lichess-flavoured headers and clock comments.  Game content is
irrelevant to what the fixtures test (parsing, replay fidelity, splits,
determinism); what matters is that the PGN surface matches real exports.
"""

from __future__ import annotations

import hashlib

from chessworld import engine, pgn
from chessworld.engine import Move, backend
from chessworld.rng import Xoshiro256StarStar

_ID_ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789"

_RESULT_BY_TERM = {
    1: None,  # checkmate: depends on parity
    2: "1/2-1/2",
    3: "1/2-1/2",
    4: "1/2-1/2",
    5: "1/2-1/2",
    6: "1/2-1/2",
    7: "1/2-1/2",
}


def lichess_like_id(seed: int) -> str:
    digest = hashlib.md5(f"fixture{seed}".encode()).digest()
    value = int.from_bytes(digest[:8], "big")
    chars = []
    for _ in range(8):
        value, rem = divmod(value, 62)
        chars.append(_ID_ALPHABET[rem])
    return "".join(chars)


def synth_game(seed: int, min_len: int = 16, max_len: int = 70):
    """One synthetic game: (game_id, san_moves, result).

    Random playout truncated at a seed-derived length; games that end
    naturally first keep their termination result, truncations get a
    pseudo-random result string (standing in for resignations/timeouts).
    """
    rng = Xoshiro256StarStar(seed ^ 0xC0FFEE)
    target_len = min_len + rng.below(max_len - min_len + 1)
    ids, term, plies = backend.playout(seed, target_len)
    sans = []
    pos = engine.initial_position()
    for mid in ids:
        move = Move(mid // 320, (mid % 320) // 5, mid % 5)
        sans.append(pgn.move_to_san(pos, move))
        pos = engine.apply_move(pos, move)
    if term == 1:
        result = "1-0" if plies % 2 == 1 else "0-1"
    elif term != 0:
        result = "1/2-1/2"
    else:
        result = ("1-0", "0-1", "1/2-1/2")[rng.below(3)]
    return lichess_like_id(seed), sans, result


def render_pgn(game_id: str, sans: list, result: str, clock_comments: bool = False) -> str:
    headers = [
        ("Event", "Rated Blitz game"),
        ("Site", f"https://lichess.org/{game_id}"),
        ("White", f"player{game_id[:4]}"),
        ("Black", f"player{game_id[4:]}"),
        ("Result", result),
        ("UTCDate", "2025.03.01"),
        ("TimeControl", "300+0"),
    ]
    lines = [f'[{key} "{value}"]' for key, value in headers]
    lines.append("")
    parts = []
    for i, san in enumerate(sans):
        if i % 2 == 0:
            parts.append(f"{i // 2 + 1}.")
        parts.append(san)
        if clock_comments:
            parts.append("{ [%clk 0:05:00] }")
    parts.append(result)
    text = ""
    line = ""
    for part in parts:
        if len(line) + len(part) + 1 > 80:
            text += line + "\n"
            line = part
        else:
            line = part if not line else line + " " + part
    text += line + "\n"
    lines.append(text)
    return "\n".join(lines)


def _render_block(args):
    master_seed, start, count, clock_every = args
    chunks = []
    ids = []
    for i in range(start, start + count):
        gid, sans, result = synth_game(master_seed + i)
        ids.append(gid)
        chunks.append(render_pgn(gid, sans, result, clock_comments=(i % clock_every == 0)))
    return ids, "\n".join(chunks) + "\n"


def write_fixture_corpus(path, n_games: int, master_seed: int = 10_000_000,
                         clock_comments_every: int = 7, workers: int = 1) -> list:
    """Write n_games synthetic games as one PGN file; returns the game ids.

    Deterministic for a given (n_games, master_seed) regardless of workers.
    """
    ids = []
    block = 500
    jobs = [
        (master_seed, start, min(block, n_games - start), clock_comments_every)
        for start in range(0, n_games, block)
    ]
    with open(path, "w") as fh:
        if workers <= 1:
            for job in jobs:
                got_ids, text = _render_block(job)
                ids.extend(got_ids)
                fh.write(text)
        else:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=workers) as pool:
                for got_ids, text in pool.map(_render_block, jobs):
                    ids.extend(got_ids)
                    fh.write(text)
    return ids
