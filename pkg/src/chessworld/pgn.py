"""Streaming PGN ingestion and SAN resolution.

The parser is line-oriented and single-pass: brace comments (which may span
lines), ``$n`` NAGs, ``;`` line comments, and nested ``(...)`` variations
are stripped while tokenizing, so a RawGame's san_moves contains only the
mainline moves.  Malformed games are reported to the optional `skipped`
sink and skipped; only unrecoverable framing raises StreamCorrupt.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from . import engine
from .engine import Move, Position

RESULTS = ("1-0", "0-1", "1/2-1/2", "*")

_HEADER_RE = re.compile(r'^\[(\w+)\s+"(.*)"\]\s*$')
_MOVE_NUMBER_RE = re.compile(r"^\d+\.*$")
_NAG_RE = re.compile(r"^\$\d+$")
_SAN_BODY_RE = re.compile(
    r"^(?P<piece>[KQRBN])?(?P<src_file>[a-h])?(?P<src_rank>[1-8])?"
    r"(?P<capture>x)?(?P<target>[a-h][1-8])(?:=?(?P<promo>[QRBN]))?$"
)


class StreamCorrupt(Exception):
    """Unrecoverable PGN framing: EOF inside a header or brace comment."""


class AmbiguousSan(ValueError):
    """SAN text matches two or more legal moves."""


class NoSanMatch(ValueError):
    """SAN text matches no legal move."""


@dataclass
class RawGame:
    game_id: str
    headers: dict
    san_moves: list
    result: str
    index: int = 0  # ordinal in the input stream


@dataclass
class SkippedGame:
    index: int
    reason: str
    game_id: str = ""


def game_id_from_site(site: str) -> str:
    """Trailing URL segment of the Site header, or the full value."""
    tail = site.rstrip("/").rsplit("/", 1)[-1].strip()
    return tail or site.strip()


def parse_pgn_stream(
    lines: Iterable[str],
    skipped: list | None = None,
    id_source: str = "segment",
) -> Iterator[RawGame]:
    """Yield games from PGN text lines, in file order.

    `id_source` selects what becomes the game id: "segment" takes the
    trailing path segment of the Site URL (Lichess game id), "site" hashes
    the full Site value.  Games without a Site header get "game<ordinal>".
    Parse failures are appended to `skipped` (if given) and do not stop
    the stream.
    """
    if id_source not in ("segment", "site"):
        raise ValueError(f"bad id_source {id_source!r}")
    headers: dict = {}
    sans: list = []
    result = None
    bad_reason = None
    in_movetext = False
    in_brace = False
    paren_depth = 0
    index = 0

    def finish():
        nonlocal headers, sans, result, bad_reason, in_movetext, paren_depth, index
        game = None
        skip = None
        if headers or sans:
            if bad_reason is not None:
                skip = SkippedGame(index, bad_reason, headers.get("Site", ""))
            else:
                site = headers.get("Site", "")
                if not site:
                    gid = f"game{index}"
                elif id_source == "segment":
                    gid = game_id_from_site(site)
                else:
                    gid = site.strip()
                game = RawGame(
                    game_id=gid,
                    headers=headers,
                    san_moves=sans,
                    result=result or headers.get("Result", "*"),
                    index=index,
                )
            index += 1
        headers, sans, result, bad_reason = {}, [], None, None
        in_movetext = False
        paren_depth = 0
        if skip is not None and skipped is not None:
            skipped.append(skip)
        return game

    for raw_line in lines:
        line = raw_line.rstrip("\n").rstrip("\r")
        if not in_brace and paren_depth == 0 and line.startswith("["):
            if in_movetext:
                # header while movetext is open: game had no result token
                game = finish()
                if game is not None:
                    yield game
            match = _HEADER_RE.match(line)
            if match:
                headers[match.group(1)] = match.group(2)
            elif "]" not in line:
                raise StreamCorrupt(f"unterminated header line: {line[:60]!r}")
            else:
                bad_reason = f"malformed header: {line[:60]!r}"
            continue
        # movetext tokenization
        token = ""
        for ch in line:
            if in_brace:
                if ch == "}":
                    in_brace = False
                continue
            if ch == "{":
                if token and paren_depth == 0:
                    result = _take_token(token, sans, result)
                token = ""
                in_brace = True
                continue
            if ch == ";":
                break
            if ch == "(":
                if token and paren_depth == 0:
                    result = _take_token(token, sans, result)
                token = ""
                paren_depth += 1
                continue
            if ch == ")":
                token = ""
                if paren_depth > 0:
                    paren_depth -= 1
                continue
            if paren_depth > 0:
                continue
            if ch.isspace():
                if token:
                    result = _take_token(token, sans, result)
                    token = ""
            else:
                token += ch
                in_movetext = True
        if token and not in_brace and paren_depth == 0:
            result = _take_token(token, sans, result)
        if result is not None:
            game = finish()
            if game is not None:
                yield game
    if in_brace:
        raise StreamCorrupt("EOF inside a brace comment")
    game = finish()
    if game is not None:
        yield game


def _take_token(token: str, sans: list, result):
    """Classify one movetext token, returning the (possibly set) result."""
    if result is not None:
        return result
    if token in RESULTS:
        return token
    if _MOVE_NUMBER_RE.match(token) or _NAG_RE.match(token):
        return result
    sans.append(token)
    return result


def _match_san(board, stm, legal, san: str):
    """Match SAN text against a legal (src, tgt, promo) list.

    Returns all matches; raising on 0 or 2+ is the caller's concern.
    Check/mate/annotation suffixes are ignored.
    """
    text = san.rstrip("+#!?").replace("e.p.", "")
    white = stm == 0
    home_row = 7 if white else 0
    king_src = home_row * 8 + 4
    if text in ("O-O", "0-0"):
        return [m for m in legal if m[0] == king_src and m[1] == king_src + 2
                and board[m[0]] in (6, 12)]
    if text in ("O-O-O", "0-0-0"):
        return [m for m in legal if m[0] == king_src and m[1] == king_src - 2
                and board[m[0]] in (6, 12)]
    match = _SAN_BODY_RE.match(text)
    if not match:
        return []
    piece_letter = match.group("piece") or "P"
    piece_kind = "PNBRQK".index(piece_letter) + 1
    want_tgt = engine.square_index(match.group("target"))
    src_file = match.group("src_file")
    src_rank = match.group("src_rank")
    want_capture = match.group("capture") is not None
    promo_letter = match.group("promo")
    want_promo = 0 if promo_letter is None else "QRBN".index(promo_letter) + 1
    matches = []
    for src, tgt, promo in legal:
        if tgt != want_tgt or promo != want_promo:
            continue
        kind = board[src] if white else board[src] - 6
        if kind != piece_kind:
            continue
        if src_file is not None and (src & 7) != "abcdefgh".index(src_file):
            continue
        if src_rank is not None and (8 - (src >> 3)) != int(src_rank):
            continue
        is_capture = board[tgt] != 0 or (kind == 1 and board[tgt] == 0 and (tgt & 7) != (src & 7))
        if want_capture != is_capture:
            continue
        matches.append((src, tgt, promo))
    return matches


def san_to_move(p: Position, san: str) -> Move:
    """The unique legal move denoted by `san` in position `p`."""
    legal = engine.backend.legal_moves(p.board, p.stm, p.castling, p.ep)
    matches = _match_san(p.board, p.stm, legal, san)
    if not matches:
        raise NoSanMatch(f"SAN {san!r} matches no legal move")
    if len(matches) > 1:
        raise AmbiguousSan(f"SAN {san!r} matches {len(matches)} moves")
    return Move(*matches[0])


def move_to_san(p: Position, m: Move, annotate: bool = True) -> str:
    """SAN text for a legal move, with minimal disambiguation.

    With `annotate`, appends '+' for checks and '#' for mates.
    """
    board = p.board
    pc = board[m.src]
    kind = pc if pc <= 6 else pc - 6
    is_capture = board[m.tgt] != 0 or (kind == 1 and (m.tgt & 7) != (m.src & 7))
    if kind == 6 and abs(m.tgt - m.src) == 2:
        text = "O-O" if m.tgt > m.src else "O-O-O"
    elif kind == 1:
        text = ""
        if is_capture:
            text += "abcdefgh"[m.src & 7] + "x"
        text += engine.square_name(m.tgt)
        if m.promo:
            text += "=" + "QRBN"[m.promo - 1]
    else:
        letter = "PNBRQK"[kind - 1]
        rivals = [
            mv
            for mv in engine.backend.legal_moves(p.board, p.stm, p.castling, p.ep)
            if mv[1] == m.tgt and mv[0] != m.src and board[mv[0]] == pc
        ]
        disamb = ""
        if rivals:
            same_file = any((mv[0] & 7) == (m.src & 7) for mv in rivals)
            same_rank = any((mv[0] >> 3) == (m.src >> 3) for mv in rivals)
            if not same_file:
                disamb = "abcdefgh"[m.src & 7]
            elif not same_rank:
                disamb = str(8 - (m.src >> 3))
            else:
                disamb = engine.square_name(m.src)
        text = letter + disamb + ("x" if is_capture else "") + engine.square_name(m.tgt)
    if annotate:
        nxt = engine.apply_move(p, m)
        if engine.in_check(nxt):
            mate = not engine.backend.legal_moves(nxt.board, nxt.stm, nxt.castling, nxt.ep)
            text += "#" if mate else "+"
    return text
