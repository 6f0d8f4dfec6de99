"""Chess rules engine: value-semantics positions over swappable kernels.

The hot kernels (move generation, make, perft, random playout, trajectory
replay) exist twice: a Cython extension (`_core`) and a pure-Python twin
(`_pure`).  The compiled backend is preferred at import; set CWM_PURE=1 to
force the fallback.  All operations are pure functions of their inputs, so
positions can be shared freely across threads and processes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from . import _pure

if os.environ.get("CWM_PURE"):
    backend = _pure
else:
    try:
        from . import _core as backend  # type: ignore[attr-defined]
    except ImportError:
        backend = _pure

BACKEND_NAME = backend.NAME

WHITE, BLACK = 0, 1
CASTLE_WK, CASTLE_WQ, CASTLE_BK, CASTLE_BQ = 1, 2, 4, 8

EMPTY = 0
PIECE_CHARS = ".PNBRQKpnbrqk"  # board code -> letter, index 0 is empty

FILES = "abcdefgh"


class IllegalMove(Exception):
    """Raised by apply_move when the move is not legal in the position."""


class Move(NamedTuple):
    """A move as source square, target square, promotion selector.

    Squares use the a8 = 0 .. h1 = 63 index; promo is 0 none, 1 queen,
    2 rook, 3 bishop, 4 knight.  No validation happens at construction;
    apply_move enforces legality.
    """

    src: int
    tgt: int
    promo: int = 0

    def uci(self) -> str:
        tail = "" if self.promo == 0 else "qrbn"[self.promo - 1]
        return square_name(self.src) + square_name(self.tgt) + tail

    @classmethod
    def from_uci(cls, text: str) -> "Move":
        if not 4 <= len(text) <= 5:
            raise ValueError(f"bad UCI move {text!r}")
        promo = 0
        if len(text) == 5:
            promo = "qrbn".index(text[4]) + 1
        return cls(square_index(text[:2]), square_index(text[2:4]), promo)


class Termination(Enum):
    ONGOING = "ongoing"
    CHECKMATE = "checkmate"
    STALEMATE = "stalemate"
    INSUFFICIENT_MATERIAL = "insufficient_material"
    SEVENTYFIVE_MOVE = "seventyfive_move"
    FIVEFOLD_REPETITION = "fivefold_repetition"
    CLAIMABLE_FIFTY_MOVE = "claimable_fifty_move"
    CLAIMABLE_THREEFOLD = "claimable_threefold"


TERMINATION_BY_CODE = {
    _pure.TERM_ONGOING: Termination.ONGOING,
    _pure.TERM_CHECKMATE: Termination.CHECKMATE,
    _pure.TERM_STALEMATE: Termination.STALEMATE,
    _pure.TERM_INSUFFICIENT: Termination.INSUFFICIENT_MATERIAL,
    _pure.TERM_SEVENTYFIVE: Termination.SEVENTYFIVE_MOVE,
    _pure.TERM_FIVEFOLD: Termination.FIVEFOLD_REPETITION,
    _pure.TERM_FIFTY: Termination.CLAIMABLE_FIFTY_MOVE,
    _pure.TERM_THREEFOLD: Termination.CLAIMABLE_THREEFOLD,
}


def square_index(name: str) -> int:
    """Algebraic square name to index: a8 -> 0, h1 -> 63."""
    file = FILES.index(name[0])
    rank = int(name[1])
    return (8 - rank) * 8 + file


def square_name(index: int) -> str:
    return FILES[index & 7] + str(8 - (index >> 3))


@dataclass(frozen=True)
class Position:
    """Complete chess state, including repetition bookkeeping.

    `board` is the 64-byte mailbox (a8-major); `ep` is the raw skipped
    square of the last double pawn push (or -1) regardless of whether the
    capture is legal; `history` is the multiset of repetition keys since
    the last irreversible move, current position included.
    """

    board: bytes
    stm: int
    castling: int
    ep: int
    halfmove: int
    fullmove: int
    history: tuple = ()

    @property
    def fields(self):
        return self.board, self.stm, self.castling, self.ep, self.halfmove, self.fullmove


def initial_position() -> Position:
    board = bytes(_pure.START_BOARD)
    key = backend.position_key(board, 0, 15, -1)
    return Position(board, WHITE, 15, -1, 0, 1, (key,))


def legal_moves(p: Position) -> list[Move]:
    """All FIDE-legal moves, ascending by packed move id."""
    return [Move(*m) for m in backend.legal_moves(p.board, p.stm, p.castling, p.ep)]


def apply_move(p: Position, m: Move) -> Position:
    """Make a move, raising IllegalMove if it is not legal in `p`."""
    triple = (m[0], m[1], m[2])
    if triple not in backend.legal_moves(p.board, p.stm, p.castling, p.ep):
        raise IllegalMove(f"{Move(*triple).uci()} is not legal here")
    board, stm, castling, ep, halfmove, fullmove, irreversible = backend.apply_move(
        p.board, p.stm, p.castling, p.ep, p.halfmove, p.fullmove, *triple
    )
    key = backend.position_key(board, stm, castling, ep)
    history = (key,) if irreversible else p.history + (key,)
    return Position(board, stm, castling, ep, halfmove, fullmove, history)


def in_check(p: Position) -> bool:
    return backend.in_check(p.board, p.stm)


def ep_capture_legal(p: Position) -> bool:
    return backend.ep_capture_legal(p.board, p.stm, p.ep)


def position_key(p: Position) -> bytes:
    return backend.position_key(p.board, p.stm, p.castling, p.ep)


def termination_status(p: Position) -> Termination:
    """Game status with the documented precedence.

    Checkmate and stalemate first, then forced draws (dead material, the
    75-move rule, fivefold repetition), then claimable draws (fifty-move,
    threefold).  Repetition counts come from p.history.
    """
    if not backend.legal_moves(p.board, p.stm, p.castling, p.ep):
        return Termination.CHECKMATE if in_check(p) else Termination.STALEMATE
    if backend.insufficient_material(p.board):
        return Termination.INSUFFICIENT_MATERIAL
    repeats = max(map(p.history.count, p.history), default=0)
    if p.halfmove >= 150:
        return Termination.SEVENTYFIVE_MOVE
    if repeats >= 5:
        return Termination.FIVEFOLD_REPETITION
    if p.halfmove >= 100:
        return Termination.CLAIMABLE_FIFTY_MOVE
    if repeats >= 3:
        return Termination.CLAIMABLE_THREEFOLD
    return Termination.ONGOING


def perft(p: Position, depth: int) -> int:
    """Leaf count of the legal-move tree at exactly `depth` plies."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    return backend.perft(p.board, p.stm, p.castling, p.ep, depth)
