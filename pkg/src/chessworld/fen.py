"""Six-field FEN import/export for debugging and oracle cross-checks.

The emitter writes the en passant field only when an en passant capture is
actually legal, mirroring the state codec's legality gating.
"""

from __future__ import annotations

from . import engine
from .engine import Position, backend

_PIECE_FROM_CHAR = {c: i for i, c in enumerate(engine.PIECE_CHARS) if i}

START_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"

_CASTLE_BITS = {"K": 1, "Q": 2, "k": 4, "q": 8}
# castling flag -> (king square, king code, rook square, rook code)
_CASTLE_PLACEMENT = {
    1: (60, 6, 63, 4),
    2: (60, 6, 56, 4),
    4: (4, 12, 7, 10),
    8: (4, 12, 0, 10),
}


def parse_fen(fen: str) -> Position:
    parts = fen.split()
    if len(parts) != 6:
        raise ValueError(f"FEN must have 6 fields, got {len(parts)}")
    placement, stm_text, castle_text, ep_text, halfmove_text, fullmove_text = parts

    rows = placement.split("/")
    if len(rows) != 8:
        raise ValueError("FEN placement must have 8 ranks")
    board = bytearray(64)
    for row_idx, row in enumerate(rows):
        file = 0
        for ch in row:
            if ch.isdigit():
                file += int(ch)
            elif ch in _PIECE_FROM_CHAR:
                if file > 7:
                    raise ValueError(f"rank overflow in {row!r}")
                board[row_idx * 8 + file] = _PIECE_FROM_CHAR[ch]
                file += 1
            else:
                raise ValueError(f"bad placement char {ch!r}")
        if file != 8:
            raise ValueError(f"rank {row!r} does not cover 8 files")

    if board.count(6) != 1 or board.count(12) != 1:
        raise ValueError("position must have exactly one king per side")

    if stm_text not in ("w", "b"):
        raise ValueError(f"bad side-to-move {stm_text!r}")
    stm = 0 if stm_text == "w" else 1

    castling = 0
    if castle_text != "-":
        for ch in castle_text:
            if ch not in _CASTLE_BITS:
                raise ValueError(f"bad castling field {castle_text!r}")
            castling |= _CASTLE_BITS[ch]
    for bit, (ksq, kcode, rsq, rcode) in _CASTLE_PLACEMENT.items():
        if castling & bit and (board[ksq] != kcode or board[rsq] != rcode):
            raise ValueError("castling rights inconsistent with piece placement")

    ep = -1
    if ep_text != "-":
        ep = engine.square_index(ep_text)
        if board[ep] != 0 or (ep >> 3) not in (2, 5):
            raise ValueError(f"bad en passant square {ep_text!r}")

    halfmove = int(halfmove_text)
    fullmove = int(fullmove_text)
    if halfmove < 0 or fullmove < 1:
        raise ValueError("bad move counters")

    frozen = bytes(board)
    key = backend.position_key(frozen, stm, castling, ep)
    return Position(frozen, stm, castling, ep, halfmove, fullmove, (key,))


def to_fen(p: Position) -> str:
    rows = []
    for row_idx in range(8):
        text = ""
        empty = 0
        for file in range(8):
            code = p.board[row_idx * 8 + file]
            if code == 0:
                empty += 1
                continue
            if empty:
                text += str(empty)
                empty = 0
            text += engine.PIECE_CHARS[code]
        if empty:
            text += str(empty)
        rows.append(text)
    castle_text = "".join(ch for ch, bit in _CASTLE_BITS.items() if p.castling & bit) or "-"
    ep_text = engine.square_name(p.ep) if engine.ep_capture_legal(p) else "-"
    return " ".join(
        [
            "/".join(rows),
            "wb"[p.stm],
            castle_text,
            ep_text,
            str(p.halfmove),
            str(p.fullmove),
        ]
    )
