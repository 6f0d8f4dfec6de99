"""Bit-exact codecs between engine objects, packed move tokens, and the
75-label state vector.

Move tokens: id = src * 320 + tgt * 5 + promo over the 64 x 64 x 5 geometry
space (20,480 ids), with START = 20480 and PAD = 20481 appended.

State labels (75 bytes): 0..63 board piece codes in a8..h1 order; 64 side
to move; 65..68 castling K, Q, k, q; 69 en passant file (0 none, 1..8 =
a..h); 70 en passant rank (0 none, 1 = rank 3, 2 = rank 6); 71..72 halfmove
clock and 73..74 fullmove number, each as a big-endian byte pair.
"""

from __future__ import annotations

from . import engine
from .engine import Move, Position, backend

MOVE_VOCAB = 20480
START_TOKEN = 20480
PAD_TOKEN = 20481
TOTAL_VOCAB = 20482

STATE_LABELS = 75

# per-label class counts: 64 board heads, side, 4 castling, ep file, ep
# rank, and four byte-valued counter heads
HEAD_CARDINALITIES = tuple([13] * 64 + [2, 2, 2, 2, 2, 9, 3, 256, 256, 256, 256])


class SpecialTokenError(ValueError):
    """Raised when START or PAD is decoded as if it were a move."""


class CounterOverflow(OverflowError):
    """A move counter does not fit the 16-bit state encoding."""


class InconsistentLabels(ValueError):
    """State labels violate the layout invariants (e.g. ep file/rank)."""


def encode_move(m: Move) -> int:
    src, tgt, promo = m
    if not (0 <= src < 64 and 0 <= tgt < 64 and 0 <= promo <= 4):
        raise ValueError(f"move fields out of range: {(src, tgt, promo)}")
    if src == tgt:
        raise ValueError("src and tgt must differ")
    return src * 320 + tgt * 5 + promo


def decode_move(token: int) -> Move:
    """Inverse of the packing formula, returned as a raw triple.

    No geometric validation is applied (id 0 decodes to a8a8); callers
    treating the result as a playable move must validate it themselves.
    """
    if token in (START_TOKEN, PAD_TOKEN):
        raise SpecialTokenError(f"token {token} is not a move")
    if not 0 <= token < MOVE_VOCAB:
        raise ValueError(f"token {token} outside move vocabulary")
    src, rem = divmod(token, 320)
    tgt, promo = divmod(rem, 5)
    return Move(src, tgt, promo)


def encode_state(p: Position, ep_gate: bool = True) -> bytes:
    """75-label state vector for a position.

    With ep_gate (the default) the en passant labels are written only when
    an en passant capture is actually legal; ep_gate=False encodes the raw
    skipped square of any double push instead.
    """
    if p.halfmove > 0xFFFF or p.fullmove > 0xFFFF:
        raise CounterOverflow(f"counters {p.halfmove}/{p.fullmove} exceed 16 bits")
    out = bytearray(STATE_LABELS)
    out[0:64] = p.board
    out[64] = p.stm
    out[65] = p.castling & 1
    out[66] = (p.castling >> 1) & 1
    out[67] = (p.castling >> 2) & 1
    out[68] = (p.castling >> 3) & 1
    show = p.ep
    if show >= 0 and ep_gate and not backend.ep_capture_legal(p.board, p.stm, p.ep):
        show = -1
    if show >= 0:
        out[69] = (show & 7) + 1
        out[70] = 1 if show >= 32 else 2  # rows 40..47 are rank 3, 16..23 rank 6
    out[71] = (p.halfmove >> 8) & 0xFF
    out[72] = p.halfmove & 0xFF
    out[73] = (p.fullmove >> 8) & 0xFF
    out[74] = p.fullmove & 0xFF
    return bytes(out)


def decode_state(labels: bytes) -> Position:
    """Rebuild a position from 75 labels; repetition history is empty.

    The history multiset is not representable in the label vector, so the
    returned position cannot support repetition-draw detection.
    """
    if len(labels) != STATE_LABELS:
        raise ValueError(f"expected {STATE_LABELS} labels, got {len(labels)}")
    for i, (value, card) in enumerate(zip(labels, HEAD_CARDINALITIES)):
        if value >= card:
            raise ValueError(f"label {i} value {value} exceeds cardinality {card}")
    ep_file, ep_rank = labels[69], labels[70]
    if (ep_file == 0) != (ep_rank == 0):
        raise InconsistentLabels(f"ep file {ep_file} vs ep rank {ep_rank}")
    board = bytes(labels[0:64])
    if board.count(6) != 1 or board.count(12) != 1:
        raise InconsistentLabels("board must have exactly one king per side")
    castling = labels[65] | (labels[66] << 1) | (labels[67] << 2) | (labels[68] << 3)
    ep = -1
    if ep_file:
        row = 5 if ep_rank == 1 else 2
        ep = row * 8 + (ep_file - 1)
    halfmove = (labels[71] << 8) | labels[72]
    fullmove = (labels[73] << 8) | labels[74]
    return Position(board, labels[64], castling, ep, halfmove, fullmove, ())


_POSSIBLE_CACHE: frozenset[int] | None = None


def enumerate_possible_moves() -> frozenset[int]:
    """Packed ids geometrically realizable by some legal chess move.

    Queen-line and knight source/target pairs with no promotion, plus every
    pawn-promotion geometry (single push or diagonal capture into the final
    rank, both colours) with each of the four promotion choices.
    """
    global _POSSIBLE_CACHE
    if _POSSIBLE_CACHE is not None:
        return _POSSIBLE_CACHE
    ids = set()
    for src in range(64):
        row, col = divmod(src, 8)
        targets = set()
        for dr, dc in ((1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2)):
            r, c = row + dr, col + dc
            if 0 <= r < 8 and 0 <= c < 8:
                targets.add(r * 8 + c)
        for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)):
            r, c = row + dr, col + dc
            while 0 <= r < 8 and 0 <= c < 8:
                targets.add(r * 8 + c)
                r, c = r + dr, c + dc
        for tgt in targets:
            ids.add(src * 320 + tgt * 5)
        # pawn promotion geometries: white from row 1 to row 0, black 6 to 7
        if row in (1, 6):
            step = -8 if row == 1 else 8
            promo_targets = [src + step]
            if col >= 1:
                promo_targets.append(src + step - 1)
            if col <= 6:
                promo_targets.append(src + step + 1)
            for tgt in promo_targets:
                for promo in (1, 2, 3, 4):
                    ids.add(src * 320 + tgt * 5 + promo)
    _POSSIBLE_CACHE = frozenset(ids)
    return _POSSIBLE_CACHE


def render_board(labels: bytes) -> str:
    """ASCII board for the first 64 labels of a state vector."""
    lines = []
    for row in range(8):
        rank = 8 - row
        cells = " ".join(engine.PIECE_CHARS[labels[row * 8 + col]] for col in range(8))
        lines.append(f"{rank}  {cells}")
    lines.append("   a b c d e f g h")
    return "\n".join(lines)
