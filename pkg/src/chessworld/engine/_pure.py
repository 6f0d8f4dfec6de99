"""Pure-Python engine kernels.

This is the fallback backend: the same functions exist in the compiled
`_core` extension with identical semantics, and the test suite asserts the
two produce byte-identical results.  Board layout is a flat 64-byte mailbox
with square index (8 - rank) * 8 + file, so a8 = 0 and h1 = 63; piece codes
are 0 empty, 1..6 white PNBRQK, 7..12 black PNBRQK.
"""

from __future__ import annotations

from ..rng import Xoshiro256StarStar

NAME = "pure"

WP, WN, WB, WR, WQ, WK = 1, 2, 3, 4, 5, 6
BP, BN, BB, BR, BQ, BK = 7, 8, 9, 10, 11, 12

CASTLE_WK, CASTLE_WQ, CASTLE_BK, CASTLE_BQ = 1, 2, 4, 8

START_BOARD = bytes(
    [BR, BN, BB, BQ, BK, BB, BN, BR]
    + [BP] * 8
    + [0] * 32
    + [WP] * 8
    + [WR, WN, WB, WQ, WK, WB, WN, WR]
)

TERM_ONGOING = 0
TERM_CHECKMATE = 1
TERM_STALEMATE = 2
TERM_INSUFFICIENT = 3
TERM_SEVENTYFIVE = 4
TERM_FIVEFOLD = 5
TERM_FIFTY = 6
TERM_THREEFOLD = 7

# promo selector (1..4 = q,r,b,n) to white piece code
_PROMO_PIECE = (0, WQ, WR, WB, WN)


def _build_tables():
    knight, king = [], []
    rook_rays, bishop_rays = [], []
    for sq in range(64):
        row, col = divmod(sq, 8)
        kn, kg = [], []
        for dr, dc in ((1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2)):
            r, c = row + dr, col + dc
            if 0 <= r < 8 and 0 <= c < 8:
                kn.append(r * 8 + c)
        for dr, dc in ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)):
            r, c = row + dr, col + dc
            if 0 <= r < 8 and 0 <= c < 8:
                kg.append(r * 8 + c)
        knight.append(tuple(sorted(kn)))
        king.append(tuple(sorted(kg)))
        rrays, brays = [], []
        for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            ray = []
            r, c = row + dr, col + dc
            while 0 <= r < 8 and 0 <= c < 8:
                ray.append(r * 8 + c)
                r += dr
                c += dc
            rrays.append(tuple(ray))
        for dr, dc in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            ray = []
            r, c = row + dr, col + dc
            while 0 <= r < 8 and 0 <= c < 8:
                ray.append(r * 8 + c)
                r += dr
                c += dc
            brays.append(tuple(ray))
        rook_rays.append(tuple(rrays))
        bishop_rays.append(tuple(brays))
    return tuple(knight), tuple(king), tuple(rook_rays), tuple(bishop_rays)


KNIGHT_TARGETS, KING_TARGETS, ROOK_RAYS, BISHOP_RAYS = _build_tables()


def is_attacked(board, sq, by_white):
    """True if `sq` is attacked by a piece of the given colour."""
    if by_white:
        pawn, knight, king = WP, WN, WK
        rook, bishop, queen = WR, WB, WQ
        col = sq & 7
        # a white pawn on sq+7 or sq+9 attacks sq
        if col >= 1 and sq + 7 < 64 and board[sq + 7] == WP:
            return True
        if col <= 6 and sq + 9 < 64 and board[sq + 9] == WP:
            return True
    else:
        pawn, knight, king = BP, BN, BK
        rook, bishop, queen = BR, BB, BQ
        col = sq & 7
        if col <= 6 and sq - 7 >= 0 and board[sq - 7] == BP:
            return True
        if col >= 1 and sq - 9 >= 0 and board[sq - 9] == BP:
            return True
    for t in KNIGHT_TARGETS[sq]:
        if board[t] == knight:
            return True
    for t in KING_TARGETS[sq]:
        if board[t] == king:
            return True
    for ray in ROOK_RAYS[sq]:
        for t in ray:
            pc = board[t]
            if pc:
                if pc == rook or pc == queen:
                    return True
                break
    for ray in BISHOP_RAYS[sq]:
        for t in ray:
            pc = board[t]
            if pc:
                if pc == bishop or pc == queen:
                    return True
                break
    return False


def _king_square(board, white):
    return board.index(WK if white else BK)


def in_check(board, stm):
    white = stm == 0
    return is_attacked(board, _king_square(board, white), not white)


def _apply_to_board(board, src, tgt, promo, ep, white):
    """Board-only make onto a fresh bytearray; counters handled by callers."""
    nb = bytearray(board)
    pc = nb[src]
    if (pc == WP or pc == BP) and tgt == ep and nb[tgt] == 0:
        nb[tgt + 8 if white else tgt - 8] = 0
    if promo:
        code = _PROMO_PIECE[promo]
        nb[tgt] = code if white else code + 6
    else:
        nb[tgt] = pc
    nb[src] = 0
    if (pc == WK or pc == BK) and abs(tgt - src) == 2:
        row = src & ~7
        if tgt > src:  # kingside
            nb[row + 5] = nb[row + 7]
            nb[row + 7] = 0
        else:
            nb[row + 3] = nb[row]
            nb[row] = 0
    return nb


def _pseudo_moves(board, stm, castling, ep):
    moves = []
    white = stm == 0
    lo, hi = (1, 6) if white else (7, 12)
    for src in range(64):
        pc = board[src]
        if pc < lo or pc > hi:
            continue
        kind = pc if white else pc - 6
        if kind == WP:
            col = src & 7
            fwd = src - 8 if white else src + 8
            promo_row = fwd < 8 if white else fwd >= 56
            if board[fwd] == 0:
                if promo_row:
                    for promo in (1, 2, 3, 4):
                        moves.append((src, fwd, promo))
                else:
                    moves.append((src, fwd, 0))
                start = 48 <= src <= 55 if white else 8 <= src <= 15
                if start:
                    fwd2 = src - 16 if white else src + 16
                    if board[fwd2] == 0:
                        moves.append((src, fwd2, 0))
            for dc in (-1, 1):
                if col + dc < 0 or col + dc > 7:
                    continue
                tgt = fwd + dc
                victim = board[tgt]
                enemy = (7 <= victim <= 12) if white else (1 <= victim <= 6)
                if enemy:
                    if promo_row:
                        for promo in (1, 2, 3, 4):
                            moves.append((src, tgt, promo))
                    else:
                        moves.append((src, tgt, 0))
                elif victim == 0 and tgt == ep:
                    moves.append((src, tgt, 0))
        elif kind == WN:
            for tgt in KNIGHT_TARGETS[src]:
                victim = board[tgt]
                if victim == 0 or not (lo <= victim <= hi):
                    moves.append((src, tgt, 0))
        elif kind == WK:
            for tgt in KING_TARGETS[src]:
                victim = board[tgt]
                if victim == 0 or not (lo <= victim <= hi):
                    moves.append((src, tgt, 0))
        else:
            rays = ()
            if kind == WR or kind == WQ:
                rays += ROOK_RAYS[src]
            if kind == WB or kind == WQ:
                rays += BISHOP_RAYS[src]
            for ray in rays:
                for tgt in ray:
                    victim = board[tgt]
                    if victim == 0:
                        moves.append((src, tgt, 0))
                    else:
                        if not (lo <= victim <= hi):
                            moves.append((src, tgt, 0))
                        break
    # castling is emitted fully legal: rights, empty path, unattacked path
    if white:
        if castling & (CASTLE_WK | CASTLE_WQ) and board[60] == WK and not is_attacked(board, 60, False):
            if (
                castling & CASTLE_WK
                and board[63] == WR
                and board[61] == 0
                and board[62] == 0
                and not is_attacked(board, 61, False)
                and not is_attacked(board, 62, False)
            ):
                moves.append((60, 62, 0))
            if (
                castling & CASTLE_WQ
                and board[56] == WR
                and board[57] == 0
                and board[58] == 0
                and board[59] == 0
                and not is_attacked(board, 59, False)
                and not is_attacked(board, 58, False)
            ):
                moves.append((60, 58, 0))
    else:
        if castling & (CASTLE_BK | CASTLE_BQ) and board[4] == BK and not is_attacked(board, 4, True):
            if (
                castling & CASTLE_BK
                and board[7] == BR
                and board[5] == 0
                and board[6] == 0
                and not is_attacked(board, 5, True)
                and not is_attacked(board, 6, True)
            ):
                moves.append((4, 6, 0))
            if (
                castling & CASTLE_BQ
                and board[0] == BR
                and board[1] == 0
                and board[2] == 0
                and board[3] == 0
                and not is_attacked(board, 3, True)
                and not is_attacked(board, 2, True)
            ):
                moves.append((4, 2, 0))
    return moves


def legal_moves(board, stm, castling, ep):
    """Legal (src, tgt, promo) triples in ascending packed-id order."""
    white = stm == 0
    out = []
    for src, tgt, promo in _pseudo_moves(board, stm, castling, ep):
        nb = _apply_to_board(board, src, tgt, promo, ep, white)
        if not is_attacked(nb, nb.index(WK if white else BK), not white):
            out.append((src, tgt, promo))
    out.sort()
    return out


def apply_move(board, stm, castling, ep, halfmove, fullmove, src, tgt, promo):
    """Full make; returns the new field tuple plus an irreversibility flag.

    Legality of (src, tgt, promo) is the caller's responsibility.
    """
    white = stm == 0
    pc = board[src]
    is_pawn = pc == WP or pc == BP
    captured = board[tgt] != 0 or (is_pawn and tgt == ep)
    nb = _apply_to_board(board, src, tgt, promo, ep, white)
    new_castling = castling
    if pc == WK:
        new_castling &= ~(CASTLE_WK | CASTLE_WQ)
    elif pc == BK:
        new_castling &= ~(CASTLE_BK | CASTLE_BQ)
    for corner, bit in ((63, CASTLE_WK), (56, CASTLE_WQ), (7, CASTLE_BK), (0, CASTLE_BQ)):
        if src == corner or tgt == corner:
            new_castling &= ~bit
    new_ep = -1
    if is_pawn and abs(tgt - src) == 16:
        new_ep = (src + tgt) // 2
    new_halfmove = 0 if (is_pawn or captured) else halfmove + 1
    new_fullmove = fullmove + (0 if white else 1)
    irreversible = is_pawn or captured or new_castling != castling
    return bytes(nb), 1 - stm, new_castling, new_ep, new_halfmove, new_fullmove, irreversible


def ep_capture_legal(board, stm, ep):
    """True if the side to move has a legal en passant capture onto `ep`."""
    if ep < 0 or board[ep] != 0:
        return False
    white = stm == 0
    pawn = WP if white else BP
    col = ep & 7
    srcs = []
    if white:
        if col >= 1:
            srcs.append(ep + 7)
        if col <= 6:
            srcs.append(ep + 9)
    else:
        if col <= 6:
            srcs.append(ep - 7)
        if col >= 1:
            srcs.append(ep - 9)
    for src in srcs:
        if board[src] == pawn:
            nb = _apply_to_board(board, src, ep, 0, ep, white)
            if not is_attacked(nb, nb.index(WK if white else BK), not white):
                return True
    return False


def insufficient_material(board):
    """Dead-material rule: K vs K, lone-minor vs K, or same-colour lone bishops."""
    white_minors, black_minors = [], []
    for sq in range(64):
        pc = board[sq]
        if pc == 0 or pc == WK or pc == BK:
            continue
        if pc in (WP, WR, WQ, BP, BR, BQ):
            return False
        if pc in (WN, WB):
            white_minors.append((pc, sq))
        else:
            black_minors.append((pc, sq))
    total = len(white_minors) + len(black_minors)
    if total <= 1:
        return True
    if len(white_minors) == 1 and len(black_minors) == 1:
        (wpc, wsq), (bpc, bsq) = white_minors[0], black_minors[0]
        if wpc == WB and bpc == BB:
            return ((wsq >> 3) + (wsq & 7)) % 2 == ((bsq >> 3) + (bsq & 7)) % 2
    return False


def position_key(board, stm, castling, ep):
    """Repetition key: placement, side, castling, en-passant capture legality."""
    ep_part = ep + 1 if ep_capture_legal(board, stm, ep) else 0
    return bytes(board) + bytes((stm, castling, ep_part))


def perft(board, stm, castling, ep, depth):
    if depth == 0:
        return 1
    white = stm == 0
    enemy_white = not white
    king = WK if white else BK
    total = 0
    for src, tgt, promo in _pseudo_moves(board, stm, castling, ep):
        nb = _apply_to_board(board, src, tgt, promo, ep, white)
        if is_attacked(nb, nb.index(king), enemy_white):
            continue
        if depth == 1:
            total += 1
        else:
            pc = board[src]
            is_pawn = pc == WP or pc == BP
            new_castling = castling
            if pc == WK:
                new_castling &= ~(CASTLE_WK | CASTLE_WQ)
            elif pc == BK:
                new_castling &= ~(CASTLE_BK | CASTLE_BQ)
            for corner, bit in ((63, CASTLE_WK), (56, CASTLE_WQ), (7, CASTLE_BK), (0, CASTLE_BQ)):
                if src == corner or tgt == corner:
                    new_castling &= ~bit
            new_ep = (src + tgt) // 2 if (is_pawn and abs(tgt - src) == 16) else -1
            total += perft(bytes(nb), 1 - stm, new_castling, new_ep, depth - 1)
    return total


def _encode_state_into(out, off, board, stm, castling, ep, halfmove, fullmove, ep_gate):
    out[off : off + 64] = board
    out[off + 64] = stm
    out[off + 65] = castling & 1
    out[off + 66] = (castling >> 1) & 1
    out[off + 67] = (castling >> 2) & 1
    out[off + 68] = (castling >> 3) & 1
    show = ep if (ep >= 0 and (not ep_gate or ep_capture_legal(board, stm, ep))) else -1
    if show >= 0:
        out[off + 69] = (show & 7) + 1
        out[off + 70] = 1 if show >= 32 else 2  # row 5 = rank 3, row 2 = rank 6
    else:
        out[off + 69] = 0
        out[off + 70] = 0
    out[off + 71] = (halfmove >> 8) & 0xFF
    out[off + 72] = halfmove & 0xFF
    out[off + 73] = (fullmove >> 8) & 0xFF
    out[off + 74] = fullmove & 0xFF


def replay_states(move_ids, ep_gate):
    """Replay packed move ids from the start; returns (T+1) x 75 label bytes.

    Every id is validated against the legal-move list of its position;
    counters past 65535 and illegal ids raise ValueError.
    """
    board, stm, castling, ep = START_BOARD, 0, 15, -1
    halfmove, fullmove = 0, 1
    out = bytearray((len(move_ids) + 1) * 75)
    _encode_state_into(out, 0, board, stm, castling, ep, halfmove, fullmove, ep_gate)
    for i, mid in enumerate(move_ids):
        src, rem = divmod(mid, 320)
        tgt, promo = divmod(rem, 5)
        if (src, tgt, promo) not in legal_moves(board, stm, castling, ep):
            raise ValueError(f"illegal move id {mid} at ply {i + 1}")
        board, stm, castling, ep, halfmove, fullmove, _ = apply_move(
            board, stm, castling, ep, halfmove, fullmove, src, tgt, promo
        )
        if halfmove > 65535 or fullmove > 65535:
            raise ValueError(f"counter overflow at ply {i + 1}")
        _encode_state_into(out, (i + 1) * 75, board, stm, castling, ep, halfmove, fullmove, ep_gate)
    return bytes(out)


def playout(seed, max_plies):
    """Uniform random legal self-play from the initial position.

    Draws next_u64() % n over the ascending-id legal-move list each ply and
    stops at the first non-ongoing status (claimable draws included).
    Returns (packed move ids, termination code, ply count); termination code
    0 means the safety cap was hit while still ongoing.
    """
    rng = Xoshiro256StarStar(seed)
    board, stm, castling, ep = START_BOARD, 0, 15, -1
    halfmove, fullmove = 0, 1
    keys = [position_key(board, stm, castling, ep)]
    moves_out = []
    moves = legal_moves(board, stm, castling, ep)
    term = TERM_ONGOING
    while len(moves_out) < max_plies:
        pick = moves[rng.next_u64() % len(moves)]
        src, tgt, promo = pick
        moves_out.append(src * 320 + tgt * 5 + promo)
        board, stm, castling, ep, halfmove, fullmove, irreversible = apply_move(
            board, stm, castling, ep, halfmove, fullmove, src, tgt, promo
        )
        key = position_key(board, stm, castling, ep)
        if irreversible:
            keys = [key]
        else:
            keys.append(key)
        repeats = keys.count(key)
        moves = legal_moves(board, stm, castling, ep)
        if not moves:
            term = TERM_CHECKMATE if in_check(board, stm) else TERM_STALEMATE
            break
        if insufficient_material(board):
            term = TERM_INSUFFICIENT
            break
        if halfmove >= 150:
            term = TERM_SEVENTYFIVE
            break
        if repeats >= 5:
            term = TERM_FIVEFOLD
            break
        if halfmove >= 100:
            term = TERM_FIFTY
            break
        if repeats >= 3:
            term = TERM_THREEFOLD
            break
    return moves_out, term, len(moves_out)
