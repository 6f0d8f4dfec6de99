"""Slow, copy-based chess reference used as the independent oracle in tests.

This module is intentionally written with a different board representation
(a dict keyed by (file, rank) holding piece letters) and a different code
structure than the package engine, so that agreement between the two is
meaningful evidence of correctness.  It must never import from chessworld.

Conventions: files are 0..7 (a..h), ranks are 1..8 as printed on a board.
A move is (src, dst, promo) with promo in "" or one of "qrbn".
"""

from __future__ import annotations

FILES = "abcdefgh"
WHITE_PIECES = "PNBRQK"
BLACK_PIECES = "pnbrqk"

KNIGHT_JUMPS = [(1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2)]
KING_STEPS = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
ROOK_RAYS = [(1, 0), (-1, 0), (0, 1), (0, -1)]
BISHOP_RAYS = [(1, 1), (1, -1), (-1, 1), (-1, -1)]

START_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"


class State:
    """A full position: piece map plus the auxiliary FEN fields."""

    __slots__ = ("pieces", "turn", "rights", "ep", "halfmove", "fullmove")

    def __init__(self, pieces, turn, rights, ep, halfmove, fullmove):
        self.pieces = pieces  # {(file, rank): piece letter}
        self.turn = turn  # "w" or "b"
        self.rights = rights  # subset of set("KQkq")
        self.ep = ep  # (file, rank) skipped square or None, raw
        self.halfmove = halfmove
        self.fullmove = fullmove


def sq_name(sq):
    return FILES[sq[0]] + str(sq[1])


def name_sq(name):
    return (FILES.index(name[0]), int(name[1]))


def move_uci(move):
    src, dst, promo = move
    return sq_name(src) + sq_name(dst) + promo


def parse_fen(fen):
    placement, turn, rights, ep, halfmove, fullmove = fen.split()
    pieces = {}
    for row, rank_text in enumerate(placement.split("/")):
        rank = 8 - row
        file = 0
        for ch in rank_text:
            if ch.isdigit():
                file += int(ch)
            else:
                pieces[(file, rank)] = ch
                file += 1
    return State(
        pieces,
        turn,
        set(rights) - {"-"},
        None if ep == "-" else name_sq(ep),
        int(halfmove),
        int(fullmove),
    )


def initial_state():
    return parse_fen(START_FEN)


def is_white(piece):
    return piece in WHITE_PIECES


def on_board(sq):
    return 0 <= sq[0] <= 7 and 1 <= sq[1] <= 8


def attacked(state, sq, by_white):
    """True if `sq` is attacked by any piece of the given colour."""
    pieces = state.pieces
    f, r = sq
    pawn, knight, king = ("P", "N", "K") if by_white else ("p", "n", "k")
    rook, bishop, queen = ("R", "B", "Q") if by_white else ("r", "b", "q")
    pawn_rank = r - 1 if by_white else r + 1
    for pf in (f - 1, f + 1):
        if pieces.get((pf, pawn_rank)) == pawn:
            return True
    for df, dr in KNIGHT_JUMPS:
        if pieces.get((f + df, r + dr)) == knight:
            return True
    for df, dr in KING_STEPS:
        if pieces.get((f + df, r + dr)) == king:
            return True
    for rays, hitters in ((ROOK_RAYS, (rook, queen)), (BISHOP_RAYS, (bishop, queen))):
        for df, dr in rays:
            cur = (f + df, r + dr)
            while on_board(cur):
                piece = pieces.get(cur)
                if piece is not None:
                    if piece in hitters:
                        return True
                    break
                cur = (cur[0] + df, cur[1] + dr)
    return False


def find_king(state, white):
    target = "K" if white else "k"
    for sq, piece in state.pieces.items():
        if piece == target:
            return sq
    raise ValueError("king missing")


def in_check(state, white):
    return attacked(state, find_king(state, white), not white)


def pseudo_moves(state):
    moves = []
    white = state.turn == "w"
    pieces = state.pieces
    own = WHITE_PIECES if white else BLACK_PIECES
    for (f, r), piece in list(pieces.items()):
        if piece not in own:
            continue
        kind = piece.upper()
        if kind == "P":
            step = 1 if white else -1
            start_rank = 2 if white else 7
            last_rank = 8 if white else 1
            one = (f, r + step)
            if on_board(one) and one not in pieces:
                if one[1] == last_rank:
                    for promo in "qrbn":
                        moves.append(((f, r), one, promo))
                else:
                    moves.append(((f, r), one, ""))
                two = (f, r + 2 * step)
                if r == start_rank and two not in pieces:
                    moves.append(((f, r), two, ""))
            for df in (-1, 1):
                dst = (f + df, r + step)
                if not on_board(dst):
                    continue
                target = pieces.get(dst)
                if target is not None and (target in own) is False:
                    if dst[1] == last_rank:
                        for promo in "qrbn":
                            moves.append(((f, r), dst, promo))
                    else:
                        moves.append(((f, r), dst, ""))
                elif target is None and state.ep is not None and dst == state.ep:
                    moves.append(((f, r), dst, ""))
        elif kind == "N":
            for df, dr in KNIGHT_JUMPS:
                dst = (f + df, r + dr)
                if on_board(dst) and pieces.get(dst, ".") not in own:
                    moves.append(((f, r), dst, ""))
        elif kind == "K":
            for df, dr in KING_STEPS:
                dst = (f + df, r + dr)
                if on_board(dst) and pieces.get(dst, ".") not in own:
                    moves.append(((f, r), dst, ""))
        else:
            rays = []
            if kind in ("R", "Q"):
                rays += ROOK_RAYS
            if kind in ("B", "Q"):
                rays += BISHOP_RAYS
            for df, dr in rays:
                dst = (f + df, r + dr)
                while on_board(dst):
                    target = pieces.get(dst)
                    if target is None:
                        moves.append(((f, r), dst, ""))
                    else:
                        if target not in own:
                            moves.append(((f, r), dst, ""))
                        break
                    dst = (dst[0] + df, dst[1] + dr)
    # Castling: rights intact, squares empty, king path unattacked, not in check.
    home = 1 if white else 8
    enemy = not white
    king_sq = (4, home)
    if pieces.get(king_sq) == ("K" if white else "k") and not attacked(state, king_sq, enemy):
        if ("K" if white else "k") in state.rights and pieces.get((7, home)) == ("R" if white else "r"):
            if all((f, home) not in pieces for f in (5, 6)):
                if not attacked(state, (5, home), enemy) and not attacked(state, (6, home), enemy):
                    moves.append((king_sq, (6, home), ""))
        if ("Q" if white else "q") in state.rights and pieces.get((0, home)) == ("R" if white else "r"):
            if all((f, home) not in pieces for f in (1, 2, 3)):
                if not attacked(state, (3, home), enemy) and not attacked(state, (2, home), enemy):
                    moves.append((king_sq, (2, home), ""))
    return moves


def apply_move(state, move):
    (sf, sr), (df, dr), promo = move
    white = state.turn == "w"
    pieces = dict(state.pieces)
    piece = pieces.pop((sf, sr))
    captured = pieces.pop((df, dr), None)
    if piece.upper() == "P" and state.ep is not None and (df, dr) == state.ep and captured is None:
        captured = pieces.pop((df, sr))
    pieces[(df, dr)] = (promo.upper() if white else promo) if promo else piece
    if piece.upper() == "K" and abs(df - sf) == 2:
        rook_from = (7, sr) if df == 6 else (0, sr)
        rook_to = (5, sr) if df == 6 else (3, sr)
        pieces[rook_to] = pieces.pop(rook_from)
    rights = set(state.rights)
    if piece == "K":
        rights -= {"K", "Q"}
    elif piece == "k":
        rights -= {"k", "q"}
    for corner, flag in (((0, 1), "Q"), ((7, 1), "K"), ((0, 8), "q"), ((7, 8), "k")):
        if (sf, sr) == corner or (df, dr) == corner:
            rights.discard(flag)
    ep = None
    if piece.upper() == "P" and abs(dr - sr) == 2:
        ep = (sf, (sr + dr) // 2)
    halfmove = 0 if (piece.upper() == "P" or captured is not None) else state.halfmove + 1
    fullmove = state.fullmove + (0 if white else 1)
    return State(pieces, "b" if white else "w", rights, ep, halfmove, fullmove)


def legal_moves(state):
    white = state.turn == "w"
    result = []
    for move in pseudo_moves(state):
        if not in_check(apply_move(state, move), white):
            result.append(move)
    return result


def legal_ucis(state):
    return {move_uci(m) for m in legal_moves(state)}


def perft(state, depth):
    if depth == 0:
        return 1
    total = 0
    white = state.turn == "w"
    for move in pseudo_moves(state):
        nxt = apply_move(state, move)
        if in_check(nxt, white):
            continue
        total += 1 if depth == 1 else perft(nxt, depth - 1)
    return total


def ep_capture_legal(state):
    """True if some legal move is an en passant capture in this position."""
    if state.ep is None:
        return False
    for move in legal_moves(state):
        src, dst, _ = move
        if dst == state.ep and state.pieces[src].upper() == "P" and dst not in state.pieces:
            return True
    return False


def to_fen(state):
    """Standard FEN; the en passant field is written only when capturable."""
    rows = []
    for rank in range(8, 0, -1):
        row = ""
        empty = 0
        for file in range(8):
            piece = state.pieces.get((file, rank))
            if piece is None:
                empty += 1
            else:
                if empty:
                    row += str(empty)
                    empty = 0
                row += piece
        if empty:
            row += str(empty)
        rows.append(row)
    rights = "".join(flag for flag in "KQkq" if flag in state.rights) or "-"
    ep = sq_name(state.ep) if ep_capture_legal(state) else "-"
    return " ".join(
        ["/".join(rows), state.turn, rights, ep, str(state.halfmove), str(state.fullmove)]
    )


def san_to_move(state, san):
    """Resolve SAN against this engine's own move list; raises on 0 or >1 match."""
    text = san.rstrip("+#!?").replace("e.p.", "").strip()
    moves = legal_moves(state)
    home = 1 if state.turn == "w" else 8
    if text in ("O-O", "0-0"):
        matches = [m for m in moves if m[0] == (4, home) and m[1] == (6, home)
                   and state.pieces[m[0]].upper() == "K"]
    elif text in ("O-O-O", "0-0-0"):
        matches = [m for m in moves if m[0] == (4, home) and m[1] == (2, home)
                   and state.pieces[m[0]].upper() == "K"]
    else:
        promo = ""
        if "=" in text:
            text, promo = text.split("=")
            promo = promo.lower()
        elif text[-1] in "QRBN" and len(text) > 2:
            promo = text[-1].lower()
            text = text[:-1]
        dst = name_sq(text[-2:])
        selector = text[:-2].replace("x", "")
        piece = "P"
        if selector and selector[0] in "KQRBN":
            piece = selector[0]
            selector = selector[1:]
        src_file = src_rank = None
        for ch in selector:
            if ch in FILES:
                src_file = FILES.index(ch)
            elif ch.isdigit():
                src_rank = int(ch)
        matches = []
        for m in moves:
            (sf, sr), mdst, mpromo = m
            if mdst != dst or state.pieces[(sf, sr)].upper() != piece:
                continue
            if src_file is not None and sf != src_file:
                continue
            if src_rank is not None and sr != src_rank:
                continue
            if mpromo != promo:
                continue
            matches.append(m)
    if len(matches) != 1:
        raise ValueError(f"SAN {san!r}: {len(matches)} matches")
    return matches[0]


def uci_to_move(uci):
    """UCI text to this engine's move tuple."""
    promo = uci[4] if len(uci) == 5 else ""
    return (name_sq(uci[0:2]), name_sq(uci[2:4]), promo)


def replay_san_game(sans):
    """Replay a SAN move list from the start; returns the final State."""
    state = initial_state()
    for san in sans:
        state = apply_move(state, san_to_move(state, san))
    return state
