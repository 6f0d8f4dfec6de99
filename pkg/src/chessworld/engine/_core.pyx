# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled engine kernels: C twins of every function in `_pure`.

Semantics are defined by the pure module; the parity test suite asserts
byte-identical outputs between the two backends.  Keep any behavioural
change mirrored in `_pure.py`.
"""

from libc.string cimport memcpy, memcmp, memset
from libc.stdlib cimport malloc, free

NAME = "compiled"

cdef enum:
    WP = 1
    WN = 2
    WB = 3
    WR = 4
    WQ = 5
    WK = 6
    BP = 7
    BN = 8
    BB = 9
    BR = 10
    BQ = 11
    BK = 12

cdef enum:
    TERM_ONGOING = 0
    TERM_CHECKMATE = 1
    TERM_STALEMATE = 2
    TERM_INSUFFICIENT = 3
    TERM_SEVENTYFIVE = 4
    TERM_FIVEFOLD = 5
    TERM_FIFTY = 6
    TERM_THREEFOLD = 7

cdef unsigned char START[64]
cdef int KN_N[64]
cdef int KN_T[64][8]
cdef int KG_N[64]
cdef int KG_T[64][8]
# directions 0..3 rook (N, S, E, W in board rows), 4..7 bishop
cdef int RAY_LEN[64][8]
cdef int RAY_SQ[64][8][8]

cdef int _PROMO_PIECE[5]
_PROMO_PIECE[0] = 0
_PROMO_PIECE[1] = WQ
_PROMO_PIECE[2] = WR
_PROMO_PIECE[3] = WB
_PROMO_PIECE[4] = WN


def _init_tables():
    cdef int sq, row, col, n, r, c, d
    start_py = (
        [BR, BN, BB, BQ, BK, BB, BN, BR] + [BP] * 8 + [0] * 32
        + [WP] * 8 + [WR, WN, WB, WQ, WK, WB, WN, WR]
    )
    for sq in range(64):
        START[sq] = start_py[sq]
    deltas_knight = ((1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2))
    deltas_king = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))
    deltas_ray = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1))
    for sq in range(64):
        row = sq >> 3
        col = sq & 7
        n = 0
        for dr, dc in deltas_knight:
            r = row + dr
            c = col + dc
            if 0 <= r < 8 and 0 <= c < 8:
                KN_T[sq][n] = r * 8 + c
                n += 1
        KN_N[sq] = n
        n = 0
        for dr, dc in deltas_king:
            r = row + dr
            c = col + dc
            if 0 <= r < 8 and 0 <= c < 8:
                KG_T[sq][n] = r * 8 + c
                n += 1
        KG_N[sq] = n
        for d in range(8):
            dr, dc = deltas_ray[d]
            n = 0
            r = row + dr
            c = col + dc
            while 0 <= r < 8 and 0 <= c < 8:
                RAY_SQ[sq][d][n] = r * 8 + c
                n += 1
                r += dr
                c += dc
            RAY_LEN[sq][d] = n


_init_tables()


cdef bint attacked(const unsigned char* b, int sq, bint by_white) nogil:
    cdef int col = sq & 7
    cdef int i, t, d, pc
    cdef int pawn, knight, king, rook, bishop, queen
    if by_white:
        if col >= 1 and sq + 7 < 64 and b[sq + 7] == WP:
            return True
        if col <= 6 and sq + 9 < 64 and b[sq + 9] == WP:
            return True
        knight = WN; king = WK; rook = WR; bishop = WB; queen = WQ
    else:
        if col <= 6 and sq - 7 >= 0 and b[sq - 7] == BP:
            return True
        if col >= 1 and sq - 9 >= 0 and b[sq - 9] == BP:
            return True
        knight = BN; king = BK; rook = BR; bishop = BB; queen = BQ
    for i in range(KN_N[sq]):
        if b[KN_T[sq][i]] == knight:
            return True
    for i in range(KG_N[sq]):
        if b[KG_T[sq][i]] == king:
            return True
    for d in range(4):
        for i in range(RAY_LEN[sq][d]):
            pc = b[RAY_SQ[sq][d][i]]
            if pc != 0:
                if pc == rook or pc == queen:
                    return True
                break
    for d in range(4, 8):
        for i in range(RAY_LEN[sq][d]):
            pc = b[RAY_SQ[sq][d][i]]
            if pc != 0:
                if pc == bishop or pc == queen:
                    return True
                break
    return False


cdef int king_square(const unsigned char* b, bint white) nogil:
    cdef int code = WK if white else BK
    cdef int sq
    for sq in range(64):
        if b[sq] == code:
            return sq
    return -1


cdef void apply_board(unsigned char* b, int src, int tgt, int promo, int ep, bint white) nogil:
    """Board-only make, in place; counters are the caller's concern."""
    cdef int pc = b[src]
    cdef int row, code
    if (pc == WP or pc == BP) and tgt == ep and b[tgt] == 0:
        b[tgt + 8 if white else tgt - 8] = 0
    if promo:
        code = _PROMO_PIECE[promo]
        b[tgt] = <unsigned char> (code if white else code + 6)
    else:
        b[tgt] = <unsigned char> pc
    b[src] = 0
    if (pc == WK or pc == BK) and (tgt - src == 2 or src - tgt == 2):
        row = src & ~7
        if tgt > src:
            b[row + 5] = b[row + 7]
            b[row + 7] = 0
        else:
            b[row + 3] = b[row]
            b[row] = 0


cdef int gen_pseudo(const unsigned char* b, int stm, int castling, int ep,
                    int* srcs, int* tgts, int* promos) nogil:
    cdef bint white = stm == 0
    cdef int lo = 1 if white else 7
    cdef int hi = 6 if white else 12
    cdef int n = 0
    cdef int src, pc, kind, col, fwd, fwd2, tgt, victim, dc, i, d, promo
    cdef bint promo_row, start, enemy
    for src in range(64):
        pc = b[src]
        if pc < lo or pc > hi:
            continue
        kind = pc if white else pc - 6
        if kind == WP:
            col = src & 7
            fwd = src - 8 if white else src + 8
            promo_row = (fwd < 8) if white else (fwd >= 56)
            if b[fwd] == 0:
                if promo_row:
                    for promo in range(1, 5):
                        srcs[n] = src; tgts[n] = fwd; promos[n] = promo; n += 1
                else:
                    srcs[n] = src; tgts[n] = fwd; promos[n] = 0; n += 1
                start = (48 <= src <= 55) if white else (8 <= src <= 15)
                if start:
                    fwd2 = src - 16 if white else src + 16
                    if b[fwd2] == 0:
                        srcs[n] = src; tgts[n] = fwd2; promos[n] = 0; n += 1
            for dc in range(-1, 2, 2):
                if col + dc < 0 or col + dc > 7:
                    continue
                tgt = fwd + dc
                victim = b[tgt]
                enemy = (7 <= victim <= 12) if white else (1 <= victim <= 6)
                if enemy:
                    if promo_row:
                        for promo in range(1, 5):
                            srcs[n] = src; tgts[n] = tgt; promos[n] = promo; n += 1
                    else:
                        srcs[n] = src; tgts[n] = tgt; promos[n] = 0; n += 1
                elif victim == 0 and tgt == ep:
                    srcs[n] = src; tgts[n] = tgt; promos[n] = 0; n += 1
        elif kind == WN:
            for i in range(KN_N[src]):
                tgt = KN_T[src][i]
                victim = b[tgt]
                if victim == 0 or not (lo <= victim <= hi):
                    srcs[n] = src; tgts[n] = tgt; promos[n] = 0; n += 1
        elif kind == WK:
            for i in range(KG_N[src]):
                tgt = KG_T[src][i]
                victim = b[tgt]
                if victim == 0 or not (lo <= victim <= hi):
                    srcs[n] = src; tgts[n] = tgt; promos[n] = 0; n += 1
        else:
            for d in range(8):
                if kind == WR and d >= 4:
                    break
                if kind == WB and d < 4:
                    continue
                for i in range(RAY_LEN[src][d]):
                    tgt = RAY_SQ[src][d][i]
                    victim = b[tgt]
                    if victim == 0:
                        srcs[n] = src; tgts[n] = tgt; promos[n] = 0; n += 1
                    else:
                        if not (lo <= victim <= hi):
                            srcs[n] = src; tgts[n] = tgt; promos[n] = 0; n += 1
                        break
    if white:
        if (castling & 3) and b[60] == WK and not attacked(b, 60, False):
            if (castling & 1) and b[63] == WR and b[61] == 0 and b[62] == 0 \
                    and not attacked(b, 61, False) and not attacked(b, 62, False):
                srcs[n] = 60; tgts[n] = 62; promos[n] = 0; n += 1
            if (castling & 2) and b[56] == WR and b[57] == 0 and b[58] == 0 and b[59] == 0 \
                    and not attacked(b, 59, False) and not attacked(b, 58, False):
                srcs[n] = 60; tgts[n] = 58; promos[n] = 0; n += 1
    else:
        if (castling & 12) and b[4] == BK and not attacked(b, 4, True):
            if (castling & 4) and b[7] == BR and b[5] == 0 and b[6] == 0 \
                    and not attacked(b, 5, True) and not attacked(b, 6, True):
                srcs[n] = 4; tgts[n] = 6; promos[n] = 0; n += 1
            if (castling & 8) and b[0] == BR and b[1] == 0 and b[2] == 0 and b[3] == 0 \
                    and not attacked(b, 3, True) and not attacked(b, 2, True):
                srcs[n] = 4; tgts[n] = 2; promos[n] = 0; n += 1
    return n


cdef int gen_legal_packed(const unsigned char* b, int stm, int castling, int ep,
                          int* packed) nogil:
    """Legal moves as packed ids src*320 + tgt*5 + promo, sorted ascending."""
    cdef int srcs[512]
    cdef int tgts[512]
    cdef int promos[512]
    cdef unsigned char nb[64]
    cdef bint white = stm == 0
    cdef int n = gen_pseudo(b, stm, castling, ep, srcs, tgts, promos)
    cdef int m = 0
    cdef int i, j, key
    for i in range(n):
        memcpy(nb, b, 64)
        apply_board(nb, srcs[i], tgts[i], promos[i], ep, white)
        if not attacked(nb, king_square(nb, white), not white):
            packed[m] = srcs[i] * 320 + tgts[i] * 5 + promos[i]
            m += 1
    # insertion sort; lists are short and nearly sorted already
    for i in range(1, m):
        key = packed[i]
        j = i - 1
        while j >= 0 and packed[j] > key:
            packed[j + 1] = packed[j]
            j -= 1
        packed[j + 1] = key
    return m


cdef struct Fields:
    int stm
    int castling
    int ep
    int halfmove
    int fullmove
    bint irreversible


cdef void apply_full(unsigned char* b, Fields* f, int src, int tgt, int promo) nogil:
    """Full make on board+fields, in place."""
    cdef int pc = b[src]
    cdef bint white = f.stm == 0
    cdef bint is_pawn = pc == WP or pc == BP
    cdef bint captured = b[tgt] != 0 or (is_pawn and tgt == f.ep)
    cdef int old_castling = f.castling
    apply_board(b, src, tgt, promo, f.ep, white)
    if pc == WK:
        f.castling &= ~3
    elif pc == BK:
        f.castling &= ~12
    if src == 63 or tgt == 63:
        f.castling &= ~1
    if src == 56 or tgt == 56:
        f.castling &= ~2
    if src == 7 or tgt == 7:
        f.castling &= ~4
    if src == 0 or tgt == 0:
        f.castling &= ~8
    if is_pawn and (tgt - src == 16 or src - tgt == 16):
        f.ep = (src + tgt) >> 1
    else:
        f.ep = -1
    f.halfmove = 0 if (is_pawn or captured) else f.halfmove + 1
    if not white:
        f.fullmove += 1
    f.stm = 1 - f.stm
    f.irreversible = is_pawn or captured or f.castling != old_castling


cdef bint ep_legal(const unsigned char* b, int stm, int ep) nogil:
    cdef bint white = stm == 0
    cdef int pawn = WP if white else BP
    cdef int col, i, src
    cdef int srcs[2]
    cdef int nsrc = 0
    cdef unsigned char nb[64]
    if ep < 0 or b[ep] != 0:
        return False
    col = ep & 7
    if white:
        if col >= 1:
            srcs[nsrc] = ep + 7; nsrc += 1
        if col <= 6:
            srcs[nsrc] = ep + 9; nsrc += 1
    else:
        if col <= 6:
            srcs[nsrc] = ep - 7; nsrc += 1
        if col >= 1:
            srcs[nsrc] = ep - 9; nsrc += 1
    for i in range(nsrc):
        src = srcs[i]
        if b[src] == pawn:
            memcpy(nb, b, 64)
            apply_board(nb, src, ep, 0, ep, white)
            if not attacked(nb, king_square(nb, white), not white):
                return True
    return False


cdef bint insufficient_c(const unsigned char* b) nogil:
    cdef int sq, pc
    cdef int w_minor_sq = -1, b_minor_sq = -1
    cdef int w_minor_pc = 0, b_minor_pc = 0
    cdef int w_minors = 0, b_minors = 0
    for sq in range(64):
        pc = b[sq]
        if pc == 0 or pc == WK or pc == BK:
            continue
        if pc == WP or pc == WR or pc == WQ or pc == BP or pc == BR or pc == BQ:
            return False
        if pc == WN or pc == WB:
            w_minors += 1
            w_minor_sq = sq
            w_minor_pc = pc
        else:
            b_minors += 1
            b_minor_sq = sq
            b_minor_pc = pc
    if w_minors + b_minors <= 1:
        return True
    if w_minors == 1 and b_minors == 1 and w_minor_pc == WB and b_minor_pc == BB:
        return (((w_minor_sq >> 3) + (w_minor_sq & 7)) & 1) == (((b_minor_sq >> 3) + (b_minor_sq & 7)) & 1)
    return False


cdef void encode_into(unsigned char* out, const unsigned char* b, int stm, int castling,
                      int ep, int halfmove, int fullmove, bint ep_gate) nogil:
    cdef int show
    memcpy(out, b, 64)
    out[64] = <unsigned char> stm
    out[65] = <unsigned char> (castling & 1)
    out[66] = <unsigned char> ((castling >> 1) & 1)
    out[67] = <unsigned char> ((castling >> 2) & 1)
    out[68] = <unsigned char> ((castling >> 3) & 1)
    show = ep if (ep >= 0 and (not ep_gate or ep_legal(b, stm, ep))) else -1
    if show >= 0:
        out[69] = <unsigned char> ((show & 7) + 1)
        out[70] = 1 if show >= 32 else 2
    else:
        out[69] = 0
        out[70] = 0
    out[71] = <unsigned char> ((halfmove >> 8) & 0xFF)
    out[72] = <unsigned char> (halfmove & 0xFF)
    out[73] = <unsigned char> ((fullmove >> 8) & 0xFF)
    out[74] = <unsigned char> (fullmove & 0xFF)


cdef unsigned long long perft_c(const unsigned char* b, int stm, int castling, int ep,
                                int depth) nogil:
    cdef int srcs[512]
    cdef int tgts[512]
    cdef int promos[512]
    cdef unsigned char nb[64]
    cdef bint white = stm == 0
    cdef unsigned long long total = 0
    cdef int n = gen_pseudo(b, stm, castling, ep, srcs, tgts, promos)
    cdef int i, pc, new_castling, new_ep, src, tgt
    for i in range(n):
        memcpy(nb, b, 64)
        src = srcs[i]
        tgt = tgts[i]
        apply_board(nb, src, tgt, promos[i], ep, white)
        if attacked(nb, king_square(nb, white), not white):
            continue
        if depth == 1:
            total += 1
            continue
        pc = b[src]
        new_castling = castling
        if pc == WK:
            new_castling &= ~3
        elif pc == BK:
            new_castling &= ~12
        if src == 63 or tgt == 63:
            new_castling &= ~1
        if src == 56 or tgt == 56:
            new_castling &= ~2
        if src == 7 or tgt == 7:
            new_castling &= ~4
        if src == 0 or tgt == 0:
            new_castling &= ~8
        if (pc == WP or pc == BP) and (tgt - src == 16 or src - tgt == 16):
            new_ep = (src + tgt) >> 1
        else:
            new_ep = -1
        total += perft_c(nb, 1 - stm, new_castling, new_ep, depth - 1)
    return total


# --- xoshiro256** / splitmix64, twin of chessworld.rng ---

cdef struct XoState:
    unsigned long long s0, s1, s2, s3


cdef unsigned long long splitmix_next(unsigned long long* x) nogil:
    cdef unsigned long long z
    x[0] = x[0] + <unsigned long long> 0x9E3779B97F4A7C15ULL
    z = x[0]
    z = (z ^ (z >> 30)) * <unsigned long long> 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <unsigned long long> 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef void xo_seed(XoState* st, unsigned long long seed) nogil:
    cdef unsigned long long x = seed
    st.s0 = splitmix_next(&x)
    st.s1 = splitmix_next(&x)
    st.s2 = splitmix_next(&x)
    st.s3 = splitmix_next(&x)


cdef unsigned long long xo_next(XoState* st) nogil:
    cdef unsigned long long x = st.s1 * 5ULL
    cdef unsigned long long result = ((x << 7) | (x >> 57)) * 9ULL
    cdef unsigned long long t = st.s1 << 17
    cdef unsigned long long s2 = st.s2 ^ st.s0
    cdef unsigned long long s3 = st.s3 ^ st.s1
    st.s1 = st.s1 ^ s2
    st.s0 = st.s0 ^ s3
    st.s2 = s2 ^ t
    st.s3 = (s3 << 45) | (s3 >> 19)
    return result


# --- Python-boundary functions, mirroring chessworld.engine._pure ---


def legal_moves(board, int stm, int castling, int ep):
    cdef const unsigned char[:] bv = board
    cdef int packed[512]
    cdef int n = gen_legal_packed(&bv[0], stm, castling, ep, packed)
    cdef int i, p
    out = []
    for i in range(n):
        p = packed[i]
        out.append((p // 320, (p % 320) // 5, p % 5))
    return out


def apply_move(board, int stm, int castling, int ep, int halfmove, int fullmove,
               int src, int tgt, int promo):
    cdef const unsigned char[:] bv = board
    cdef unsigned char nb[64]
    cdef Fields f
    memcpy(nb, &bv[0], 64)
    f.stm = stm
    f.castling = castling
    f.ep = ep
    f.halfmove = halfmove
    f.fullmove = fullmove
    apply_full(nb, &f, src, tgt, promo)
    return (
        (<char*> nb)[:64],
        f.stm,
        f.castling,
        f.ep,
        f.halfmove,
        f.fullmove,
        bool(f.irreversible),
    )


def in_check(board, int stm):
    cdef const unsigned char[:] bv = board
    return bool(attacked(&bv[0], king_square(&bv[0], stm == 0), stm != 0))


def ep_capture_legal(board, int stm, int ep):
    cdef const unsigned char[:] bv = board
    return bool(ep_legal(&bv[0], stm, ep))


def insufficient_material(board):
    cdef const unsigned char[:] bv = board
    return bool(insufficient_c(&bv[0]))


def position_key(board, int stm, int castling, int ep):
    cdef const unsigned char[:] bv = board
    cdef unsigned char key[67]
    memcpy(key, &bv[0], 64)
    key[64] = <unsigned char> stm
    key[65] = <unsigned char> castling
    key[66] = <unsigned char> (ep + 1 if ep_legal(&bv[0], stm, ep) else 0)
    return (<char*> key)[:67]


def perft(board, int stm, int castling, int ep, int depth):
    cdef const unsigned char[:] bv = board
    if depth == 0:
        return 1
    cdef unsigned long long total
    with nogil:
        total = perft_c(&bv[0], stm, castling, ep, depth)
    return total


def replay_states(move_ids, bint ep_gate):
    cdef unsigned char b[64]
    cdef Fields f
    cdef int packed[512]
    cdef int i, j, n, mid, src, tgt, promo
    cdef bint ok
    memcpy(b, START, 64)
    f.stm = 0
    f.castling = 15
    f.ep = -1
    f.halfmove = 0
    f.fullmove = 1
    cdef Py_ssize_t count = len(move_ids)
    out = bytearray((count + 1) * 75)
    cdef unsigned char[:] ov = out
    encode_into(&ov[0], b, f.stm, f.castling, f.ep, f.halfmove, f.fullmove, ep_gate)
    for i in range(count):
        mid = move_ids[i]
        src = mid // 320
        tgt = (mid % 320) // 5
        promo = mid % 5
        n = gen_legal_packed(b, f.stm, f.castling, f.ep, packed)
        ok = False
        for j in range(n):
            if packed[j] == mid:
                ok = True
                break
        if not ok:
            raise ValueError(f"illegal move id {mid} at ply {i + 1}")
        apply_full(b, &f, src, tgt, promo)
        if f.halfmove > 65535 or f.fullmove > 65535:
            raise ValueError(f"counter overflow at ply {i + 1}")
        encode_into(&ov[(i + 1) * 75], b, f.stm, f.castling, f.ep, f.halfmove, f.fullmove, ep_gate)
    return bytes(out)


def playout(seed, int max_plies):
    """Uniform random legal self-play; twin of _pure.playout."""
    cdef XoState rng
    cdef unsigned char b[64]
    cdef Fields f
    cdef int packed[512]
    cdef int n, pick, src, tgt, promo, plies, term, repeats, i
    cdef unsigned char* keys
    cdef int nkeys
    cdef int* out_ids
    xo_seed(&rng, <unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF))
    memcpy(b, START, 64)
    f.stm = 0
    f.castling = 15
    f.ep = -1
    f.halfmove = 0
    f.fullmove = 1
    keys = <unsigned char*> malloc((max_plies + 1) * 67)
    out_ids = <int*> malloc(max_plies * sizeof(int))
    if keys == NULL or out_ids == NULL:
        free(keys)
        free(out_ids)
        raise MemoryError
    try:
        memcpy(keys, b, 64)
        keys[64] = 0
        keys[65] = 15
        keys[66] = 0
        nkeys = 1
        plies = 0
        term = TERM_ONGOING
        n = gen_legal_packed(b, f.stm, f.castling, f.ep, packed)
        while plies < max_plies:
            pick = packed[xo_next(&rng) % <unsigned long long> n]
            src = pick // 320
            tgt = (pick % 320) // 5
            promo = pick % 5
            out_ids[plies] = pick
            plies += 1
            apply_full(b, &f, src, tgt, promo)
            if f.irreversible:
                nkeys = 0
            memcpy(keys + nkeys * 67, b, 64)
            keys[nkeys * 67 + 64] = <unsigned char> f.stm
            keys[nkeys * 67 + 65] = <unsigned char> f.castling
            keys[nkeys * 67 + 66] = <unsigned char> (f.ep + 1 if ep_legal(b, f.stm, f.ep) else 0)
            nkeys += 1
            repeats = 0
            for i in range(nkeys):
                if memcmp(keys + i * 67, keys + (nkeys - 1) * 67, 67) == 0:
                    repeats += 1
            n = gen_legal_packed(b, f.stm, f.castling, f.ep, packed)
            if n == 0:
                term = TERM_CHECKMATE if attacked(b, king_square(b, f.stm == 0), f.stm != 0) else TERM_STALEMATE
                break
            if insufficient_c(b):
                term = TERM_INSUFFICIENT
                break
            if f.halfmove >= 150:
                term = TERM_SEVENTYFIVE
                break
            if repeats >= 5:
                term = TERM_FIVEFOLD
                break
            if f.halfmove >= 100:
                term = TERM_FIFTY
                break
            if repeats >= 3:
                term = TERM_THREEFOLD
                break
        result = [out_ids[i] for i in range(plies)]
        return result, term, plies
    finally:
        free(keys)
        free(out_ids)
