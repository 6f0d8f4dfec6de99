"""Frozen golden values, all derived before the build.

Perft tables come from the clean-room oracle in refengine.py (see
derive_perft_goldens.py); five of the entries double as published-constant
cross-checks and all matched.  PRNG vectors come from a C transcription of
the published splitmix64/xoshiro256** reference (prng_reference.c).  MD5
residues were computed with hashlib directly; "abc" is the RFC 1321 test
vector 0x900150983cd24fb0d6963f7d28e17f72.
"""

# fen -> perft counts for depths 1..5
PERFT_TABLE = {
    "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1": (
        20, 400, 8902, 197281, 4865609,
    ),
    # rook endgame with en passant and pins (published CPW "position 3")
    "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1": (
        14, 191, 2812, 43238, 674624,
    ),
    # promotion-heavy with castling both sides (published CPW "position 4")
    "r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1": (
        6, 264, 9467, 422333, 15833292,
    ),
    # en passant capture is pinned against the king
    "8/8/8/2k5/2pP4/8/B7/4K3 b - d3 0 1": (
        8, 72, 492, 5380, 36744,
    ),
    # kingside castling delivers check
    "5k2/8/8/8/8/8/8/4K2R w K - 0 1": (
        15, 66, 1198, 6399, 120330,
    ),
    # knight capture uncovers a discovered check
    "8/8/1P2K3/8/2n5/1q6/8/5k2 b - - 0 1": (
        29, 165, 5160, 31961, 1004658,
    ),
}

INITIAL_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"
TACTICAL_FENS = [fen for fen in PERFT_TABLE if fen != INITIAL_FEN]

# extra oracle-derived positions exercised in unit tests only
PERFT_EXTRA = {
    # en passant capture gives check
    "8/8/1k6/2b5/2pP4/8/5K2/8 b - d3 0 1": (15, 126, 1928, 13931, 206379),
    # promotion is the only escape from check
    "2K2r2/4P3/8/8/8/8/8/3k4 w - - 0 1": (11, 133, 1442, 19174, 266199),
}

# published perft constants used to validate engines at depths the oracle
# cannot reach: Kiwipete and CPW positions 5/6
PUBLISHED_ANCHORS = {
    "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1": (48, 2039, 97862, 4085603),
    "rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8": (44, 1486, 62379, 2103487),
    "r4rk1/1pp1qppp/p1np1n2/2b1p1B1/2B1P1b1/P1NP1N2/1PP1QPPP/R4RK1 w - - 0 10": (46, 2079, 89890, 3894594),
}

# xoshiro256** first outputs after splitmix64 seeding, from prng_reference.c
XOSHIRO_GOLDENS = {
    0: (11091344671253066420, 13793997310169335082, 1900383378846508768),
    1: (12966619160104079557, 9600361134598540522, 10590380919521690900),
    42: (1546998764402558742, 6990951692964543102, 12544586762248559009),
    123456789: (15127205273500847298, 16265768176396019016, 1514321867679316104),
    2**64 - 1: (10328197420357168392, 14156678507024973869, 9357971779955476126),
}

SPLITMIX_GOLDENS = {
    0: (16294208416658607535, 7960286522194355700, 487617019471545679, 17909611376780542444),
    1: (10451216379200822465, 13757245211066428519, 17911839290282890590, 8196980753821780235),
}

# first-ply draw index (next_u64 % 20) and the resulting UCI move from the
# ascending-packed-id initial move list
FIRST_MOVE_GOLDENS = {
    0: (0, "a2a4"),
    1: (17, "b1c3"),
    42: (2, "b2b4"),
    123456789: (18, "g1f3"),
    2**64 - 1: (12, "g2g4"),
}

# md5(game_id) big-endian mod 10000
MD5_RESIDUES = {
    "abc": 3570,
    "AbCd1234": 8542,
    "rand0": 3385,
    "g149": 25,       # validation (< 50)
    "Li000030": 39,   # validation (< 50)
    "": 8366,
}
