"""Deterministic hash-based train/validation split.

A game's split is a pure function of its identifier: the MD5 digest of the
UTF-8 id bytes, read as a big-endian 128-bit integer, reduced modulo
10,000; residues below 50 go to validation (~0.5% of games).
"""

from __future__ import annotations

import hashlib
from enum import Enum

MODULUS = 10_000
VALIDATION_BUCKETS = 50


class Split(Enum):
    TRAIN = "train"
    VALIDATION = "validation"


def split_residue(game_id: str) -> int:
    digest = hashlib.md5(game_id.encode("utf-8")).digest()
    return int.from_bytes(digest, "big") % MODULUS


def split_of(game_id: str) -> Split:
    if not game_id:
        raise ValueError("game_id must be non-empty")
    return Split.VALIDATION if split_residue(game_id) < VALIDATION_BUCKETS else Split.TRAIN
