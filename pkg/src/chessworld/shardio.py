"""Bit-exact binary containers for trajectories and predictions.

Shard files ("CWM1"):
    header   magic 4B | version u16 | game count u32 | flags u16
    per game id_len u8 | id UTF-8 | result u8 | T u16
             | (T+1) x u16 move tokens | (T+1) x 75 state bytes
    trailer  CRC32 of all preceding bytes, u32

Prediction files ("CWMP"):
    header   magic 4B | version u16 | game count u32
    per game id_len u8 | id UTF-8 | T u16
             | per timestep: 75 x u8 predicted labels, 75 x f32 log-probs

All multi-byte integers are little-endian; the state counter byte pairs
inside the 75 labels stay big-endian as defined by the codec.  Shard flags:
bit 0 set means en passant labels were encoded raw instead of
legality-gated.  Files are deterministic functions of their content (no
timestamps or padding), and shard writes are single-pass append-only.
"""

from __future__ import annotations

import struct
import zlib
from array import array
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

MAGIC = b"CWM1"
PRED_MAGIC = b"CWMP"
VERSION = 1
FLAG_RAW_EP = 1

RESULT_CODES = {"1-0": 0, "0-1": 1, "1/2-1/2": 2, "*": 3}
RESULT_NAMES = {v: k for k, v in RESULT_CODES.items()}

_HEADER = struct.Struct("<4sHIH")
_PRED_HEADER = struct.Struct("<4sHI")

# one prediction timestep: 75 label bytes then 75 little-endian f32 log-probs
PRED_STEP_DTYPE = np.dtype([("labels", "u1", (75,)), ("logp", "<f4", (75,))])


class BadMagic(Exception):
    pass


class BadVersion(Exception):
    pass


class ChecksumMismatch(Exception):
    pass


class TruncatedRecord(Exception):
    pass


def _encode_game(traj) -> bytes:
    from .codec import START_TOKEN  # local import to avoid cycle at module load

    gid = traj.game_id.encode("utf-8")
    if len(gid) > 255:
        raise ValueError(f"game id too long: {traj.game_id!r}")
    if traj.result not in RESULT_CODES:
        raise ValueError(f"bad result {traj.result!r}")
    tokens = traj.move_tokens
    if len(tokens) == 0 or tokens[0] != START_TOKEN:
        raise ValueError("move_tokens must begin with START")
    t = len(tokens) - 1
    if len(traj.states) != (t + 1) * 75:
        raise ValueError("states length does not match token count")
    head = struct.pack("<B", len(gid)) + gid + struct.pack("<BH", RESULT_CODES[traj.result], t)
    tok = array("H", tokens)
    return head + tok.tobytes() + traj.states


class RollingShardWriter:
    """Splits a game stream into shard files of at most `shard_size` games."""

    def __init__(self, out_dir: str | Path, prefix: str, shard_size: int, flags: int = 0):
        if shard_size <= 0:
            raise ValueError("shard_size must be positive")
        self.out_dir = Path(out_dir)
        self.prefix = prefix
        self.shard_size = shard_size
        self.flags = flags
        self._blobs: list[bytes] = []
        self._paths: list[Path] = []

    def add(self, traj) -> None:
        self._blobs.append(_encode_game(traj))
        if len(self._blobs) >= self.shard_size:
            self._flush()

    def _flush(self) -> None:
        if not self._blobs:
            return
        path = self.out_dir / f"{self.prefix}-{len(self._paths):05d}.cwm"
        _write_blobs(self._blobs, path, self.flags)
        self._paths.append(path)
        self._blobs = []

    def close(self) -> list[Path]:
        self._flush()
        return self._paths


def _write_blobs(blobs: list[bytes], path: str | Path, flags: int) -> None:
    crc = 0
    with open(path, "wb") as fh:
        header = _HEADER.pack(MAGIC, VERSION, len(blobs), flags)
        crc = zlib.crc32(header, crc)
        fh.write(header)
        for blob in blobs:
            crc = zlib.crc32(blob, crc)
            fh.write(blob)
        fh.write(struct.pack("<I", crc))


def write_shard(trajectories: Iterable, path: str | Path, flags: int = 0) -> None:
    """One-shot shard write; read_shard(write_shard(x)) == x field-for-field."""
    _write_blobs([_encode_game(t) for t in trajectories], path, flags)


def read_shard(path: str | Path):
    """Parse and verify a shard; returns (list of Trajectory, flags)."""
    from .pipeline import Trajectory

    data = Path(path).read_bytes()
    if len(data) < _HEADER.size + 4:
        raise TruncatedRecord(f"{path}: shorter than header + trailer")
    magic, version, count, flags = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise BadMagic(f"{path}: magic {magic!r}")
    if version != VERSION:
        raise BadVersion(f"{path}: version {version}")
    stored_crc = struct.unpack_from("<I", data, len(data) - 4)[0]
    if zlib.crc32(data[:-4]) != stored_crc:
        raise ChecksumMismatch(f"{path}: CRC32 check failed")
    out = []
    off = _HEADER.size
    end = len(data) - 4
    for _ in range(count):
        try:
            (id_len,) = struct.unpack_from("<B", data, off)
            off += 1
            gid = data[off : off + id_len].decode("utf-8")
            off += id_len
            result_code, t = struct.unpack_from("<BH", data, off)
            off += 3
            ntok = t + 1
            tokens = array("H")
            tokens.frombytes(data[off : off + ntok * 2])
            off += ntok * 2
            states = data[off : off + ntok * 75]
            off += ntok * 75
            if len(tokens) != ntok or len(states) != ntok * 75 or off > end:
                raise TruncatedRecord(f"{path}: record for {gid!r} truncated")
        except struct.error as exc:
            raise TruncatedRecord(f"{path}: {exc}") from exc
        if result_code not in RESULT_NAMES:
            raise TruncatedRecord(f"{path}: bad result code {result_code} for {gid!r}")
        if tokens[0] != 20480:
            raise TruncatedRecord(f"{path}: game {gid!r} does not begin with START")
        out.append(Trajectory(gid, RESULT_NAMES[result_code], tokens, states))
    if off != end:
        raise TruncatedRecord(f"{path}: {end - off} unparsed bytes before trailer")
    return out, flags


def read_shards(paths: Iterable[str | Path]):
    """Concatenate several shards; flags must agree across files."""
    trajs = []
    flags = None
    for path in paths:
        part, f = read_shard(path)
        if flags is None:
            flags = f
        elif flags != f:
            raise BadVersion(f"{path}: flags {f} differ from {flags}")
        trajs.extend(part)
    return trajs, (flags or 0)


@dataclass
class PredictionRecord:
    """Per-game predictions: labels and log-probs of the true labels."""

    game_id: str
    labels: np.ndarray  # (T+1, 75) uint8
    logp: np.ndarray  # (T+1, 75) float32, all <= 0

    @property
    def T(self) -> int:
        return self.labels.shape[0] - 1


def write_predictions(records: Iterable[PredictionRecord], path: str | Path) -> None:
    records = list(records)
    with open(path, "wb") as fh:
        fh.write(_PRED_HEADER.pack(PRED_MAGIC, VERSION, len(records)))
        for rec in records:
            gid = rec.game_id.encode("utf-8")
            if len(gid) > 255:
                raise ValueError(f"game id too long: {rec.game_id!r}")
            steps = rec.labels.shape[0]
            if rec.labels.shape != (steps, 75) or rec.logp.shape != (steps, 75):
                raise ValueError(f"bad prediction shapes for {rec.game_id!r}")
            fh.write(struct.pack("<B", len(gid)) + gid + struct.pack("<H", steps - 1))
            block = np.empty(steps, dtype=PRED_STEP_DTYPE)
            block["labels"] = rec.labels
            block["logp"] = rec.logp
            fh.write(block.tobytes())


def read_predictions(path: str | Path) -> list[PredictionRecord]:
    data = Path(path).read_bytes()
    if len(data) < _PRED_HEADER.size:
        raise TruncatedRecord(f"{path}: shorter than header")
    magic, version, count = _PRED_HEADER.unpack_from(data, 0)
    if magic != PRED_MAGIC:
        raise BadMagic(f"{path}: magic {magic!r}")
    if version != VERSION:
        raise BadVersion(f"{path}: version {version}")
    out = []
    off = _PRED_HEADER.size
    for _ in range(count):
        try:
            (id_len,) = struct.unpack_from("<B", data, off)
            off += 1
            gid = data[off : off + id_len].decode("utf-8")
            off += id_len
            (t,) = struct.unpack_from("<H", data, off)
            off += 2
        except struct.error as exc:
            raise TruncatedRecord(f"{path}: {exc}") from exc
        steps = t + 1
        nbytes = steps * PRED_STEP_DTYPE.itemsize
        if off + nbytes > len(data):
            raise TruncatedRecord(f"{path}: record for {gid!r} truncated")
        block = np.frombuffer(data, dtype=PRED_STEP_DTYPE, count=steps, offset=off)
        off += nbytes
        out.append(PredictionRecord(gid, block["labels"].copy(), block["logp"].copy()))
    if off != len(data):
        raise TruncatedRecord(f"{path}: {len(data) - off} trailing bytes")
    return out


def describe_shard(path: str | Path, samples: int = 1) -> str:
    """Human-readable header and sample-game summary for `inspect`."""
    from .codec import render_board

    trajs, flags = read_shard(path)
    lines = [
        f"file\t{path}",
        f"format\tshard",
        f"version\t{VERSION}",
        f"games\t{len(trajs)}",
        f"flags\t{flags}",
        f"ep_encoding\t{'raw' if flags & FLAG_RAW_EP else 'legality-gated'}",
        f"timesteps\t{sum(t.T + 1 for t in trajs)}",
    ]
    for traj in trajs[:samples]:
        lines.append(f"game\t{traj.game_id}\tresult {traj.result}\tplies {traj.T}")
        lines.append(render_board(traj.state(traj.T)))
    return "\n".join(lines)


def describe_predictions(path: str | Path) -> str:
    records = read_predictions(path)
    lines = [
        f"file\t{path}",
        f"format\tpredictions",
        f"version\t{VERSION}",
        f"games\t{len(records)}",
        f"timesteps\t{sum(r.T + 1 for r in records)}",
    ]
    return "\n".join(lines)
