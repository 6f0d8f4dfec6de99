/**
 * Reader for trajectory shard files ("CWM1").
 *
 * Layout: header (magic 4B, version u16, game count u32, flags u16), one
 * record per game (id_len u8, id UTF-8, result u8, T u16, (T+1) u16 move
 * tokens, (T+1) x 75 state label bytes), and a CRC32 trailer over all
 * preceding bytes.  Multi-byte integers are little-endian.
 */

import { readFileSync } from "node:fs";
import { crc32 } from "./crc32.js";
import { START_TOKEN } from "./heads.js";

export interface ShardGame {
  gameId: string;
  result: number; // 0: 1-0, 1: 0-1, 2: draw, 3: *
  /** move tokens x_0..x_T, x_0 = START */
  tokens: Uint16Array;
  /** (T+1) * 75 gold labels, row-major by timestep */
  labels: Uint8Array;
}

export interface Shard {
  games: ShardGame[];
  flags: number;
}

const MAGIC = "CWM1";
const VERSION = 1;

export function readShard(path: string): Shard {
  const data = readFileSync(path);
  if (data.length < 16) throw new Error(`${path}: file shorter than header + trailer`);
  if (data.toString("latin1", 0, 4) !== MAGIC) throw new Error(`${path}: bad magic`);
  const version = data.readUInt16LE(4);
  if (version !== VERSION) throw new Error(`${path}: unsupported version ${version}`);
  const count = data.readUInt32LE(6);
  const flags = data.readUInt16LE(10);
  const stored = data.readUInt32LE(data.length - 4);
  const actual = crc32(data.subarray(0, data.length - 4));
  if (stored !== actual) throw new Error(`${path}: CRC32 mismatch`);

  const games: ShardGame[] = [];
  let off = 12;
  const end = data.length - 4;
  for (let g = 0; g < count; g++) {
    const idLen = data.readUInt8(off);
    off += 1;
    const gameId = data.toString("utf-8", off, off + idLen);
    off += idLen;
    const result = data.readUInt8(off);
    off += 1;
    const t = data.readUInt16LE(off);
    off += 2;
    const steps = t + 1;
    if (off + steps * 2 + steps * 75 > end) throw new Error(`${path}: truncated record ${gameId}`);
    const tokens = new Uint16Array(steps);
    for (let i = 0; i < steps; i++) tokens[i] = data.readUInt16LE(off + 2 * i);
    off += steps * 2;
    const labels = new Uint8Array(data.subarray(off, off + steps * 75));
    off += steps * 75;
    if (tokens[0] !== START_TOKEN) throw new Error(`${path}: game ${gameId} missing START`);
    games.push({ gameId, result, tokens, labels });
  }
  if (off !== end) throw new Error(`${path}: ${end - off} unparsed bytes`);
  return { games, flags };
}

export function readShards(paths: string[]): Shard {
  const games: ShardGame[] = [];
  let flags: number | null = null;
  for (const path of paths) {
    const shard = readShard(path);
    if (flags === null) flags = shard.flags;
    else if (flags !== shard.flags) throw new Error(`${path}: flags differ across shards`);
    games.push(...shard.games);
  }
  return { games, flags: flags ?? 0 };
}
