/**
 * Writer (and reader, for tests) of prediction files ("CWMP").
 *
 * Header: magic 4B, version u16, game count u32.  Per game: id_len u8,
 * id UTF-8, T u16, then per timestep 75 predicted labels (u8) followed by
 * 75 float32 (LE) log-probabilities of the true labels.
 */

import { readFileSync, writeFileSync } from "node:fs";

export interface PredictionGame {
  gameId: string;
  /** (T+1) * 75 predicted labels */
  labels: Uint8Array;
  /** (T+1) * 75 log-probabilities of the gold labels, all <= 0 */
  logp: Float32Array;
}

const MAGIC = "CWMP";
const VERSION = 1;
const STEP_BYTES = 75 + 75 * 4;

export function writePredictions(records: PredictionGame[], path: string): void {
  let size = 10;
  for (const rec of records) {
    const steps = rec.labels.length / 75;
    size += 1 + Buffer.byteLength(rec.gameId, "utf-8") + 2 + steps * STEP_BYTES;
  }
  const buf = Buffer.alloc(size);
  buf.write(MAGIC, 0, "latin1");
  buf.writeUInt16LE(VERSION, 4);
  buf.writeUInt32LE(records.length, 6);
  let off = 10;
  for (const rec of records) {
    const steps = rec.labels.length / 75;
    if (!Number.isInteger(steps) || rec.logp.length !== rec.labels.length) {
      throw new Error(`bad prediction shapes for ${rec.gameId}`);
    }
    const idLen = Buffer.byteLength(rec.gameId, "utf-8");
    buf.writeUInt8(idLen, off);
    off += 1;
    buf.write(rec.gameId, off, "utf-8");
    off += idLen;
    buf.writeUInt16LE(steps - 1, off);
    off += 2;
    for (let t = 0; t < steps; t++) {
      for (let j = 0; j < 75; j++) buf.writeUInt8(rec.labels[t * 75 + j], off + j);
      off += 75;
      for (let j = 0; j < 75; j++) buf.writeFloatLE(rec.logp[t * 75 + j], off + 4 * j);
      off += 300;
    }
  }
  writeFileSync(path, buf);
}

export function readPredictions(path: string): PredictionGame[] {
  const data = readFileSync(path);
  if (data.toString("latin1", 0, 4) !== MAGIC) throw new Error(`${path}: bad magic`);
  if (data.readUInt16LE(4) !== VERSION) throw new Error(`${path}: bad version`);
  const count = data.readUInt32LE(6);
  const records: PredictionGame[] = [];
  let off = 10;
  for (let g = 0; g < count; g++) {
    const idLen = data.readUInt8(off);
    off += 1;
    const gameId = data.toString("utf-8", off, off + idLen);
    off += idLen;
    const steps = data.readUInt16LE(off) + 1;
    off += 2;
    if (off + steps * STEP_BYTES > data.length) throw new Error(`${path}: truncated ${gameId}`);
    const labels = new Uint8Array(steps * 75);
    const logp = new Float32Array(steps * 75);
    for (let t = 0; t < steps; t++) {
      for (let j = 0; j < 75; j++) labels[t * 75 + j] = data.readUInt8(off + j);
      off += 75;
      for (let j = 0; j < 75; j++) logp[t * 75 + j] = data.readFloatLE(off + 4 * j);
      off += 300;
    }
    records.push({ gameId, labels, logp });
  }
  return records;
}
