/**
 * Training loop: masked cross-entropy on shard games, with model
 * serialization and prediction-file emission for the evaluator.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { Adam } from "./adam.js";
import { TOTAL_VOCAB } from "./heads.js";
import {
  BatchGame,
  DEFAULT_CONFIG,
  Model,
  ModelConfig,
  Tensors,
  batchLossAndGrad,
  predictGame,
} from "./model.js";
import { PredictionGame, writePredictions } from "./predfile.js";
import type { ShardGame } from "./shard.js";

export interface TrainConfig {
  hidden: number;
  layers: number;
  batchSize: number;
  lr: number;
  warmupSteps: number;
  epochs: number;
  seed: number;
  embed: number;
}

export const DEFAULT_TRAIN: TrainConfig = {
  hidden: DEFAULT_CONFIG.hidden,
  layers: DEFAULT_CONFIG.layers,
  batchSize: 8,
  lr: 3e-3,
  warmupSteps: 0,
  epochs: 1,
  seed: 0,
  embed: DEFAULT_CONFIG.embed,
};

export function toBatchGame(game: ShardGame, maxSteps?: number): BatchGame {
  const steps = maxSteps ? Math.min(game.tokens.length, maxSteps) : game.tokens.length;
  return { tokens: game.tokens, labels: game.labels, steps };
}

export function newModel(cfg: TrainConfig): Model {
  return new Model({
    vocab: TOTAL_VOCAB,
    embed: cfg.embed,
    hidden: cfg.hidden,
    layers: cfg.layers,
    seed: cfg.seed,
  });
}

/** Repeat one fixed batch for `steps` optimizer steps; returns the losses. */
export function trainRepeatedBatch(
  model: Model,
  batch: BatchGame[],
  steps: number,
  adamCfg: { lr: number; warmupSteps?: number },
): number[] {
  const adam = new Adam(model.params, { lr: adamCfg.lr, warmupSteps: adamCfg.warmupSteps ?? 0 });
  const losses: number[] = [];
  for (let s = 0; s < steps; s++) {
    const { loss, grads } = batchLossAndGrad(model, batch);
    losses.push(loss);
    adam.step(model.params, grads);
  }
  return losses;
}

/** Epoch-based training over all shard games, in fixed order. */
export function train(cfg: TrainConfig, games: ShardGame[]): { model: Model; losses: number[] } {
  const model = newModel(cfg);
  const adam = new Adam(model.params, { lr: cfg.lr, warmupSteps: cfg.warmupSteps });
  const losses: number[] = [];
  for (let epoch = 0; epoch < cfg.epochs; epoch++) {
    for (let start = 0; start < games.length; start += cfg.batchSize) {
      const batch = games.slice(start, start + cfg.batchSize).map((g) => toBatchGame(g));
      const { loss, grads } = batchLossAndGrad(model, batch);
      losses.push(loss);
      adam.step(model.params, grads);
    }
  }
  return { model, losses };
}

export function emitPredictions(model: Model, games: ShardGame[]): PredictionGame[] {
  return games.map((game) => {
    const steps = game.tokens.length;
    const pred = predictGame(model, game.tokens, game.labels, steps);
    return { gameId: game.gameId, labels: pred.labels, logp: pred.logp };
  });
}

export function emitPredictionFile(model: Model, games: ShardGame[], path: string): void {
  writePredictions(emitPredictions(model, games), path);
}

interface SavedModel {
  cfg: ModelConfig;
  tensors: Record<string, string>; // base64 of float64 buffers
}

export function saveModel(model: Model, path: string): void {
  const tensors: Record<string, string> = {};
  for (const [name, value] of model.params) {
    tensors[name] = Buffer.from(value.buffer, value.byteOffset, value.byteLength).toString("base64");
  }
  const payload: SavedModel = { cfg: model.cfg, tensors };
  writeFileSync(path, JSON.stringify(payload));
}

export function loadModel(path: string): Model {
  const payload = JSON.parse(readFileSync(path, "utf-8")) as SavedModel;
  const params: Tensors = new Map();
  for (const [name, b64] of Object.entries(payload.tensors)) {
    const buf = Buffer.from(b64, "base64");
    // copy out of Node's pooled (possibly misaligned) allocation
    const copy = Uint8Array.prototype.slice.call(buf);
    params.set(name, new Float64Array(copy.buffer));
  }
  return new Model(payload.cfg, params);
}
