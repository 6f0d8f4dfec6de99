/**
 * Tiny causal recurrent model over move tokens with factorised state heads.
 *
 * Embedding -> stacked tanh RNN layers -> one linear layer producing the
 * packed logits of all 75 categorical heads.  Everything is float64 with
 * hand-written backpropagation, so gradients are exact enough for tight
 * finite-difference checks and runs are bit-reproducible from the seed.
 */

import { HEAD_CARDINALITIES, HEAD_OFFSETS, LOGIT_DIM, NUM_HEADS, TOTAL_VOCAB } from "./heads.js";
import { Xoshiro } from "./rng.js";

export interface ModelConfig {
  vocab: number;
  embed: number;
  hidden: number;
  layers: number;
  seed: number;
}

export const DEFAULT_CONFIG: Omit<ModelConfig, "seed"> = {
  vocab: TOTAL_VOCAB,
  embed: 32,
  hidden: 128,
  layers: 1,
};

export interface BatchGame {
  /** x_0..x_T (x_0 = START), possibly PAD-extended beyond `steps` */
  tokens: Uint16Array;
  /** gold labels, one 75-byte row per timestep, at least `steps` rows */
  labels: Uint8Array;
  /** number of non-padding timesteps; 0 means a fully padded slot */
  steps: number;
}

export type Tensors = Map<string, Float64Array>;

export class Model {
  readonly cfg: ModelConfig;
  readonly params: Tensors;

  constructor(cfg: ModelConfig, params?: Tensors) {
    if (cfg.layers < 1) throw new Error("need at least one layer");
    this.cfg = cfg;
    this.params = params ?? Model.init(cfg);
  }

  static init(cfg: ModelConfig): Tensors {
    const rng = new Xoshiro(BigInt(cfg.seed));
    const uniform = (n: number, scale: number) => {
      const arr = new Float64Array(n);
      for (let i = 0; i < n; i++) arr[i] = (rng.float() * 2 - 1) * scale;
      return arr;
    };
    const params: Tensors = new Map();
    params.set("emb", uniform(cfg.vocab * cfg.embed, 0.08));
    for (let l = 0; l < cfg.layers; l++) {
      const inDim = l === 0 ? cfg.embed : cfg.hidden;
      params.set(`wx${l}`, uniform(cfg.hidden * inDim, 1 / Math.sqrt(inDim)));
      params.set(`wh${l}`, uniform(cfg.hidden * cfg.hidden, 1 / Math.sqrt(cfg.hidden)));
      params.set(`bh${l}`, new Float64Array(cfg.hidden));
    }
    params.set("wy", uniform(LOGIT_DIM * cfg.hidden, 1 / Math.sqrt(cfg.hidden)));
    params.set("by", new Float64Array(LOGIT_DIM));
    return params;
  }

  zerosLike(): Tensors {
    const grads: Tensors = new Map();
    for (const [name, value] of this.params) grads.set(name, new Float64Array(value.length));
    return grads;
  }
}

interface ForwardCache {
  /** per layer: (steps+1) x hidden, row 0 is h_{-1} = 0 */
  hs: Float64Array[];
  /** steps x LOGIT_DIM */
  logits: Float64Array;
}

function matvecInto(out: Float64Array, m: Float64Array, rows: number, cols: number,
                    v: Float64Array, vOff: number, add: boolean): void {
  for (let r = 0; r < rows; r++) {
    let s = add ? out[r] : 0;
    const base = r * cols;
    for (let c = 0; c < cols; c++) s += m[base + c] * v[vOff + c];
    out[r] = s;
  }
}

/** out[c] += sum_r m[r,c] * u[r] */
function matTvecAdd(out: Float64Array, outOff: number, m: Float64Array, rows: number,
                    cols: number, u: Float64Array): void {
  for (let r = 0; r < rows; r++) {
    const ur = u[r];
    if (ur === 0) continue;
    const base = r * cols;
    for (let c = 0; c < cols; c++) out[outOff + c] += m[base + c] * ur;
  }
}

/** g[r,c] += u[r] * v[c] */
function outerAdd(g: Float64Array, u: Float64Array, rows: number,
                  v: Float64Array, vOff: number, cols: number): void {
  for (let r = 0; r < rows; r++) {
    const ur = u[r];
    if (ur === 0) continue;
    const base = r * cols;
    for (let c = 0; c < cols; c++) g[base + c] += ur * v[vOff + c];
  }
}

export function forwardGame(model: Model, tokens: Uint16Array, steps: number): ForwardCache {
  const { embed, hidden, layers, vocab } = model.cfg;
  if (tokens.length < steps) throw new Error("shape mismatch: tokens shorter than steps");
  const emb = model.params.get("emb")!;
  const wy = model.params.get("wy")!;
  const by = model.params.get("by")!;
  const hs: Float64Array[] = [];
  for (let l = 0; l < layers; l++) hs.push(new Float64Array((steps + 1) * hidden));
  const logits = new Float64Array(steps * LOGIT_DIM);
  const pre = new Float64Array(hidden);
  for (let t = 0; t < steps; t++) {
    const token = tokens[t];
    if (token >= vocab) throw new Error(`token ${token} outside vocabulary`);
    for (let l = 0; l < layers; l++) {
      const wx = model.params.get(`wx${l}`)!;
      const wh = model.params.get(`wh${l}`)!;
      const bh = model.params.get(`bh${l}`)!;
      const inDim = l === 0 ? embed : hidden;
      const input = l === 0 ? emb : hs[l - 1];
      const inOff = l === 0 ? token * embed : (t + 1) * hidden;
      matvecInto(pre, wx, hidden, inDim, input, inOff, false);
      matvecInto(pre, wh, hidden, hidden, hs[l], t * hidden, true);
      const out = hs[l];
      const outOff = (t + 1) * hidden;
      for (let h = 0; h < hidden; h++) out[outOff + h] = Math.tanh(pre[h] + bh[h]);
    }
    const top = hs[layers - 1];
    for (let i = 0; i < LOGIT_DIM; i++) {
      let s = by[i];
      const base = i * hidden;
      const hOff = (t + 1) * hidden;
      for (let h = 0; h < hidden; h++) s += wy[base + h] * top[hOff + h];
      logits[t * LOGIT_DIM + i] = s;
    }
  }
  return { hs, logits };
}

/** Per-timestep summed negative log-likelihood over the 75 heads. */
export function nllFromLogits(logits: Float64Array, labels: Uint8Array, steps: number): number {
  if (labels.length < steps * 75) throw new Error("shape mismatch: labels shorter than steps");
  let nll = 0;
  for (let t = 0; t < steps; t++) {
    const base = t * LOGIT_DIM;
    for (let j = 0; j < NUM_HEADS; j++) {
      const off = base + HEAD_OFFSETS[j];
      const card = HEAD_CARDINALITIES[j];
      const gold = labels[t * 75 + j];
      if (gold >= card) throw new Error(`label ${gold} exceeds head ${j} cardinality`);
      let max = -Infinity;
      for (let c = 0; c < card; c++) if (logits[off + c] > max) max = logits[off + c];
      let sum = 0;
      for (let c = 0; c < card; c++) sum += Math.exp(logits[off + c] - max);
      nll += max + Math.log(sum) - logits[off + gold];
    }
  }
  return nll;
}

/**
 * Masked batch loss: per game, the summed head cross-entropies divided by
 * 75 * (T+1), then averaged over the games that have any non-padding
 * timesteps.  Fully padded slots contribute nothing.
 */
export function batchLoss(model: Model, batch: BatchGame[]): number {
  let total = 0;
  let live = 0;
  for (const game of batch) {
    if (game.steps === 0) continue;
    const { logits } = forwardGame(model, game.tokens, game.steps);
    total += nllFromLogits(logits, game.labels, game.steps) / (75 * game.steps);
    live++;
  }
  return live === 0 ? 0 : total / live;
}

export function batchLossAndGrad(model: Model, batch: BatchGame[]): { loss: number; grads: Tensors } {
  const { embed, hidden, layers } = model.cfg;
  const grads = model.zerosLike();
  const live = batch.filter((g) => g.steps > 0);
  if (live.length === 0) return { loss: 0, grads };

  const emb = model.params.get("emb")!;
  const wy = model.params.get("wy")!;
  const gEmb = grads.get("emb")!;
  const gWy = grads.get("wy")!;
  const gBy = grads.get("by")!;
  let loss = 0;

  for (const game of live) {
    const { tokens, labels, steps } = game;
    const cache = forwardGame(model, tokens, steps);
    loss += nllFromLogits(cache.logits, labels, steps) / (75 * steps) / live.length;
    const scale = 1 / (75 * steps * live.length);

    const dlogits = new Float64Array(LOGIT_DIM);
    const dh = new Float64Array(hidden);
    const dpre = new Float64Array(hidden);
    // dpre at t+1 for each layer, for the recurrent term
    const dpreNext: Float64Array[] = [];
    for (let l = 0; l < layers; l++) dpreNext.push(new Float64Array(hidden));
    // dpre of layer l+1 at the current timestep, for the stacking term
    const dpreAbove = new Float64Array(hidden);

    for (let t = steps - 1; t >= 0; t--) {
      const base = t * LOGIT_DIM;
      for (let j = 0; j < NUM_HEADS; j++) {
        const off = HEAD_OFFSETS[j];
        const card = HEAD_CARDINALITIES[j];
        let max = -Infinity;
        for (let c = 0; c < card; c++) {
          const v = cache.logits[base + off + c];
          if (v > max) max = v;
        }
        let sum = 0;
        for (let c = 0; c < card; c++) sum += Math.exp(cache.logits[base + off + c] - max);
        for (let c = 0; c < card; c++) {
          dlogits[off + c] = (Math.exp(cache.logits[base + off + c] - max) / sum) * scale;
        }
        dlogits[off + labels[t * 75 + j]] -= scale;
      }
      const top = cache.hs[layers - 1];
      const hOff = (t + 1) * hidden;
      outerAdd(gWy, dlogits, LOGIT_DIM, top, hOff, hidden);
      for (let i = 0; i < LOGIT_DIM; i++) gBy[i] += dlogits[i];

      for (let l = layers - 1; l >= 0; l--) {
        const wh = model.params.get(`wh${l}`)!;
        const gWx = grads.get(`wx${l}`)!;
        const gWh = grads.get(`wh${l}`)!;
        const gBh = grads.get(`bh${l}`)!;
        dh.fill(0);
        if (l === layers - 1) {
          matTvecAdd(dh, 0, wy, LOGIT_DIM, hidden, dlogits);
        } else {
          const wxAbove = model.params.get(`wx${l + 1}`)!;
          matTvecAdd(dh, 0, wxAbove, hidden, hidden, dpreAbove);
        }
        matTvecAdd(dh, 0, wh, hidden, hidden, dpreNext[l]);
        const hs = cache.hs[l];
        for (let h = 0; h < hidden; h++) {
          const hv = hs[(t + 1) * hidden + h];
          dpre[h] = dh[h] * (1 - hv * hv);
        }
        if (l === 0) {
          const token = tokens[t];
          outerAdd(gWx, dpre, hidden, emb, token * embed, embed);
          const wx = model.params.get("wx0")!;
          matTvecAdd(gEmb, token * embed, wx, hidden, embed, dpre);
        } else {
          outerAdd(gWx, dpre, hidden, cache.hs[l - 1], (t + 1) * hidden, hidden);
        }
        outerAdd(gWh, dpre, hidden, hs, t * hidden, hidden);
        for (let h = 0; h < hidden; h++) gBh[h] += dpre[h];
        dpreNext[l].set(dpre);
        if (l > 0) dpreAbove.set(dpre);
      }
    }
  }
  return { loss, grads };
}

export interface StatePrediction {
  /** argmax label per head per timestep, steps x 75 */
  labels: Uint8Array;
  /** log-probability assigned to the gold label, floored at -30 */
  logp: Float32Array;
}

export const LOGP_FLOOR = -30;

export function predictGame(model: Model, tokens: Uint16Array, labels: Uint8Array,
                             steps: number): StatePrediction {
  const { logits } = forwardGame(model, tokens, steps);
  const out = new Uint8Array(steps * 75);
  const logp = new Float32Array(steps * 75);
  for (let t = 0; t < steps; t++) {
    const base = t * LOGIT_DIM;
    for (let j = 0; j < NUM_HEADS; j++) {
      const off = base + HEAD_OFFSETS[j];
      const card = HEAD_CARDINALITIES[j];
      let best = 0;
      let max = -Infinity;
      for (let c = 0; c < card; c++) {
        const v = logits[off + c];
        if (v > max) {
          max = v;
          best = c;
        }
      }
      let sum = 0;
      for (let c = 0; c < card; c++) sum += Math.exp(logits[off + c] - max);
      const gold = labels[t * 75 + j];
      const lp = logits[off + gold] - max - Math.log(sum);
      out[t * 75 + j] = best;
      logp[t * 75 + j] = Math.max(lp, LOGP_FLOOR);
    }
  }
  return { labels: out, logp };
}
