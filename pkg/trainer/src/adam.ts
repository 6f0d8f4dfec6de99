/** Adam optimizer over the model's named tensors. */

import type { Tensors } from "./model.js";

export interface AdamConfig {
  lr: number;
  beta1: number;
  beta2: number;
  eps: number;
  /** linear learning-rate warmup over this many steps (0 = none) */
  warmupSteps: number;
}

export const DEFAULT_ADAM: AdamConfig = {
  lr: 3e-3,
  beta1: 0.9,
  beta2: 0.999,
  eps: 1e-8,
  warmupSteps: 0,
};

export class Adam {
  private readonly cfg: AdamConfig;
  private readonly m: Tensors = new Map();
  private readonly v: Tensors = new Map();
  private t = 0;

  constructor(params: Tensors, cfg: Partial<AdamConfig> = {}) {
    this.cfg = { ...DEFAULT_ADAM, ...cfg };
    for (const [name, value] of params) {
      this.m.set(name, new Float64Array(value.length));
      this.v.set(name, new Float64Array(value.length));
    }
  }

  step(params: Tensors, grads: Tensors): void {
    this.t += 1;
    const { lr, beta1, beta2, eps, warmupSteps } = this.cfg;
    const rate = warmupSteps > 0 ? lr * Math.min(1, this.t / warmupSteps) : lr;
    const bc1 = 1 - beta1 ** this.t;
    const bc2 = 1 - beta2 ** this.t;
    for (const [name, p] of params) {
      const g = grads.get(name)!;
      const m = this.m.get(name)!;
      const v = this.v.get(name)!;
      for (let i = 0; i < p.length; i++) {
        const gi = g[i];
        m[i] = beta1 * m[i] + (1 - beta1) * gi;
        v[i] = beta2 * v[i] + (1 - beta2) * gi * gi;
        p[i] -= (rate * (m[i] / bc1)) / (Math.sqrt(v[i] / bc2) + eps);
      }
    }
  }
}
