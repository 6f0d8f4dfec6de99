/**
 * Trainer CLI:
 *   node dist/cli.js train --shards a.cwm b.cwm --epochs 1 --seed 0 --out model.json
 *   node dist/cli.js predict --model model.json --shard a.cwm --out preds.cwmp
 */

import { DEFAULT_TRAIN, TrainConfig, emitPredictionFile, loadModel, saveModel, train } from "./train.js";
import { readShards } from "./shard.js";

function parseArgs(argv: string[]): Map<string, string[]> {
  const args = new Map<string, string[]>();
  let key: string | null = null;
  for (const token of argv) {
    if (token.startsWith("--")) {
      key = token.slice(2);
      args.set(key, []);
    } else if (key !== null) {
      args.get(key)!.push(token);
    }
  }
  return args;
}

function one(args: Map<string, string[]>, key: string, fallback?: string): string {
  const values = args.get(key);
  if (!values || values.length === 0) {
    if (fallback !== undefined) return fallback;
    throw new Error(`missing --${key}`);
  }
  return values[0];
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  const args = parseArgs(rest);
  try {
    if (command === "train") {
      const shards = args.get("shards");
      if (!shards || shards.length === 0) throw new Error("missing --shards");
      const cfg: TrainConfig = {
        ...DEFAULT_TRAIN,
        hidden: Number(one(args, "hidden", String(DEFAULT_TRAIN.hidden))),
        layers: Number(one(args, "layers", String(DEFAULT_TRAIN.layers))),
        batchSize: Number(one(args, "batch-size", String(DEFAULT_TRAIN.batchSize))),
        lr: Number(one(args, "lr", String(DEFAULT_TRAIN.lr))),
        warmupSteps: Number(one(args, "warmup", "0")),
        epochs: Number(one(args, "epochs", "1")),
        seed: Number(one(args, "seed", "0")),
      };
      const { games } = readShards(shards);
      const { model, losses } = train(cfg, games);
      saveModel(model, one(args, "out"));
      console.log(`games\t${games.length}`);
      console.log(`steps\t${losses.length}`);
      console.log(`first_loss\t${losses[0]}`);
      console.log(`last_loss\t${losses[losses.length - 1]}`);
      return 0;
    }
    if (command === "predict") {
      const model = loadModel(one(args, "model"));
      const { games } = readShards(args.get("shard") ?? []);
      if (games.length === 0) throw new Error("missing --shard");
      emitPredictionFile(model, games, one(args, "out"));
      console.log(`games\t${games.length}`);
      return 0;
    }
    throw new Error(`unknown command ${command ?? "(none)"}; use train or predict`);
  } catch (err) {
    console.error(`error\t${(err as Error).message}`);
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
