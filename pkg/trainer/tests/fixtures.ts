/**
 * Test fixtures produced through the Python toolkit's external interfaces
 * (CLI + file formats) only.
 */

import { execSync } from "node:child_process";
import { mkdtempSync, readdirSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export function tempDir(prefix: string): string {
  return mkdtempSync(join(tmpdir(), prefix));
}

export function cli(cmd: string): string {
  return execSync(cmd, { encoding: "utf-8", stdio: ["ignore", "pipe", "pipe"] });
}

/** Shard of random self-play games via `chessworld randgen`. */
export function makeRandomShard(games: number, seed = 123): string[] {
  const dir = tempDir("cwm-shard-");
  cli(`chessworld randgen --seed ${seed} --games ${games} --out-dir ${dir} --workers 1`);
  return readdirSync(dir)
    .filter((name) => name.endsWith(".cwm"))
    .sort()
    .map((name) => join(dir, name));
}

const SHUFFLE_GAME = `[Event "Fixture"]
[Site "https://lichess.org/ShufA001"]
[Result "1/2-1/2"]

1. Nf3 Nf6 2. Ng1 Ng8 3. Nf3 Nf6 4. Ng1 Ng8 5. Nf3 Nf6 6. Ng1 Ng8 7. Nf3 Nf6
8. Ng1 Ng8 9. Nf3 Nf6 10. Ng1 Ng8 1/2-1/2
`;

const RUY_GAME = `[Event "Fixture"]
[Site "https://lichess.org/RuyL0001"]
[Result "*"]

1. e4 e5 2. Nf3 Nc6 3. Bb5 a6 4. Ba4 Nf6 5. O-O Be7 6. Re1 b5 7. Bb3 d6
8. c3 O-O 9. h3 Nb8 10. d4 Nbd7 *
`;

/** Build a tiny fixed shard (one or two 20-ply games) via `chessworld build`. */
export function makeTinyShard(games: 1 | 2): string[] {
  const dir = tempDir("cwm-tiny-");
  const pgn = join(dir, "tiny.pgn");
  writeFileSync(pgn, games === 1 ? SHUFFLE_GAME : SHUFFLE_GAME + "\n" + RUY_GAME);
  cli(`chessworld build --input ${pgn} --out-dir ${dir}/out --workers 1`);
  return readdirSync(join(dir, "out"))
    .filter((name) => name.endsWith(".cwm"))
    .sort()
    .map((name) => join(dir, "out", name));
}

/** Run `chessworld evaluate` and parse the key<TAB>value report. */
export function evaluateWithPython(shardPaths: string[], predPath: string): Map<string, string> {
  const out = cli(
    `chessworld evaluate --shard ${shardPaths.join(" ")} --predictions ${predPath}`,
  );
  const report = new Map<string, string>();
  for (const line of out.trim().split("\n")) {
    const idx = line.indexOf("\t");
    if (idx > 0 && !line.startsWith("bin\t")) report.set(line.slice(0, idx), line.slice(idx + 1));
  }
  return report;
}
