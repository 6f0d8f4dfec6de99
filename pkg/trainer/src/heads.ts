/**
 * Factorised output-head layout for the 75 state labels.
 *
 * 64 board heads with 13 classes, one binary side head, four binary
 * castling heads, a 9-way en passant file head, a 3-way en passant rank
 * head, and two 256-way byte heads each for the halfmove and fullmove
 * counters.  Logits for all heads are packed into one vector.
 */

export const NUM_HEADS = 75;

export const HEAD_CARDINALITIES: readonly number[] = (() => {
  const cards: number[] = [];
  for (let i = 0; i < 64; i++) cards.push(13);
  cards.push(2, 2, 2, 2, 2, 9, 3, 256, 256, 256, 256);
  return cards;
})();

/** Offset of each head's first logit in the packed logit vector. */
export const HEAD_OFFSETS: readonly number[] = (() => {
  const offsets: number[] = [];
  let acc = 0;
  for (const c of HEAD_CARDINALITIES) {
    offsets.push(acc);
    acc += c;
  }
  return offsets;
})();

export const LOGIT_DIM = HEAD_OFFSETS[NUM_HEADS - 1] + HEAD_CARDINALITIES[NUM_HEADS - 1]; // 1878

export const MOVE_VOCAB = 20480;
export const START_TOKEN = 20480;
export const PAD_TOKEN = 20481;
export const TOTAL_VOCAB = 20482;
