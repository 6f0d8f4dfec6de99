/** xoshiro256** over splitmix64, for reproducible parameter init. */

const MASK = (1n << 64n) - 1n;

export class Xoshiro {
  private s0: bigint;
  private s1: bigint;
  private s2: bigint;
  private s3: bigint;

  constructor(seed: bigint) {
    let x = seed & MASK;
    const next = () => {
      x = (x + 0x9e3779b97f4a7c15n) & MASK;
      let z = x;
      z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK;
      z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & MASK;
      return z ^ (z >> 31n);
    };
    this.s0 = next();
    this.s1 = next();
    this.s2 = next();
    this.s3 = next();
  }

  nextU64(): bigint {
    const x = (this.s1 * 5n) & MASK;
    const result = ((((x << 7n) | (x >> 57n)) & MASK) * 9n) & MASK;
    const t = (this.s1 << 17n) & MASK;
    const s2 = this.s2 ^ this.s0;
    const s3 = this.s3 ^ this.s1;
    this.s1 = this.s1 ^ s2;
    this.s0 = this.s0 ^ s3;
    this.s2 = s2 ^ t;
    this.s3 = ((s3 << 45n) | (s3 >> 19n)) & MASK;
    return result;
  }

  /** uniform double in [0, 1) with 53 bits of precision */
  float(): number {
    return Number(this.nextU64() >> 11n) / 2 ** 53;
  }

  below(n: number): number {
    return Number(this.nextU64() % BigInt(n));
  }
}
