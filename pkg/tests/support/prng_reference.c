/* Reference transcription of splitmix64 and xoshiro256** (public-domain
 * algorithms by Sebastiano Vigna / David Blackman), used once pre-build to
 * derive golden values for the Python and Cython implementations.
 *
 *   gcc -O2 -o prng_reference prng_reference.c && ./prng_reference
 */
#include <stdint.h>
#include <stdio.h>
#include <inttypes.h>

static uint64_t sm_state;

static uint64_t splitmix64_next(void) {
    uint64_t z = (sm_state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

static uint64_t xo_state[4];

static inline uint64_t rotl(const uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

static uint64_t xoshiro256ss_next(void) {
    const uint64_t result = rotl(xo_state[1] * 5, 7) * 9;
    const uint64_t t = xo_state[1] << 17;
    xo_state[2] ^= xo_state[0];
    xo_state[3] ^= xo_state[1];
    xo_state[1] ^= xo_state[2];
    xo_state[0] ^= xo_state[3];
    xo_state[2] ^= t;
    xo_state[3] = rotl(xo_state[3], 45);
    return result;
}

static void seed_from(uint64_t seed) {
    sm_state = seed;
    for (int i = 0; i < 4; i++) xo_state[i] = splitmix64_next();
}

int main(void) {
    uint64_t seeds[] = {0ULL, 1ULL, 42ULL, 123456789ULL, 0xffffffffffffffffULL};
    for (unsigned s = 0; s < 5; s++) {
        sm_state = seeds[s];
        printf("splitmix64 seed=%" PRIu64 ":", seeds[s]);
        for (int i = 0; i < 4; i++) printf(" %" PRIu64, splitmix64_next());
        printf("\n");
        seed_from(seeds[s]);
        printf("xoshiro256ss seed=%" PRIu64 " state: %" PRIu64 " %" PRIu64 " %" PRIu64 " %" PRIu64 "\n",
               seeds[s], xo_state[0], xo_state[1], xo_state[2], xo_state[3]);
        printf("xoshiro256ss seed=%" PRIu64 " out:", seeds[s]);
        for (int i = 0; i < 8; i++) printf(" %" PRIu64, xoshiro256ss_next());
        printf("\n");
        seed_from(seeds[s]);
        printf("first20 seed=%" PRIu64 ": %" PRIu64 "\n", seeds[s],
               xoshiro256ss_next() % 20ULL);
    }
    return 0;
}
