#ifndef LWE_PRNG_H
#define LWE_PRNG_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Bytes of seed material accepted by the constructors.
 */
#define LWE_PRNG_SEED_LEN 32

/**
 * Size of one serialized hidden polynomial (256 coefficients, 4 bytes LE).
 */
#define LWE_PRNG_HIDDEN_SEED_LEN 1024

typedef enum LwePrngStatus {
  LWE_PRNG_STATUS_OK = 0,
  LWE_PRNG_STATUS_NULL_POINTER = 1,
  LWE_PRNG_STATUS_INVALID_SEED_LENGTH = 2,
  LWE_PRNG_STATUS_DEGENERATE_STATE = 3,
  LWE_PRNG_STATUS_INVALID_ARGUMENT = 4,
  LWE_PRNG_STATUS_IDENTICAL_SEEDS = 5,
  LWE_PRNG_STATUS_BUFFER_TOO_SMALL = 6,
  LWE_PRNG_STATUS_PANIC = 7,
} LwePrngStatus;

/**
 * Opaque generator handle.
 */
typedef struct LwePrng LwePrng;

/**
 * Result of one simulated BB84 session.
 */
typedef struct LwePrngQkdSummary {
  uint64_t n_photons;
  uint64_t sifted;
  uint64_t errors;
  double sift_fraction;
  double qber;
} LwePrngQkdSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a generator from `seed_len` (= 32) bytes. `reseed_interval` is in
 * output bits; 0 disables reseeding. On success `*out` owns a handle that
 * must be released with `lwe_prng_free`.
 *
 * # Safety
 * `seed` must point to `seed_len` readable bytes and `out` must be writable.
 */
enum LwePrngStatus lwe_prng_new(const uint8_t *seed,
                                size_t seed_len,
                                uint64_t reseed_interval,
                                struct LwePrng **out);

/**
 * Fills `buf[0..len]` with output bytes.
 *
 * # Safety
 * `handle` must come from `lwe_prng_new`/`lwe_prng_fork`; `buf` must point
 * to `len` writable bytes.
 */
enum LwePrngStatus lwe_prng_next_bytes(struct LwePrng *handle, uint8_t *buf, size_t len);

/**
 * New independent generator with the same parameters and reseed interval.
 *
 * # Safety
 * As for `lwe_prng_new`, with `handle` a live handle.
 */
enum LwePrngStatus lwe_prng_fork(const struct LwePrng *handle,
                                 const uint8_t *seed,
                                 size_t seed_len,
                                 struct LwePrng **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `handle` must be null or a live handle not used afterwards.
 */
void lwe_prng_free(struct LwePrng *handle);

/**
 * Number of reseeds so far.
 *
 * # Safety
 * `handle` must be a live handle and `out` writable.
 */
enum LwePrngStatus lwe_prng_generation(const struct LwePrng *handle, uint64_t *out);

/**
 * Total output bits produced by the handle.
 *
 * # Safety
 * `handle` must be a live handle and `out` writable.
 */
enum LwePrngStatus lwe_prng_bits_emitted(const struct LwePrng *handle, uint64_t *out);

/**
 * Writes the designated hidden polynomial for `seed` (1024 bytes, 4 bytes
 * little-endian per coefficient) into `buf`, which must hold at least
 * `LWE_PRNG_HIDDEN_SEED_LEN` bytes.
 *
 * # Safety
 * `seed` must point to `seed_len` bytes and `buf` to `buf_len` writable bytes.
 */
enum LwePrngStatus lwe_prng_hidden_seed_bytes(const uint8_t *seed,
                                              size_t seed_len,
                                              uint8_t *buf,
                                              size_t buf_len);

/**
 * Simulates a BB84 session. `eve_seed` may be null for an undisturbed
 * channel; otherwise an intercept-resend eavesdropper uses it. All seeds
 * are `LWE_PRNG_SEED_LEN` bytes.
 *
 * # Safety
 * Non-null pointers must be valid for the stated sizes.
 */
enum LwePrngStatus lwe_prng_qkd_session(const uint8_t *alice_seed,
                                        const uint8_t *bob_seed,
                                        const uint8_t *eve_seed,
                                        uint64_t n_photons,
                                        struct LwePrngQkdSummary *out);

/**
 * Static, NUL-terminated description of a status code.
 */
const char *lwe_prng_status_message(enum LwePrngStatus status);

/**
 * Library version, NUL-terminated.
 */
const char *lwe_prng_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LWE_PRNG_H */
