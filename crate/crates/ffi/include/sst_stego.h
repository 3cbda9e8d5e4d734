#ifndef SST_STEGO_H
#define SST_STEGO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SstCoverModel {
  SST_COVER_MODEL_UNIFORM = 0,
  SST_COVER_MODEL_SMOOTH = 1,
  SST_COVER_MODEL_GRADIENT = 2,
  SST_COVER_MODEL_BIMODAL = 3,
} SstCoverModel;

typedef enum SstPathMode {
  /**
   * Row-major pixels `0..len`.
   */
  SST_PATH_MODE_SEQUENTIAL = 0,
  /**
   * Partial Fisher-Yates shuffle keyed by `SstPath::key`.
   */
  SST_PATH_MODE_KEYED = 1,
} SstPathMode;

/**
 * Result code of every fallible call.
 */
typedef enum SstStatus {
  SST_STATUS_OK = 0,
  SST_STATUS_NULL_POINTER = 1,
  SST_STATUS_INVALID_ARGUMENT = 2,
  SST_STATUS_CONFIG = 3,
  SST_STATUS_IO = 4,
  SST_STATUS_FORMAT = 5,
  SST_STATUS_PANIC = 6,
} SstStatus;

/**
 * Opaque grayscale image handle.
 */
typedef struct SstImage SstImage;

/**
 * Embedding path selector.
 */
typedef struct SstPath {
  enum SstPathMode mode;
  uint64_t key;
} SstPath;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *sst_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sst_version(void);

/**
 * Advances a splitmix64 state in place and returns the next output.
 *
 * # Safety
 * `state` must point to a writable `uint64_t`.
 */
uint64_t sst_splitmix64_next(uint64_t *state);

/**
 * Copies `len == width * height` row-major pixels into a new image.
 *
 * # Safety
 * `pixels` must be readable for `len` bytes; `out` must be writable.
 */
enum SstStatus sst_image_new(size_t width,
                             size_t height,
                             const uint8_t *pixels,
                             size_t len,
                             struct SstImage **out);

/**
 * Synthetic cover image from one of the built-in models.
 *
 * # Safety
 * `out` must be writable.
 */
enum SstStatus sst_image_generate(enum SstCoverModel model,
                                  size_t width,
                                  size_t height,
                                  uint64_t seed,
                                  struct SstImage **out);

/**
 * Parses a binary PGM (P5, maxval 255).
 *
 * # Safety
 * `bytes` must be readable for `len` bytes; `out` must be writable.
 */
enum SstStatus sst_image_read_pgm(const uint8_t *bytes, size_t len, struct SstImage **out);

/**
 * Encodes an image as binary PGM. Free the buffer with [`sst_bytes_free`].
 *
 * # Safety
 * `img` must be a live handle; `out` and `out_len` must be writable.
 */
enum SstStatus sst_image_write_pgm(const struct SstImage *img, uint8_t **out, size_t *out_len);

/**
 * # Safety
 * `img` must be null or a live handle.
 */
size_t sst_image_width(const struct SstImage *img);

/**
 * # Safety
 * `img` must be null or a live handle.
 */
size_t sst_image_height(const struct SstImage *img);

/**
 * Copies the pixels into `dst`, which must hold exactly `width * height`
 * bytes.
 *
 * # Safety
 * `img` must be a live handle; `dst` must be writable for `len` bytes.
 */
enum SstStatus sst_image_copy_pixels(const struct SstImage *img, uint8_t *dst, size_t len);

/**
 * # Safety
 * `img` must be null or a handle not yet freed.
 */
void sst_image_free(struct SstImage *img);

/**
 * # Safety
 * `ptr`/`len` must come from a single buffer handed out by this library.
 */
void sst_bytes_free(uint8_t *ptr, size_t len);

/**
 * Shapes an `n`-bit message with overhead `k` and embeds the winning
 * payload by LSB substitution along `path`.
 *
 * # Safety
 * `cover` must be a live handle; `message` readable for `n` bytes; all out
 * pointers writable (`out_h` and `out_kl` may be null).
 */
enum SstStatus sst_embed(const struct SstImage *cover,
                         const uint8_t *message,
                         size_t n,
                         uint32_t k,
                         uint64_t session_seed,
                         struct SstPath path,
                         struct SstImage **out_stego,
                         uint64_t *out_h,
                         double *out_kl);

/**
 * Recovers an `n`-bit message written by [`sst_embed`] into `out_message`
 * (one byte per bit).
 *
 * # Safety
 * `stego` must be a live handle; `out_message` writable for `n` bytes;
 * `out_h` may be null.
 */
enum SstStatus sst_extract(const struct SstImage *stego,
                           size_t n,
                           uint32_t k,
                           uint64_t session_seed,
                           struct SstPath path,
                           uint8_t *out_message,
                           uint64_t *out_h);

/**
 * Smoothed histogram KL divergence `D(cover || stego)` in bits.
 *
 * # Safety
 * Both handles must be live; `out` writable.
 */
enum SstStatus sst_kl_divergence(const struct SstImage *cover,
                                 const struct SstImage *stego,
                                 double *out);

/**
 * Minimum syndrome-embedding cost over the `2^k` shaped candidates, using
 * the standard 4x8 check matrix and a path keyed by `stc_key`.
 *
 * # Safety
 * `img` must be a live handle; `message` readable for `n` bytes;
 * `out_cost` writable; `out_h` may be null.
 */
enum SstStatus sst_stc_shape_select(const struct SstImage *img,
                                    const uint8_t *message,
                                    size_t n,
                                    uint32_t k,
                                    uint64_t session_seed,
                                    uint64_t stc_key,
                                    double *out_cost,
                                    uint64_t *out_h);

/**
 * Runs an LSB campaign described by key=value text and returns the run
 * records as CSV. Free the buffer with [`sst_bytes_free`].
 *
 * # Safety
 * `config` must be a NUL-terminated string; out pointers writable.
 */
enum SstStatus sst_simulate(const char *config, uint8_t **out_csv, size_t *out_len);

/**
 * Syndrome-cost counterpart of [`sst_simulate`].
 *
 * # Safety
 * As for [`sst_simulate`].
 */
enum SstStatus sst_stc_simulate(const char *config, uint8_t **out_csv, size_t *out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SST_STEGO_H */
