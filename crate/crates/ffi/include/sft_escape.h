#ifndef SFT_ESCAPE_H
#define SFT_ESCAPE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SftOrdering {
  /**
   * `ρ1 < ρ2`.
   */
  SFT_ORDERING_LESS = -1,
  SFT_ORDERING_TIE = 0,
  /**
   * `ρ1 > ρ2`.
   */
  SFT_ORDERING_GREATER = 1,
} SftOrdering;

/**
 * Result codes. Domain errors keep the library's error names.
 */
typedef enum SftStatus {
  SFT_STATUS_OK = 0,
  SFT_STATUS_NULL_POINTER = 1,
  SFT_STATUS_INVALID_UTF8 = 2,
  SFT_STATUS_PANIC = 3,
  SFT_STATUS_INSUFFICIENT_ALPHABET = 10,
  SFT_STATUS_BAD_CHARACTER = 11,
  SFT_STATUS_EMPTY_WORD = 12,
  SFT_STATUS_INVALID_ALPHABET = 13,
  SFT_STATUS_DUPLICATE_WORD = 14,
  SFT_STATUS_NOT_REDUCED = 15,
  SFT_STATUS_SINGULAR_CORRELATION_MATRIX = 16,
  SFT_STATUS_DIVISION_BY_ZERO = 17,
  SFT_STATUS_NON_EXPANDABLE = 18,
  SFT_STATUS_CAP_EXCEEDED = 19,
  SFT_STATUS_NON_CONVERGENCE = 20,
  SFT_STATUS_NO_REAL_ROOT_FOUND = 21,
  SFT_STATUS_EMPTY_SUBSHIFT = 22,
  SFT_STATUS_EMPTY_SURVIVOR_SET = 23,
  SFT_STATUS_INVALID_HOLE = 24,
  SFT_STATUS_NOT_IRREDUCIBLE = 25,
  SFT_STATUS_NOT_ALLOWED_WORD = 26,
  SFT_STATUS_INVALID_ARGUMENT = 27,
} SftStatus;

/**
 * Word spelling of the string arguments.
 */
typedef enum SftWordMode {
  /**
   * Letters named by first occurrence, `a`, `b`, ...
   */
  SFT_WORD_MODE_ABSTRACT = 0,
  /**
   * Symbols written as `0-9a-z`.
   */
  SFT_WORD_MODE_DIGIT = 1,
} SftWordMode;

/**
 * Opaque hole: alphabet size, base forbidden words and hole words.
 */
typedef struct SftHole SftHole;

/**
 * Escape rate with its bracket and the two Perron roots.
 */
typedef struct SftEscapeRate {
  double rho;
  double rho_lo;
  double rho_hi;
  double lambda;
  double theta;
} SftEscapeRate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static nul-terminated string.
 */
const char *sft_version(void);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *sft_last_error_message(void);

/**
 * Static name of a status code, or null for an unknown code.
 */
const char *sft_status_name(int32_t status);

/**
 * Frees a string returned by this library. Null is ignored.
 */
void sft_string_free(char *s);

/**
 * Builds a hole from comma-separated word lists. `base` may be null for
 * the full shift. Base and hole share one letter map in abstract mode.
 */
enum SftStatus sft_hole_new(uint32_t q,
                            const char *hole,
                            const char *base,
                            uint32_t mode,
                            struct SftHole **out);

/**
 * Releases a hole. Null is ignored.
 */
void sft_hole_free(struct SftHole *h);

enum SftStatus sft_escape_rate(const struct SftHole *h, struct SftEscapeRate *out);

/**
 * Full escape-rate result as JSON, including the exact brackets.
 */
enum SftStatus sft_escape_rate_json(const struct SftHole *h, char **out);

/**
 * Certified comparison of `ρ(h1)` with `ρ(h2)`. Both holes must live on the
 * same alphabet and base.
 */
enum SftStatus sft_compare(const struct SftHole *h1,
                           const struct SftHole *h2,
                           enum SftOrdering *ordering,
                           bool *certified);

/**
 * Number of words of length `n` allowed in the survivor subshift, as a
 * decimal string.
 */
enum SftStatus sft_count_words(const struct SftHole *h, size_t n, char **out);

/**
 * Topological entropy of the subshift avoiding `forbidden` (null for the
 * full shift).
 */
enum SftStatus sft_entropy(uint32_t q, const char *forbidden, uint32_t mode, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SFT_ESCAPE_H */
