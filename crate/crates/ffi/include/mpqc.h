#ifndef MPQC_H
#define MPQC_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MpqcStatus {
  MPQC_STATUS_OK = 0,
  MPQC_STATUS_NULL_POINTER = 1,
  MPQC_STATUS_INVALID_ARGUMENT = 2,
  MPQC_STATUS_INVALID_PRECISION = 3,
  MPQC_STATUS_PARSE = 4,
  MPQC_STATUS_INDEX_OUT_OF_RANGE = 5,
  MPQC_STATUS_DIMENSION_MISMATCH = 6,
  MPQC_STATUS_NOT_HERMITIAN = 7,
  MPQC_STATUS_NOT_UNITARY = 8,
  MPQC_STATUS_SINGULAR = 9,
  MPQC_STATUS_NO_CONVERGENCE = 10,
  MPQC_STATUS_INVALID_QUBITS = 11,
  MPQC_STATUS_CORRUPTED_STATE = 12,
  MPQC_STATUS_CIRCUIT = 13,
  MPQC_STATUS_IO = 14,
  MPQC_STATUS_PANIC = 15,
} MpqcStatus;

/**
 * Opaque complex matrix.
 */
typedef struct MpqcMatrix MpqcMatrix;

/**
 * Opaque matrix-product state.
 */
typedef struct MpqcState MpqcState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into a new string, or
 * writes NULL when there is none.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum MpqcStatus mpqc_last_error(char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void mpqc_string_free(char *s);

enum MpqcStatus mpqc_set_default_precision(uint64_t bits);

uint64_t mpqc_default_precision(void);

enum MpqcStatus mpqc_set_output_digits(size_t digits);

/**
 * Creates a `rows × cols` zero matrix. `prec_bits = 0` uses the ambient
 * precision.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum MpqcStatus mpqc_matrix_new(size_t rows,
                                size_t cols,
                                uint64_t prec_bits,
                                struct MpqcMatrix **out);

/**
 * # Safety
 * `m` must be NULL or a matrix handle not yet freed.
 */
void mpqc_matrix_free(struct MpqcMatrix *m);

/**
 * # Safety
 * `m` must be a live matrix handle; `rows` and `cols` valid for writes.
 */
enum MpqcStatus mpqc_matrix_shape(const struct MpqcMatrix *m, size_t *rows, size_t *cols);

/**
 * Sets entry `(i, j)` from decimal strings, rounded to the matrix precision.
 *
 * # Safety
 * `m` must be a live matrix handle; `re` and `im` NUL-terminated strings.
 */
enum MpqcStatus mpqc_matrix_set(struct MpqcMatrix *m,
                                size_t i,
                                size_t j,
                                const char *re,
                                const char *im);

/**
 * Entry `(i, j)` rounded to doubles.
 *
 * # Safety
 * `m` must be a live matrix handle; `re` and `im` valid for writes.
 */
enum MpqcStatus mpqc_matrix_get(const struct MpqcMatrix *m,
                                size_t i,
                                size_t j,
                                double *re,
                                double *im);

/**
 * Entry `(i, j)` as `"(re,im)"` in scientific notation.
 *
 * # Safety
 * `m` must be a live matrix handle; `out` valid for a pointer write.
 */
enum MpqcStatus mpqc_matrix_get_string(const struct MpqcMatrix *m,
                                       size_t i,
                                       size_t j,
                                       size_t digits,
                                       char **out);

/**
 * The whole matrix, one row per line.
 *
 * # Safety
 * `m` must be a live matrix handle; `out` valid for a pointer write.
 */
enum MpqcStatus mpqc_matrix_to_text(const struct MpqcMatrix *m, size_t digits, char **out);

/**
 * A density matrix in `coeff|ket><bra|` notation.
 *
 * # Safety
 * `m` must be a live matrix handle; `out` valid for a pointer write.
 */
enum MpqcStatus mpqc_matrix_format_density(const struct MpqcMatrix *m, size_t digits, char **out);

/**
 * Creates `|0…0⟩` on `n` qubits. `prec_bits = 0` uses the ambient
 * precision, a NULL `trunc` the default threshold `2^(−p/2)`, and
 * `max_bond = 0` no bond cap.
 *
 * # Safety
 * `trunc` must be NULL or a NUL-terminated string; `out` valid for a
 * pointer write.
 */
enum MpqcStatus mpqc_state_new(size_t n,
                               uint64_t prec_bits,
                               const char *trunc,
                               size_t max_bond,
                               struct MpqcState **out);

/**
 * # Safety
 * `s` must be NULL or a state handle not yet freed.
 */
void mpqc_state_free(struct MpqcState *s);

/**
 * Applies a `2^k × 2^k` unitary to `k` target qubits; the first target is
 * the most significant bit of the matrix index.
 *
 * # Safety
 * `s` and `u` must be live handles; `targets` must point to `count` values.
 */
enum MpqcStatus mpqc_state_apply(struct MpqcState *s,
                                 const struct MpqcMatrix *u,
                                 const size_t *targets,
                                 size_t count);

/**
 * Applies a named gate: H, X, Y, Z, S, T, CNOT, CZ, SWAP or TOFFOLI.
 *
 * # Safety
 * `s` must be a live handle; `name` a NUL-terminated string; `targets`
 * must point to `count` values.
 */
enum MpqcStatus mpqc_state_apply_named(struct MpqcState *s,
                                       const char *name,
                                       const size_t *targets,
                                       size_t count);

/**
 * Reduced density matrix of the strictly increasing qubit list.
 *
 * # Safety
 * `s` must be a live handle; `qubits` must point to `count` values; `out`
 * valid for a pointer write.
 */
enum MpqcStatus mpqc_state_rdo(const struct MpqcState *s,
                               const size_t *qubits,
                               size_t count,
                               struct MpqcMatrix **out);

/**
 * Reduced density matrix of qubits `a..=b`.
 *
 * # Safety
 * `s` must be a live handle; `out` valid for a pointer write.
 */
enum MpqcStatus mpqc_state_rdo_block(const struct MpqcState *s,
                                     size_t a,
                                     size_t b,
                                     struct MpqcMatrix **out);

/**
 * # Safety
 * `s` must be a live handle; `out` valid for a write.
 */
enum MpqcStatus mpqc_state_max_bond_dimension(const struct MpqcState *s, size_t *out);

/**
 * Runs a circuit description and returns everything its queries print.
 * `prec_bits = 0` and a NULL `trunc` defer to the file's directives.
 *
 * # Safety
 * `text` must be a NUL-terminated string, `trunc` NULL or one; `out`
 * valid for a pointer write.
 */
enum MpqcStatus mpqc_run_circuit(const char *text,
                                 uint64_t prec_bits,
                                 const char *trunc,
                                 size_t digits,
                                 char **out);

/**
 * Simulates the two-spin FID and writes the magnitude spectrum as gnuplot
 * data to `path`. Frequencies are in Hz and temperature in kelvin, all
 * given as decimal strings. A NULL `dt_factor` means 0.145 and
 * `samples = 0` derives the record length from the J coupling.
 *
 * # Safety
 * All string arguments must be NUL-terminated (`dt_factor` may be NULL);
 * `bins` must be NULL or valid for a write.
 */
enum MpqcStatus mpqc_nmr_write_spectrum(const char *w1,
                                        const char *w2,
                                        const char *j12,
                                        const char *temperature,
                                        const char *dt_factor,
                                        size_t samples,
                                        uint64_t prec_bits,
                                        size_t digits,
                                        const char *path,
                                        size_t *bins);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MPQC_H */
