#ifndef SYMQM_H
#define SYMQM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum SymqmStatus {
  SYMQM_STATUS_OK = 0,
  SYMQM_STATUS_NULL_POINTER = 1,
  SYMQM_STATUS_INVALID_ARGUMENT = 2,
  SYMQM_STATUS_BUFFER_TOO_SMALL = 3,
  SYMQM_STATUS_SINGULAR_GRAM = 4,
  SYMQM_STATUS_NOT_A_ROOT = 5,
  SYMQM_STATUS_CACHE_MISMATCH = 6,
  SYMQM_STATUS_INTERNAL = 7,
  SYMQM_STATUS_PANIC = 8,
} SymqmStatus;

/**
 * Opaque solver for one `(N, N_cut)`.
 */
typedef struct SymqmSolver SymqmSolver;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the basis, Gram matrix and Hamiltonian. `cache_dir` may be null; `SYMQM_CACHE` overrides it.
 *
 * # Safety
 * `cache_dir` must be null or a NUL-terminated string; `out` must be writable.
 */
enum SymqmStatus symqm_solver_new(uint32_t n,
                                  uint32_t ncut,
                                  const char *cache_dir,
                                  struct SymqmSolver **out);

/**
 * Releases a solver; null is ignored.
 *
 * # Safety
 * `solver` must come from [`symqm_solver_new`] and not be used afterwards.
 */
void symqm_solver_free(struct SymqmSolver *solver);

/**
 * Dimension of the cut basis.
 *
 * # Safety
 * `solver` must be a live handle and `dim` writable.
 */
enum SymqmStatus symqm_solver_dim(const struct SymqmSolver *solver, size_t *dim);

/**
 * Eigenvalues of the cut Hamiltonian, ascending.
 *
 * # Safety
 * See [`symqm_solver_dim`]; `out` must hold `cap` doubles.
 */
enum SymqmStatus symqm_spectrum_numeric(const struct SymqmSolver *solver,
                                        double *out,
                                        size_t cap,
                                        size_t *len);

/**
 * Zeros of the bosonic Laguerre quantization conditions, `E = x/2`, ascending.
 *
 * # Safety
 * `out` must hold `cap` doubles and `len` be writable.
 */
enum SymqmStatus symqm_spectrum_closed(uint32_t n,
                                       uint32_t ncut,
                                       double *out,
                                       size_t cap,
                                       size_t *len);

/**
 * Closed-form state of the bosonic family with tail `tail[..tail_len]` at its `root_index`-th zero:
 * its energy, and its residual in the cut eigenproblem.
 *
 * # Safety
 * `tail` must hold `tail_len` values (may be null when 0); `energy` and `residual` must be writable.
 */
enum SymqmStatus symqm_family_state(const struct SymqmSolver *solver,
                                    const uint32_t *tail,
                                    size_t tail_len,
                                    size_t root_index,
                                    double *energy,
                                    double *residual);

/**
 * Copies the last error of this thread into `buf` (NUL-terminated, truncated to `cap`).
 * Returns the full message length without the terminator.
 *
 * # Safety
 * `buf` must be null or hold `cap` bytes.
 */
size_t symqm_last_error(char *buf, size_t cap);

/**
 * Library version as a static NUL-terminated string.
 */
const char *symqm_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMQM_H */
