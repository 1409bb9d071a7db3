#ifndef NCTORUS_H
#define NCTORUS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NctStatus {
  NCT_STATUS_OK = 0,
  NCT_STATUS_INVALID_ARGUMENT = 1,
  NCT_STATUS_NULL_POINTER = 2,
  NCT_STATUS_SINGULAR_FLUX = 3,
  NCT_STATUS_COMPUTATION = 4,
  NCT_STATUS_IO = 5,
  NCT_STATUS_BUFFER_TOO_SMALL = 6,
  NCT_STATUS_PANIC = 7,
} NctStatus;

typedef enum NctRepKind {
  /**
   * `m`-dimensional clock/shift pair.
   */
  NCT_REP_KIND_RHO = 0,
  /**
   * `mn`-dimensional pair on functions over the plane.
   */
  NCT_REP_KIND_RHO_TILDE = 1,
} NctRepKind;

typedef enum NctVariant {
  NCT_VARIANT_ENM = 0,
  NCT_VARIANT_R2 = 1,
} NctVariant;

typedef enum NctUnits {
  NCT_UNITS_BAND_WIDTH = 0,
  NCT_UNITS_RAW = 1,
} NctUnits;

typedef enum NctFormat {
  NCT_FORMAT_CSV = 0,
  NCT_FORMAT_JSON = 1,
  NCT_FORMAT_SVG = 2,
} NctFormat;

/**
 * Opaque butterfly dataset.
 */
typedef struct NctDataset NctDataset;

/**
 * Opaque representation pair.
 */
typedef struct NctRep NctRep;

typedef struct NctFluxParams {
  int64_t m;
  int64_t n;
  int64_t d;
  double theta;
  double b;
} NctFluxParams;

typedef struct NctRecord {
  int64_t m;
  int64_t n;
  int64_t d;
  int64_t j;
  int64_t jp;
  double flux;
  double eigenvalue;
} NctRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, empty after a success. Valid
 * until the next call on the same thread.
 */
const char *nct_last_error_message(void);

/**
 * Reduced labels and field strength `2πB = m/(n + mθ)`.
 *
 * # Safety
 * `out` must be a valid pointer to an `NctFluxParams`.
 */
enum NctStatus nct_flux_params(int64_t m, int64_t n, double theta, struct NctFluxParams *out);

/**
 * Builds a representation pair. `phase1, phase2` are `(α₁, α₂)` for `Rho`
 * and `(δ₁, δ₂)` for `RhoTilde`.
 *
 * # Safety
 * `out` must be a valid pointer; the handle written there is owned by the
 * caller and released with `nct_rep_free`.
 */
enum NctStatus nct_rep_new(enum NctRepKind kind,
                           int64_t m,
                           int64_t n,
                           uint32_t mu,
                           double b,
                           double phase1,
                           double phase2,
                           bool normalized,
                           struct NctRep **out);

/**
 * Matrix dimension of the pair, 0 for a null handle.
 *
 * # Safety
 * `rep` must be null or a live handle from `nct_rep_new`.
 */
size_t nct_rep_dim(const struct NctRep *rep);

/**
 * Copies `u1` row-major as interleaved `(re, im)` pairs; `len ≥ 2·dim²`.
 *
 * # Safety
 * `rep` must be a live handle and `out` must hold `len` doubles.
 */
enum NctStatus nct_rep_copy_u1(const struct NctRep *rep, double *out, size_t len);

/**
 * Copies `u2` like `nct_rep_copy_u1`.
 *
 * # Safety
 * `rep` must be a live handle and `out` must hold `len` doubles.
 */
enum NctStatus nct_rep_copy_u2(const struct NctRep *rep, double *out, size_t len);

/**
 * # Safety
 * `rep` must be null or a handle from `nct_rep_new` not yet freed.
 */
void nct_rep_free(struct NctRep *rep);

/**
 * Ascending eigenvalues (`m` of them) of the projected potential. For `Enm`
 * the block is `λ = j/d` with phases `(α₁, α₂)`; for `R2` it is `(j, j')`
 * with phases `(δ₁, δ₂)`.
 *
 * # Safety
 * `out` must hold `len` doubles.
 */
enum NctStatus nct_harper_eigenvalues(enum NctVariant variant,
                                      uint32_t mu,
                                      int64_t m,
                                      int64_t n,
                                      int64_t d,
                                      int64_t j,
                                      int64_t jp,
                                      double phase1,
                                      double phase2,
                                      double b,
                                      enum NctUnits units,
                                      double *out,
                                      size_t len);

/**
 * Coefficients of the Chambers polynomial, ascending powers, `m + 1` values.
 *
 * # Safety
 * `out` must hold `len` doubles.
 */
enum NctStatus nct_chambers_coefficients(int64_t m, int64_t n, double *out, size_t len);

/**
 * Band edges as `2m` values `lo₀, hi₀, lo₁, hi₁, …`.
 *
 * # Safety
 * `out` must hold `len` doubles.
 */
enum NctStatus nct_band_edges(int64_t m, int64_t n, double *out, size_t len);

/**
 * Butterfly dataset for `m ≤ m_max`, `d ≤ d_max`. Phases as in
 * `nct_harper_eigenvalues`.
 *
 * # Safety
 * `out` must be a valid pointer; release the handle with `nct_dataset_free`.
 */
enum NctStatus nct_dataset_new(enum NctVariant variant,
                               uint32_t mu,
                               int64_t m_max,
                               int64_t d_max,
                               double phase1,
                               double phase2,
                               double theta,
                               struct NctDataset **out);

/**
 * Number of records, 0 for a null handle.
 *
 * # Safety
 * `ds` must be null or a live handle.
 */
size_t nct_dataset_len(const struct NctDataset *ds);

/**
 * # Safety
 * `ds` must be a live handle and `out` a valid pointer.
 */
enum NctStatus nct_dataset_record(const struct NctDataset *ds, size_t index, struct NctRecord *out);

/**
 * Writes the dataset to a UTF-8 `path`.
 *
 * # Safety
 * `ds` must be a live handle and `path` a NUL-terminated string.
 */
enum NctStatus nct_dataset_write(const struct NctDataset *ds,
                                 enum NctFormat format,
                                 const char *path);

/**
 * # Safety
 * `ds` must be null or a handle from `nct_dataset_new` not yet freed.
 */
void nct_dataset_free(struct NctDataset *ds);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NCTORUS_H */
