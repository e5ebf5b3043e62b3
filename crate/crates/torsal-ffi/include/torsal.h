#ifndef TORSAL_H
#define TORSAL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TorsalStatus {
  TORSAL_STATUS_OK = 0,
  // A verification ran and at least one check failed.
  TORSAL_STATUS_CHECK_FAILED = 1,
  TORSAL_STATUS_INVALID_INPUT = 2,
  TORSAL_STATUS_NULL_POINTER = 3,
  // A caller buffer is too small; the required length is still reported.
  TORSAL_STATUS_BUFFER_TOO_SMALL = 4,
  TORSAL_STATUS_OVERFLOW = 5,
  TORSAL_STATUS_INTERNAL = 6,
} TorsalStatus;

// An arrangement together with its Salvetti model and chamber choices.
typedef struct TorsalModel TorsalModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a model from an arrangement document (JSON).
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum TorsalStatus torsal_model_from_json(const char *json, struct TorsalModel **out);

// Replaces the model's chamber choices with a JSON choice set.
//
// # Safety
// `model` must come from [`torsal_model_from_json`]; `json` must be NUL-terminated.
enum TorsalStatus torsal_model_set_choices(struct TorsalModel *model, const char *json);

// # Safety
// `model` must come from [`torsal_model_from_json`] and not be freed twice. Null is ignored.
void torsal_model_free(struct TorsalModel *model);

// Dimension of the ambient torus, or 0 for a null model.
//
// # Safety
// `model` must be null or come from [`torsal_model_from_json`].
size_t torsal_model_dimension(const struct TorsalModel *model);

// Writes the Betti numbers `b_0..=b_d` of the complement into `out`.
//
// `len` always receives `d + 1`; when `capacity` is smaller nothing is
// written and [`TorsalStatus::BufferTooSmall`] is returned.
//
// # Safety
// `out` must hold `capacity` elements (or be null with `capacity == 0`); `len` must be writable.
enum TorsalStatus torsal_model_betti(const struct TorsalModel *model,
                                     size_t *out,
                                     size_t capacity,
                                     size_t *len);

// The restriction table of the generators as TSV.
//
// # Safety
// `model` must come from [`torsal_model_from_json`]; `out` must be writable.
enum TorsalStatus torsal_model_table_tsv(const struct TorsalModel *model, char **out);

// Runs every verification suite and hands out the report as TSV.
//
// Returns [`TorsalStatus::CheckFailed`] with the report still written when a check fails.
//
// # Safety
// `model` must come from [`torsal_model_from_json`]; `out` must be writable.
enum TorsalStatus torsal_model_verify(const struct TorsalModel *model, char **out);

// # Safety
// `s` must be null or a string handed out by this library, freed once.
void torsal_string_free(char *s);

// Message for the last non-zero status on this thread, or null.
//
// The pointer stays valid until the next call into the library on this thread.
const char *torsal_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORSAL_H */
