#ifndef PTKV_PTKV_H
#define PTKV_PTKV_H

#include <stddef.h>
#include <stdint.h>

#if defined(PTKV_BUILDING_LIBRARY)
#define PTKV_API __attribute__((visibility("default")))
#else
#define PTKV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every call returns one; details of the most recent failure
   on the calling thread are available from ptkv_last_error(). */
typedef enum ptkv_status {
  PTKV_OK = 0,
  PTKV_E_SYNTAX = 1,
  PTKV_E_THRESHOLD_OUT_OF_RANGE = 2,
  PTKV_E_BAD_RATIONAL = 3,
  PTKV_E_INVALID_MODEL = 4,
  PTKV_E_UNKNOWN_WORLD = 5,
  PTKV_E_UNKNOWN_TERM = 6,
  PTKV_E_UNKNOWN_VALUE = 7,
  PTKV_E_UNKNOWN_AGENT = 8,
  PTKV_E_SIDE_CONDITION = 9,
  PTKV_E_TOO_MANY_VARIABLES = 10,
  PTKV_E_CLOSURE_TOO_LARGE = 11,
  PTKV_E_TOO_FEW_COORDINATES = 12,
  PTKV_E_NOT_IN_CLOSURE = 13,
  PTKV_E_MISSING_SOLUTION = 14,
  PTKV_E_BOUNDS_TOO_LARGE = 15,
  PTKV_E_INVALID_ARGUMENT = 16,
  PTKV_E_INTERNAL = 17
} ptkv_status;

typedef struct ptkv_formula ptkv_formula;
typedef struct ptkv_model ptkv_model;

PTKV_API const char* ptkv_status_name(ptkv_status status);
PTKV_API const char* ptkv_last_error(void);
/* Byte offset of the last syntax error, or -1. */
PTKV_API long ptkv_last_error_position(void);

/* Strings returned through char** are owned by the caller. */
PTKV_API void ptkv_string_free(char* s);

PTKV_API ptkv_status ptkv_formula_parse(const char* text, ptkv_formula** out);
PTKV_API ptkv_status ptkv_formula_print(const ptkv_formula* f, char** out);
PTKV_API ptkv_status ptkv_formula_modal_depth(const ptkv_formula* f, size_t* out);
PTKV_API void ptkv_formula_free(ptkv_formula* f);

/* Parses the model JSON format; does not validate. */
PTKV_API ptkv_status ptkv_model_from_json(const char* json, ptkv_model** out);
PTKV_API ptkv_status ptkv_model_to_json(const ptkv_model* m, char** out);
/* PTKV_E_INVALID_MODEL when violations exist; `report` (optional) receives
   {"ok":bool,"violations":[...]}. Terms of `f` (may be NULL) must have values
   everywhere. */
PTKV_API ptkv_status ptkv_model_validate(const ptkv_model* m, const ptkv_formula* f,
                                         char** report);
PTKV_API void ptkv_model_free(ptkv_model* m);

/* *result = 1 when the formula holds at the named world. */
PTKV_API ptkv_status ptkv_check(const ptkv_model* m, const char* world,
                                const ptkv_formula* f, int* result);

typedef struct ptkv_sat_options {
  const char* k_size;         /* "paper", "plus-one" or a positive integer; NULL = plus-one */
  size_t replicas;            /* 0 = finite quotient */
  size_t closure_cap;         /* 0 = default */
} ptkv_sat_options;

/* Satisfiability via the canonical construction. *sat = 1 and a certificate
   model in the verdict JSON when a surviving type contains the formula. */
PTKV_API ptkv_status ptkv_sat(const ptkv_formula* f, const ptkv_sat_options* opts,
                              int* sat, char** verdict);

/* Closure listing: members, terms, thresholds, type counts, elimination
   summary, and whether the paper and plus-one coordinate counts disagree. */
PTKV_API ptkv_status ptkv_closure_report(const ptkv_formula* f,
                                         const ptkv_sat_options* opts, char** report);

/* Runs the schema soundness suite. `controls` is a comma-separated list of
   negative controls to inject, or NULL. */
PTKV_API ptkv_status ptkv_axioms(uint64_t seed, size_t trials, const char* controls,
                                 size_t* failures, char** report);

/* Bounded exhaustive model search; *found = 1 with the pointed model JSON
   {"model":...,"world":...} in `out`. */
PTKV_API ptkv_status ptkv_brute_force(const ptkv_formula* f, size_t worlds, size_t domain,
                                      size_t denominator, int* found, char** out);

#ifdef __cplusplus
}
#endif

#endif
