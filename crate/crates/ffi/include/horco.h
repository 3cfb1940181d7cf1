#ifndef HORCO_H
#define HORCO_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HorcoCriterion {
  HORCO_CRITERION_RPO = 0,
  HORCO_CRITERION_RCO = 1,
  HORCO_CRITERION_HORPO = 2,
  HORCO_CRITERION_HORCO = 3,
} HorcoCriterion;

typedef enum HorcoFormat {
  HORCO_FORMAT_TEXT = 0,
  HORCO_FORMAT_JSON = 1,
} HorcoFormat;

typedef enum HorcoStatus {
  HORCO_STATUS_OK = 0,
  HORCO_STATUS_NULL_ARGUMENT = 1,
  HORCO_STATUS_INVALID_UTF8 = 2,
  HORCO_STATUS_PARSE = 3,
  HORCO_STATUS_INVALID_BUDGET = 4,
  HORCO_STATUS_CHECK = 5,
  HORCO_STATUS_OUT_OF_RANGE = 6,
  HORCO_STATUS_PANIC = 7,
} HorcoStatus;

/**
 * The outcome of checking a system, with both renderings.
 */
typedef struct HorcoReport HorcoReport;

/**
 * A parsed rewrite system.
 */
typedef struct HorcoSystem HorcoSystem;

typedef struct HorcoBudget {
  uint32_t max_search_depth;
  uint32_t max_red_steps;
  uint32_t max_term_size_slack;
} HorcoBudget;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The budgets used when a null budget pointer is passed.
 */
struct HorcoBudget horco_default_budget(void);

/**
 * Message of the last failed call on this thread, or null. The string stays
 * valid until the next call into this library on the same thread.
 */
const char *horco_last_error(void);

/**
 * Parses a system in the text format.
 *
 * # Safety
 * `source` must be a nul-terminated string and `out` a valid pointer.
 */
enum HorcoStatus horco_system_parse(const char *source, struct HorcoSystem **out);

/**
 * # Safety
 * `system` must come from [`horco_system_parse`] and not be used afterwards.
 */
void horco_system_free(struct HorcoSystem *system);

/**
 * Number of rules in `system`, or 0 for a null handle.
 *
 * # Safety
 * `system` must be null or a live handle.
 */
size_t horco_system_rule_count(const struct HorcoSystem *system);

/**
 * Orients every rule of `system`. A null `budget` means the defaults.
 *
 * # Safety
 * `system` must be a live handle, `budget` null or valid, `out` valid.
 */
enum HorcoStatus horco_check(const struct HorcoSystem *system,
                             enum HorcoCriterion criterion,
                             const struct HorcoBudget *budget,
                             bool search_precedence,
                             struct HorcoReport **out);

/**
 * # Safety
 * `report` must come from [`horco_check`] and not be used afterwards.
 */
void horco_report_free(struct HorcoReport *report);

/**
 * # Safety
 * `report` must be null or a live handle.
 */
size_t horco_report_oriented(const struct HorcoReport *report);

/**
 * # Safety
 * `report` must be null or a live handle.
 */
size_t horco_report_total(const struct HorcoReport *report);

/**
 * 0 when every rule is oriented, 1 otherwise, 2 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
int32_t horco_report_exit_code(const struct HorcoReport *report);

/**
 * Whether rule `index` (0-based) was oriented.
 *
 * # Safety
 * `report` must be a live handle and `oriented` valid.
 */
enum HorcoStatus horco_report_rule_oriented(const struct HorcoReport *report,
                                            size_t index,
                                            bool *oriented);

/**
 * The rendered report. Owned by `report`; valid until it is freed.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
const char *horco_report_render(const struct HorcoReport *report, enum HorcoFormat format);

/**
 * Decides `left > right` under `criterion`; `chain` bounds the number of
 * horco steps and is ignored by the other criteria.
 *
 * # Safety
 * `system` must be a live handle, `left` and `right` nul-terminated,
 * `budget` null or valid, `greater` valid.
 */
enum HorcoStatus horco_compare(const struct HorcoSystem *system,
                               enum HorcoCriterion criterion,
                               const char *left,
                               const char *right,
                               const struct HorcoBudget *budget,
                               uint32_t chain,
                               bool *greater);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HORCO_H */
