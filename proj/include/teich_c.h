#ifndef TEICH_C_H
#define TEICH_C_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct teich_template teich_template;
typedef struct teich_surface teich_surface;

typedef enum {
  TEICH_OK = 0,
  TEICH_E_PARSE,
  TEICH_E_STRUCTURE,
  TEICH_E_LOOKUP,
  TEICH_E_USAGE,
  TEICH_E_NUMERIC,
  TEICH_E_DOMAIN,
  TEICH_E_NON_HYPERBOLIC,
  TEICH_E_NON_CAUCHY,
  TEICH_E_INCONSISTENT,
  TEICH_E_INVARIANT, /* a computed result broke a checked contract */
  TEICH_E_INTERNAL
} teich_status;

/* Message of the last failure on this thread; empty after success. */
const char* teich_last_error(void);
const char* teich_status_name(teich_status s);

/* name: flute, ladder, binary-tree, genus2 */
teich_status teich_template_builtin(const char* name, teich_template** out);
teich_status teich_template_from_json(const char* text, teich_template** out);
void teich_template_free(teich_template* t);

teich_status teich_surface_from_json(const teich_template* t, const char* text,
                                     teich_surface** out);
void teich_surface_free(teich_surface* s);

/* Strings handed out by the library are released with teich_string_free. */
void teich_string_free(char* s);

teich_status teich_surface_to_json(const teich_surface* s, char** out);

/* Shiga scan over the first shiga_n curves plus the holonomy checks of the
   window (center, radius). TEICH_E_INVARIANT when a boundary trace misses
   2cosh(l/2) by more than 1e-9 (relative); the report is written either way. */
teich_status teich_surface_validate(const teich_surface* s, uint64_t shiga_n, uint64_t center,
                                    int radius, char** report_json);

teich_status teich_fn_distance(const teich_surface* a, const teich_surface* b, uint64_t first,
                               uint64_t last, double* out);

/* fn_distance, ls_lower with witness, ls_upper when b is a pure twist of a,
   and qc_lower. format: "json" or "csv". */
teich_status teich_metric_report(const teich_surface* a, const teich_surface* b, uint64_t center,
                                 int radius, int max_chain, int max_wind, int jobs,
                                 const char* format, char** out);

/* name: prop41, prop42, ex51, ex52, complete (or complete:GENERATOR). */
teich_status teich_scenario_run(const char* name, int n_max, const char* format, char** out);

teich_status teich_collar_width(double length, double* out);

#ifdef __cplusplus
}
#endif

#endif
