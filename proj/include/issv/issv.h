#ifndef ISSV_ISSV_H
#define ISSV_ISSV_H

/* C interface to the ISS verification library. Handles are opaque; every call that
 * can fail returns an issv_status and leaves a message in issv_last_error() (per thread).
 * Strings returned through char** are owned by the caller and released with issv_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ISSV_API __declspec(dllexport)
#else
#define ISSV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum issv_status {
  ISSV_OK = 0,
  ISSV_ERR_ARGUMENT = 1,
  ISSV_ERR_DOMAIN = 2,
  ISSV_ERR_SHAPE = 3,
  ISSV_ERR_OVERFLOW = 4,
  ISSV_ERR_PARSE = 5,
  ISSV_ERR_EVALUATION = 6,
  ISSV_ERR_BLOWUP = 7,
  ISSV_ERR_SOLVER = 8,
  ISSV_ERR_CONSTRAINT = 9,
  ISSV_ERR_CONFIG = 10,
  ISSV_ERR_IO = 11,
  ISSV_ERR_INTERNAL = 12
} issv_status;

typedef struct issv_scenario issv_scenario;
typedef struct issv_report issv_report;

ISSV_API const char* issv_version(void);
ISSV_API const char* issv_status_name(issv_status status);
/* Message of the last failed call on this thread; "" if none. */
ISSV_API const char* issv_last_error(void);
/* Assumption tag of the last ConstraintError on this thread (e.g. "A2-3"); "" otherwise. */
ISSV_API const char* issv_last_constraint(void);
ISSV_API void issv_string_free(char* s);

ISSV_API issv_status issv_scenario_load(const char* path, issv_scenario** out);
ISSV_API issv_status issv_scenario_parse(const char* json, issv_scenario** out);
ISSV_API issv_status issv_scenario_preset(const char* name, issv_scenario** out);
ISSV_API void issv_scenario_free(issv_scenario* s);
ISSV_API issv_status issv_scenario_json(const issv_scenario* s, char** out);
ISSV_API issv_status issv_scenario_hash(const issv_scenario* s, char** out);
ISSV_API issv_status issv_scenario_name(const issv_scenario* s, char** out);
/* Output paths from the scenario file; either may come back as "". */
ISSV_API issv_status issv_scenario_outputs(const issv_scenario* s, char** csv, char** json);

/* Integrates the PDE and writes "t,x,w" rows for every checkpoint. */
ISSV_API issv_status issv_simulate(const issv_scenario* s, const char* csv_path);
/* Simulate, check structural assumptions, evaluate the bound. A failing bound is not an
 * error: the call returns ISSV_OK and issv_report_pass reports 0. */
ISSV_API issv_status issv_verify(const issv_scenario* s, issv_report** out);

ISSV_API void issv_report_free(issv_report* r);
ISSV_API int issv_report_pass(const issv_report* r);
ISSV_API double issv_report_min_rel_margin(const issv_report* r);
ISSV_API issv_status issv_report_csv(const issv_report* r, char** out);
ISSV_API issv_status issv_report_json(const issv_report* r, char** out);
/* Empty or NULL path skips that file. */
ISSV_API issv_status issv_report_write(const issv_report* r, const char* csv_path, const char* json_path);

ISSV_API issv_status issv_presets_json(char** out);
ISSV_API issv_status issv_property_suites(uint64_t seed, size_t samples, int* pass, char** json);

/* Young spec: "power:2", "log_linear:c1,c2", "log_power:c1,c2,q" or JSON {variant, params}.
 * CSV rows "x,u" on a uniform grid; an optional header line is skipped. */
ISSV_API issv_status issv_orlicz_norm_csv(const char* young_spec, const char* csv_path, double* luxemburg,
                                          double* modular);

#ifdef __cplusplus
}
#endif

#endif
