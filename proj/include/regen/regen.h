/* C interface to the regenerative-process toolkit.
 *
 * A scenario is parsed from a JSON config, optionally adjusted, then run by
 * one of the command functions. Every function returns a regen_status; on
 * anything but REGEN_OK or a statistical verdict, regen_last_error() holds a
 * message for the calling thread. Strings returned by the library stay valid
 * until the owning scenario is modified or freed.
 */
#ifndef REGEN_REGEN_H
#define REGEN_REGEN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define REGEN_API __declspec(dllexport)
#else
#define REGEN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct regen_scenario regen_scenario;

/* Values double as process exit codes. */
typedef enum regen_status {
    REGEN_OK = 0,
    REGEN_ERR_INTERNAL = 1,
    REGEN_ERR_CONFIG = 2,
    REGEN_STAT_FAIL = 3,
    REGEN_HYPOTHESIS_GATE = 4,
    REGEN_ERR_BUDGET = 5,
    REGEN_ERR_ARGUMENT = 6
} regen_status;

REGEN_API const char* regen_version(void);
REGEN_API const char* regen_last_error(void);

REGEN_API regen_status regen_scenario_from_json(const char* json_text, regen_scenario** out);
REGEN_API regen_status regen_scenario_from_file(const char* path, regen_scenario** out);
REGEN_API void regen_scenario_free(regen_scenario* scenario);

/* Normalised config with every default spelled out. */
REGEN_API const char* regen_scenario_normalized(const regen_scenario* scenario);
REGEN_API size_t regen_scenario_warning_count(const regen_scenario* scenario);
REGEN_API const char* regen_scenario_warning(const regen_scenario* scenario, size_t index);

REGEN_API regen_status regen_scenario_set_seed(regen_scenario* scenario, uint64_t seed);
REGEN_API regen_status regen_scenario_set_replications(regen_scenario* scenario, uint64_t replications);
REGEN_API regen_status regen_scenario_set_output_dir(regen_scenario* scenario, const char* directory);
/* 0 means 1. Results do not depend on the thread count. */
REGEN_API regen_status regen_scenario_set_threads(regen_scenario* scenario, unsigned threads);

REGEN_API regen_status regen_verify_independence(regen_scenario* scenario);
REGEN_API regen_status regen_status_pi(regen_scenario* scenario);
REGEN_API regen_status regen_stationary(regen_scenario* scenario);

/* JSON report of the last command run on this scenario, or "" if none. */
REGEN_API const char* regen_scenario_report(const regen_scenario* scenario);

#ifdef __cplusplus
}
#endif

#endif
