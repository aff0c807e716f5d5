/* C API for the phase-group classification library.
 *
 * All functions return a pg_status code; every output object is an opaque
 * handle released with the matching *_free function. Strings returned through
 * char** are heap-allocated and released with pg_string_free. Handles are
 * immutable after creation and safe to share across threads.
 */

#ifndef PHASEGROUP_H
#define PHASEGROUP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pg_status {
    PG_OK = 0,
    PG_ERR_PARSE = 3,       /* malformed JSON or schema violation */
    PG_ERR_INTEGRATION = 4, /* monodromy integration failure */
    PG_ERR_SPACE = 5,       /* generator sets live on different spaces */
    PG_ERR_INVALID = 6,     /* invalid arguments or internal failure */
} pg_status;

typedef enum pg_verdict_code {
    PG_EQUIVALENT = 0,
    PG_NOT_EQUIVALENT = 1,
    PG_INCONCLUSIVE = 2,
} pg_verdict_code;

typedef struct pg_input pg_input;         /* parsed system spec or generator set */
typedef struct pg_generators pg_generators;
typedef struct pg_verdict pg_verdict;

const char* pg_version(void);

/* Parse a JSON document of kind "generators", "fuchsian_linear" or
 * "fuchsian_riccati". On failure *err receives a message. */
pg_status pg_input_parse(const char* json, pg_input** out, char** err);
void pg_input_free(pg_input* input);

/* Resolve an input to its phase group, integrating monodromy for system
 * specs. tol_overrides is a comma-separated key=value list or NULL. */
pg_status pg_input_phase_group(const pg_input* input, const char* tol_overrides,
                               pg_generators** out, char** err);
void pg_generators_free(pg_generators* gens);

pg_status pg_generators_to_json(const pg_generators* gens, char** json_out);

/* relation: "equivalence", "embedding" or "covering".
 * category: "top", "smooth", "rholo" or "holo". */
pg_status pg_relate(const pg_generators* a, const pg_generators* b, const char* relation,
                    const char* category, const char* tol_overrides, int allow_inversion,
                    pg_verdict** out, char** err);
void pg_verdict_free(pg_verdict* verdict);

pg_status pg_verdict_code_of(const pg_verdict* verdict, int* code);
pg_status pg_verdict_to_json(const pg_verdict* verdict, char** json_out);

/* Evaluate a serialized witness against two generator sets; *max_residual
 * receives the chart-normalized conjugacy residual over the sample set. */
pg_status pg_verify_witness(const char* witness_json, const pg_generators* a,
                            const pg_generators* b, const char* tol_overrides,
                            char** report_json, double* max_residual, char** err);

void pg_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* PHASEGROUP_H */
