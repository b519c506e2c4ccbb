#ifndef FAPRES_FAPRES_H
#define FAPRES_FAPRES_H

/* C interface of the fapres library. Every call returns a status; on failure
 * fap_last_error() describes it. Strings returned through char** are owned by
 * the caller and released with fap_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(FAPRES_BUILDING_LIBRARY)
#define FAPRES_API __attribute__((visibility("default")))
#else
#define FAPRES_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fap_status {
  FAP_OK = 0,
  FAP_ERR_INVALID_ARGUMENT = 1,
  FAP_ERR_ALPHABET_MISMATCH = 2,
  FAP_ERR_MALFORMED = 3,
  FAP_ERR_BUDGET = 4,
  FAP_ERR_IO = 5,
  FAP_ERR_VERIFICATION = 6,
  FAP_ERR_INTERNAL = 7,
  FAP_ERR_NOT_FOUND = 8
} fap_status;

typedef enum fap_format { FAP_FORMAT_CSV = 0, FAP_FORMAT_JSON = 1, FAP_FORMAT_DOT = 2 } fap_format;

FAPRES_API const char* fap_version(void);
/* Message of the last failed call on this thread; "" when none. */
FAPRES_API const char* fap_last_error(void);
FAPRES_API const char* fap_status_name(fap_status s);
FAPRES_API void fap_string_free(char* s);

/* ---- orbit of (0,0,1,1) ---- */

typedef struct fap_walker fap_walker;

/* Called for the tuple at `index`, written "a,b,c_exp,d"; rule is the rule
 * of f that produced it, 0 for the origin. */
typedef void (*fap_trace_fn)(void* user, uint64_t index, const char* tuple, int rule);

/* capacity: entries of the tuple -> index map, 0 for the default. */
FAPRES_API fap_status fap_walker_new(uint64_t capacity, fap_walker** out);
FAPRES_API void fap_walker_free(fap_walker* w);
/* Applies f `steps` more times. When the walker is still at the origin the
 * origin itself is reported first. fn may be NULL. */
FAPRES_API fap_status fap_walker_run(fap_walker* w, uint64_t steps, fap_trace_fn fn, void* user);
FAPRES_API uint64_t fap_walker_index(const fap_walker* w);
FAPRES_API int fap_walker_degraded(const fap_walker* w);
FAPRES_API fap_status fap_walker_milestones_json(const fap_walker* w, char** out);

/* Orbit position of "a,b,c_exp,d": decimal, or "T(h)+" beyond bit_budget
 * (0 for the default budget). */
FAPRES_API fap_status fap_orbit_index(const char* tuple, uint64_t bit_budget, char** out);
/* Tuple after `index` (decimal) steps. */
FAPRES_API fap_status fap_orbit_tuple_at(const char* index, char** out);

/* r(n) bounds for n = 0..n_max as a table "n,r,exact,witness".
 * method: "best" (default), "walk" (needs a walker), "enumerate" or
 * "symbolic". walker may be NULL except for "walk". */
FAPRES_API fap_status fap_r_table(size_t n_max, const char* method, const fap_walker* walker, uint64_t bit_budget,
                                  fap_format format, char** out);

/* s(n) of presentation psi relative to psi0 for n = 0..n_max. Names:
 * "unary", "base-<k>", "loose-base-<k>", "tower". strategy: "exhaustive",
 * "value-max", "orbit-assisted", or NULL to pick one. */
FAPRES_API fap_status fap_s_table(const char* psi, const char* psi0, size_t n_max, const char* strategy,
                                  const fap_walker* walker, uint64_t bit_budget, fap_format format, char** out);

/* ---- automata ---- */

/* name: "language", "graph-f", a primitive relation ("increment",
 * "decrement", "double", "halve", "equal", "is_power_of_two", "copy"),
 * "<presentation>:<language|successor|addition|doubling|equality>",
 * "tm-config" or "tm-step" (sample machine). format: JSON or DOT. */
FAPRES_API fap_status fap_dfa_export(const char* name, fap_format format, char** out);

/* ---- verification suites ---- */

typedef struct fap_verify_options {
  uint64_t seed;
  uint64_t walk_budget;
  uint64_t capacity;
  uint64_t bit_budget;
  uint64_t samples;
} fap_verify_options;

FAPRES_API void fap_verify_options_init(fap_verify_options* o);
/* Space-separated suite names. */
FAPRES_API const char* fap_verify_suites(void);
/* report: one "PASS"/"FAIL" line per check. *passed is 1 when all pass. */
FAPRES_API fap_status fap_verify(const char* suite, const fap_verify_options* options, char** report, int* passed);

/* ---- Turing machines ---- */

typedef struct fap_machine fap_machine;

FAPRES_API fap_status fap_machine_sample(fap_machine** out);
FAPRES_API fap_status fap_machine_from_json(const char* json, fap_machine** out);
FAPRES_API void fap_machine_free(fap_machine* m);
FAPRES_API fap_status fap_machine_to_json(const fap_machine* m, char** out);
/* Configurations are space-separated tokens, e.g. "g g q0 1". *halted is
 * set and *out left NULL when no rule applies. */
FAPRES_API fap_status fap_machine_step(const fap_machine* m, const char* config, char** out, int* halted);
/* Compressed form u_k rest of a configuration whose tape starts with x^k.
 * run_symbol NULL means the first non-blank symbol. */
FAPRES_API fap_status fap_machine_encode(const fap_machine* m, const char* config, const char* run_symbol, char** out);
FAPRES_API fap_status fap_machine_decode(const fap_machine* m, const char* compressed, const char* run_symbol,
                                         char** out);

/* ---- groups ---- */

typedef struct fap_group fap_group;

/* "free-abelian:<m>", "free:<m>", "bs:<p>,<q>", "semidirect:<a11>,<a12>,<a21>,<a22>" */
FAPRES_API fap_status fap_group_new(const char* spec, fap_group** out);
FAPRES_API void fap_group_free(fap_group* g);
FAPRES_API fap_status fap_group_name(const fap_group* g, char** out);
FAPRES_API fap_status fap_group_generators(const fap_group* g, char** out);
/* Evaluates a word in the generators and writes the standard and compressed
 * strings of the product. *standard is NULL when it would exceed 10^6 tokens. */
FAPRES_API fap_status fap_group_encode(const fap_group* g, const char* word, char** standard, char** compressed);
/* Reads a standard (compressed = 0) or compressed string and writes the
 * other form. */
FAPRES_API fap_status fap_group_decode(const fap_group* g, const char* text, int compressed, char** out);

#ifdef __cplusplus
}
#endif

#endif
