#ifndef LIESYM_H
#define LIESYM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LIESYM_API __declspec(dllexport)
#else
#define LIESYM_API __attribute__((visibility("default")))
#endif

typedef enum liesym_status {
    LIESYM_OK = 0,
    LIESYM_E_NULL = 1,        /* a required pointer was null */
    LIESYM_E_INVALID = 2,     /* bad argument value or inconsistent parameters */
    LIESYM_E_PARSE = 3,
    LIESYM_E_INDEX = 4,       /* dimension or index out of range */
    LIESYM_E_DOMAIN = 5,      /* outside a flow or function domain */
    LIESYM_E_EVALUATION = 6,  /* numeric singularity */
    LIESYM_E_INTERNAL = 7
} liesym_status;

typedef struct liesym_expr liesym_expr;
typedef struct liesym_system liesym_system;

/* Message for the last failing call on this thread; never null. */
LIESYM_API const char* liesym_last_error(void);
LIESYM_API const char* liesym_status_name(liesym_status s);
LIESYM_API const char* liesym_version(void);
/* Frees strings returned through char** outputs. */
LIESYM_API void liesym_string_free(char* s);

/* Argument validation, for front ends that report the offending flag. */
LIESYM_API liesym_status liesym_check_manifold(const char* manifold);
LIESYM_API liesym_status liesym_check_case(const char* case_name);
LIESYM_API liesym_status liesym_check_rational(const char* value);
LIESYM_API liesym_status liesym_check_dimension(int n);
LIESYM_API liesym_status liesym_check_case_params(const char* case_name, const char* r, const char* q);

/* Expressions in dimension n. */
LIESYM_API liesym_status liesym_expr_parse(const char* text, int n, liesym_expr** out);
LIESYM_API void liesym_expr_free(liesym_expr* e);
LIESYM_API liesym_status liesym_expr_to_string(const liesym_expr* e, char** out);
LIESYM_API liesym_status liesym_expr_is_zero(const liesym_expr* e, int* out);
/* Canonical equality of a and b. */
LIESYM_API liesym_status liesym_expr_equal(const liesym_expr* a, const liesym_expr* b, int* out);
LIESYM_API liesym_status liesym_expr_partial(const liesym_expr* e, const char* symbol, liesym_expr** out);

/* Determining systems with symbolic r and q. */
LIESYM_API liesym_status liesym_determine(const char* manifold, int n, const char* case_name, liesym_system** out);
LIESYM_API void liesym_system_free(liesym_system* s);
LIESYM_API liesym_status liesym_system_size(const liesym_system* s, size_t* out);
LIESYM_API liesym_status liesym_system_equation(const liesym_system* s, size_t i, char** out);
/* Whether the normalized equation "text = 0" belongs to the system. */
LIESYM_API liesym_status liesym_system_contains(const liesym_system* s, const char* text, int* out);
LIESYM_API liesym_status liesym_system_to_json(const liesym_system* s, char** out);

/* Pipelines returning JSON documents. Rationals are "p/q" or integer strings.
   pass may be null. */
LIESYM_API liesym_status liesym_run_determine(const char* manifold, int n, const char* case_name, char** json);
LIESYM_API liesym_status liesym_run_catalog(const char* manifold, int n, const char* case_name, const char* r,
                                            const char* q, char** json);
LIESYM_API liesym_status liesym_run_verify(const char* manifold, int n, const char* case_name, const char* r,
                                           const char* q, int points, uint64_t seed, double tol, char** json,
                                           int* pass);
LIESYM_API liesym_status liesym_run_torsion_check(const char* variant, int n, const char* lam0, int random,
                                                  uint64_t seed, double tol, char** json, int* pass);
/* xi holds n expressions; r and q may be null for symbolic exponents. */
LIESYM_API liesym_status liesym_run_prolong(const char* manifold, int n, const char* const* xi, const char* eta,
                                            const char* phi, const char* r, const char* q, char** json);
LIESYM_API liesym_status liesym_run_reduce(const char* m, const char* p, char** json);

#ifdef __cplusplus
}
#endif

#endif
