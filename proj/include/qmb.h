/* C interface to the quantum matrix ball library: exact normal-form
 * arithmetic in the q-deformed coordinate *-algebra of 2x2 matrices,
 * truncated representations of its six irreducible series, orbit data for
 * the underlying Z^3 dynamical system, and the verification harness.
 *
 * All objects are opaque handles; every function that can fail returns a
 * qmb_status and leaves a human-readable message in qmb_last_error()
 * (thread-local). Strings returned through char** are heap-allocated and
 * must be released with qmb_string_free().
 */
#ifndef QMB_H
#define QMB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qmb_status {
    QMB_OK = 0,
    QMB_ERROR_PARSE = 1,   /* malformed word / unknown token */
    QMB_ERROR_INVALID = 2, /* bad argument or configuration */
    QMB_ERROR_INTERNAL = 3
} qmb_status;

typedef struct qmb_poly qmb_poly; /* normal-form algebra element */
typedef struct qmb_rep qmb_rep;   /* truncated representation */

/* Message for the most recent failure on this thread; never NULL. */
const char* qmb_last_error(void);
void qmb_string_free(char* s);

/* --- algebra ------------------------------------------------------------ */

/* Parse a whitespace-separated word (tokens z11|z21|z12|z22, optional `*`
 * suffix; empty text is the unit) and reduce it to normal form. */
qmb_status qmb_poly_parse(const char* text, qmb_poly** out);

qmb_status qmb_poly_star(const qmb_poly* p, qmb_poly** out);
qmb_status qmb_poly_multiply(const qmb_poly* a, const qmb_poly* b, qmb_poly** out);

/* 1 if equal as algebra elements, 0 otherwise (-1 on NULL input). */
int qmb_poly_equal(const qmb_poly* a, const qmb_poly* b);
int qmb_poly_is_zero(const qmb_poly* p);

/* "coeff * monomial" terms joined by " + "; coefficients are exact Laurent
 * polynomials in q. qmb_poly_format_at evaluates them at a numeric q. */
qmb_status qmb_poly_format(const qmb_poly* p, char** out);
qmb_status qmb_poly_format_at(const qmb_poly* p, double q, char** out);

void qmb_poly_free(qmb_poly* p);

/* --- representations ---------------------------------------------------- */

/* series: one-dim | pi | rho12 | rho1 | rho2 | hat-rho | rho-full.
 * n_phases must match the series (2,1,2,1,1,1,0 respectively). */
qmb_status qmb_rep_build(const char* series, const double* phases, size_t n_phases,
                         double q, int cutoff, qmb_rep** out);

/* Spec, lattice and triplet lists as JSON. indent < 0 gives compact output. */
qmb_status qmb_rep_to_json(const qmb_rep* rep, int indent, char** out);

void qmb_rep_free(qmb_rep* rep);

/* Default cutoff for a series (by lattice rank), raised so the given margin
 * leaves at least one interior vector. Returns -1 for an unknown series. */
int qmb_default_cutoff(const char* series, int margin);

/* --- dynamical system ---------------------------------------------------- */

/* base: one of "0,0,1", "1,1,0", "1,0,0", "0,1,0", "0,0,0". Emits
 * {base, q, points: [{m,l,k, x:[...]}]} over the inclusive exponent box. */
qmb_status qmb_orbit_patch_json(const char* base, long m_lo, long m_hi, long l_lo, long l_hi,
                                long k_lo, long k_hi, double q, int indent, char** out);

/* --- verification -------------------------------------------------------- */

/* Run the full per-representation verification and return the JSON report.
 * cutoff <= 0 selects the series default for the margin. all_pass (may be
 * NULL) receives 1 when every check passed. */
qmb_status qmb_verify_json(const char* series, const double* phases, size_t n_phases,
                           double q, int cutoff, int margin, int indent, char** json_out,
                           int* all_pass);

#ifdef __cplusplus
}
#endif

#endif /* QMB_H */
