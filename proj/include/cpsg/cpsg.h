#ifndef CPSG_CPSG_H
#define CPSG_CPSG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes returned by every fallible call. */
enum {
  CPSG_OK = 0,
  CPSG_INVALID_ARGUMENT = 1,
  CPSG_DIMENSION_MISMATCH = 2,
  CPSG_DEGENERATE_MODULUS = 3,
  CPSG_BRANCH_POINT = 4,
  CPSG_NON_GENERIC = 5,
  CPSG_SINGULAR = 6,
  CPSG_BRANCH_CUT = 7,
  CPSG_NOT_MONOMIAL = 8,
  CPSG_CAP_EXCEEDED = 9,
  CPSG_SEARCH_FAILED = 10,
  CPSG_UNKNOWN_COMMAND = 11,
  CPSG_INVALID_CONFIG = 12,
  CPSG_INTERNAL = 13
};

typedef struct cpsg_complex {
  double re;
  double im;
} cpsg_complex;

typedef struct cpsg_context cpsg_context;
typedef struct cpsg_point cpsg_point;
typedef struct cpsg_report cpsg_report;

const char* cpsg_version(void);
const char* cpsg_status_name(int status);
/* Message of the last failed call on this thread; empty if none. */
const char* cpsg_last_error(void);

int cpsg_context_create(int N, cpsg_context** out);
void cpsg_context_destroy(cpsg_context* ctx);
int cpsg_context_q0(const cpsg_context* ctx, cpsg_complex* out);

/* Draws `count` points on the curve of modulus k; points are written to out[0..count). */
int cpsg_points_sample(const cpsg_context* ctx, cpsg_complex k, int count, uint64_t seed,
                       cpsg_point** out);
int cpsg_point_create(const cpsg_context* ctx, cpsg_complex k, cpsg_complex x, cpsg_complex y,
                      cpsg_complex s, cpsg_point** out);
void cpsg_point_destroy(cpsg_point* p);
int cpsg_point_coords(const cpsg_point* p, cpsg_complex* x, cpsg_complex* y, cpsg_complex* s,
                      cpsg_complex* t);
int cpsg_point_residual(const cpsg_context* ctx, const cpsg_point* p, double* out);

int cpsg_weight(const cpsg_context* ctx, const cpsg_point* p, const cpsg_point* q, int n,
                cpsg_complex* w, cpsg_complex* wbar);
int cpsg_star_triangle(const cpsg_context* ctx, const cpsg_point* p, const cpsg_point* q,
                       const cpsg_point* r, double* residual, cpsg_complex* R_pqr);
int cpsg_partition(const cpsg_context* ctx, const cpsg_point* p, const cpsg_point* q, int L, int M,
                   cpsg_complex* out);

int cpsg_dilog(cpsg_complex z, cpsg_complex* out);
int cpsg_rbar(const cpsg_context* ctx, cpsg_complex lambda, cpsg_complex x, cpsg_complex* out);
int cpsg_twelve_term(double lambda, double mu, double x, double y, double* out);
int cpsg_evolve(cpsg_complex lambda, cpsg_complex* state, size_t size, int steps);

size_t cpsg_command_count(void);
const char* cpsg_command_name(size_t index);
/* Runs a named command with a JSON configuration (NULL or "" for defaults). */
int cpsg_run(const char* command, const char* config_json, cpsg_report** out);
const char* cpsg_report_text(const cpsg_report* report);
int cpsg_report_passed(const cpsg_report* report);
void cpsg_report_destroy(cpsg_report* report);

#ifdef __cplusplus
}
#endif

#endif
