#include "cpsg/cpsg.h"

#include <new>
#include <string>

#include "cpsg/classical_dsg.hpp"
#include "cpsg/curve.hpp"
#include "cpsg/error.hpp"
#include "cpsg/runner.hpp"
#include "cpsg/semiclassical.hpp"
#include "cpsg/transfer.hpp"
#include "cpsg/weights.hpp"

struct cpsg_context {
  cpsg::RootContext ctx;
};

struct cpsg_point {
  cpsg::CurvePoint p;
};

struct cpsg_report {
  std::string text;
  bool passed;
};

namespace {

thread_local std::string last_error;

cpsg::cplx from_c(cpsg_complex z) { return {z.re, z.im}; }
cpsg_complex to_c(cpsg::cplx z) { return {z.real(), z.imag()}; }

// Runs `body`, translating exceptions into status codes and the thread-local message.
template <class F>
int guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return CPSG_OK;
  } catch (const cpsg::Error& e) {
    last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CPSG_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CPSG_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return CPSG_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) cpsg::fail(cpsg::ErrorCode::kInvalidArgument, what);
}

}  // namespace

extern "C" {

const char* cpsg_version(void) { return "0.1.0"; }

const char* cpsg_status_name(int status) {
  if (status < CPSG_OK || status > CPSG_INTERNAL) return "unknown";
  return cpsg::error_code_name(static_cast<cpsg::ErrorCode>(status));
}

const char* cpsg_last_error(void) { return last_error.c_str(); }

int cpsg_context_create(int N, cpsg_context** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = new cpsg_context{cpsg::make_root_context(N)};
  });
}

void cpsg_context_destroy(cpsg_context* ctx) { delete ctx; }

int cpsg_context_q0(const cpsg_context* ctx, cpsg_complex* out) {
  return guarded([&] {
    require(ctx && out, "null argument");
    *out = to_c(ctx->ctx.q0());
  });
}

int cpsg_points_sample(const cpsg_context* ctx, cpsg_complex k, int count, uint64_t seed,
                       cpsg_point** out) {
  return guarded([&] {
    require(ctx && out && count > 0, "invalid argument");
    const auto pts = cpsg::sample_points(cpsg::make_modulus(from_c(k)), count, seed, ctx->ctx);
    int made = 0;
    try {
      for (; made < count; ++made) out[made] = new cpsg_point{pts[static_cast<std::size_t>(made)]};
    } catch (...) {
      for (int i = 0; i < made; ++i) delete out[i];
      throw;
    }
  });
}

int cpsg_point_create(const cpsg_context* ctx, cpsg_complex k, cpsg_complex x, cpsg_complex y,
                      cpsg_complex s, cpsg_point** out) {
  return guarded([&] {
    require(ctx && out, "null argument");
    auto p = cpsg::make_point(cpsg::make_modulus(from_c(k)), from_c(x), from_c(y), from_c(s));
    const double r = cpsg::validate_point(p, ctx->ctx);
    if (!(r < cpsg::kCurveTolerance)) {
      cpsg::fail(cpsg::ErrorCode::kInvalidArgument,
                 "point is not on the curve (residual " + std::to_string(r) + ")");
    }
    *out = new cpsg_point{p};
  });
}

void cpsg_point_destroy(cpsg_point* p) { delete p; }

int cpsg_point_coords(const cpsg_point* p, cpsg_complex* x, cpsg_complex* y, cpsg_complex* s,
                      cpsg_complex* t) {
  return guarded([&] {
    require(p != nullptr, "null point");
    if (x) *x = to_c(p->p.x);
    if (y) *y = to_c(p->p.y);
    if (s) *s = to_c(p->p.s);
    if (t) *t = to_c(p->p.t);
  });
}

int cpsg_point_residual(const cpsg_context* ctx, const cpsg_point* p, double* out) {
  return guarded([&] {
    require(ctx && p && out, "null argument");
    *out = cpsg::validate_point(p->p, ctx->ctx);
  });
}

int cpsg_weight(const cpsg_context* ctx, const cpsg_point* p, const cpsg_point* q, int n,
                cpsg_complex* w, cpsg_complex* wbar) {
  return guarded([&] {
    require(ctx && p && q, "null argument");
    const auto table = cpsg::weight_tables(p->p, q->p, cpsg::NormMode::kUnit, ctx->ctx);
    if (w) *w = to_c(table.w(n));
    if (wbar) *wbar = to_c(table.wbar(n));
  });
}

int cpsg_star_triangle(const cpsg_context* ctx, const cpsg_point* p, const cpsg_point* q,
                       const cpsg_point* r, double* residual, cpsg_complex* R_pqr) {
  return guarded([&] {
    require(ctx && p && q && r, "null argument");
    const auto res = cpsg::star_triangle_residual(p->p, q->p, r->p, ctx->ctx);
    if (residual) *residual = res.residual;
    if (R_pqr) *R_pqr = to_c(res.R_pqr);
  });
}

int cpsg_partition(const cpsg_context* ctx, const cpsg_point* p, const cpsg_point* q, int L, int M,
                   cpsg_complex* out) {
  return guarded([&] {
    require(ctx && p && q && out, "null argument");
    *out = to_c(cpsg::partition_function(p->p, q->p, L, M, ctx->ctx).value);
  });
}

int cpsg_dilog(cpsg_complex z, cpsg_complex* out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = to_c(cpsg::dilog(from_c(z)));
  });
}

int cpsg_rbar(const cpsg_context* ctx, cpsg_complex lambda, cpsg_complex x, cpsg_complex* out) {
  return guarded([&] {
    require(ctx && out, "null argument");
    *out = to_c(cpsg::rbar(from_c(lambda), from_c(x), ctx->ctx));
  });
}

int cpsg_twelve_term(double lambda, double mu, double x, double y, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = cpsg::twelve_term_difference(lambda, mu, x, y);
  });
}

int cpsg_evolve(cpsg_complex lambda, cpsg_complex* state, size_t size, int steps) {
  return guarded([&] {
    require(state != nullptr && steps >= 0, "invalid argument");
    std::vector<cpsg::cplx> w(size);
    for (size_t i = 0; i < size; ++i) w[i] = from_c(state[i]);
    auto s = cpsg::make_state(std::move(w));
    for (int i = 0; i < steps; ++i) s = cpsg::evolve(s, from_c(lambda));
    for (size_t i = 0; i < size; ++i) state[i] = to_c(s.w[i]);
  });
}

size_t cpsg_command_count(void) { return cpsg::known_commands().size(); }

const char* cpsg_command_name(size_t index) {
  const auto& names = cpsg::known_commands();
  return index < names.size() ? names[index].c_str() : nullptr;
}

int cpsg_run(const char* command, const char* config_json, cpsg_report** out) {
  return guarded([&] {
    require(command && out, "null argument");
    auto result = cpsg::run(command, config_json ? config_json : "");
    *out = new cpsg_report{std::move(result.report), result.passed};
  });
}

const char* cpsg_report_text(const cpsg_report* report) { return report ? report->text.c_str() : ""; }

int cpsg_report_passed(const cpsg_report* report) { return report && report->passed ? 1 : 0; }

void cpsg_report_destroy(cpsg_report* report) { delete report; }

}  // extern "C"
