#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "cpsg/cpsg.h"

extern "C" int c_client_sample_weight(int N, double* modulus);

namespace {

double cabs(cpsg_complex z) { return std::hypot(z.re, z.im); }

struct Context {
  cpsg_context* ctx = nullptr;
  explicit Context(int N) { REQUIRE(cpsg_context_create(N, &ctx) == CPSG_OK); }
  ~Context() { cpsg_context_destroy(ctx); }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(cpsg_version()) == "0.1.0");
  CHECK(std::string(cpsg_status_name(CPSG_OK)) != "unknown");
  CHECK(std::string(cpsg_status_name(CPSG_CAP_EXCEEDED)) != std::string(cpsg_status_name(CPSG_SINGULAR)));
  CHECK(std::string(cpsg_status_name(99)) == "unknown");
  CHECK(std::string(cpsg_status_name(-1)) == "unknown");
}

TEST_CASE("context lifecycle") {
  cpsg_context* ctx = nullptr;
  CHECK(cpsg_context_create(0, &ctx) == CPSG_INVALID_ARGUMENT);
  CHECK(ctx == nullptr);
  CHECK(std::strlen(cpsg_last_error()) > 0);
  CHECK(cpsg_context_create(3, nullptr) == CPSG_INVALID_ARGUMENT);
  REQUIRE(cpsg_context_create(3, &ctx) == CPSG_OK);
  CHECK(std::strlen(cpsg_last_error()) == 0);
  cpsg_complex q0{};
  CHECK(cpsg_context_q0(ctx, &q0) == CPSG_OK);
  CHECK(std::abs(q0.re + std::cos(std::numbers::pi / 3)) < 1e-15);
  CHECK(std::abs(q0.im + std::sin(std::numbers::pi / 3)) < 1e-15);
  CHECK(cpsg_context_q0(nullptr, &q0) == CPSG_INVALID_ARGUMENT);
  cpsg_context_destroy(ctx);
  cpsg_context_destroy(nullptr);
}

TEST_CASE("points, weights and the star-triangle relation") {
  Context c(3);
  cpsg_point* pts[3] = {};
  REQUIRE(cpsg_points_sample(c.ctx, {0.5, 0.1}, 3, 17, pts) == CPSG_OK);
  for (auto* p : pts) {
    double r = 1.0;
    CHECK(cpsg_point_residual(c.ctx, p, &r) == CPSG_OK);
    CHECK(r < 1e-12);
  }
  cpsg_complex x{}, y{}, s{}, t{};
  REQUIRE(cpsg_point_coords(pts[0], &x, &y, &s, &t) == CPSG_OK);
  CHECK(std::abs(t.re - (x.re * y.re - x.im * y.im)) < 1e-14);
  CHECK(cpsg_point_coords(pts[0], nullptr, nullptr, nullptr, nullptr) == CPSG_OK);

  // A copy built from the coordinates validates; a perturbed one does not.
  cpsg_point* copy = nullptr;
  CHECK(cpsg_point_create(c.ctx, {0.5, 0.1}, x, y, s, &copy) == CPSG_OK);
  cpsg_point_destroy(copy);
  copy = nullptr;
  CHECK(cpsg_point_create(c.ctx, {0.5, 0.1}, {x.re + 1e-3, x.im}, y, s, &copy) == CPSG_INVALID_ARGUMENT);
  CHECK(copy == nullptr);
  CHECK(std::string(cpsg_last_error()).find("not on the curve") != std::string::npos);

  cpsg_complex w0{}, wb0{}, w{}, wb{};
  CHECK(cpsg_weight(c.ctx, pts[0], pts[1], 0, &w0, &wb0) == CPSG_OK);
  CHECK(cabs({w0.re - 1.0, w0.im}) < 1e-14);
  CHECK(cpsg_weight(c.ctx, pts[0], pts[1], 4, &w, &wb) == CPSG_OK);
  cpsg_complex w1{};
  CHECK(cpsg_weight(c.ctx, pts[0], pts[1], 1, &w1, nullptr) == CPSG_OK);
  CHECK(cabs({w.re - w1.re, w.im - w1.im}) < 1e-15);

  double res = 1.0;
  cpsg_complex R{};
  CHECK(cpsg_star_triangle(c.ctx, pts[0], pts[1], pts[2], &res, &R) == CPSG_OK);
  CHECK(res < 1e-10);
  CHECK(cabs(R) > 0.0);
  CHECK(cpsg_star_triangle(c.ctx, pts[0], nullptr, pts[2], &res, &R) == CPSG_INVALID_ARGUMENT);

  cpsg_complex z{};
  CHECK(cpsg_partition(c.ctx, pts[0], pts[1], 2, 2, &z) == CPSG_OK);
  CHECK(std::isfinite(z.re));
  CHECK(cpsg_partition(c.ctx, pts[0], pts[1], 8, 8, &z) == CPSG_CAP_EXCEEDED);
  for (auto* p : pts) cpsg_point_destroy(p);
}

TEST_CASE("sampling rejects bad input") {
  Context c(2);
  cpsg_point* out[1] = {};
  CHECK(cpsg_points_sample(c.ctx, {0.0, 0.0}, 1, 1, out) == CPSG_DEGENERATE_MODULUS);
  CHECK(cpsg_points_sample(c.ctx, {0.5, 0.0}, 0, 1, out) == CPSG_INVALID_ARGUMENT);
  CHECK(cpsg_points_sample(nullptr, {0.5, 0.0}, 1, 1, out) == CPSG_INVALID_ARGUMENT);
  CHECK(out[0] == nullptr);
}

TEST_CASE("semiclassical entry points") {
  cpsg_complex li{};
  REQUIRE(cpsg_dilog({1.0, 0.0}, &li) == CPSG_OK);
  CHECK(std::abs(li.re - std::numbers::pi * std::numbers::pi / 6) < 1e-14);
  REQUIRE(cpsg_dilog({-1.0, 0.0}, &li) == CPSG_OK);
  CHECK(std::abs(li.re + std::numbers::pi * std::numbers::pi / 12) < 1e-14);
  CHECK(cpsg_dilog({2.0, 0.0}, &li) == CPSG_BRANCH_CUT);
  CHECK(cpsg_dilog({0.5, 0.0}, nullptr) == CPSG_INVALID_ARGUMENT);

  double d = 1.0;
  CHECK(cpsg_twelve_term(1.3, 0.7, 0.9, 1.4, &d) == CPSG_OK);
  CHECK(std::abs(d) < 1e-9);

  Context c(3);
  cpsg_complex r{};
  CHECK(cpsg_rbar(c.ctx, {1.2, 0.0}, {0.8, 0.1}, &r) == CPSG_OK);
  CHECK(std::isfinite(r.re));
  CHECK(cabs(r) > 0.0);
}

TEST_CASE("evolution through the C API") {
  cpsg_complex state[4] = {{0.8, 0.2}, {1.3, -0.4}, {0.8, 0.2}, {1.3, -0.4}};
  CHECK(cpsg_evolve({1.2, 0.3}, state, 4, 3) == CPSG_OK);
  // Constant backgrounds are stationary.
  CHECK(std::abs(state[0].re - 0.8) < 1e-14);
  CHECK(std::abs(state[1].im + 0.4) < 1e-14);
  cpsg_complex odd[3] = {{1, 0}, {1, 0}, {1, 0}};
  CHECK(cpsg_evolve({1.2, 0.0}, odd, 3, 1) == CPSG_INVALID_ARGUMENT);
  cpsg_complex pole[4] = {{1, 0}, {-2, 0}, {3, 0}, {1.5, 0}};
  CHECK(cpsg_evolve({2.0, 0.0}, pole, 4, 1) == CPSG_SINGULAR);
  CHECK(cpsg_evolve({2.0, 0.0}, nullptr, 4, 1) == CPSG_INVALID_ARGUMENT);
}

TEST_CASE("commands and reports") {
  REQUIRE(cpsg_command_count() == 10);
  for (size_t i = 0; i < cpsg_command_count(); ++i) CHECK(cpsg_command_name(i) != nullptr);
  CHECK(cpsg_command_name(cpsg_command_count()) == nullptr);

  cpsg_report* rep = nullptr;
  REQUIRE(cpsg_run("verify str", R"({"trials": 2, "timestamp": false})", &rep) == CPSG_OK);
  CHECK(cpsg_report_passed(rep) == 1);
  CHECK(std::string(cpsg_report_text(rep)).find("\"schema_version\"") != std::string::npos);
  cpsg_report_destroy(rep);

  rep = nullptr;
  REQUIRE(cpsg_run("verify str", R"({"trials": 2, "tol": 1e-40})", &rep) == CPSG_OK);
  CHECK(cpsg_report_passed(rep) == 0);
  cpsg_report_destroy(rep);

  rep = nullptr;
  REQUIRE(cpsg_run("curve sample", nullptr, &rep) == CPSG_OK);
  cpsg_report_destroy(rep);

  rep = nullptr;
  CHECK(cpsg_run("verify nothing", "{}", &rep) == CPSG_UNKNOWN_COMMAND);
  CHECK(rep == nullptr);
  CHECK(cpsg_run("verify str", R"({"bogus": true})", &rep) == CPSG_INVALID_CONFIG);
  CHECK(std::string(cpsg_last_error()).find("bogus") != std::string::npos);
  CHECK(cpsg_run(nullptr, "{}", &rep) == CPSG_INVALID_ARGUMENT);
  CHECK(std::string(cpsg_report_text(nullptr)).empty());
  CHECK(cpsg_report_passed(nullptr) == 0);
  cpsg_report_destroy(nullptr);
}

TEST_CASE("the header works from a C translation unit") {
  double m = 0.0;
  CHECK(c_client_sample_weight(3, &m) == CPSG_OK);
  CHECK(m > 0.0);
  CHECK(c_client_sample_weight(0, &m) == CPSG_INVALID_ARGUMENT);
}
