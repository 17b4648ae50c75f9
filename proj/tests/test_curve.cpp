#include <doctest.h>

#include <set>

#include "support.hpp"

using cpsg::cplx;
using namespace testing;

namespace {

// Curve equations evaluated directly from the coordinates.
double curve_defect(const cpsg::CurvePoint& p, int N) {
  const cplx k = p.modulus.k, kp = p.modulus.k_prime;
  const cplx xn = std::pow(p.x, N), yn = std::pow(p.y, N), sn = std::pow(p.s, N);
  const double scale = 1.0 + std::abs(xn) + std::abs(yn) + std::abs(xn * yn) + std::abs(sn) + std::abs(1.0 / sn);
  return std::max({std::abs(xn + yn - k * (1.0 + xn * yn)), std::abs(k * xn - 1.0 + kp / sn),
                   std::abs(k * yn - 1.0 + kp * sn), std::abs(p.t - p.x * p.y)}) /
         scale;
}

}  // namespace

TEST_CASE("modulus construction") {
  const auto m = cpsg::make_modulus(cplx(0.6, 0.1));
  CHECK(std::abs(m.k * m.k + m.k_prime * m.k_prime - 1.0) < 1e-14);
  CHECK(code_of([] { cpsg::make_modulus(cplx(0.0, 0.0)); }) == cpsg::ErrorCode::kDegenerateModulus);
  CHECK(code_of([] { cpsg::make_modulus(cplx(0.6), cplx(0.6)); }) == cpsg::ErrorCode::kInvalidArgument);
}

TEST_CASE("point_from_s places the point on the curve") {
  for (int N = 1; N <= 7; ++N) {
    const auto ctx = cpsg::make_root_context(N);
    cpsg::Rng rng(100 + static_cast<std::uint64_t>(N));
    for (int trial = 0; trial < 20; ++trial) {
      const auto mod = random_modulus(rng);
      const cplx s = random_complex(rng);
      const int rx = rng.index(N), ry = rng.index(N);
      const auto p = cpsg::point_from_s(mod, s, rx, ry, ctx);
      CHECK(curve_defect(p, N) < 1e-13);
      CHECK(cpsg::validate_point(p, ctx) < 1e-12);
      CHECK(p.root_x == rx);
      CHECK(p.root_y == ry);
      const cplx x0 = std::pow((1.0 - mod.k_prime / std::pow(s, N)) / mod.k, 1.0 / N);
      CHECK(rel(p.x, x0 * omega_pow(N, rx)) < 1e-13);
    }
  }
}

TEST_CASE("special points") {
  const auto ctx = cpsg::make_root_context(3);
  SUBCASE("k' = 0 forces x^N = 1") {
    const auto mod = cpsg::make_modulus(cplx(1.0), cplx(0.0));
    for (int r = 0; r < 3; ++r) {
      const auto p = cpsg::point_from_s(mod, cplx(0.7, 0.2), r, 0, ctx);
      CHECK(std::abs(p.x - omega_pow(3, r)) < 1e-14);
    }
    const auto q = cpsg::make_point(mod, 1.0, 1.0, cplx(2.0, 1.0));
    CHECK(cpsg::validate_point(q, ctx) < 1e-15);
  }
  SUBCASE("s = 1 gives x^N = y^N = (1 - k')/k") {
    const auto mod = cpsg::make_modulus(cplx(0.5, 0.1));
    const auto p = cpsg::point_from_s(mod, 1.0, 0, 0, ctx);
    const cplx target = (1.0 - mod.k_prime) / mod.k;
    CHECK(rel(std::pow(p.x, 3), target) < 1e-13);
    CHECK(rel(std::pow(p.y, 3), target) < 1e-13);
  }
}

TEST_CASE("invalid inputs") {
  const auto ctx = cpsg::make_root_context(3);
  const auto mod = cpsg::make_modulus(cplx(0.5, 0.1));
  CHECK(code_of([&] { cpsg::point_from_s(mod, 0.0, 0, 0, ctx); }) == cpsg::ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { cpsg::point_from_s(mod, 1.0, 3, 0, ctx); }) == cpsg::ErrorCode::kInvalidArgument);
  // 1 - k' s^N = 0.
  const cplx branch = std::pow(1.0 / mod.k_prime, 1.0 / 3.0);
  CHECK(code_of([&] { cpsg::point_from_s(mod, branch, 0, 0, ctx); }) == cpsg::ErrorCode::kBranchPoint);
  CHECK(code_of([&] { cpsg::sample_points(mod, 0, 1, ctx); }) == cpsg::ErrorCode::kInvalidArgument);
}

TEST_CASE("validate_point detects off-curve points") {
  const auto ctx = cpsg::make_root_context(3);
  const auto mod = cpsg::make_modulus(cplx(0.5, 0.1));
  auto p = cpsg::point_from_s(mod, cplx(0.9, 0.3), 1, 2, ctx);
  CHECK(cpsg::validate_point(p, ctx) < 1e-12);
  p.x += 1e-3;
  CHECK(cpsg::validate_point(p, ctx) > 1e-4);
}

TEST_CASE("sampling is deterministic and valid") {
  const auto ctx = cpsg::make_root_context(5);
  const auto mod = cpsg::make_modulus(cplx(0.4, -0.2));
  const auto a = cpsg::sample_points(mod, 100, 42, ctx);
  const auto b = cpsg::sample_points(mod, 100, 42, ctx);
  REQUIRE(a.size() == 100);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
    CHECK(a[i].s == b[i].s);
    CHECK(curve_defect(a[i], 5) < 1e-12);
  }
  const auto c = cpsg::sample_points(mod, 100, 43, ctx);
  CHECK(c[0].s != a[0].s);
}

TEST_CASE("generation-validation closure for N up to 7") {
  for (int N = 1; N <= 7; ++N) {
    const auto ctx = cpsg::make_root_context(N);
    cpsg::Rng rng(7 * static_cast<std::uint64_t>(N));
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      const auto mod = random_modulus(rng);
      const auto p = cpsg::point_from_s(mod, random_complex(rng), rng.index(N), rng.index(N), ctx);
      if (!(cpsg::validate_point(p, ctx) < 1e-10)) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("all root branches give distinct valid points") {
  const int N = 4;
  const auto ctx = cpsg::make_root_context(N);
  const auto mod = cpsg::make_modulus(cplx(0.3, 0.2));
  std::set<std::pair<long long, long long>> seen;
  for (int rx = 0; rx < N; ++rx) {
    for (int ry = 0; ry < N; ++ry) {
      const auto p = cpsg::point_from_s(mod, cplx(0.8, -0.5), rx, ry, ctx);
      CHECK(curve_defect(p, N) < 1e-13);
      seen.emplace(std::llround(std::arg(p.x) * 1e6), std::llround(std::arg(p.y) * 1e6));
    }
  }
  CHECK(seen.size() == static_cast<std::size_t>(N * N));
}
