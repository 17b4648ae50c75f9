#include <doctest.h>

#include "cpsg/weights.hpp"
#include "support.hpp"

using cpsg::cplx;
using cpsg::NormMode;
using namespace testing;

namespace {

std::vector<cplx> dft(const std::vector<cplx>& v) {
  const int N = static_cast<int>(v.size());
  std::vector<cplx> out(v.size());
  for (int n = 0; n < N; ++n) {
    for (int a = 0; a < N; ++a) out[static_cast<std::size_t>(n)] += v[static_cast<std::size_t>(a)] * omega_pow(N, static_cast<long long>(n) * a);
  }
  return out;
}

// Largest deviation of LHS/RHS from R over all spin triples.
double str_defect(const cpsg::CurvePoint& p, const cpsg::CurvePoint& q, const cpsg::CurvePoint& r,
                  cplx R, const cpsg::RootContext& ctx) {
  const int N = ctx.N();
  const auto pq = cpsg::weight_tables(p, q, NormMode::kUnit, ctx);
  const auto pr = cpsg::weight_tables(p, r, NormMode::kUnit, ctx);
  const auto qr = cpsg::weight_tables(q, r, NormMode::kUnit, ctx);
  double worst = 0.0;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c) {
        cplx lhs{0.0, 0.0};
        for (int d = 0; d < N; ++d) lhs += qr.wbar(b - d) * pr.w(a - d) * pq.wbar(d - c);
        const cplx rhs = R * pq.w(a - b) * pr.wbar(b - c) * qr.w(a - c);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
      }
  return worst;
}

}  // namespace

TEST_CASE("weight tables follow the product formulas") {
  for (int N : {2, 3, 5, 7}) {
    const auto ctx = cpsg::make_root_context(N);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto pts = random_points(2, seed, ctx);
      const auto t = cpsg::weight_tables(pts[0], pts[1], NormMode::kUnit, ctx);
      REQUIRE(t.W.size() == static_cast<std::size_t>(N));
      CHECK(t.W[0] == cplx(1.0));
      CHECK(t.Wbar[0] == cplx(1.0));
      for (int n = 0; n < N; ++n) {
        CHECK(rel(t.w(n), w_ratio(pts[0], pts[1], n, N)) < 1e-12);
        CHECK(rel(t.wbar(n), wbar_ratio(pts[0], pts[1], n, N)) < 1e-12);
        CHECK(rel(cpsg::weight_ratio(pts[0], pts[1], n + N, ctx), t.w(n)) < 1e-10);
        CHECK(rel(cpsg::weight_bar_ratio(pts[0], pts[1], n + N, ctx), t.wbar(n)) < 1e-10);
      }
      CHECK(t.w(-1) == t.w(N - 1));
      CHECK(cpsg::periodicity_residual(pts[0], pts[1], ctx) < 1e-10);
    }
  }
}

TEST_CASE("Fourier transforms") {
  for (int N : {2, 3, 4, 5}) {
    const auto ctx = cpsg::make_root_context(N);
    const auto pts = random_points(2, 11, ctx);
    const auto t = cpsg::weight_tables(pts[0], pts[1], NormMode::kUnit, ctx);
    const auto f = dft(t.Wbar);
    const auto g = dft(t.W);
    const double scale = std::abs(f[0]);
    for (int n = 0; n < N; ++n) {
      const auto i = static_cast<std::size_t>(n);
      CHECK(std::abs(f[i] - t.Wbar_f[i]) / scale < 1e-11);
      CHECK(std::abs(g[i] - t.W_f[i]) / std::abs(g[0]) < 1e-11);
      CHECK(rel(f[i] / f[0], cpsg::fourier_bar_ratio(pts[0], pts[1], n, ctx)) < 1e-11);
    }
    // Inverse transform recovers Wbar.
    for (int a = 0; a < N; ++a) {
      cplx back{0.0, 0.0};
      for (int n = 0; n < N; ++n) back += t.Wbar_f[static_cast<std::size_t>(n)] * omega_pow(N, -static_cast<long long>(n) * a);
      back /= static_cast<double>(N);
      CHECK(std::abs(back - t.wbar(a)) < 1e-11 * std::max(1.0, std::abs(t.wbar(a))));
    }
    CHECK(cpsg::fourier_residual(t, ctx) < 1e-11);
  }
}

TEST_CASE("coincident rapidities") {
  const auto ctx = cpsg::make_root_context(3);
  const auto p = random_points(1, 4, ctx)[0];
  const auto t = cpsg::weight_tables(p, p, NormMode::kUnit, ctx);
  for (int n = 0; n < 3; ++n) CHECK(std::abs(t.w(n) - 1.0) < 1e-14);
  CHECK(std::abs(t.wbar(1)) < 1e-14);
  CHECK(std::abs(t.wbar(2)) < 1e-14);
}

TEST_CASE("periodicity needs curve membership") {
  const auto ctx = cpsg::make_root_context(3);
  auto pts = random_points(2, 8, ctx);
  pts[0].x += 1e-2;
  CHECK(cpsg::periodicity_residual(pts[0], pts[1], ctx) > 1e-3);
}

TEST_CASE("non-generic pairs are rejected") {
  const auto ctx = cpsg::make_root_context(3);
  const auto mod = cpsg::make_modulus(cplx(0.5));
  const auto q = cpsg::make_point(mod, cplx(0.7, 0.1), cplx(1.2, -0.3), cplx(0.9, 0.4));
  const auto p = cpsg::make_point(mod, cplx(0.4, 0.4), ctx.omega() * q.x, cplx(1.1, 0.2));
  CHECK(code_of([&] { cpsg::weight_ratio(p, q, 1, ctx); }) == cpsg::ErrorCode::kNonGeneric);
}

TEST_CASE("normalized tables") {
  const auto ctx = cpsg::make_root_context(4);
  const auto pts = random_points(2, 21, ctx);
  const auto unit = cpsg::weight_tables(pts[0], pts[1], NormMode::kUnit, ctx);
  const auto t = cpsg::weight_tables(pts[0], pts[1], NormMode::kStrNormalized, ctx);
  CHECK(t.norm_mode == NormMode::kStrNormalized);
  cplx pw{1.0, 0.0}, pf{1.0, 0.0};
  for (int n = 0; n < 4; ++n) {
    pw *= t.W[static_cast<std::size_t>(n)];
    pf *= t.Wbar_f[static_cast<std::size_t>(n)];
    CHECK(rel(t.w(n) / t.w(0), unit.w(n)) < 1e-13);
  }
  CHECK(std::abs(pw - 1.0) < 1e-12);
  CHECK(std::abs(pf - 1.0) < 1e-12);
  const auto custom = cpsg::weight_tables_normalized(pts[0], pts[1], cplx(2.0, 1.0), cplx(0.5), ctx);
  CHECK(custom.W[0] == cplx(2.0, 1.0));
  CHECK(rel(custom.wbar(2), 0.5 * unit.wbar(2)) < 1e-14);
}

TEST_CASE("star-triangle relation") {
  for (int N : {1, 2, 3, 5}) {
    const auto ctx = cpsg::make_root_context(N);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const auto pts = random_points(3, 1000 * static_cast<std::uint64_t>(N) + seed, ctx);
      const auto res = cpsg::star_triangle_residual(pts[0], pts[1], pts[2], ctx);
      CHECK(res.residual < 1e-10);
      CHECK(res.ratio_check < 1e-10);
      CHECK(str_defect(pts[0], pts[1], pts[2], res.R_pqr, ctx) < 1e-10);
      CHECK(rel(std::pow(res.R_pqr, N), res.R_pqr_power_n) < 1e-10);
      // R^N from the f^N products, computed here from DFTs of the unit tables.
      auto fN = [&](const cpsg::CurvePoint& a, const cpsg::CurvePoint& b) {
        const auto t = cpsg::weight_tables(a, b, NormMode::kUnit, ctx);
        const auto f = dft(t.Wbar);
        cplx acc{1.0, 0.0};
        for (int j = 0; j < N; ++j) acc *= f[static_cast<std::size_t>(j)] / t.W[static_cast<std::size_t>(j)];
        return acc;
      };
      const cplx RN = fN(pts[0], pts[1]) * fN(pts[1], pts[2]) / fN(pts[0], pts[2]);
      CHECK(rel(RN, res.R_pqr_power_n) < 1e-9);
    }
  }
}

TEST_CASE("star-triangle with coincident p and q") {
  const auto ctx = cpsg::make_root_context(3);
  const auto pts = random_points(2, 5, ctx);
  const auto res = cpsg::star_triangle_residual(pts[0], pts[0], pts[1], ctx);
  CHECK(res.residual < 1e-13);
}

TEST_CASE("weight matrices") {
  for (int N : {1, 2, 3, 4}) {
    const auto ctx = cpsg::make_root_context(N);
    const auto pts = random_points(2, 31, ctx);
    const auto& p = pts[0];
    const auto& q = pts[1];
    const auto t = cpsg::weight_tables(p, q, NormMode::kUnit, ctx);
    const auto m = cpsg::weight_matrices(t, ctx);
    REQUIRE(m.F_z.dim() == static_cast<std::size_t>(N));
    CHECK(m.F_z.is_diagonal());
    CHECK(m.F_zinv.is_diagonal());
    for (int a = 0; a < N; ++a) {
      const auto ia = static_cast<std::size_t>(a);
      CHECK(rel(m.F_z(ia, ia), t.w(a)) < 1e-13);
      CHECK(rel(m.F_zinv(ia, ia), t.w(-a)) < 1e-13);
      for (int b = 0; b < N; ++b) CHECK(std::abs(m.Fbar_x(ia, static_cast<std::size_t>(b)) - t.wbar(a - b)) < 1e-14);
      CHECK(rel(cpsg::F_value(t, omega_pow(N, a), ctx), t.w(a)) < 1e-12);
    }
    for (int n = 0; n < N; ++n) {
      const cplx Y = omega_pow(N, n);
      const cplx ratio = cpsg::F_value(t, Y, ctx) / cpsg::F_value(t, omega_pow(N, -1) * Y, ctx);
      const cplx expected = p.s * (q.y - p.x * Y) / (q.s * (p.y - q.x * Y));
      if (N > 1) CHECK(rel(ratio, expected) < 1e-11);
      cplx fbar{0.0, 0.0};
      for (int a = 0; a < N; ++a) fbar += t.wbar(a) * std::pow(Y, a);
      CHECK(rel(cpsg::Fbar_value(t, Y, ctx), fbar) < 1e-12);
    }
    CHECK(m.recurrence_residual < 1e-11);
    CHECK(cpsg::recurrence_residual(t, ctx) < 1e-11);
  }
}

TEST_CASE("matrix star-triangle agrees with the scalar form") {
  for (int N : {1, 2, 3, 4}) {
    const auto ctx = cpsg::make_root_context(N);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto pts = random_points(3, 500 + seed, ctx);
      const auto scalar = cpsg::star_triangle_residual(pts[0], pts[1], pts[2], ctx);
      const auto matrix = cpsg::str_matrix_residual(pts[0], pts[1], pts[2], ctx);
      CHECK(matrix.residual < 1e-10);
      CHECK(std::abs(matrix.residual - scalar.residual) < 1e-12);
      CHECK(rel(matrix.R_pqr, scalar.R_pqr) < 1e-10);
    }
  }
}

TEST_CASE("product identity for the Fourier weights") {
  for (int N : {1, 2, 3, 4, 5}) {
    const auto ctx = cpsg::make_root_context(N);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto pts = random_points(2, 77 + seed, ctx);
      const auto& p = pts[0];
      const auto& q = pts[1];
      const auto t = cpsg::weight_tables_normalized(p, q, 1.0, cplx(0.7, 0.2), ctx);
      const auto f = dft(t.Wbar);
      cplx lhs{1.0, 0.0};
      for (const auto& v : f) lhs *= v;
      cplx rhs = std::pow(t.Wbar[0], N) * std::pow(static_cast<double>(N), N / 2.0) *
                 std::polar(1.0, -std::numbers::pi * (N - 1) * (N - 2) / 12.0);
      for (int j = 1; j < N; ++j) {
        const cplx w = omega_pow(N, j);
        rhs *= std::pow((p.t - w * q.t) / ((p.x - w * q.x) * (p.y - w * q.y)), j);
      }
      CHECK(rel(lhs, rhs) < 1e-10);
      CHECK(cpsg::product_identity_residual(p, q, ctx) < 1e-10);
    }
  }
}
