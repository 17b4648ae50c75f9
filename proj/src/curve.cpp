#include "cpsg/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cpsg/error.hpp"
#include "cpsg/rng.hpp"

namespace cpsg {

namespace {

double rel(cplx diff, std::initializer_list<double> scales) {
  double scale = 1.0;
  for (double s : scales) scale = std::max(scale, s);
  return std::abs(diff) / scale;
}

constexpr double kBranchGuard = 1e-14;

}  // namespace

cplx principal_root(cplx z, int n) {
  if (n == 1 || z == cplx{}) return z;
  return std::polar(std::pow(std::abs(z), 1.0 / n), std::arg(z) / n);
}

CurveModulus make_modulus(cplx k) {
  if (k == cplx{}) fail(ErrorCode::kDegenerateModulus, "modulus k = 0 is degenerate");
  return {k, std::sqrt(1.0 - k * k)};
}

CurveModulus make_modulus(cplx k, cplx k_prime) {
  if (k == cplx{}) fail(ErrorCode::kDegenerateModulus, "modulus k = 0 is degenerate");
  if (std::abs(k * k + k_prime * k_prime - 1.0) > 1e-12) {
    fail(ErrorCode::kInvalidArgument, "modulus violates k^2 + k'^2 = 1");
  }
  return {k, k_prime};
}

CurvePoint make_point(const CurveModulus& modulus, cplx x, cplx y, cplx s) {
  return {x, y, s, x * y, modulus, -1, -1};
}

CurvePoint point_from_s(const CurveModulus& modulus, cplx s, int root_x, int root_y,
                        const RootContext& ctx) {
  const int n = ctx.N();
  if (modulus.k == cplx{}) fail(ErrorCode::kDegenerateModulus, "modulus k = 0 is degenerate");
  if (s == cplx{}) fail(ErrorCode::kInvalidArgument, "s must be nonzero");
  if (root_x < 0 || root_x >= n || root_y < 0 || root_y >= n) {
    fail(ErrorCode::kInvalidArgument, "root indices must lie in 0..N-1");
  }
  const cplx sn = ipow(s, n);
  const cplx rad_x = 1.0 - modulus.k_prime / sn;
  const cplx rad_y = 1.0 - modulus.k_prime * sn;
  if (std::abs(rad_x) < kBranchGuard || std::abs(rad_y) < kBranchGuard) {
    fail(ErrorCode::kBranchPoint, "s lies on a branch point of the curve");
  }
  CurvePoint p;
  p.modulus = modulus;
  p.s = s;
  p.x = ctx.omega_pow(root_x) * principal_root(rad_x / modulus.k, n);
  p.y = ctx.omega_pow(root_y) * principal_root(rad_y / modulus.k, n);
  p.t = p.x * p.y;
  p.root_x = root_x;
  p.root_y = root_y;
  return p;
}

double validate_point(const CurvePoint& p, const RootContext& ctx) {
  const int n = ctx.N();
  const cplx k = p.modulus.k;
  const cplx kp = p.modulus.k_prime;
  if (p.s == cplx{}) return std::numeric_limits<double>::infinity();
  const cplx xn = ipow(p.x, n);
  const cplx yn = ipow(p.y, n);
  const cplx sn = ipow(p.s, n);
  const double r_modulus = std::abs(k * k + kp * kp - 1.0);
  const double r1 = rel(xn + yn - k * (1.0 + xn * yn),
                        {std::abs(xn), std::abs(yn), std::abs(k), std::abs(k * xn * yn)});
  const double r2 = rel(k * xn - 1.0 + kp / sn, {std::abs(k * xn), std::abs(kp / sn)});
  const double r3 = rel(k * yn - 1.0 + kp * sn, {std::abs(k * yn), std::abs(kp * sn)});
  const double r4 = rel(p.t - p.x * p.y, {std::abs(p.t)});
  return std::max({r_modulus, r1, r2, r3, r4});
}

std::vector<CurvePoint> sample_points(const CurveModulus& modulus, int count, std::uint64_t seed,
                                      const RootContext& ctx) {
  if (count < 1) fail(ErrorCode::kInvalidArgument, "sample count must be >= 1");
  constexpr int kMaxRetries = 1000;
  const int n = ctx.N();
  Rng rng(seed);
  std::vector<CurvePoint> out;
  out.reserve(static_cast<std::size_t>(count));
  int failures = 0;
  while (static_cast<int>(out.size()) < count) {
    const double radius = std::exp(rng.uniform(-0.5, 0.5));
    const double angle = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const cplx s = std::polar(radius, angle);
    const int rx = rng.index(n);
    const int ry = rng.index(n);
    const cplx sn = ipow(s, n);
    const bool near_branch = std::abs(1.0 - modulus.k_prime * sn) < 0.05 ||
                             std::abs(1.0 - modulus.k_prime / sn) < 0.05;
    if (!near_branch) {
      CurvePoint p = point_from_s(modulus, s, rx, ry, ctx);
      if (validate_point(p, ctx) < kCurveTolerance) {
        out.push_back(p);
        continue;
      }
    }
    if (++failures > kMaxRetries) {
      fail(ErrorCode::kSearchFailed,
           "sample_points: no valid point after " + std::to_string(kMaxRetries) + " retries");
    }
  }
  return out;
}

}  // namespace cpsg
