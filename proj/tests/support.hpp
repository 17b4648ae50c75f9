#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "cpsg/core_algebra.hpp"
#include "cpsg/curve.hpp"
#include "cpsg/error.hpp"
#include "cpsg/rng.hpp"

namespace testing {

using cpsg::cplx;

inline cplx random_complex(cpsg::Rng& rng, double lo = -0.4, double hi = 0.4) {
  return std::polar(std::exp(rng.uniform(lo, hi)), rng.uniform(-std::numbers::pi, std::numbers::pi));
}

inline cpsg::CurveModulus random_modulus(cpsg::Rng& rng) {
  return cpsg::make_modulus(cplx(rng.uniform(0.2, 0.8), rng.uniform(-0.3, 0.3)));
}

inline std::vector<cpsg::CurvePoint> random_points(int count, std::uint64_t seed,
                                                   const cpsg::RootContext& ctx) {
  cpsg::Rng rng(seed);
  return cpsg::sample_points(random_modulus(rng), count, seed + 17, ctx);
}

inline cplx omega_pow(int N, long long k) {
  return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / N);
}

// W(n)/W(0) and Wbar(n)/Wbar(0) straight from the product formulas.
inline cplx w_ratio(const cpsg::CurvePoint& p, const cpsg::CurvePoint& q, int n, int N) {
  cplx acc = std::pow(p.s / q.s, n);
  for (int j = 1; j <= n; ++j) acc *= (q.y - omega_pow(N, j) * p.x) / (p.y - omega_pow(N, j) * q.x);
  return acc;
}

inline cplx wbar_ratio(const cpsg::CurvePoint& p, const cpsg::CurvePoint& q, int n, int N) {
  cplx acc = std::pow(p.s * q.s, n);
  for (int j = 1; j <= n; ++j) {
    acc *= (omega_pow(N, 1) * p.x - omega_pow(N, j) * q.x) / (q.y - omega_pow(N, j) * p.y);
  }
  return acc;
}

inline double rel(cplx a, cplx b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline double max_abs_diff(const cpsg::DenseOperator& a, const cpsg::DenseOperator& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

// Evaluates `body` and returns the error code it throws, or kOk.
template <class F>
cpsg::ErrorCode code_of(F&& body) {
  try {
    body();
  } catch (const cpsg::Error& e) {
    return e.code();
  }
  return cpsg::ErrorCode::kOk;
}

}  // namespace testing
