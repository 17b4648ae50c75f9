#pragma once

#include <cstdint>
#include <vector>

#include "cpsg/core_algebra.hpp"

namespace cpsg {

/// Modulus (k, k') of the curve, k^2 + k'^2 = 1.
struct CurveModulus {
  cplx k;
  cplx k_prime;
};

/// k' is the principal square root of 1 - k^2.
CurveModulus make_modulus(cplx k);
/// Checks k^2 + k'^2 = 1 within 1e-12.
CurveModulus make_modulus(cplx k, cplx k_prime);

/// Rapidity p = (x_p, y_p, s_p) with t_p = x_p y_p. root_x / root_y record the
/// omega-power branch indices used at construction (-1 when the point was
/// assembled from explicit coordinates).
struct CurvePoint {
  cplx x;
  cplx y;
  cplx s;
  cplx t;
  CurveModulus modulus;
  int root_x = -1;
  int root_y = -1;
};

/// Assembles a point from explicit coordinates without validation.
CurvePoint make_point(const CurveModulus& modulus, cplx x, cplx y, cplx s);

/// x = omega^{root_x} (principal N-th root of (1 - k' s^-N)/k),
/// y = omega^{root_y} (principal N-th root of (1 - k' s^N)/k).
CurvePoint point_from_s(const CurveModulus& modulus, cplx s, int root_x, int root_y,
                        const RootContext& ctx);

/// Maximum relative residual of the three curve equations and of t = xy.
double validate_point(const CurvePoint& p, const RootContext& ctx);

inline constexpr double kCurveTolerance = 1e-10;

/// Deterministic sample of `count` valid points; s is drawn away from the
/// branch points 1 - k' s^{+-N} = 0.
std::vector<CurvePoint> sample_points(const CurveModulus& modulus, int count, std::uint64_t seed,
                                      const RootContext& ctx);

/// Principal N-th root.
cplx principal_root(cplx z, int n);

}  // namespace cpsg
