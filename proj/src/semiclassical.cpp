#include "cpsg/semiclassical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cpsg/curve.hpp"
#include "cpsg/error.hpp"

namespace cpsg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeta2 = kPi * kPi / 6.0;

// B_{2k} / (2k+1)! for k = 1..14.
constexpr std::array<double, 14> kBernoulliSeries = {
    1.0 / 6.0 / 6.0,
    -1.0 / 30.0 / 120.0,
    1.0 / 42.0 / 5040.0,
    -1.0 / 30.0 / 362880.0,
    5.0 / 66.0 / 39916800.0,
    -691.0 / 2730.0 / 6227020800.0,
    7.0 / 6.0 / 1307674368000.0,
    -3617.0 / 510.0 / 355687428096000.0,
    43867.0 / 798.0 / 121645100408832000.0,
    -174611.0 / 330.0 / 51090942171709440000.0,
    854513.0 / 138.0 / 25852016738884976640000.0,
    -236364091.0 / 2730.0 / 15511210043330985984000000.0,
    8553103.0 / 6.0 / 10888869450418352160768000000.0,
    -23749461029.0 / 870.0 / 8841761993739701954543616000000.0,
};

// sum_n B_n u^{n+1}/(n+1)!, equal to Li2(1 - e^{-u}).
cplx bernoulli_series(cplx u) {
  const cplx u2 = u * u;
  cplx term = u * u2;
  cplx acc = u - 0.25 * u2;
  for (double c : kBernoulliSeries) {
    acc += c * term;
    term *= u2;
  }
  return acc;
}

cplx dilog_unit_disk(cplx z) {
  if (z.real() <= 0.5) return bernoulli_series(-std::log(1.0 - z));
  return -bernoulli_series(-std::log(z)) + kZeta2 - std::log(z) * std::log(1.0 - z);
}

cplx principal_pow(cplx z, double r) { return std::exp(r * std::log(z)); }

void require_nonzero(cplx v, double scale, const char* what) {
  if (std::abs(v) < 1e-14 * std::max(1.0, scale)) {
    fail(ErrorCode::kSingular, std::string("vanishing factor in ") + what);
  }
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

cplx dilog(cplx z, CutSide side) {
  if (z == cplx{0.0, 0.0}) return 0.0;
  if (z.imag() == 0.0 && z.real() >= 1.0) {
    const double x = z.real();
    if (x == 1.0) return kZeta2;
    if (side == CutSide::kNone) fail(ErrorCode::kBranchCut, "dilog argument on the cut (1, inf)");
    const double re = 2.0 * kZeta2 - 0.5 * std::log(x) * std::log(x) - dilog_unit_disk(1.0 / x).real();
    const double im = kPi * std::log(x);
    return {re, side == CutSide::kAbove ? im : -im};
  }
  if (std::norm(z) <= 1.0) return dilog_unit_disk(z);
  const cplx l = std::log(-z);
  return -dilog_unit_disk(1.0 / z) - kZeta2 - 0.5 * l * l;
}

cplx H(cplx a, cplx b) {
  if (b == cplx{0.0, 0.0}) fail(ErrorCode::kInvalidArgument, "H(a, b) needs b != 0");
  if (b.imag() == 0.0 && b.real() < 0.0) fail(ErrorCode::kBranchCut, "H(a, b) with b on the log cut");
  const cplx lb = std::log(b);
  return -0.5 * (dilog(-a * b) + dilog(-a / b) + 0.5 * lb * lb + kZeta2);
}

cplx Htilde(cplx a, cplx b, const RootContext& ctx) {
  const int N = ctx.N();
  return H(ipow(a, N), ipow(b, N)) / static_cast<double>(N * N);
}

cplx rbar(cplx lambda, cplx x, const RootContext& ctx) {
  const int N = ctx.N();
  const cplx lN = ipow(lambda, N);
  const cplx xN = ipow(x, N);
  const double scale = std::max({std::abs(lN), std::abs(xN), std::abs(lN * xN)});
  const cplx num = lN + xN;
  const cplx den = 1.0 + lN * xN;
  require_nonzero(num, scale, "rbar");
  require_nonzero(den, scale, "rbar");
  cplx acc = principal_pow(num / den, (N - 1) / (2.0 * N));
  for (int j = 1; j < N; ++j) {
    const cplx qx = x * ctx.q0_pow(2 * j + 1);
    const double s = std::max({std::abs(lambda), std::abs(qx), std::abs(lambda * qx)});
    const cplx a = 1.0 + lambda * qx;
    const cplx b = lambda + qx;
    require_nonzero(a, s, "rbar");
    require_nonzero(b, s, "rbar");
    acc *= principal_pow(a / b, static_cast<double>(j) / N);
  }
  return acc;
}

cplx rbar_shift_ratio(cplx lambda, cplx x, int n, const RootContext& ctx) {
  const int N = ctx.N();
  const cplx xN = ipow(x, N);
  const cplx lN = ipow(lambda, N);
  const cplx den = 1.0 + xN / lN;
  require_nonzero(den, std::abs(xN / lN), "rbar shift ratio");
  cplx acc = principal_pow((1.0 + lN * xN) / den, static_cast<double>(n) / N);
  const cplx c = x / ctx.omega_half();
  for (int j = 1; j <= n; ++j) {
    const cplx wj = ctx.omega_pow(j);
    const cplx d = 1.0 - c * lambda * wj;
    require_nonzero(d, std::abs(c * lambda), "rbar shift ratio");
    acc *= (1.0 - c / lambda * wj) / d;
  }
  return acc;
}

double rbar_product_residual(cplx lambda, cplx x, const RootContext& ctx) {
  cplx acc{1.0, 0.0};
  for (int j = 0; j < ctx.N(); ++j) acc *= rbar(lambda, ctx.omega_pow(j) * x, ctx);
  return std::abs(acc - 1.0);
}

double rbar_shift_residual(cplx lambda, cplx x, const RootContext& ctx) {
  const cplx base = rbar(lambda, x, ctx);
  double worst = 0.0;
  for (int n = 1; n < ctx.N(); ++n) {
    const cplx direct = rbar(lambda, ctx.omega_pow(n) * x, ctx) / base;
    const cplx closed = rbar_shift_ratio(lambda, x, n, ctx);
    worst = std::max(worst, std::abs(direct - closed) / std::abs(closed));
  }
  return worst;
}

SemiclassicalParams twisted_params(cplx lambda, cplx mu, cplx P, cplx Q, const RootContext& ctx) {
  const int N = ctx.N();
  SemiclassicalParams s;
  s.lambda = lambda;
  s.mu = mu;
  s.P = P;
  s.Q = Q;
  s.exp_P = std::exp(P);
  s.exp_Q = std::exp(Q);
  const cplx l = ipow(lambda, N);
  const cplx m = ipow(mu, N);
  const cplx EP = ipow(s.exp_P, N);
  const cplx EQ = ipow(s.exp_Q, N);
  auto ratio = [](cplx num, cplx den) {
    require_nonzero(den, std::abs(num), "twisted parameters");
    return num / den;
  };
  s.expN_P_prime = ratio(1.0 + l * EQ, l + EQ) * EP;
  s.expN_Q_prime = ratio(m + EP, 1.0 + m * EP) * EQ;
  s.expN_P_dprime = ratio(1.0 + l * m * s.expN_Q_prime, l * m + s.expN_Q_prime) * EP;
  s.expN_Q_dprime = ratio(l * m + s.expN_P_prime, 1.0 + l * m * s.expN_P_prime) * EQ;
  s.exp_P_prime = principal_root(s.expN_P_prime, N);
  s.exp_Q_prime = principal_root(s.expN_Q_prime, N);
  s.exp_P_dprime = principal_root(s.expN_P_dprime, N);
  s.exp_Q_dprime = principal_root(s.expN_Q_dprime, N);
  s.P_prime = std::log(s.exp_P_prime);
  s.Q_prime = std::log(s.exp_Q_prime);
  s.P_dprime = std::log(s.exp_P_dprime);
  s.Q_dprime = std::log(s.exp_Q_dprime);
  return s;
}

double twisted_ybe_residual(const SemiclassicalParams& s, const RootContext& ctx,
                            const TwistOverride& untwist) {
  auto r = [&ctx](cplx l) { return [l, &ctx](cplx z) { return rbar(l, z, ctx); }; };
  const cplx eP1 = untwist.untwist_P_prime ? s.exp_P : s.exp_P_prime;
  const cplx eQ1 = untwist.untwist_Q_prime ? s.exp_Q : s.exp_Q_prime;
  const cplx eP2 = untwist.untwist_P_dprime ? s.exp_P : s.exp_P_dprime;
  const cplx eQ2 = untwist.untwist_Q_dprime ? s.exp_Q : s.exp_Q_dprime;
  const cplx lm = s.lambda * s.mu;
  const DenseOperator lhs = function_of_zinv(s.exp_Q, r(s.lambda), ctx) *
                            function_of_x(eP1, r(lm), ctx) * function_of_zinv(eQ2, r(s.mu), ctx);
  const DenseOperator rhs = function_of_x(s.exp_P, r(s.mu), ctx) *
                            function_of_zinv(eQ1, r(lm), ctx) * function_of_x(eP2, r(s.lambda), ctx);
  return relative_residual(lhs, rhs);
}

namespace {

cplx checked_div(cplx num, cplx den, const char* what) {
  require_nonzero(den, std::abs(num), what);
  return num / den;
}

struct Maps {
  cplx x, y, xpp, ypp;
};

Maps apply_maps(cplx l, cplx m, cplx xp, cplx yp) {
  const cplx lm = l * m;
  Maps r;
  r.x = xp * checked_div(1.0 + lm * yp, lm + yp, "saddle map");
  r.y = yp * checked_div(1.0 + m * xp, m + xp, "saddle map");
  r.ypp = xp * checked_div(lm * xp * yp + xp + l * yp + m, m * xp * yp + l * xp + yp + lm, "saddle map");
  r.xpp = yp * checked_div(lm * xp * yp + xp + l * yp + l * lm,
                           l * lm * xp * yp + l * xp + yp + lm, "saddle map");
  return r;
}

// Right-hand side of the twelve-term identity as a function of (x'', y'').
cplx F0(cplx l, cplx m, cplx u, cplx v) {
  const cplx x = v * checked_div(1.0 + m * u, m + u, "F0");
  const cplx y = u * checked_div(1.0 + l * m * v, l * m + v, "F0");
  return H(m, u) + H(l * m, v) + H(l, y) + 0.5 * std::log(x / v) * std::log(y / u);
}

cplx F1(cplx l, cplx m, cplx x, cplx y) { return (1.0 + m * x) * (1.0 + l * m * y); }

}  // namespace

SaddlePoint saddle_maps(cplx lambda, cplx mu, cplx x_p, cplx y_p) {
  const Maps r = apply_maps(lambda, mu, x_p, y_p);
  SaddlePoint s{r.x, r.y, r.xpp, r.ypp, 0.0};
  const cplx x2 = r.ypp * checked_div(1.0 + mu * r.xpp, mu + r.xpp, "saddle map");
  const cplx y2 = r.xpp * checked_div(1.0 + lambda * mu * r.ypp, lambda * mu + r.ypp, "saddle map");
  s.consistency_residual = std::max(rel(x2, r.x), rel(y2, r.y));
  return s;
}

double involution_residual(cplx lambda, cplx mu, cplx x_p, cplx y_p) {
  const Maps once = apply_maps(lambda, mu, x_p, y_p);
  const Maps twice = apply_maps(lambda, mu, once.xpp, once.ypp);
  return std::max(rel(twice.xpp, x_p), rel(twice.ypp, y_p));
}

double twelve_term_difference(double lambda, double mu, double x_p, double y_p) {
  if (!(lambda > 0.0 && mu > 0.0 && x_p > 0.0 && y_p > 0.0)) {
    fail(ErrorCode::kBranchCut, "twelve-term identity needs positive real arguments");
  }
  const Maps r = apply_maps(lambda, mu, x_p, y_p);
  const double x = r.x.real(), y = r.y.real(), xpp = r.xpp.real(), ypp = r.ypp.real();
  const double lm = lambda * mu;
  const double lhs = H(lambda, x).real() + H(lm, y_p).real() + H(mu, x_p).real() +
                     0.5 * std::log(x / x_p) * std::log(y / y_p);
  const double rhs = H(mu, xpp).real() + H(lm, ypp).real() + H(lambda, y).real() +
                     0.5 * std::log(x / ypp) * std::log(y / xpp);
  return lhs - rhs;
}

SubstitutionInvariants substitution_invariants(cplx lambda, cplx mu, cplx x_p, cplx y_p) {
  const Maps r = apply_maps(lambda, mu, x_p, y_p);
  SubstitutionInvariants out;
  out.F1 = F1(lambda, mu, x_p, y_p);
  out.F1_residual = rel(F1(lambda, mu, r.xpp, r.ypp), out.F1);
  out.F0_residual = std::abs(F0(lambda, mu, r.xpp, r.ypp) - F0(lambda, mu, x_p, y_p));
  return out;
}

}  // namespace cpsg
