#include "cpsg/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cpsg/error.hpp"
#include "cpsg/weights.hpp"

namespace cpsg {

namespace {

double rel(cplx a, cplx b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

// max_n |values(n)/values(0) - rbar(l, e w^n)/rbar(l, e)| on the rbar scale.
double identification_residual(const std::vector<cplx>& values, cplx l, cplx e,
                               const RootContext& ctx) {
  const int N = ctx.N();
  std::vector<cplx> r(N);
  double scale = 0.0;
  for (int n = 0; n < N; ++n) {
    r[n] = rbar(l, e * ctx.omega_pow(n), ctx);
    scale = std::max(scale, std::abs(r[n]));
  }
  double worst = 0.0;
  for (int n = 0; n < N; ++n) worst = std::max(worst, std::abs(values[n] / values[0] * r[0] - r[n]));
  return worst / scale;
}

cplx require_nonzero(cplx v, const char* what) {
  if (std::abs(v) < 1e-300) fail(ErrorCode::kNonGeneric, std::string("vanishing ") + what);
  return v;
}

}  // namespace

CurveParams params_from_rapidities(const CurveModulus& /*k*/, const CurvePoint& p,
                                   const CurvePoint& q, const CurvePoint& r, int sign_lambda,
                                   int sign_mu, const RootContext& ctx) {
  if (std::abs(p.t) == 0.0 || std::abs(q.t) == 0.0 || std::abs(r.t) == 0.0) {
    fail(ErrorCode::kInvalidArgument, "rapidity with t = 0");
  }
  if (std::abs(sign_lambda) != 1 || std::abs(sign_mu) != 1) {
    fail(ErrorCode::kInvalidArgument, "sign choices must be +1 or -1");
  }
  const cplx lambda = static_cast<double>(sign_lambda) * std::sqrt(q.t / p.t);
  const cplx mu = static_cast<double>(sign_mu) * std::sqrt(r.t / q.t);
  const cplx eQ = ctx.omega_half() * lambda * p.x / require_nonzero(q.y, "y_q");
  const cplx eP = ctx.omega_half() * mu * q.x * q.s * r.s / require_nonzero(r.y, "y_r");
  CurveParams out;
  out.params = twisted_params(lambda, mu, std::log(eP), std::log(eQ), ctx);
  // Keep the exact exponentials rather than exp(log(.)).
  out.params.exp_P = eP;
  out.params.exp_Q = eQ;
  out.sign_lambda = sign_lambda;
  out.sign_mu = sign_mu;
  return out;
}

cplx modulus_from_params(cplx lambda, cplx mu, cplx exp_P, cplx exp_Q, const RootContext& ctx) {
  const int N = ctx.N();
  const cplx A = 1.0 + ipow(exp_Q / lambda, N);
  const cplx B = 1.0 + ipow(exp_Q * lambda, N);
  const cplx C = 1.0 + ipow(exp_P / mu, N);
  const cplx D = 1.0 + ipow(exp_P * mu, N);
  const cplx num = (A * C * (1.0 - B) - B * D * (1.0 - C)) * (B * C * (1.0 - A) * (1.0 - D) - A * D);
  const cplx den = C * D * (A - B * (1.0 - D)) * (B - A - B * C * (1.0 - A));
  if (std::abs(den) < 1e-14 * std::max(1.0, std::abs(num))) {
    fail(ErrorCode::kDegenerateModulus, "modulus formula has a vanishing denominator");
  }
  return num / den;
}

CorrespondenceReport correspondence_residuals(const SemiclassicalParams& s, const CurveModulus& k,
                                              const CurvePoint& p, const CurvePoint& q,
                                              const CurvePoint& r, const RootContext& ctx) {
  const int N = ctx.N();
  const cplx wh = ctx.omega_half();
  const cplx wmh = 1.0 / wh;
  const cplx l = s.lambda, m = s.mu, lm = s.lambda * s.mu;
  CorrespondenceReport rep;

  rep.first_four_residual = std::max({rel(wmh / l * s.exp_Q, p.x / q.y), rel(wmh * l * s.exp_Q, q.x / p.y),
                                      rel(wmh / m * s.exp_P, q.x * q.s * r.s / r.y),
                                      rel(wmh * m * s.exp_P, r.x * r.s * q.s / q.y)});
  const cplx w = ctx.omega();
  rep.square_relations_residual =
      std::max({rel(l * l, q.t / p.t), rel(m * m, r.t / q.t),
                rel(s.exp_Q * s.exp_Q, w * p.x * q.x / (p.y * q.y)),
                rel(s.exp_P * s.exp_P, w * q.x * r.x * q.s * q.s * r.s * r.s / (q.y * r.y))});

  const cplx k2 = k.k * k.k;
  rep.modulus_residual = std::abs(k2 - modulus_from_params(l, m, s.exp_P, s.exp_Q, ctx)) / std::abs(k2);

  auto pair_residual = [&](cplx left, cplx right, cplx expN) {
    return std::max(rel(ipow(left, N), expN), rel(right, left));
  };
  const cplx P1_left = wh * lm * p.x * p.s * r.s / r.y;
  const cplx P1_right = wh / lm * r.x * r.s * p.s / p.y;
  const cplx Q1_left = wh * lm * p.x / r.y;
  const cplx Q1_right = wh / lm * r.x / p.y;
  const cplx P2_left = wh * l * p.x * p.s * q.s / q.y;
  const cplx P2_right = wh / l * q.x * q.s * p.s / p.y;
  const cplx Q2_left = wh * m * q.x / r.y;
  const cplx Q2_right = wh / m * r.x / q.y;
  rep.last_eight_residual = std::max({pair_residual(P1_left, P1_right, s.expN_P_prime),
                                      pair_residual(Q1_left, Q1_right, s.expN_Q_prime),
                                      pair_residual(P2_left, P2_right, s.expN_P_dprime),
                                      pair_residual(Q2_left, Q2_right, s.expN_Q_dprime)});
  const cplx printed = wh / l * r.x * r.s * p.s / p.y;
  rep.last_eight_printed_residual = rel(ipow(printed, N), s.expN_P_prime);

  const auto pq = weight_tables(p, q, NormMode::kUnit, ctx);
  const auto qr = weight_tables(q, r, NormMode::kUnit, ctx);
  const auto pr = weight_tables(p, r, NormMode::kUnit, ctx);
  rep.factor_residuals = {
      identification_residual(pq.W, l, s.exp_Q, ctx),
      identification_residual(qr.Wbar_f, m, s.exp_P, ctx),
      identification_residual(pr.Wbar_f, lm, s.exp_P_prime, ctx),
      identification_residual(pr.W, lm, s.exp_Q_prime, ctx),
      identification_residual(qr.W, m, s.exp_Q_dprime, ctx),
      identification_residual(pq.Wbar_f, l, s.exp_P_dprime, ctx),
  };
  rep.max_factor_residual = *std::max_element(rep.factor_residuals.begin(), rep.factor_residuals.end());

  // Rescale the unit-normalized weights so that their zero-spin values are
  // the rbar values, and carry the scalings into R_pqr.
  const auto str = star_triangle_residual(p, q, r, ctx);
  const cplx c_wbar_qr = rbar(m, s.exp_P, ctx) / qr.Wbar_f[0];
  const cplx c_w_pr = rbar(lm, s.exp_Q_prime, ctx);
  const cplx c_wbar_pq = rbar(l, s.exp_P_dprime, ctx) / pq.Wbar_f[0];
  const cplx c_w_pq = rbar(l, s.exp_Q, ctx);
  const cplx c_wbar_pr = rbar(lm, s.exp_P_prime, ctx) / pr.Wbar_f[0];
  const cplx c_w_qr = rbar(m, s.exp_Q_dprime, ctx);
  rep.R_pqr_value = str.R_pqr * c_wbar_qr * c_w_pr * c_wbar_pq / (c_w_pq * c_wbar_pr * c_w_qr);
  rep.R_pqr_residual = std::abs(rep.R_pqr_value - 1.0);
  rep.twisted_ybe_residual = twisted_ybe_residual(s, ctx);
  rep.str_matrix_residual = str_matrix_residual(p, q, r, ctx).residual;
  return rep;
}

CurveTriple triple_from_params(cplx lambda, cplx mu, cplx exp_P, cplx exp_Q,
                               const TripleBranch& branch, const RootContext& ctx) {
  const int N = ctx.N();
  const cplx wmh = 1.0 / ctx.omega_half();
  const cplx a1 = wmh / lambda * exp_Q, a2 = wmh * lambda * exp_Q;
  const cplx b1 = wmh / mu * exp_P, b2 = wmh * mu * exp_P;
  const cplx A1 = ipow(a1, N), A2 = ipow(a2, N), B1 = ipow(b1, N), B2 = ipow(b2, N);

  const cplx k2 = modulus_from_params(lambda, mu, exp_P, exp_Q, ctx);
  CurveTriple out;
  out.modulus = make_modulus(std::sqrt(k2));
  const cplx kp = out.modulus.k_prime;
  const cplx k = out.modulus.k;

  // A1 k'(1-A2) S_q^2 + [(1-A1) - A1 k'^2 - A2(1 - A1 - k'^2)] S_q - k'(1-A1) = 0
  const cplx qa = A1 * kp * (1.0 - A2);
  const cplx qb = (1.0 - A1) - A1 * kp * kp - A2 * (1.0 - A1 - kp * kp);
  const cplx qc = -kp * (1.0 - A1);
  std::vector<cplx> roots;
  if (std::abs(qa) < 1e-14 * std::max(std::abs(qb), std::abs(qc))) {
    roots.push_back(-qc / qb);
  } else {
    const cplx disc = std::sqrt(qb * qb - 4.0 * qa * qc);
    const cplx big = std::abs(-qb + disc) > std::abs(-qb - disc) ? -qb + disc : -qb - disc;
    roots.push_back(big / (2.0 * qa));
    roots.push_back(2.0 * qc / big);
  }
  double best = std::numeric_limits<double>::infinity();
  cplx Sp{}, Sq{}, Sr{};
  for (cplx cand : roots) {
    const cplx sp = kp / (1.0 - A1 + A1 * kp * cand);
    const cplx sr = B1 / (cand - kp + B1 * kp);
    const double res = std::abs((sr - kp) * cand - B2 * (1.0 - kp * cand));
    if (res < best) {
      best = res;
      Sp = sp;
      Sq = cand;
      Sr = sr;
    }
  }
  out.quadratic_residual = best;
  out.branch = branch;
  const auto& ix = branch.roots;
  const cplx sp = principal_root(Sp, N) * ctx.omega_pow(ix[0]);
  const cplx sq = principal_root(Sq, N) * ctx.omega_pow(ix[1]);
  const cplx sr = principal_root(Sr, N) * ctx.omega_pow(ix[2]);
  const cplx yp = principal_root((1.0 - kp * Sp) / k, N) * ctx.omega_pow(ix[3]);
  const cplx yq = principal_root((1.0 - kp * Sq) / k, N) * ctx.omega_pow(ix[4]);
  const cplx xp = a1 * yq;
  const cplx xq = a2 * yp;
  const cplx yr = xq * sq * sr / b1;
  const cplx xr = b2 * yq / (sr * sq);
  out.p = make_point(out.modulus, xp, yp, sp);
  out.q = make_point(out.modulus, xq, yq, sq);
  out.r = make_point(out.modulus, xr, yr, sr);
  out.curve_residual = std::max({validate_point(out.p, ctx), validate_point(out.q, ctx),
                                 validate_point(out.r, ctx)});
  return out;
}

// Loose gate: the closed-form solve loses a few digits near double roots, and
// the report residuals decide acceptance anyway.
constexpr double kTripleCurveGate = 1e-8;

TripleSearchResult search_triple(cplx lambda, cplx mu, cplx exp_P, cplx exp_Q, double tol,
                                 const RootContext& ctx) {
  const int N = ctx.N();
  TripleSearchResult out;
  const int combos = N * N * N * N * N;
  for (int sign_combo = 0; sign_combo < 4; ++sign_combo) {
    const int sl = (sign_combo & 1) ? -1 : 1;
    const int sm = (sign_combo & 2) ? -1 : 1;
    for (int c = 0; c < combos; ++c) {
      TripleBranch branch;
      branch.sign_lambda = sl;
      branch.sign_mu = sm;
      int rest = c;
      for (int i = 4; i >= 0; --i) {
        branch.roots[i] = rest % N;
        rest /= N;
      }
      ++out.branches_tried;
      try {
        auto triple = triple_from_params(lambda, mu, exp_P, exp_Q, branch, ctx);
        if (triple.curve_residual > kTripleCurveGate) continue;
        auto params = params_from_rapidities(triple.modulus, triple.p, triple.q, triple.r, sl, sm, ctx);
        auto report = correspondence_residuals(params.params, triple.modulus, triple.p, triple.q,
                                               triple.r, ctx);
        if (report.max_factor_residual < tol) {
          out.triple = triple;
          out.params = params;
          out.report = report;
          return out;
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kDegenerateModulus) throw;
      }
    }
  }
  fail(ErrorCode::kSearchFailed, "no branch satisfies the factor identifications");
}

cplx background_modulus(cplx alpha, cplx beta, cplx kappa, const RootContext& ctx) {
  const int N = ctx.N();
  const cplx a = ipow(alpha, N);
  const cplx b = ipow(beta, N);
  const cplx K = ipow(kappa, 2 * N);
  const cplx den = (1.0 + a * K) * (1.0 + a / K);
  if (std::abs(den) < 1e-14) fail(ErrorCode::kDegenerateModulus, "background modulus is infinite");
  return (1.0 - a * b) * (1.0 - a / b) / den;
}

double background_relations_residual(cplx alpha, cplx beta, cplx kappa, const CurvePoint& p,
                                     const CurvePoint& q, const RootContext& ctx) {
  const cplx wmh = 1.0 / ctx.omega_half();
  const cplx k2 = kappa * kappa;
  const cplx ss = p.s * q.s;
  return std::max({rel(wmh * beta / k2, p.x / q.y), rel(wmh * beta * k2, q.x / p.y),
                   rel(wmh * alpha / k2, p.x * ss / q.y), rel(wmh * alpha * k2, q.x * ss / p.y)});
}

BackgroundResult background_correspondence(cplx alpha, cplx beta, cplx kappa, double tol,
                                           const RootContext& ctx) {
  if (alpha == cplx{} || beta == cplx{} || kappa == cplx{}) {
    fail(ErrorCode::kInvalidArgument, "alpha, beta, kappa must be nonzero");
  }
  const int N = ctx.N();
  const cplx k2 = background_modulus(alpha, beta, kappa, ctx);
  if (std::abs(k2) < 1e-14) fail(ErrorCode::kDegenerateModulus, "background modulus vanishes");
  const cplx k = std::sqrt(k2);
  const cplx wmh = 1.0 / ctx.omega_half();
  const cplx kap2 = kappa * kappa;
  const cplx a = ipow(wmh * beta / kap2, N);
  const cplx c = ipow(alpha / beta, N);
  BackgroundResult out;
  double best = std::numeric_limits<double>::infinity();
  for (int sign : {1, -1}) {
    const cplx kp = static_cast<double>(sign) * std::sqrt(1.0 - k2);
    const CurveModulus mod = make_modulus(k, kp);
    if (std::abs(1.0 - a) < 1e-14) continue;
    const cplx Sp = kp * (1.0 - a * c) / (1.0 - a);
    for (int isp = 0; isp < N; ++isp) {
      const cplx sp = principal_root(Sp, N) * ctx.omega_pow(isp);
      const cplx sq = alpha / beta / sp;
      for (int iyp = 0; iyp < N; ++iyp) {
        const cplx yp = principal_root((1.0 - kp * Sp) / k, N) * ctx.omega_pow(iyp);
        for (int iyq = 0; iyq < N; ++iyq) {
          ++out.branches_tried;
          const cplx yq = principal_root((1.0 - kp * ipow(sq, N)) / k, N) * ctx.omega_pow(iyq);
          const CurvePoint p = make_point(mod, wmh * beta / kap2 * yq, yp, sp);
          const CurvePoint q = make_point(mod, wmh * beta * kap2 * yp, yq, sq);
          const double res = std::max({background_relations_residual(alpha, beta, kappa, p, q, ctx),
                                       validate_point(p, ctx), validate_point(q, ctx)});
          if (res < best) {
            best = res;
            out.modulus = mod;
            out.p = p;
            out.q = q;
            out.residual = res;
            out.kprime_sign = sign;
            out.roots = {isp, iyp, iyq};
          }
          if (res < tol) return out;
        }
      }
    }
  }
  fail(ErrorCode::kSearchFailed,
       "no branch satisfies the background relations (best residual " + std::to_string(best) + ")");
}

}  // namespace cpsg
