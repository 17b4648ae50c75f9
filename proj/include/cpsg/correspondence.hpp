#pragma once

#include <array>
#include <optional>

#include "cpsg/curve.hpp"
#include "cpsg/semiclassical.hpp"

namespace cpsg {

/// Parameters (lambda, mu, P, Q) read off a rapidity triple, with the sign
/// choices for lambda = +-sqrt(t_q/t_p) and mu = +-sqrt(t_r/t_q).
struct CurveParams {
  SemiclassicalParams params;
  int sign_lambda = 1;
  int sign_mu = 1;
};

CurveParams params_from_rapidities(const CurveModulus& k, const CurvePoint& p, const CurvePoint& q,
                                   const CurvePoint& r, int sign_lambda, int sign_mu,
                                   const RootContext& ctx);

/// k^2 as a rational function of A, B, C, D built from (lambda, mu, e^P, e^Q).
cplx modulus_from_params(cplx lambda, cplx mu, cplx exp_P, cplx exp_Q, const RootContext& ctx);

struct CorrespondenceReport {
  double first_four_residual = 0.0;
  double square_relations_residual = 0.0;  // e^{2Q}, e^{2P} and lambda^2, mu^2 displays
  double modulus_residual = 0.0;
  double last_eight_residual = 0.0;
  // Third pair read literally, with e^{P'} on the right-hand relation.
  double last_eight_printed_residual = 0.0;
  std::array<double, 6> factor_residuals{};
  double max_factor_residual = 0.0;
  cplx R_pqr_value{1.0, 0.0};
  double R_pqr_residual = 0.0;
  double twisted_ybe_residual = 0.0;
  double str_matrix_residual = 0.0;
};

/// The factor identifications compare weight tables with rbar values on the
/// spin orbit; they are only meaningful on the branch where rbar is the
/// continuation from positive parameters.
CorrespondenceReport correspondence_residuals(const SemiclassicalParams& params,
                                              const CurveModulus& k, const CurvePoint& p,
                                              const CurvePoint& q, const CurvePoint& r,
                                              const RootContext& ctx);

/// Root-index choices for the inverse construction: N-th roots of s_p, s_q,
/// s_r, y_p, y_q, each as an omega power.
struct TripleBranch {
  std::array<int, 5> roots{};
  int sign_lambda = 1;
  int sign_mu = 1;
};

struct CurveTriple {
  CurveModulus modulus;
  CurvePoint p;
  CurvePoint q;
  CurvePoint r;
  TripleBranch branch;
  double curve_residual = 0.0;
  double quadratic_residual = 0.0;
};

/// Builds (k, p, q, r) satisfying the four defining relations for given
/// (lambda, mu, e^P, e^Q) and root-index choice.
CurveTriple triple_from_params(cplx lambda, cplx mu, cplx exp_P, cplx exp_Q,
                               const TripleBranch& branch, const RootContext& ctx);

struct TripleSearchResult {
  CurveTriple triple;
  CurveParams params;
  CorrespondenceReport report;
  int branches_tried = 0;
};

/// Enumerates branches starting from the all-principal one and returns the
/// first whose factor identifications pass `tol`; kSearchFailed otherwise.
TripleSearchResult search_triple(cplx lambda, cplx mu, cplx exp_P, cplx exp_Q, double tol,
                                 const RootContext& ctx);

/// k^2 of the stationary-background curve.
cplx background_modulus(cplx alpha, cplx beta, cplx kappa, const RootContext& ctx);

struct BackgroundResult {
  CurveModulus modulus;
  CurvePoint p;
  CurvePoint q;
  double residual = 0.0;
  int kprime_sign = 1;
  std::array<int, 3> roots{};  // s_p, y_p, y_q root indices
  int branches_tried = 0;
};

/// Max relative residual of the four background relations.
double background_relations_residual(cplx alpha, cplx beta, cplx kappa, const CurvePoint& p,
                                     const CurvePoint& q, const RootContext& ctx);

/// Finds p, q on the background curve; enumerates the sign of k' and the root
/// indices and returns the first branch with residual below `tol`.
BackgroundResult background_correspondence(cplx alpha, cplx beta, cplx kappa, double tol,
                                           const RootContext& ctx);

}  // namespace cpsg
