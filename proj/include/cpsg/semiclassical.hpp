#pragma once

#include "cpsg/core_algebra.hpp"

namespace cpsg {

/// Side of approach for Li2 on its cut z in (1, inf).
enum class CutSide { kNone, kAbove, kBelow };

/// Principal-branch dilogarithm Li2(z) = -int_0^z log(1-t)/t dt.
/// Throws kBranchCut for real z > 1 unless a side is given.
cplx dilog(cplx z, CutSide side = CutSide::kNone);

/// H(a,b) = -1/2 { Li2(-ab) + Li2(-a/b) + 1/2 log^2 b + pi^2/6 }, so H(1,x) = 0.
cplx H(cplx a, cplx b);
/// N^{-2} H(a^N, b^N).
cplx Htilde(cplx a, cplx b, const RootContext& ctx);

/// Quantum factor of the R-matrix at a root of unity, principal fractional powers.
cplx rbar(cplx lambda, cplx x, const RootContext& ctx);

/// rbar(lambda, omega^n x) / rbar(lambda, x) from the closed product form.
cplx rbar_shift_ratio(cplx lambda, cplx x, int n, const RootContext& ctx);

/// |prod_j rbar(lambda, omega^j x) - 1|.
double rbar_product_residual(cplx lambda, cplx x, const RootContext& ctx);
/// max over n = 1..N-1 of the relative deviation of the shift ratio.
double rbar_shift_residual(cplx lambda, cplx x, const RootContext& ctx);

/// Rapidities lambda, mu, canonical variables P, Q and their twisted images.
/// The twisted values are fixed through their N-th powers; exp_* hold the
/// principal N-th roots.
struct SemiclassicalParams {
  cplx lambda;
  cplx mu;
  cplx P;
  cplx Q;
  cplx exp_P;
  cplx exp_Q;
  cplx expN_P_prime;
  cplx expN_Q_prime;
  cplx expN_P_dprime;
  cplx expN_Q_dprime;
  cplx exp_P_prime;
  cplx exp_Q_prime;
  cplx exp_P_dprime;
  cplx exp_Q_dprime;
  cplx P_prime;
  cplx Q_prime;
  cplx P_dprime;
  cplx Q_dprime;
};

SemiclassicalParams twisted_params(cplx lambda, cplx mu, cplx P, cplx Q, const RootContext& ctx);

struct TwistOverride {
  bool untwist_P_prime = false;
  bool untwist_Q_prime = false;
  bool untwist_P_dprime = false;
  bool untwist_Q_dprime = false;
};

/// Relative operator-norm residual of
///   rbar(l, e^Q Z^-1) rbar(lm, e^P' X) rbar(m, e^Q'' Z^-1)
///     = rbar(m, e^P X) rbar(lm, e^Q' Z^-1) rbar(l, e^P'' X).
/// `untwist` replaces chosen twisted parameters by e^P or e^Q.
double twisted_ybe_residual(const SemiclassicalParams& params, const RootContext& ctx,
                            const TwistOverride& untwist = {});

struct SaddlePoint {
  cplx x;
  cplx y;
  cplx x_dprime;
  cplx y_dprime;
  double consistency_residual = 0.0;  // x, y recomputed from (x'', y'')
};

SaddlePoint saddle_maps(cplx lambda, cplx mu, cplx x_p, cplx y_p);

/// Relative residual of applying the (x', y') -> (x'', y'') map twice.
double involution_residual(cplx lambda, cplx mu, cplx x_p, cplx y_p);

/// LHS - RHS of the twelve-term identity; inputs must be positive reals.
double twelve_term_difference(double lambda, double mu, double x_p, double y_p);

struct SubstitutionInvariants {
  double F0_residual = 0.0;
  cplx F1;
  double F1_residual = 0.0;  // relative
};

SubstitutionInvariants substitution_invariants(cplx lambda, cplx mu, cplx x_p, cplx y_p);

}  // namespace cpsg
