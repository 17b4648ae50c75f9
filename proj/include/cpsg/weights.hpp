#pragma once

#include <vector>

#include "cpsg/core_algebra.hpp"
#include "cpsg/curve.hpp"

namespace cpsg {

enum class NormMode {
  kUnit,            // W(0) = Wbar(0) = 1
  kStrNormalized,   // prod_n W(n) = 1 and prod_n Wbar_f(n) = 1, principal roots
};

/// Boltzmann weights of one rapidity pair and their Fourier transforms.
/// All tables are indexed by spin difference reduced mod N.
struct WeightTable {
  CurvePoint p;
  CurvePoint q;
  std::vector<cplx> W;
  std::vector<cplx> Wbar;
  std::vector<cplx> Wbar_f;  // sum_a Wbar(a) omega^{n a}
  std::vector<cplx> W_f;     // sum_a W(a) omega^{n a}
  NormMode norm_mode = NormMode::kUnit;

  cplx w(long long n) const { return W[reduce(n)]; }
  cplx wbar(long long n) const { return Wbar[reduce(n)]; }

 private:
  std::size_t reduce(long long n) const {
    const auto size = static_cast<long long>(W.size());
    long long r = n % size;
    return static_cast<std::size_t>(r < 0 ? r + size : r);
  }
};

WeightTable weight_tables(const CurvePoint& p, const CurvePoint& q, NormMode mode,
                          const RootContext& ctx);

/// Same tables with explicit normalizations W(0) = w0, Wbar(0) = wbar0.
WeightTable weight_tables_normalized(const CurvePoint& p, const CurvePoint& q, cplx w0, cplx wbar0,
                                     const RootContext& ctx);

/// Ratios W(n)/W(0) and Wbar(n)/Wbar(0) from the product formulas for any n >= 0
/// (no reduction mod N).
cplx weight_ratio(const CurvePoint& p, const CurvePoint& q, int n, const RootContext& ctx);
cplx weight_bar_ratio(const CurvePoint& p, const CurvePoint& q, int n, const RootContext& ctx);

/// Wbar_f(n)/Wbar_f(0) from the closed product form
///   prod_{j=1}^n (y_q - omega^j x_p s_p s_q) / (y_p - omega^j x_q s_p s_q).
cplx fourier_bar_ratio(const CurvePoint& p, const CurvePoint& q, int n, const RootContext& ctx);

/// max_n |ratio(n + N) - ratio(n)| / |ratio(n)| over both weights.
double periodicity_residual(const CurvePoint& p, const CurvePoint& q, const RootContext& ctx);

/// max_n |DFT(Wbar)(n) - Wbar_f(n)| / max|Wbar_f| for the closed-form Wbar_f.
double fourier_residual(const WeightTable& table, const RootContext& ctx);

/// f_pq^N = prod_j Wbar_f(j) / W(j).
cplx f_power_n(const WeightTable& table);

struct StarTriangleResult {
  double residual = 0.0;      // max |LHS - R RHS| / max |LHS| over all N^3 spin triples
  cplx R_pqr{1.0, 0.0};       // chosen N-th root of R_pqr^N
  cplx R_pqr_power_n{1.0, 0.0};
  int root_index = 0;         // R = omega^{root_index} * principal root of R^N
  double ratio_check = 0.0;   // |LHS/RHS - R| / |R| at a second spin triple
  double power_check = 0.0;   // |(LHS/RHS)^N - R^N| / |R^N| at the reference triple
};

/// Evaluates sum_d Wbar_qr(b-d) W_pr(a-d) Wbar_pq(d-c) against
/// R_pqr W_pq(a-b) Wbar_pr(b-c) W_qr(a-c) with unit normalization.
StarTriangleResult star_triangle_residual(const CurvePoint& p, const CurvePoint& q,
                                          const CurvePoint& r, const RootContext& ctx);

struct WeightMatrices {
  DenseOperator F_zinv;   // F(p,q;Z^{-1}) = diag(W(-a))
  DenseOperator F_z;      // F(p,q;Z) = diag(W(a))
  DenseOperator Fbar_x;   // Fbar(p,q;X) = sum_k Wbar(k) X^k
  double recurrence_residual = 0.0;
};

WeightMatrices weight_matrices(const WeightTable& table, const RootContext& ctx);

/// F(p,q;Y) = N^{-1} sum_b W_f(-b) Y^b and Fbar(p,q;Y) = sum_a Wbar(a) Y^a.
cplx F_value(const WeightTable& table, cplx y, const RootContext& ctx);
cplx Fbar_value(const WeightTable& table, cplx y, const RootContext& ctx);

/// Max relative deviation of both first-order recurrences at Y = omega^n.
double recurrence_residual(const WeightTable& table, const RootContext& ctx);

struct MatrixStrResult {
  double residual = 0.0;
  cplx R_pqr{1.0, 0.0};
};

/// F(p,q;Z^-1) Fbar(p,r;X) F(q,r;Z^-1) against R^-1 Fbar(q,r;X) F(p,r;Z^-1) Fbar(p,q;X).
MatrixStrResult str_matrix_residual(const CurvePoint& p, const CurvePoint& q, const CurvePoint& r,
                                    const RootContext& ctx);

/// Relative residual of the product form of prod_j Wbar_f(j).
double product_identity_residual(const CurvePoint& p, const CurvePoint& q, const RootContext& ctx);

}  // namespace cpsg
