#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpsg/core_algebra.hpp"
#include "cpsg/curve.hpp"

namespace cpsg {

/// 4x4 six-vertex R-matrix on C^2 (x) C^2, basis index 2i + j.
DenseOperator six_vertex_r(cplx lambda, cplx q);

/// R12(l) R13(lm) R23(m) against R23(m) R13(lm) R12(l).
double ybe_a_residual(cplx lambda, cplx mu, cplx q);

/// L(lambda) = [[U, -lambda V], [lambda V^-1, U^-1]] on C^2 (x) W,
/// auxiliary index most significant.
DenseOperator l_operator(cplx lambda, const DenseOperator& U, const DenseOperator& V);

/// R12(l) L1(lm) L2(m) against L2(m) L1(lm) R12(l).
double ybe_b_residual(cplx lambda, cplx mu, cplx q, const DenseOperator& U, const DenseOperator& V);

/// Clock/shift realization of U V = q0 V U; the site dimension is the
/// multiplicative order of q0.
struct WeylPair {
  DenseOperator U;
  DenseOperator V;
  int dim = 0;
};

WeylPair weyl_pair(const RootContext& ctx);

/// Periodic chain of 2L sites with U_i = c_i U0, V_i = d_i V0.
struct SixVertexChain {
  int L = 0;
  cplx kappa;
  cplx q;
  std::vector<cplx> c;
  std::vector<cplx> d;
  WeylPair base;
};

SixVertexChain make_chain(int L, cplx kappa, std::vector<cplx> c, std::vector<cplx> d,
                          const RootContext& ctx);

/// Site combinations w_n = U_n V_n^-1 U_{n+1} V_{n+1} as scalars times the base
/// operator U0 V0^-1 U0 V0.
std::vector<cplx> chain_w_scalars(const SixVertexChain& chain);

/// A chain with different site scalings but the same w_n.
SixVertexChain gauge_equivalent_chain(const SixVertexChain& chain, std::uint64_t seed);

/// Auxiliary trace of L_0(lambda kappa) L_1(lambda/kappa) ... L_{2L-1}(lambda/kappa).
DenseOperator chain_transfer(const SixVertexChain& chain, cplx lambda);

double commutator_residual(const DenseOperator& a, const DenseOperator& b);

double gauge_invariance_residual(const SixVertexChain& a, const SixVertexChain& b, cplx lambda);

/// Interpolates t as a polynomial in lambda^2 of degree 2L through 2L+1
/// nodes and returns the relative deviation at `fresh`.
double chain_interpolation_residual(const SixVertexChain& chain, const std::vector<cplx>& nodes,
                                    cplx fresh);

/// Spin configuration index with site 0 as the most significant digit.
std::vector<int> decode_spins(std::size_t index, int N, int L);

struct RowTransfer {
  DenseOperator T;
  DenseOperator That;
};

RowTransfer row_transfer(const CurvePoint& p, const CurvePoint& p_prime, const CurvePoint& q, int L,
                         const RootContext& ctx);

/// Evolution operator from the weight-product element formula.
DenseOperator u_quant(const CurvePoint& p, const CurvePoint& q, int L, const RootContext& ctx);

/// Same operator as prod_n Fbar(p,q;X_n) prod_n F(p,q;Z_n^-1 Z_{n+1}).
DenseOperator u_quant_operator_form(const CurvePoint& p, const CurvePoint& q, int L,
                                    const RootContext& ctx);

cplx partition_trace(const DenseOperator& op, unsigned M);

/// Column-to-column transfer matrix of the L x M lattice; Tr(V^L) = Tr(U^M).
DenseOperator column_transfer(const CurvePoint& p, const CurvePoint& q, int M,
                              const RootContext& ctx);

/// Direct sum of the weight product over all N^{LM} spin configurations.
cplx brute_force_partition(const CurvePoint& p, const CurvePoint& q, int L, int M,
                           const RootContext& ctx);

inline constexpr std::size_t kMaxBruteForceConfigs = std::size_t{1} << 16;

struct PartitionValue {
  cplx value;
  std::string route;  // "row" (Tr U^M) or "column" (Tr V^L)
};

/// Tr(U^M), through the dense row operator when N^L <= 1024 and through the
/// column transfer matrix otherwise.
PartitionValue partition_function(const CurvePoint& p, const CurvePoint& q, int L, int M,
                                  const RootContext& ctx);

}  // namespace cpsg
