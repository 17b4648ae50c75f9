#include "cpsg/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <numbers>

#include "cpsg/error.hpp"
#include "cpsg/rng.hpp"
#include "cpsg/weights.hpp"

namespace cpsg {

namespace {

DenseOperator swap_operator() {
  DenseOperator p = DenseOperator::zero(4);
  p(0, 0) = p(3, 3) = 1.0;
  p(1, 2) = p(2, 1) = 1.0;
  return p;
}

std::size_t checked_power(int base, int exponent, std::size_t cap, const char* what) {
  std::size_t v = 1;
  for (int i = 0; i < exponent; ++i) {
    v *= static_cast<std::size_t>(base);
    if (v > cap) {
      fail(ErrorCode::kCapExceeded, std::string(what) + ": dimension exceeds cap " + std::to_string(cap));
    }
  }
  return v;
}

// Operator with one nonzero entry per column: column j has value val[j] in row row[j].
struct ColumnMonomial {
  std::vector<std::size_t> row;
  std::vector<cplx> val;
};

ColumnMonomial embed_monomial(const DenseOperator& site_op, std::size_t site, std::size_t sites) {
  const std::size_t d = site_op.dim();
  std::vector<std::size_t> row_of(d);
  std::vector<cplx> val_of(d);
  for (std::size_t b = 0; b < d; ++b) {
    bool found = false;
    for (std::size_t a = 0; a < d; ++a) {
      if (site_op(a, b) != cplx{}) {
        if (found) fail(ErrorCode::kNotMonomial, "site operator is not monomial");
        row_of[b] = a;
        val_of[b] = site_op(a, b);
        found = true;
      }
    }
    if (!found) fail(ErrorCode::kSingular, "site operator has a zero column");
  }
  std::size_t stride = 1;
  for (std::size_t i = site + 1; i < sites; ++i) stride *= d;
  std::size_t total = 1;
  for (std::size_t i = 0; i < sites; ++i) total *= d;
  ColumnMonomial m;
  m.row.resize(total);
  m.val.resize(total);
  for (std::size_t j = 0; j < total; ++j) {
    const std::size_t b = (j / stride) % d;
    m.row[j] = j - b * stride + row_of[b] * stride;
    m.val[j] = val_of[b];
  }
  return m;
}

// acc += A * S * scale
void add_times_monomial(Eigen::MatrixXcd& acc, const Eigen::MatrixXcd& A, const ColumnMonomial& S,
                        cplx scale) {
  const auto n = static_cast<Eigen::Index>(S.row.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    acc.col(j) += (scale * S.val[j]) * A.col(static_cast<Eigen::Index>(S.row[j]));
  }
}

}  // namespace

DenseOperator six_vertex_r(cplx lambda, cplx q) {
  DenseOperator r = DenseOperator::zero(4);
  const cplx a = lambda * q - 1.0 / (lambda * q);
  const cplx b = lambda - 1.0 / lambda;
  const cplx c = q - 1.0 / q;
  r(0, 0) = r(3, 3) = a;
  r(1, 1) = r(2, 2) = b;
  r(1, 2) = r(2, 1) = c;
  return r;
}

double ybe_a_residual(cplx lambda, cplx mu, cplx q) {
  const DenseOperator I2 = DenseOperator::identity(2);
  const DenseOperator P23 = kron(I2, swap_operator());
  auto R12 = [&](cplx l) { return kron(six_vertex_r(l, q), I2); };
  auto R23 = [&](cplx l) { return kron(I2, six_vertex_r(l, q)); };
  auto R13 = [&](cplx l) { return P23 * R12(l) * P23; };
  const DenseOperator lhs = R12(lambda) * R13(lambda * mu) * R23(mu);
  const DenseOperator rhs = R23(mu) * R13(lambda * mu) * R12(lambda);
  return relative_residual(lhs, rhs);
}

DenseOperator l_operator(cplx lambda, const DenseOperator& U, const DenseOperator& V) {
  const std::size_t d = U.dim();
  if (V.dim() != d) fail(ErrorCode::kDimensionMismatch, "L-operator: U and V differ in dimension");
  const DenseOperator Ui = U.inverse();
  const DenseOperator Vi = V.inverse();
  Eigen::MatrixXcd m(2 * d, 2 * d);
  const auto n = static_cast<Eigen::Index>(d);
  m.block(0, 0, n, n) = U.matrix();
  m.block(0, n, n, n) = -lambda * V.matrix();
  m.block(n, 0, n, n) = lambda * Vi.matrix();
  m.block(n, n, n, n) = Ui.matrix();
  return DenseOperator(std::move(m));
}

double ybe_b_residual(cplx lambda, cplx mu, cplx q, const DenseOperator& U, const DenseOperator& V) {
  const std::size_t d = U.dim();
  const DenseOperator I2 = DenseOperator::identity(2);
  const DenseOperator Id = DenseOperator::identity(d);
  const DenseOperator P12 = kron(swap_operator(), Id);
  const DenseOperator R12 = kron(six_vertex_r(lambda, q), Id);
  auto L2 = [&](cplx l) { return kron(I2, l_operator(l, U, V)); };
  auto L1 = [&](cplx l) { return P12 * L2(l) * P12; };
  const DenseOperator lhs = R12 * L1(lambda * mu) * L2(mu);
  const DenseOperator rhs = L2(mu) * L1(lambda * mu) * R12;
  return relative_residual(lhs, rhs);
}

WeylPair weyl_pair(const RootContext& ctx) {
  const int N = ctx.N();
  // q0 = exp(2 pi i (N+1) / 2N); order N for odd N, 2N for even N.
  const int d = (N % 2 == 1) ? N : 2 * N;
  const int m = (N % 2 == 1) ? (N + 1) / 2 : N + 1;
  WeylPair w;
  w.dim = d;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    const long long e = (static_cast<long long>(m) * a) % d;
    u(a, a) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / d);
    v((a + 1) % d, a) = 1.0;
  }
  w.U = DenseOperator(std::move(u));
  w.V = DenseOperator(std::move(v));
  return w;
}

SixVertexChain make_chain(int L, cplx kappa, std::vector<cplx> c, std::vector<cplx> d,
                          const RootContext& ctx) {
  if (L < 1) fail(ErrorCode::kInvalidArgument, "chain needs L >= 1");
  const auto sites = static_cast<std::size_t>(2 * L);
  if (c.size() != sites || d.size() != sites) {
    fail(ErrorCode::kDimensionMismatch, "chain scalings must have 2L entries");
  }
  for (std::size_t i = 0; i < sites; ++i) {
    if (c[i] == cplx{} || d[i] == cplx{}) fail(ErrorCode::kInvalidArgument, "chain scalings must be nonzero");
  }
  if (kappa == cplx{}) fail(ErrorCode::kInvalidArgument, "kappa must be nonzero");
  SixVertexChain chain;
  chain.L = L;
  chain.kappa = kappa;
  chain.q = ctx.q0();
  chain.c = std::move(c);
  chain.d = std::move(d);
  chain.base = weyl_pair(ctx);
  checked_power(chain.base.dim, 2 * L, kMaxDenseDim, "chain_transfer");
  return chain;
}

std::vector<cplx> chain_w_scalars(const SixVertexChain& chain) {
  const std::size_t n = chain.c.size();
  std::vector<cplx> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    g[i] = chain.c[i] / chain.d[i] * chain.c[j] * chain.d[j];
  }
  return g;
}

SixVertexChain gauge_equivalent_chain(const SixVertexChain& chain, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = chain.c.size();
  const auto g = chain_w_scalars(chain);
  auto draw = [&rng]() { return std::polar(std::exp(rng.uniform(-0.3, 0.3)), rng.uniform(-3.0, 3.0)); };
  std::vector<cplx> c2(n), d2(n);
  cplx prod_c{1.0, 0.0}, prod_c2{1.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    c2[i] = draw();
    prod_c *= chain.c[i];
    prod_c2 *= c2[i];
  }
  // Closing the recursion around the ring needs prod c2 = prod c.
  c2[0] *= prod_c / prod_c2;
  d2[0] = draw();
  for (std::size_t i = 0; i + 1 < n; ++i) d2[i + 1] = g[i] * d2[i] / (c2[i] * c2[i + 1]);
  SixVertexChain out = chain;
  out.c = std::move(c2);
  out.d = std::move(d2);
  return out;
}

DenseOperator chain_transfer(const SixVertexChain& chain, cplx lambda) {
  const std::size_t sites = chain.c.size();
  const std::size_t D = checked_power(chain.base.dim, static_cast<int>(sites), kMaxDenseDim, "chain_transfer");
  const DenseOperator Ui = chain.base.U.inverse();
  const DenseOperator Vi = chain.base.V.inverse();
  const auto n = static_cast<Eigen::Index>(D);
  Eigen::MatrixXcd M[2][2] = {{Eigen::MatrixXcd::Identity(n, n), Eigen::MatrixXcd::Zero(n, n)},
                              {Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Identity(n, n)}};
  for (std::size_t i = 0; i < sites; ++i) {
    const cplx l = (i % 2 == 0) ? lambda * chain.kappa : lambda / chain.kappa;
    const ColumnMonomial u = embed_monomial(chain.base.U, i, sites);
    const ColumnMonomial v = embed_monomial(chain.base.V, i, sites);
    const ColumnMonomial vi = embed_monomial(Vi, i, sites);
    const ColumnMonomial ui = embed_monomial(Ui, i, sites);
    const cplx c = chain.c[i], d = chain.d[i];
    // L = [[c U, -l d V], [l V^-1 / d, U^-1 / c]]
    Eigen::MatrixXcd next[2][2];
    for (int a = 0; a < 2; ++a) {
      next[a][0] = Eigen::MatrixXcd::Zero(n, n);
      next[a][1] = Eigen::MatrixXcd::Zero(n, n);
      add_times_monomial(next[a][0], M[a][0], u, c);
      add_times_monomial(next[a][0], M[a][1], vi, l / d);
      add_times_monomial(next[a][1], M[a][0], v, -l * d);
      add_times_monomial(next[a][1], M[a][1], ui, 1.0 / c);
    }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) M[a][b] = std::move(next[a][b]);
  }
  return DenseOperator(M[0][0] + M[1][1]);
}

double commutator_residual(const DenseOperator& a, const DenseOperator& b) {
  return relative_residual(a * b, b * a);
}

double gauge_invariance_residual(const SixVertexChain& a, const SixVertexChain& b, cplx lambda) {
  const auto ga = chain_w_scalars(a);
  const auto gb = chain_w_scalars(b);
  for (std::size_t i = 0; i < ga.size(); ++i) {
    if (std::abs(ga[i] - gb[i]) > 1e-12 * std::max(1.0, std::abs(ga[i]))) {
      fail(ErrorCode::kInvalidArgument, "chains do not share the site combinations w_n");
    }
  }
  return relative_residual(chain_transfer(a, lambda), chain_transfer(b, lambda));
}

double chain_interpolation_residual(const SixVertexChain& chain, const std::vector<cplx>& nodes,
                                    cplx fresh) {
  std::vector<DenseOperator> values;
  values.reserve(nodes.size());
  for (cplx l : nodes) values.push_back(chain_transfer(chain, l));
  const cplx zf = fresh * fresh;
  DenseOperator interp = DenseOperator::zero(values.front().dim());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const cplx zi = nodes[i] * nodes[i];
    cplx w{1.0, 0.0};
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (j == i) continue;
      const cplx zj = nodes[j] * nodes[j];
      if (zi == zj) fail(ErrorCode::kInvalidArgument, "interpolation nodes must have distinct squares");
      w *= (zf - zj) / (zi - zj);
    }
    interp = interp + values[i] * w;
  }
  return relative_residual(chain_transfer(chain, fresh), interp);
}

std::vector<int> decode_spins(std::size_t index, int N, int L) {
  std::vector<int> s(L);
  for (int i = L - 1; i >= 0; --i) {
    s[i] = static_cast<int>(index % N);
    index /= N;
  }
  return s;
}

RowTransfer row_transfer(const CurvePoint& p, const CurvePoint& p_prime, const CurvePoint& q, int L,
                         const RootContext& ctx) {
  if (L < 1) fail(ErrorCode::kInvalidArgument, "row transfer needs L >= 1");
  const int N = ctx.N();
  const std::size_t D = checked_power(N, L, kMaxDenseDim, "row_transfer");
  const auto pq = weight_tables(p, q, NormMode::kUnit, ctx);
  const auto ppq = weight_tables(p_prime, q, NormMode::kUnit, ctx);
  std::vector<std::vector<int>> cfg(D);
  for (std::size_t i = 0; i < D; ++i) cfg[i] = decode_spins(i, N, L);
  RowTransfer out{DenseOperator::zero(D), DenseOperator::zero(D)};
  for (std::size_t i = 0; i < D; ++i) {
    const auto& s = cfg[i];
    for (std::size_t j = 0; j < D; ++j) {
      const auto& t = cfg[j];
      cplx a{1.0, 0.0}, b{1.0, 0.0};
      for (int J = 0; J < L; ++J) {
        const int Jn = (J + 1) % L;
        a *= pq.w(s[J] - t[J]) * ppq.wbar(s[Jn] - t[J]);
        b *= pq.wbar(s[J] - t[J]) * ppq.w(s[J] - t[Jn]);
      }
      out.T(i, j) = a;
      out.That(i, j) = b;
    }
  }
  return out;
}

DenseOperator u_quant(const CurvePoint& p, const CurvePoint& q, int L, const RootContext& ctx) {
  if (L < 1) fail(ErrorCode::kInvalidArgument, "u_quant needs L >= 1");
  const int N = ctx.N();
  const std::size_t D = checked_power(N, L, kMaxDenseDim, "u_quant");
  const auto w = weight_tables(p, q, NormMode::kUnit, ctx);
  std::vector<std::vector<int>> cfg(D);
  for (std::size_t i = 0; i < D; ++i) cfg[i] = decode_spins(i, N, L);
  DenseOperator U = DenseOperator::zero(D);
  for (std::size_t j = 0; j < D; ++j) {
    const auto& b = cfg[j];
    cplx ring{1.0, 0.0};
    for (int n = 0; n < L; ++n) ring *= w.w(b[(n + 1) % L] - b[n]);
    for (std::size_t i = 0; i < D; ++i) {
      const auto& a = cfg[i];
      cplx v = ring;
      for (int n = 0; n < L; ++n) v *= w.wbar(a[n] - b[n]);
      U(i, j) = v;
    }
  }
  return U;
}

DenseOperator u_quant_operator_form(const CurvePoint& p, const CurvePoint& q, int L,
                                    const RootContext& ctx) {
  if (L < 1) fail(ErrorCode::kInvalidArgument, "u_quant needs L >= 1");
  const int N = ctx.N();
  const std::size_t D = checked_power(N, L, kMaxDenseDim, "u_quant");
  const auto table = weight_tables(p, q, NormMode::kUnit, ctx);
  const auto mats = weight_matrices(table, ctx);
  DenseOperator fbar = mats.Fbar_x;
  for (int n = 1; n < L; ++n) fbar = kron(fbar, mats.Fbar_x);
  const auto cs = clock_shift(ctx);
  const DenseOperator zinv = cs.Z.inverse();
  std::vector<cplx> diag(D, cplx{1.0, 0.0});
  for (int n = 0; n < L; ++n) {
    const DenseOperator arg = embed(zinv, n, L) * embed(cs.Z, (n + 1) % L, L);
    for (std::size_t i = 0; i < D; ++i) diag[i] *= F_value(table, arg(i, i), ctx);
  }
  return fbar * DenseOperator::diagonal(diag);
}

cplx partition_trace(const DenseOperator& op, unsigned M) {
  if (M < 1) fail(ErrorCode::kInvalidArgument, "partition trace needs M >= 1");
  return op.power(M).trace();
}

DenseOperator column_transfer(const CurvePoint& p, const CurvePoint& q, int M, const RootContext& ctx) {
  if (M < 1) fail(ErrorCode::kInvalidArgument, "column transfer needs M >= 1");
  const int N = ctx.N();
  const std::size_t D = checked_power(N, M, kMaxDenseDim, "column_transfer");
  const auto w = weight_tables(p, q, NormMode::kUnit, ctx);
  std::vector<std::vector<int>> cfg(D);
  for (std::size_t i = 0; i < D; ++i) cfg[i] = decode_spins(i, N, M);
  DenseOperator V = DenseOperator::zero(D);
  for (std::size_t i = 0; i < D; ++i) {
    const auto& c = cfg[i];
    cplx col{1.0, 0.0};
    for (int t = 0; t < M; ++t) col *= w.wbar(c[t] - c[(t + 1) % M]);
    for (std::size_t j = 0; j < D; ++j) {
      const auto& cp = cfg[j];
      cplx v = col;
      for (int t = 0; t < M; ++t) v *= w.w(cp[t] - c[t]);
      V(i, j) = v;
    }
  }
  return V;
}

cplx brute_force_partition(const CurvePoint& p, const CurvePoint& q, int L, int M,
                           const RootContext& ctx) {
  if (L < 1 || M < 1) fail(ErrorCode::kInvalidArgument, "lattice needs L, M >= 1");
  const int N = ctx.N();
  const std::size_t configs = checked_power(N, L * M, kMaxBruteForceConfigs, "brute_force_partition");
  const auto w = weight_tables(p, q, NormMode::kUnit, ctx);
  std::vector<int> a(static_cast<std::size_t>(L) * M, 0);  // a[t * L + n]
  auto spin = [&](int t, int n) { return a[static_cast<std::size_t>((t % M) * L + (n % L))]; };
  cplx total{0.0, 0.0};
  for (std::size_t c = 0; c < configs; ++c) {
    cplx v{1.0, 0.0};
    for (int t = 0; t < M; ++t) {
      for (int n = 0; n < L; ++n) {
        v *= w.wbar(spin(t, n) - spin(t + 1, n)) * w.w(spin(t + 1, n + 1) - spin(t + 1, n));
      }
    }
    total += v;
    for (auto& digit : a) {
      if (++digit < N) break;
      digit = 0;
    }
  }
  return total;
}

PartitionValue partition_function(const CurvePoint& p, const CurvePoint& q, int L, int M,
                                  const RootContext& ctx) {
  if (L < 1 || M < 1) fail(ErrorCode::kInvalidArgument, "lattice needs L, M >= 1");
  constexpr std::size_t kDenseRoute = 1024;
  const int N = ctx.N();
  auto fits = [N](int e) {
    std::size_t v = 1;
    for (int i = 0; i < e; ++i) {
      v *= static_cast<std::size_t>(N);
      if (v > kDenseRoute) return false;
    }
    return true;
  };
  if (fits(L)) return {partition_trace(u_quant(p, q, L, ctx), static_cast<unsigned>(M)), "row"};
  if (fits(M)) return {partition_trace(column_transfer(p, q, M, ctx), static_cast<unsigned>(L)), "column"};
  fail(ErrorCode::kCapExceeded, "partition function: both N^L and N^M exceed 1024");
}

}  // namespace cpsg
