#include "cpsg/core_algebra.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cpsg/error.hpp"

namespace cpsg {

namespace {

cplx unit_phase(double turns) {
  // exp(2 pi i turns), with the quarter turns hit exactly.
  const double t = turns - std::floor(turns);
  if (t == 0.0) return {1.0, 0.0};
  if (t == 0.25) return {0.0, 1.0};
  if (t == 0.5) return {-1.0, 0.0};
  if (t == 0.75) return {0.0, -1.0};
  const double a = 2.0 * std::numbers::pi * t;
  return {std::cos(a), std::sin(a)};
}

}  // namespace

cplx ipow(cplx z, long long e) {
  const bool invert = e < 0;
  unsigned long long k = invert ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
  cplx result{1.0, 0.0};
  while (k > 0) {
    if (k & 1ULL) result *= z;
    k >>= 1ULL;
    if (k > 0) z *= z;
  }
  return invert ? 1.0 / result : result;
}

int RootContext::mod(long long k) const noexcept {
  long long r = k % n_;
  if (r < 0) r += n_;
  return static_cast<int>(r);
}

cplx RootContext::omega_pow(long long k) const {
  return unit_phase(-static_cast<double>(mod(k)) / n_);
}

cplx RootContext::q0_pow(long long k) const {
  // q0 = exp(i pi (N+1)/N): reduce (N+1) k modulo 2N.
  const long long two_n = 2LL * n_;
  long long e = ((static_cast<long long>(n_) + 1) * (k % two_n)) % two_n;
  if (e < 0) e += two_n;
  return unit_phase(static_cast<double>(e) / static_cast<double>(two_n));
}

RootContext make_root_context(int N) {
  if (N < 1) fail(ErrorCode::kInvalidArgument, "N must be >= 1, got " + std::to_string(N));
  RootContext ctx;
  ctx.n_ = N;
  ctx.q0_ = ctx.q0_pow(1);
  ctx.omega_ = ctx.omega_pow(1);
  ctx.omega_half_ = unit_phase(-0.5 / N);
  return ctx;
}

DenseOperator::DenseOperator(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    fail(ErrorCode::kDimensionMismatch, "DenseOperator must be square");
  }
}

DenseOperator DenseOperator::identity(std::size_t dim) {
  return DenseOperator(Eigen::MatrixXcd::Identity(dim, dim));
}

DenseOperator DenseOperator::zero(std::size_t dim) {
  return DenseOperator(Eigen::MatrixXcd::Zero(dim, dim));
}

DenseOperator DenseOperator::diagonal(std::span<const cplx> entries) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return DenseOperator(std::move(m));
}

void DenseOperator::check_same_dim(const DenseOperator& rhs, const char* op) const {
  if (dim() != rhs.dim()) {
    fail(ErrorCode::kDimensionMismatch, std::string("operator ") + op + ": dim " +
                                            std::to_string(dim()) + " vs " +
                                            std::to_string(rhs.dim()));
  }
}

DenseOperator DenseOperator::operator*(const DenseOperator& rhs) const {
  check_same_dim(rhs, "*");
  return DenseOperator(m_ * rhs.m_);
}

DenseOperator DenseOperator::operator+(const DenseOperator& rhs) const {
  check_same_dim(rhs, "+");
  return DenseOperator(m_ + rhs.m_);
}

DenseOperator DenseOperator::operator-(const DenseOperator& rhs) const {
  check_same_dim(rhs, "-");
  return DenseOperator(m_ - rhs.m_);
}

DenseOperator DenseOperator::operator*(cplx scalar) const { return DenseOperator(m_ * scalar); }

DenseOperator DenseOperator::inverse() const {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m_);
  const double scale = max_abs();
  const cplx det = lu.determinant();
  if (scale == 0.0 || std::abs(det) == 0.0 || !std::isfinite(std::abs(det))) {
    fail(ErrorCode::kSingular, "operator is not invertible");
  }
  return DenseOperator(lu.inverse());
}

DenseOperator DenseOperator::power(unsigned exponent) const {
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(m_.rows(), m_.cols());
  Eigen::MatrixXcd base = m_;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return DenseOperator(std::move(result));
}

double DenseOperator::op_norm() const {
  if (m_.size() == 0) return 0.0;
  // Largest eigenvalue of the Gram matrix; cheaper than a full SVD.
  const Eigen::MatrixXcd gram = m_.adjoint() * m_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
}

double DenseOperator::max_abs() const {
  return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff();
}

bool DenseOperator::is_diagonal(double tol) const {
  for (Eigen::Index j = 0; j < m_.cols(); ++j)
    for (Eigen::Index i = 0; i < m_.rows(); ++i)
      if (i != j && std::abs(m_(i, j)) > tol) return false;
  return true;
}

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  const auto na = static_cast<Eigen::Index>(a.dim());
  const auto nb = static_cast<Eigen::Index>(b.dim());
  check_dim_cap(static_cast<std::size_t>(na * nb), "kron");
  Eigen::MatrixXcd m(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < na; ++j)
      m.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
  return DenseOperator(std::move(m));
}

DenseOperator embed(const DenseOperator& op, std::size_t site, std::size_t sites) {
  if (site >= sites) fail(ErrorCode::kInvalidArgument, "embed: site out of range");
  const std::size_t d = op.dim();
  std::size_t before = 1;
  std::size_t after = 1;
  for (std::size_t i = 0; i < site; ++i) before *= d;
  for (std::size_t i = site + 1; i < sites; ++i) after *= d;
  check_dim_cap(before * d * after, "embed");
  // Index layout: site 0 is the most significant digit.
  const auto total = static_cast<Eigen::Index>(before * d * after);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(total, total);
  for (std::size_t hi = 0; hi < before; ++hi)
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) {
        const cplx v = op(r, c);
        if (v == cplx{}) continue;
        for (std::size_t lo = 0; lo < after; ++lo) {
          const auto row = static_cast<Eigen::Index>((hi * d + r) * after + lo);
          const auto col = static_cast<Eigen::Index>((hi * d + c) * after + lo);
          m(row, col) = v;
        }
      }
  return DenseOperator(std::move(m));
}

double relative_residual(const DenseOperator& lhs, const DenseOperator& rhs) {
  const double scale = std::max(lhs.op_norm(), rhs.op_norm());
  const double diff = (lhs - rhs).op_norm();
  if (scale == 0.0) return diff;
  return diff / scale;
}

void check_dim_cap(std::size_t dim, const char* what) {
  if (dim > kMaxDenseDim) {
    fail(ErrorCode::kCapExceeded, std::string(what) + ": dimension " + std::to_string(dim) +
                                      " exceeds cap " + std::to_string(kMaxDenseDim));
  }
}

ClockShift clock_shift(const RootContext& ctx) {
  const int n = ctx.N();
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    z(a, a) = ctx.omega_pow(a);
    x((a + 1) % n, a) = 1.0;
  }
  return {DenseOperator(std::move(z)), DenseOperator(std::move(x))};
}

Monomial as_monomial(const DenseOperator& op, const RootContext& ctx, double tol) {
  const int n = ctx.N();
  if (op.dim() != static_cast<std::size_t>(n)) {
    fail(ErrorCode::kDimensionMismatch, "monomial must act on one N-dimensional spin space");
  }
  const double scale = op.max_abs();
  if (scale == 0.0) fail(ErrorCode::kNotMonomial, "zero operator is not a clock/shift monomial");
  // (c X^a Z^b)_{r,col} = c omega^{b col} delta_{r, col + a}
  int shift = -1;
  for (int r = 0; r < n; ++r)
    if (std::abs(op(r, 0)) > tol * scale) {
      shift = r;
      break;
    }
  if (shift < 0) fail(ErrorCode::kNotMonomial, "first column vanishes");
  Monomial m;
  m.coeff = op(shift, 0);
  m.x_power = shift;
  if (n > 1) {
    const cplx ratio = op((shift + 1) % n, 1) / m.coeff;
    int best = 0;
    double best_err = std::abs(ratio - 1.0);
    for (int b = 1; b < n; ++b) {
      const double err = std::abs(ratio - ctx.omega_pow(b));
      if (err < best_err) {
        best_err = err;
        best = b;
      }
    }
    m.z_power = best;
  }
  for (int col = 0; col < n; ++col)
    for (int r = 0; r < n; ++r) {
      const cplx expected = (r == (col + m.x_power) % n)
                                ? m.coeff * ctx.omega_pow(static_cast<long long>(m.z_power) * col)
                                : cplx{};
      if (std::abs(op(r, col) - expected) > tol * scale) {
        fail(ErrorCode::kNotMonomial, "operator is not of the form c X^a Z^b");
      }
    }
  return m;
}

DenseOperator operator_function(const DenseOperator& op, const ScalarFunction& f,
                                const RootContext& ctx) {
  const Monomial m = as_monomial(op, ctx);
  const int n = ctx.N();
  if (m.x_power == 0) {
    std::vector<cplx> diag(n);
    for (int a = 0; a < n; ++a) diag[a] = f(m.coeff * ctx.omega_pow(static_cast<long long>(m.z_power) * a));
    return DenseOperator::diagonal(diag);
  }
  if (m.z_power != 0) {
    fail(ErrorCode::kNotMonomial, "mixed monomial X^a Z^b with a, b != 0 is not supported");
  }
  // X v_k = omega^k v_k with (v_k)_j = omega^{-k j} / sqrt(N).
  Eigen::MatrixXcd basis(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) basis(j, k) = ctx.omega_pow(-static_cast<long long>(k) * j) * norm;
  Eigen::VectorXcd spectrum(n);
  for (int k = 0; k < n; ++k)
    spectrum(k) = f(m.coeff * ctx.omega_pow(static_cast<long long>(k) * m.x_power));
  return DenseOperator(basis * spectrum.asDiagonal() * basis.adjoint());
}

DenseOperator function_of_zinv(cplx c, const ScalarFunction& f, const RootContext& ctx) {
  const int n = ctx.N();
  std::vector<cplx> diag(n);
  for (int a = 0; a < n; ++a) diag[a] = f(c * ctx.omega_pow(-a));
  return DenseOperator::diagonal(diag);
}

DenseOperator function_of_x(cplx c, const ScalarFunction& f, const RootContext& ctx) {
  const auto cs = clock_shift(ctx);
  return operator_function(cs.X * c, f, ctx);
}

}  // namespace cpsg
