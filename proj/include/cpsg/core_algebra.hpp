#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cpsg {

using cplx = std::complex<double>;

/// z^e by repeated squaring (negative e inverts).
cplx ipow(cplx z, long long e);

/// Root-of-unity data for one value of N.
///
/// The canonical choice is -q0 = exp(i pi / N), so that
///   q0 = -exp(i pi / N),  omega = 1 / q0^2 = exp(-2 i pi / N),
///   omega_half = -1 / q0 = exp(-i pi / N).
/// Powers of omega are evaluated from the reduced exponent rather than by
/// repeated multiplication, so omega_pow(k) is exact to one rounding.
class RootContext {
 public:
  int N() const noexcept { return n_; }
  cplx q0() const noexcept { return q0_; }
  cplx omega() const noexcept { return omega_; }
  cplx omega_half() const noexcept { return omega_half_; }

  cplx omega_pow(long long k) const;
  cplx q0_pow(long long k) const;
  int mod(long long k) const noexcept;

 private:
  friend RootContext make_root_context(int N);
  int n_ = 1;
  cplx q0_{1.0, 0.0};
  cplx omega_{1.0, 0.0};
  cplx omega_half_{-1.0, 0.0};
};

RootContext make_root_context(int N);

/// Square complex matrix acting on an m-fold product of spin spaces.
class DenseOperator {
 public:
  DenseOperator() = default;
  explicit DenseOperator(Eigen::MatrixXcd m);

  static DenseOperator identity(std::size_t dim);
  static DenseOperator zero(std::size_t dim);
  static DenseOperator diagonal(std::span<const cplx> entries);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
  cplx operator()(std::size_t row, std::size_t col) const { return m_(row, col); }
  cplx& operator()(std::size_t row, std::size_t col) { return m_(row, col); }

  DenseOperator operator*(const DenseOperator& rhs) const;
  DenseOperator operator+(const DenseOperator& rhs) const;
  DenseOperator operator-(const DenseOperator& rhs) const;
  DenseOperator operator*(cplx scalar) const;

  DenseOperator inverse() const;
  DenseOperator power(unsigned exponent) const;
  cplx trace() const { return m_.trace(); }

  // Largest singular value.
  double op_norm() const;
  double max_abs() const;
  bool is_diagonal(double tol = 0.0) const;

 private:
  void check_same_dim(const DenseOperator& rhs, const char* op) const;
  Eigen::MatrixXcd m_;
};

inline DenseOperator operator*(cplx scalar, const DenseOperator& op) { return op * scalar; }

DenseOperator kron(const DenseOperator& a, const DenseOperator& b);

/// I (x) ... (x) op (x) ... (x) I with `op` in slot `site` of `sites` equal factors.
DenseOperator embed(const DenseOperator& op, std::size_t site, std::size_t sites);

/// ||lhs - rhs|| / max(||lhs||, ||rhs||) in the operator 2-norm; 0 when both vanish.
double relative_residual(const DenseOperator& lhs, const DenseOperator& rhs);

/// Dimension cap for every dense construction in the library.
inline constexpr std::size_t kMaxDenseDim = 4096;
void check_dim_cap(std::size_t dim, const char* what);

struct ClockShift {
  DenseOperator Z;  // (Z)_{a,b} = omega^a delta_{a,b}
  DenseOperator X;  // (X)_{a,b} = delta_{a,b+1 mod N}
};

ClockShift clock_shift(const RootContext& ctx);

/// Recognized form c * X^a * Z^b of a clock/shift monomial.
struct Monomial {
  cplx coeff{0.0, 0.0};
  int x_power = 0;
  int z_power = 0;
};

/// Recognizes `op` as c X^a Z^b; throws kNotMonomial otherwise.
Monomial as_monomial(const DenseOperator& op, const RootContext& ctx, double tol = 1e-12);

using ScalarFunction = std::function<cplx(cplx)>;

/// f(op) for op = c Z^b (diagonal) or op = c X^a (diagonalized by the
/// discrete Fourier basis). Mixed monomials with a != 0 and b != 0 are
/// rejected with kNotMonomial.
DenseOperator operator_function(const DenseOperator& op, const ScalarFunction& f,
                                const RootContext& ctx);

/// f(c Z^{-1}) and f(c X) directly from the scalar c.
DenseOperator function_of_zinv(cplx c, const ScalarFunction& f, const RootContext& ctx);
DenseOperator function_of_x(cplx c, const ScalarFunction& f, const RootContext& ctx);

}  // namespace cpsg
