#include "cpsg/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cpsg/error.hpp"

namespace cpsg {

namespace {

constexpr double kGenericTol = 1e-14;

double point_scale(const CurvePoint& p, const CurvePoint& q) {
  return std::max({1.0, std::abs(p.x), std::abs(p.y), std::abs(q.x), std::abs(q.y),
                   std::abs(p.x * p.s * q.s), std::abs(q.x * p.s * q.s)});
}

cplx checked_ratio(cplx num, cplx den, double scale, const char* what) {
  if (std::abs(den) < kGenericTol * scale) {
    fail(ErrorCode::kNonGeneric, std::string("non-generic rapidity pair: vanishing factor in ") + what);
  }
  return num / den;
}

std::vector<cplx> dft(const std::vector<cplx>& v, const RootContext& ctx) {
  const int N = ctx.N();
  std::vector<cplx> out(N);
  for (int n = 0; n < N; ++n) {
    cplx acc{0.0, 0.0};
    for (int a = 0; a < N; ++a) acc += v[a] * ctx.omega_pow(static_cast<long long>(n) * a);
    out[n] = acc;
  }
  return out;
}

cplx product_of(const std::vector<cplx>& v) {
  cplx acc{1.0, 0.0};
  for (cplx x : v) acc *= x;
  return acc;
}

}  // namespace

cplx weight_ratio(const CurvePoint& p, const CurvePoint& q, int n, const RootContext& ctx) {
  const double scale = point_scale(p, q);
  const cplx step = p.s / q.s;
  cplx acc{1.0, 0.0};
  for (int j = 1; j <= n; ++j) {
    const cplx wj = ctx.omega_pow(j);
    acc *= step * checked_ratio(q.y - wj * p.x, p.y - wj * q.x, scale, "W");
  }
  return acc;
}

cplx weight_bar_ratio(const CurvePoint& p, const CurvePoint& q, int n, const RootContext& ctx) {
  const double scale = point_scale(p, q);
  const cplx step = p.s * q.s;
  const cplx w = ctx.omega();
  cplx acc{1.0, 0.0};
  for (int j = 1; j <= n; ++j) {
    const cplx wj = ctx.omega_pow(j);
    acc *= step * checked_ratio(w * p.x - wj * q.x, q.y - wj * p.y, scale, "Wbar");
  }
  return acc;
}

cplx fourier_bar_ratio(const CurvePoint& p, const CurvePoint& q, int n, const RootContext& ctx) {
  const double scale = point_scale(p, q);
  const cplx ss = p.s * q.s;
  cplx acc{1.0, 0.0};
  for (int j = 1; j <= n; ++j) {
    const cplx wj = ctx.omega_pow(j);
    acc *= checked_ratio(q.y - wj * p.x * ss, p.y - wj * q.x * ss, scale, "Wbar_f");
  }
  return acc;
}

WeightTable weight_tables_normalized(const CurvePoint& p, const CurvePoint& q, cplx w0, cplx wbar0,
                                     const RootContext& ctx) {
  const int N = ctx.N();
  WeightTable t;
  t.p = p;
  t.q = q;
  t.W.resize(N);
  t.Wbar.resize(N);
  t.Wbar_f.resize(N);
  for (int n = 0; n < N; ++n) {
    t.W[n] = w0 * weight_ratio(p, q, n, ctx);
    t.Wbar[n] = wbar0 * weight_bar_ratio(p, q, n, ctx);
  }
  cplx f0{0.0, 0.0};
  for (cplx v : t.Wbar) f0 += v;
  for (int n = 0; n < N; ++n) t.Wbar_f[n] = f0 * fourier_bar_ratio(p, q, n, ctx);
  t.W_f = dft(t.W, ctx);
  return t;
}

WeightTable weight_tables(const CurvePoint& p, const CurvePoint& q, NormMode mode,
                          const RootContext& ctx) {
  WeightTable t = weight_tables_normalized(p, q, 1.0, 1.0, ctx);
  if (mode == NormMode::kStrNormalized) {
    const int N = ctx.N();
    const cplx pw = product_of(t.W);
    const cplx pf = product_of(t.Wbar_f);
    if (std::abs(pw) == 0.0 || std::abs(pf) == 0.0) {
      fail(ErrorCode::kNonGeneric, "non-generic rapidity pair: vanishing weight product");
    }
    t = weight_tables_normalized(p, q, 1.0 / principal_root(pw, N), 1.0 / principal_root(pf, N),
                                 ctx);
  }
  t.norm_mode = mode;
  return t;
}

double periodicity_residual(const CurvePoint& p, const CurvePoint& q, const RootContext& ctx) {
  const int N = ctx.N();
  double worst = 0.0;
  for (int n = 0; n < N; ++n) {
    const cplx a = weight_ratio(p, q, n, ctx);
    const cplx b = weight_ratio(p, q, n + N, ctx);
    worst = std::max(worst, std::abs(b - a) / std::max(std::abs(a), 1e-300));
    const cplx c = weight_bar_ratio(p, q, n, ctx);
    const cplx d = weight_bar_ratio(p, q, n + N, ctx);
    // Wbar may vanish identically (p = q); compare on the scale of Wbar(0).
    worst = std::max(worst, std::abs(d - c) / std::max(std::abs(c), 1.0));
  }
  return worst;
}

double fourier_residual(const WeightTable& table, const RootContext& ctx) {
  const auto direct = dft(table.Wbar, ctx);
  double scale = 0.0;
  double worst = 0.0;
  for (std::size_t n = 0; n < direct.size(); ++n) {
    scale = std::max(scale, std::abs(direct[n]));
    worst = std::max(worst, std::abs(direct[n] - table.Wbar_f[n]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

cplx f_power_n(const WeightTable& table) {
  cplx acc{1.0, 0.0};
  for (std::size_t j = 0; j < table.W.size(); ++j) acc *= table.Wbar_f[j] / table.W[j];
  return acc;
}

StarTriangleResult star_triangle_residual(const CurvePoint& p, const CurvePoint& q,
                                          const CurvePoint& r, const RootContext& ctx) {
  const int N = ctx.N();
  const auto pq = weight_tables(p, q, NormMode::kUnit, ctx);
  const auto qr = weight_tables(q, r, NormMode::kUnit, ctx);
  const auto pr = weight_tables(p, r, NormMode::kUnit, ctx);

  const std::size_t count = static_cast<std::size_t>(N) * N * N;
  std::vector<cplx> lhs(count), rhs(count);
  for (int a = 0; a < N; ++a) {
    for (int b = 0; b < N; ++b) {
      for (int c = 0; c < N; ++c) {
        cplx sum{0.0, 0.0};
        for (int d = 0; d < N; ++d) sum += qr.wbar(b - d) * pr.w(a - d) * pq.wbar(d - c);
        const std::size_t idx = (static_cast<std::size_t>(a) * N + b) * N + c;
        lhs[idx] = sum;
        rhs[idx] = pq.w(a - b) * pr.wbar(b - c) * qr.w(a - c);
      }
    }
  }

  StarTriangleResult out;
  const cplx fpr = f_power_n(pr);
  if (std::abs(fpr) == 0.0) fail(ErrorCode::kNonGeneric, "non-generic triple: f_pr vanishes");
  out.R_pqr_power_n = f_power_n(pq) * f_power_n(qr) / fpr;

  // Reference triples: the two largest |RHS| entries.
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return std::abs(rhs[i]) > std::abs(rhs[j]); });
  const std::size_t ref = order[0];
  if (std::abs(rhs[ref]) == 0.0) fail(ErrorCode::kNonGeneric, "non-generic triple: vanishing weights");
  const cplx ratio = lhs[ref] / rhs[ref];

  const cplx base = principal_root(out.R_pqr_power_n, N);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < N; ++k) {
    const double dist = std::abs(base * ctx.omega_pow(k) - ratio);
    if (dist < best) {
      best = dist;
      out.root_index = k;
    }
  }
  out.R_pqr = base * ctx.omega_pow(out.root_index);
  out.power_check = std::abs(ipow(ratio, N) - out.R_pqr_power_n) /
                    std::max(std::abs(out.R_pqr_power_n), 1e-300);
  if (count > 1) {
    const std::size_t second = order[1];
    if (std::abs(rhs[second]) > 0.0) {
      out.ratio_check = std::abs(lhs[second] / rhs[second] - out.R_pqr) / std::abs(out.R_pqr);
    }
  }

  double scale = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    scale = std::max(scale, std::abs(lhs[i]));
    worst = std::max(worst, std::abs(lhs[i] - out.R_pqr * rhs[i]));
  }
  out.residual = scale > 0.0 ? worst / scale : worst;
  return out;
}

cplx F_value(const WeightTable& table, cplx y, const RootContext& ctx) {
  const int N = ctx.N();
  cplx acc{0.0, 0.0};
  cplx yb{1.0, 0.0};
  for (int b = 0; b < N; ++b) {
    acc += table.W_f[ctx.mod(-b)] * yb;
    yb *= y;
  }
  return acc / static_cast<double>(N);
}

cplx Fbar_value(const WeightTable& table, cplx y, const RootContext& ctx) {
  const int N = ctx.N();
  cplx acc{0.0, 0.0};
  cplx ya{1.0, 0.0};
  for (int a = 0; a < N; ++a) {
    acc += table.Wbar[a] * ya;
    ya *= y;
  }
  return acc;
}

double recurrence_residual(const WeightTable& table, const RootContext& ctx) {
  const int N = ctx.N();
  const CurvePoint& p = table.p;
  const CurvePoint& q = table.q;
  const cplx ss = p.s * q.s;
  double worst = 0.0;
  for (int n = 0; n < N; ++n) {
    const cplx wn = ctx.omega_pow(n);
    const cplx wprev = ctx.omega_pow(n - 1);
    // F(w^n) s_q (y_p - w^n x_q) = F(w^{n-1}) s_p (y_q - w^n x_p)
    const cplx a = F_value(table, wn, ctx) * (q.s * (p.y - wn * q.x));
    const cplx b = F_value(table, wprev, ctx) * (p.s * (q.y - wn * p.x));
    const double sa = std::max({std::abs(a), std::abs(b), 1e-300});
    worst = std::max(worst, std::abs(a - b) / sa);
    const cplx c = Fbar_value(table, wn, ctx) * (p.y - wn * q.x * ss);
    const cplx d = Fbar_value(table, wprev, ctx) * (q.y - wn * p.x * ss);
    const double sc = std::max({std::abs(c), std::abs(d), 1e-300});
    worst = std::max(worst, std::abs(c - d) / sc);
  }
  return worst;
}

WeightMatrices weight_matrices(const WeightTable& table, const RootContext& ctx) {
  auto F = [&](cplx y) { return F_value(table, y, ctx); };
  auto Fbar = [&](cplx y) { return Fbar_value(table, y, ctx); };
  WeightMatrices m;
  m.F_zinv = function_of_zinv(1.0, F, ctx);
  m.F_z = DenseOperator::diagonal(table.W);
  m.Fbar_x = function_of_x(1.0, Fbar, ctx);
  m.recurrence_residual = recurrence_residual(table, ctx);
  return m;
}

MatrixStrResult str_matrix_residual(const CurvePoint& p, const CurvePoint& q, const CurvePoint& r,
                                    const RootContext& ctx) {
  const auto scalar = star_triangle_residual(p, q, r, ctx);
  const auto pq = weight_matrices(weight_tables(p, q, NormMode::kUnit, ctx), ctx);
  const auto qr = weight_matrices(weight_tables(q, r, NormMode::kUnit, ctx), ctx);
  const auto pr = weight_matrices(weight_tables(p, r, NormMode::kUnit, ctx), ctx);
  const DenseOperator lhs = pq.F_zinv * pr.Fbar_x * qr.F_zinv;
  const DenseOperator rhs = (qr.Fbar_x * pr.F_zinv * pq.Fbar_x) * (1.0 / scalar.R_pqr);
  MatrixStrResult out;
  out.R_pqr = scalar.R_pqr;
  out.residual = relative_residual(lhs, rhs);
  return out;
}

double product_identity_residual(const CurvePoint& p, const CurvePoint& q, const RootContext& ctx) {
  const int N = ctx.N();
  const auto table = weight_tables(p, q, NormMode::kUnit, ctx);
  const auto fourier = dft(table.Wbar, ctx);
  const cplx lhs = product_of(fourier);

  const double scale = point_scale(p, q);
  const double phase = -std::numbers::pi * (N - 1) * (N - 2) / 12.0;
  cplx rhs = ipow(table.Wbar[0], N) * std::pow(static_cast<double>(N), N / 2.0) *
             std::polar(1.0, phase);
  for (int j = 1; j < N; ++j) {
    const cplx wj = ctx.omega_pow(j);
    const cplx den = (p.x - wj * q.x) * (p.y - wj * q.y);
    rhs *= ipow(checked_ratio(p.t - wj * q.t, den, scale * scale, "product identity"), j);
  }
  const double s = std::max(std::abs(lhs), std::abs(rhs));
  return s > 0.0 ? std::abs(lhs - rhs) / s : 0.0;
}

}  // namespace cpsg
