#include "cpsg/classical_dsg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cpsg/curve.hpp"
#include "cpsg/error.hpp"

namespace cpsg {

namespace {

constexpr double kPoleTol = 1e-14;

cplx f_at_site(cplx lambda, cplx x, int site) {
  const cplx den = lambda + x;
  const cplx num = 1.0 + lambda * x;
  const double scale = std::max({1.0, std::abs(lambda), std::abs(x)});
  if (std::abs(den) < kPoleTol * scale || std::abs(num) < kPoleTol * scale * scale) {
    fail(ErrorCode::kSingular, "singular evolution at site " + std::to_string(site));
  }
  return num / den;
}

}  // namespace

cplx f_map(cplx lambda, cplx x) { return (1.0 + lambda * x) / (lambda + x); }

LatticeState make_state(std::vector<cplx> w) {
  if (w.size() < 4 || w.size() % 2 != 0) {
    fail(ErrorCode::kInvalidArgument, "lattice state needs an even number of sites, at least 4");
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == cplx{0.0, 0.0}) {
      fail(ErrorCode::kInvalidArgument, "lattice value w_" + std::to_string(i) + " is zero");
    }
  }
  LatticeState s;
  s.L = static_cast<int>(w.size() / 2);
  s.w = std::move(w);
  return s;
}

LatticeState evolve(const LatticeState& state, cplx lambda) {
  const int n = 2 * state.L;
  auto at = [n](int i) { return ((i % n) + n) % n; };
  LatticeState next = state;
  for (int i = 0; i < n; i += 2) {
    next.w[i] = f_at_site(lambda, state.w[at(i - 1)], at(i - 1)) * state.w[i] /
                f_at_site(lambda, state.w[at(i + 1)], at(i + 1));
  }
  for (int i = 1; i < n; i += 2) {
    next.w[i] = f_at_site(lambda, next.w[at(i - 1)], at(i - 1)) * state.w[i] /
                f_at_site(lambda, next.w[at(i + 1)], at(i + 1));
  }
  return next;
}

Casimirs casimirs(const LatticeState& state) {
  Casimirs c{1.0, 1.0};
  for (std::size_t i = 0; i < state.w.size(); ++i) {
    if (i % 2 == 0) {
      c.C2 *= state.w[i];
    } else {
      c.C1 *= state.w[i];
    }
  }
  return c;
}

LatticeState constrain(const LatticeState& state) {
  const auto c = casimirs(state);
  const cplx odd = principal_root(c.C1, state.L);
  const cplx even = principal_root(c.C2, state.L);
  LatticeState out = state;
  for (std::size_t i = 0; i < out.w.size(); ++i) out.w[i] /= (i % 2 == 0) ? even : odd;
  return out;
}

double f_factor_identity_residual(cplx kappa, cplx x, const RootContext& ctx) {
  const int N = ctx.N();
  const cplx k2 = kappa * kappa;
  const cplx lhs = f_at_site(ipow(k2, N), ipow(x, N), 0);
  cplx rhs{1.0, 0.0};
  for (int j = 0; j < N; ++j) rhs *= f_at_site(k2, ctx.q0_pow(2 * j + 1) * x, j);
  const double s = std::max(std::abs(lhs), std::abs(rhs));
  return s > 0.0 ? std::abs(lhs - rhs) / s : 0.0;
}

LatticeState constant_background(int L, cplx alpha, cplx beta) {
  if (L < 2) fail(ErrorCode::kInvalidArgument, "constant background needs L >= 2");
  if (alpha == cplx{0.0, 0.0} || beta == cplx{0.0, 0.0}) {
    fail(ErrorCode::kInvalidArgument, "constant background values must be nonzero");
  }
  std::vector<cplx> w(2 * static_cast<std::size_t>(L));
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = (i % 2 == 0) ? alpha : beta;
  return make_state(std::move(w));
}

}  // namespace cpsg
