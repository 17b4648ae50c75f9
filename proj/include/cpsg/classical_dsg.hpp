#pragma once

#include <vector>

#include "cpsg/core_algebra.hpp"

namespace cpsg {

/// Periodic saw-lattice state w_0..w_{2L-1}; even sites form one sublattice,
/// odd sites the other.
struct LatticeState {
  int L = 0;
  std::vector<cplx> w;
};

/// f(lambda, x) = (1 + lambda x) / (lambda + x).
cplx f_map(cplx lambda, cplx x);

LatticeState make_state(std::vector<cplx> w);

/// One time step: even sites first, then odd sites from the updated evens.
LatticeState evolve(const LatticeState& state, cplx lambda);

struct Casimirs {
  cplx C1;  // product over odd sites
  cplx C2;  // product over even sites
};

Casimirs casimirs(const LatticeState& state);

/// Rescales the state so that C1 = C2 = 1 using principal L-th roots.
LatticeState constrain(const LatticeState& state);

/// Relative residual of f(kappa^{2N}, x^N) = prod_j f(kappa^2, q0^{2j+1} x).
double f_factor_identity_residual(cplx kappa, cplx x, const RootContext& ctx);

LatticeState constant_background(int L, cplx alpha, cplx beta);

}  // namespace cpsg
