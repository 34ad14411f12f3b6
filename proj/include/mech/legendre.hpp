#pragma once

#include "mech/hamiltonian_fwd.hpp"
#include "mech/lagrangian.hpp"
#include "mech/state.hpp"

namespace mech {

struct NewtonOptions {
  int max_iter = 50;
  double tol = 1e-12;
};

// fibrewise map (x, v) |-> (x, dL/dv)
PhaseState phi(const LagrangianSystem& L, const TangentState& s);
// and the other chart's version (x, xi) |-> (x, dH/dxi)
TangentState phi(const HamiltonianSystem& H, const PhaseState& s);

// damped Newton inversion of the fibre map; exact for quadratic fibres by
// the choice of initial guess.  Throws OutOfImageError when the target
// covector is not reached in max_iter damped steps.
Vec phi_inverse(const LagrangianSystem& L, const Vec& x, const Vec& xi, const Vec& guess = Vec(),
                const NewtonOptions& opts = {});
Vec phi_inverse(const HamiltonianSystem& H, const Vec& x, const Vec& v, const Vec& guess = Vec(),
                const NewtonOptions& opts = {});

// convex dual evaluated through the Newton inverse:
// L_x^*(xi) = xi . v* - L(x, v*)
double dual_value(const LagrangianSystem& L, const Vec& x, const Vec& xi,
                  const NewtonOptions& opts = {});
double dual_value(const HamiltonianSystem& H, const Vec& x, const Vec& v,
                  const NewtonOptions& opts = {});

// Induced system whose field evaluates the dual lazily.  Derivatives of the
// dual field go through the implicit relations of the fibre solve (gradient
// from the inverse map, Hessian from reciprocity), not through the
// iteration.  Second derivatives are exact; the dual field supports the
// full dual/nested-dual interface.
HamiltonianSystem dualize(const LagrangianSystem& L, const NewtonOptions& opts = {});
LagrangianSystem dualize(const HamiltonianSystem& H, const NewtonOptions& opts = {});

// source system + Newton policy bundled for repeated fibre work
class LegendreMap {
 public:
  explicit LegendreMap(LagrangianSystem L, NewtonOptions opts = {})
      : L_(std::move(L)), newton_(opts) {}

  PhaseState forward(const TangentState& s) const { return phi(L_, s); }
  Vec inverse(const Vec& x, const Vec& xi) const { return phi_inverse(L_, x, xi, Vec(), newton_); }
  double dual(const Vec& x, const Vec& xi) const { return dual_value(L_, x, xi, newton_); }

 private:
  LagrangianSystem L_;
  NewtonOptions newton_;
};

}  // namespace mech
