#pragma once

#include <functional>
#include <string>
#include <utility>

#include "mech/geometry.hpp"
#include "mech/hamiltonian_fwd.hpp"
#include "mech/legendre.hpp"
#include "mech/state.hpp"

namespace mech {

// H = 1/(2m) xi^T g(x)^{-1} xi + U(x); separable when the metric is constant
HamiltonianSystem natural_hamiltonian(const MetricField& g, const ScalarField& U, double m,
                                      bool constant_metric = false);

// x' = grad_xi H, xi' = -grad_x H
std::pair<Vec, Vec> ham_field(const HamiltonianSystem& H, const PhaseState& s);

enum class HamMethod { rk4, implicit_midpoint, leapfrog };

std::string to_string(HamMethod m);
HamMethod ham_method_from_string(const std::string& name);

// leapfrog is kick-drift-kick and requires a separable system; implicit
// midpoint iterates the step map to a fixed point (tolerance 1e-13, at most
// 100 sweeps)
Trajectory integrate_hamilton(const HamiltonianSystem& H, const PhaseState& s0, double t_end,
                              double dt, HamMethod method);

// Darboux-coordinate bracket: {f,g} = dg/dxi_i df/dx^i - df/dxi_i dg/dx^i
double poisson(const ScalarField& f, const ScalarField& g, const PhaseState& s);

// tautological 1-form and canonical 2-form in chart coordinates
double alpha_eval(const PhaseState& s, const Vec& w);
double omega_eval(const Vec& u, const Vec& w);

// phase transport of a base diffeomorphism: x' = f(x), xi' = Jac(f)^{-T} xi
PhaseState cotangent_lift(const VectorMap& f, const PhaseState& s);

// flow of the field whose omega-contraction is alpha: (x, xi e^{-t})
PhaseState liouville_flow(const PhaseState& s, double t);

using PhaseMap = std::function<PhaseState(const PhaseState&)>;

// base map of an alpha-preserving symplectomorphism: x |-> position of g(x, 0)
Vec reconstruct_base_map(const PhaseMap& g, const Vec& x);

struct GeneratedPoint {
  Vec b;    // solved base point on the second factor
  Vec eta;  // -grad_y f(a, b)
};

// Newton solve of xi = grad_x f(a, b) for b, then eta = -grad_y f(a, b).
// Requires the mixed block d(grad_x f)/db to be invertible near the solution.
GeneratedPoint generating_symplectomorphism(const ScalarField& f, const Vec& a, const Vec& xi,
                                            const Vec& guess_b, const NewtonOptions& opts = {});

}  // namespace mech
