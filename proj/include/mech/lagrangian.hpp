#pragma once

#include <vector>

#include "mech/calc.hpp"
#include "mech/geometry.hpp"
#include "mech/state.hpp"

namespace mech {

// Lagrangian on a TM-chart: a scalar field of arity 2n, or 2n+1 with time
// as the trailing coordinate when time_dependent is set.
class LagrangianSystem {
 public:
  LagrangianSystem(int n, ScalarField L, bool time_dependent, bool strongly_convex);

  int n() const { return n_; }
  const ScalarField& field() const { return L_; }
  bool time_dependent() const { return time_dependent_; }
  bool strongly_convex() const { return strongly_convex_; }

  double operator()(const TangentState& s) const;
  Vec chart_point(const TangentState& s) const;  // (x, v[, t])

 private:
  int n_;
  ScalarField L_;
  bool time_dependent_;
  bool strongly_convex_;
};

// L = (1/2) m v^T g(x) v - U(x); strongly convex by construction
LagrangianSystem natural_lagrangian(const MetricField& g, const ScalarField& U, double m);

// Extended system on R x M with positions (t, x) and velocities (u, v):
// L1(t, x, u, v) = L(t, x, v/u) u.  Degree-1 homogeneous in the fibre, so
// not strongly convex; used to express time translation as a point symmetry.
LagrangianSystem homogenize(const LagrangianSystem& L);

// embeds a tangent trajectory of L into the extended chart with u = 1
Trajectory embed_time(const Trajectory& traj);

// acceleration solving Hess_v(L) a = grad_x L - (d^2L/dv dx) v - d^2L/dt dv
Vec el_accel(const LagrangianSystem& L, const TangentState& s);

// classical RK4 on (x', v') = (v, el_accel)
Trajectory integrate_el(const LagrangianSystem& L, const TangentState& s0, double t_end,
                        double dt);

// composite Simpson when the sample count is odd, trapezoid otherwise
double action(const LagrangianSystem& L, const Trajectory& traj);

// uniform-step sampled curve in a chart
struct SampledPath {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<Vec> points;
};

// quadrature of F(c(t)) . c'(t), tangents by finite differences at samples
double work_along(const VectorMap& F, const SampledPath& curve);

// v . grad_v L - L
double energy(const LagrangianSystem& L, const TangentState& s);

// m (x cross v), dimension 3 only
Vec angular_momentum(const TangentState& s, double m);

}  // namespace mech
