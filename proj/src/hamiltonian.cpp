#include "mech/hamiltonian.hpp"

#include <Eigen/Dense>

namespace mech {

HamiltonianSystem natural_hamiltonian(const MetricField& g, const ScalarField& U, double m,
                                      bool constant_metric) {
  if (m <= 0.0) throw InputError("natural_hamiltonian: mass must be positive");
  if (U.dim() != g.dim()) throw ArityError("natural_hamiltonian: potential arity != metric dim");
  const int n = g.dim();
  ScalarField H(2 * n, [g, U, m, n](const auto& z) {
    using S = typename std::decay_t<decltype(z)>::Scalar;
    VecX<S> x = z.head(n);
    VecX<S> xi = z.tail(n);
    MatX<S> gm = g(x);
    VecX<S> up = gm.partialPivLu().solve(xi);
    return S(0.5 / m) * xi.dot(up) + U(x);
  });
  return {n, std::move(H), /*strongly_convex=*/true, /*separable=*/constant_metric};
}

namespace {

Vec chart_point(const HamiltonianSystem& H, const PhaseState& s) {
  if (s.x.size() != H.n() || s.xi.size() != H.n())
    throw ArityError("HamiltonianSystem: state has wrong dimension");
  return pack2(s.x, s.xi);
}

// z' = J grad H in packed coordinates
Vec symplectic_gradient(const HamiltonianSystem& H, const Vec& z) {
  const int n = H.n();
  Vec g = gradient(H.field(), z);
  Vec out(2 * n);
  out.head(n) = g.tail(n);
  out.tail(n) = -g.head(n);
  return out;
}

}  // namespace

std::pair<Vec, Vec> ham_field(const HamiltonianSystem& H, const PhaseState& s) {
  Vec z = chart_point(H, s);
  Vec f = symplectic_gradient(H, z);
  const int n = H.n();
  return {f.head(n), f.tail(n)};
}

std::string to_string(HamMethod m) {
  switch (m) {
    case HamMethod::rk4: return "rk4";
    case HamMethod::implicit_midpoint: return "implicit_midpoint";
    default: return "leapfrog";
  }
}

HamMethod ham_method_from_string(const std::string& name) {
  if (name == "rk4") return HamMethod::rk4;
  if (name == "implicit_midpoint") return HamMethod::implicit_midpoint;
  if (name == "leapfrog") return HamMethod::leapfrog;
  throw InputError("unknown integration method '" + name + "'");
}

Trajectory integrate_hamilton(const HamiltonianSystem& H, const PhaseState& s0, double t_end,
                              double dt, HamMethod method) {
  if (dt <= 0.0) throw InputError("integrate_hamilton: dt must be positive");
  if (method == HamMethod::leapfrog && !H.separable())
    throw InputError("integrate_hamilton: leapfrog needs a separable Hamiltonian");
  const int n = H.n();
  const int steps = static_cast<int>(std::llround((t_end - s0.t) / dt));
  if (steps < 1) throw InputError("integrate_hamilton: empty time range");

  Trajectory traj;
  traj.t0 = s0.t;
  traj.dt = dt;
  traj.n = n;
  traj.kind = ChartKind::phase;
  traj.method = to_string(method);
  traj.states.reserve(steps + 1);

  Vec z = chart_point(H, s0);
  traj.states.push_back(z);

  auto f = [&](const Vec& zz) { return symplectic_gradient(H, zz); };

  for (int k = 0; k < steps; ++k) {
    try {
    switch (method) {
      case HamMethod::rk4: {
        Vec k1 = f(z);
        Vec k2 = f(z + 0.5 * dt * k1);
        Vec k3 = f(z + 0.5 * dt * k2);
        Vec k4 = f(z + dt * k3);
        z += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        break;
      }
      case HamMethod::implicit_midpoint: {
        Vec zn = z + dt * f(z);  // Euler predictor
        bool converged = false;
        double prev = std::numeric_limits<double>::infinity();
        for (int sweep = 0; sweep < 100; ++sweep) {
          Vec znext = z + dt * f(0.5 * (z + zn));
          double delta = (znext - zn).template lpNorm<Eigen::Infinity>();
          zn = std::move(znext);
          if (delta <= 1e-13) {
            converged = true;
            break;
          }
          if (delta >= prev && delta < 1e-11) {
            converged = true;  // roundoff plateau
            break;
          }
          prev = delta;
        }
        if (!converged)
          throw MidpointConvergenceError("implicit midpoint: fixed point did not converge");
        z = zn;
        break;
      }
      case HamMethod::leapfrog: {
        // kick-drift-kick; for separable H the cross evaluations are inert
        Vec x = z.head(n), xi = z.tail(n);
        Vec g = gradient(H.field(), pack2(x, xi));
        xi -= 0.5 * dt * g.head(n);
        g = gradient(H.field(), pack2(x, xi));
        x += dt * g.tail(n);
        g = gradient(H.field(), pack2(x, xi));
        xi -= 0.5 * dt * g.head(n);
        z = pack2(x, xi);
        break;
      }
    }
    } catch (const NumericDomainError&) {
      throw BlowUpError("integrate_hamilton: evaluations left the finite range", k);
    }
    if (!z.allFinite()) throw BlowUpError("integrate_hamilton: state became non-finite", k);
    traj.states.push_back(z);
  }
  return traj;
}

double poisson(const ScalarField& f, const ScalarField& g, const PhaseState& s) {
  if (f.dim() != g.dim()) throw ArityError("poisson: field arities differ");
  Vec z = pack2(s.x, s.xi);
  if (z.size() != f.dim()) throw ArityError("poisson: state does not match field arity");
  const int n = static_cast<int>(s.x.size());
  Vec df = gradient(f, z);
  Vec dg = gradient(g, z);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += dg[n + i] * df[i] - df[n + i] * dg[i];
  return sum;
}

double alpha_eval(const PhaseState& s, const Vec& w) {
  const int n = static_cast<int>(s.x.size());
  if (w.size() != 2 * n) throw ArityError("alpha_eval: tangent vector must have size 2n");
  return s.xi.dot(w.head(n));
}

double omega_eval(const Vec& u, const Vec& w) {
  if (u.size() != w.size() || u.size() % 2 != 0)
    throw ArityError("omega_eval: vectors must share an even size");
  const int n = static_cast<int>(u.size()) / 2;
  return u.head(n).dot(w.tail(n)) - u.tail(n).dot(w.head(n));
}

PhaseState cotangent_lift(const VectorMap& f, const PhaseState& s) {
  if (f.dim_in() != f.dim_out()) throw ArityError("cotangent_lift: map must be an endomorphism");
  Mat J = jacobian(f, s.x);
  Eigen::FullPivLU<Mat> lu(J.transpose());
  if (!lu.isInvertible())
    throw SingularJacobianError("cotangent_lift: jacobian is singular at the base point");
  Vec xi_new = lu.solve(s.xi);
  return {f(s.x), std::move(xi_new), s.t};
}

PhaseState liouville_flow(const PhaseState& s, double t) {
  return {s.x, s.xi * std::exp(-t), s.t};
}

Vec reconstruct_base_map(const PhaseMap& g, const Vec& x) {
  PhaseState probe{x, Vec::Zero(x.size()), 0.0};
  return g(probe).x;
}

GeneratedPoint generating_symplectomorphism(const ScalarField& f, const Vec& a, const Vec& xi,
                                            const Vec& guess_b, const NewtonOptions& opts) {
  if (f.dim() % 2 != 0) throw ArityError("generating_symplectomorphism: field arity must be 2n");
  const int n = f.dim() / 2;
  if (a.size() != n || xi.size() != n || guess_b.size() != n)
    throw ArityError("generating_symplectomorphism: vector sizes must equal n");

  auto grad_blocks = [&](const Vec& b) {
    Vec z(2 * n);
    z.head(n) = a;
    z.tail(n) = b;
    return gradient(f, z);
  };
  auto mixed_block = [&](const Vec& b) {
    Vec z(2 * n);
    z.head(n) = a;
    z.tail(n) = b;
    Mat h = hessian(f, z);
    return Mat(h.block(0, n, n, n));  // d(grad_x f)/db
  };

  Vec b = guess_b;
  Vec r = grad_blocks(b).head(n) - xi;
  const double tol = opts.tol * (1.0 + xi.norm());
  bool ok = r.norm() <= tol;
  for (int it = 0; it < opts.max_iter && !ok; ++it) {
    Mat M = mixed_block(b);
    Eigen::FullPivLU<Mat> lu(M);
    if (!lu.isInvertible())
      throw ImplicitFunctionError("generating_symplectomorphism: mixed Hessian is singular");
    Vec step = lu.solve(-r);
    double damp = 1.0;
    bool advanced = false;
    for (int halving = 0; halving < 40; ++halving) {
      Vec b_try = b + damp * step;
      Vec r_try = grad_blocks(b_try).head(n) - xi;
      if (r_try.allFinite() && r_try.norm() < r.norm()) {
        b = std::move(b_try);
        r = std::move(r_try);
        advanced = true;
        break;
      }
      damp *= 0.5;
    }
    if (!advanced) break;
    ok = r.norm() <= tol;
  }
  if (!ok) throw NoSolutionError("generating_symplectomorphism: Newton did not converge");

  GeneratedPoint out;
  out.b = b;
  out.eta = -grad_blocks(b).tail(n);
  return out;
}

}  // namespace mech
