#include "mech/lagrangian.hpp"

#include <Eigen/Dense>

namespace mech {

LagrangianSystem::LagrangianSystem(int n, ScalarField L, bool time_dependent,
                                   bool strongly_convex)
    : n_(n), L_(std::move(L)), time_dependent_(time_dependent), strongly_convex_(strongly_convex) {
  const int want = 2 * n + (time_dependent ? 1 : 0);
  if (n <= 0) throw ArityError("LagrangianSystem: n must be positive");
  if (L_.dim() != want)
    throw ArityError("LagrangianSystem: field arity does not match 2n(+1)");
}

Vec LagrangianSystem::chart_point(const TangentState& s) const {
  if (s.x.size() != n_ || s.v.size() != n_)
    throw ArityError("LagrangianSystem: state has wrong dimension");
  Vec z(L_.dim());
  z.head(n_) = s.x;
  z.segment(n_, n_) = s.v;
  if (time_dependent_) z[2 * n_] = s.t;
  return z;
}

double LagrangianSystem::operator()(const TangentState& s) const { return L_(chart_point(s)); }

LagrangianSystem natural_lagrangian(const MetricField& g, const ScalarField& U, double m) {
  if (m <= 0.0) throw InputError("natural_lagrangian: mass must be positive");
  if (U.dim() != g.dim()) throw ArityError("natural_lagrangian: potential arity != metric dim");
  const int n = g.dim();
  ScalarField L(2 * n, [g, U, m, n](const auto& z) {
    using S = typename std::decay_t<decltype(z)>::Scalar;
    VecX<S> x = z.head(n);
    VecX<S> v = z.tail(n);
    MatX<S> gm = g(x);
    S kinetic = S(0.5 * m) * v.dot(gm * v);
    return kinetic - U(x);
  });
  return {n, std::move(L), /*time_dependent=*/false, /*strongly_convex=*/true};
}

LagrangianSystem homogenize(const LagrangianSystem& L) {
  const int n = L.n();
  const ScalarField base = L.field();
  const bool td = L.time_dependent();
  const int ne = n + 1;  // extended base: (t, x^1..x^n), fibre (u, v^1..v^n)
  ScalarField L1(2 * ne, [base, n, ne, td](const auto& z) {
    using S = typename std::decay_t<decltype(z)>::Scalar;
    S t = z[0];
    S u = z[ne];
    VecX<S> arg(2 * n + (td ? 1 : 0));
    for (int i = 0; i < n; ++i) arg[i] = z[1 + i];
    for (int i = 0; i < n; ++i) arg[n + i] = z[ne + 1 + i] / u;
    if (td) arg[2 * n] = t;
    return base(arg) * u;
  });
  return {ne, std::move(L1), /*time_dependent=*/false, /*strongly_convex=*/false};
}

Trajectory embed_time(const Trajectory& traj) {
  if (traj.kind != ChartKind::tangent) throw KindMismatchError("embed_time: tangent input needed");
  const int n = traj.n;
  Trajectory out;
  out.t0 = traj.t0;
  out.dt = traj.dt;
  out.n = n + 1;
  out.kind = ChartKind::tangent;
  out.method = traj.method;
  out.states.reserve(traj.states.size());
  for (int i = 0; i < traj.size(); ++i) {
    Vec z(2 * (n + 1));
    z[0] = traj.time_at(i);
    z.segment(1, n) = traj.states[i].head(n);
    z[n + 1] = 1.0;
    z.segment(n + 2, n) = traj.states[i].tail(n);
    out.states.push_back(std::move(z));
  }
  return out;
}

namespace {

struct ElBlocks {
  Vec grad_x;
  Mat hess_vv;
  Mat hess_vx;
  Vec hess_vt;  // empty when autonomous
};

ElBlocks el_blocks(const LagrangianSystem& L, const Vec& z) {
  const int n = L.n();
  Vec grad = gradient(L.field(), z);
  Mat hess = hessian(L.field(), z);
  ElBlocks b;
  b.grad_x = grad.head(n);
  b.hess_vv = hess.block(n, n, n, n);
  b.hess_vx = hess.block(n, 0, n, n);
  if (L.time_dependent()) b.hess_vt = hess.block(n, 2 * n, n, 1);
  return b;
}

}  // namespace

Vec el_accel(const LagrangianSystem& L, const TangentState& s) {
  if (!L.strongly_convex()) throw ConvexityError("el_accel: system not declared strongly convex");
  const int n = L.n();
  Vec z = L.chart_point(s);
  ElBlocks b = el_blocks(L, z);

  Eigen::LLT<Mat> llt(b.hess_vv);
  if (llt.info() != Eigen::Success)
    throw ConvexityError("el_accel: velocity Hessian is not positive definite");

  Vec rhs = b.grad_x - b.hess_vx * s.v;
  if (L.time_dependent()) rhs -= b.hess_vt;
  Vec a = llt.solve(rhs);
  const double resid = (b.hess_vv * a - rhs).template lpNorm<Eigen::Infinity>();
  if (resid > 1e-10 * (1.0 + rhs.template lpNorm<Eigen::Infinity>()))
    throw NumericDomainError("el_accel: linear solve residual too large");
  (void)n;
  return a;
}

Trajectory integrate_el(const LagrangianSystem& L, const TangentState& s0, double t_end,
                        double dt) {
  if (dt <= 0.0) throw InputError("integrate_el: dt must be positive");
  if (!L.strongly_convex()) throw ConvexityError("integrate_el: system not strongly convex");
  const int n = L.n();
  const int steps = static_cast<int>(std::llround((t_end - s0.t) / dt));
  if (steps < 1) throw InputError("integrate_el: empty time range");

  auto rhs = [&](const Vec& x, const Vec& v, double t) {
    Vec a = el_accel(L, {x, v, t});
    return std::make_pair(v, std::move(a));
  };

  Trajectory traj;
  traj.t0 = s0.t;
  traj.dt = dt;
  traj.n = n;
  traj.kind = ChartKind::tangent;
  traj.method = "rk4";
  traj.states.reserve(steps + 1);
  Vec x = s0.x, v = s0.v;
  traj.states.push_back(pack2(x, v));
  for (int k = 0; k < steps; ++k) {
    const double t = s0.t + k * dt;
    try {
      auto [k1x, k1v] = rhs(x, v, t);
      auto [k2x, k2v] = rhs(x + 0.5 * dt * k1x, v + 0.5 * dt * k1v, t + 0.5 * dt);
      auto [k3x, k3v] = rhs(x + 0.5 * dt * k2x, v + 0.5 * dt * k2v, t + 0.5 * dt);
      auto [k4x, k4v] = rhs(x + dt * k3x, v + dt * k3v, t + dt);
      x += (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      v += (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    } catch (const NumericDomainError&) {
      throw BlowUpError("integrate_el: evaluations left the finite range", k);
    }
    if (!x.allFinite() || !v.allFinite())
      throw BlowUpError("integrate_el: state became non-finite", k);
    traj.states.push_back(pack2(x, v));
  }
  return traj;
}

namespace {

double quadrature(const std::vector<double>& y, double dt) {
  const int m = static_cast<int>(y.size());
  if (m < 2) throw InputError("quadrature: need at least 2 samples");
  if (m % 2 == 1) {
    double s = y.front() + y.back();
    for (int i = 1; i < m - 1; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * y[i];
    return s * dt / 3.0;
  }
  double s = 0.5 * (y.front() + y.back());
  for (int i = 1; i < m - 1; ++i) s += y[i];
  return s * dt;
}

}  // namespace

double action(const LagrangianSystem& L, const Trajectory& traj) {
  if (traj.kind != ChartKind::tangent) throw KindMismatchError("action: tangent trajectory needed");
  std::vector<double> y(traj.size());
  for (int i = 0; i < traj.size(); ++i) y[i] = L(traj.tangent_at(i));
  return quadrature(y, traj.dt);
}

namespace {

// finite-difference tangents at uniform samples; fourth order when five or
// more samples are available, second order otherwise
std::vector<Vec> path_tangents(const SampledPath& c) {
  const int m = static_cast<int>(c.points.size());
  const double h = c.dt;
  std::vector<Vec> tau(m);
  if (m >= 5) {
    for (int i = 0; i < m; ++i) {
      if (i >= 2 && i < m - 2) {
        tau[i] = (c.points[i - 2] - 8.0 * c.points[i - 1] + 8.0 * c.points[i + 1] -
                  c.points[i + 2]) /
                 (12.0 * h);
      } else if (i == 0) {
        tau[i] = (-25.0 * c.points[0] + 48.0 * c.points[1] - 36.0 * c.points[2] +
                  16.0 * c.points[3] - 3.0 * c.points[4]) /
                 (12.0 * h);
      } else if (i == 1) {
        tau[i] = (-3.0 * c.points[0] - 10.0 * c.points[1] + 18.0 * c.points[2] -
                  6.0 * c.points[3] + c.points[4]) /
                 (12.0 * h);
      } else if (i == m - 2) {
        tau[i] = (3.0 * c.points[m - 1] + 10.0 * c.points[m - 2] - 18.0 * c.points[m - 3] +
                  6.0 * c.points[m - 4] - c.points[m - 5]) /
                 (12.0 * h);
      } else {
        tau[i] = (25.0 * c.points[m - 1] - 48.0 * c.points[m - 2] + 36.0 * c.points[m - 3] -
                  16.0 * c.points[m - 4] + 3.0 * c.points[m - 5]) /
                 (12.0 * h);
      }
    }
  } else {
    for (int i = 0; i < m; ++i) {
      if (i == 0)
        tau[i] = (-3.0 * c.points[0] + 4.0 * c.points[1] - c.points[2]) / (2.0 * h);
      else if (i == m - 1)
        tau[i] = (3.0 * c.points[m - 1] - 4.0 * c.points[m - 2] + c.points[m - 3]) / (2.0 * h);
      else
        tau[i] = (c.points[i + 1] - c.points[i - 1]) / (2.0 * h);
    }
  }
  return tau;
}

}  // namespace

double work_along(const VectorMap& F, const SampledPath& curve) {
  const int m = static_cast<int>(curve.points.size());
  if (m < 3) throw InputError("work_along: need at least 3 samples");
  if (curve.dt <= 0.0) throw InputError("work_along: dt must be positive");
  for (const Vec& p : curve.points)
    if (p.size() != F.dim_in()) throw ArityError("work_along: sample dimension mismatch");
  std::vector<Vec> tau = path_tangents(curve);
  std::vector<double> y(m);
  for (int i = 0; i < m; ++i) y[i] = F(curve.points[i]).dot(tau[i]);
  return quadrature(y, curve.dt);
}

double energy(const LagrangianSystem& L, const TangentState& s) {
  const int n = L.n();
  Vec z = L.chart_point(s);
  Vec grad = gradient(L.field(), z);
  return grad.segment(n, n).dot(s.v) - L.field()(z);
}

Vec angular_momentum(const TangentState& s, double m) {
  if (s.x.size() != 3 || s.v.size() != 3)
    throw ArityError("angular_momentum: dimension 3 required");
  Eigen::Vector3d x = s.x, v = s.v;
  Eigen::Vector3d l = m * x.cross(v);
  return Vec(l);
}

}  // namespace mech
