#include "mech/noether.hpp"

#include <Eigen/Dense>

namespace mech {

namespace {

// fields that differentiate an inner field evaluate it one dual level
// deeper; the engine provides two levels, so such fields stop at first
// derivatives of themselves
template <typename S>
inline constexpr bool kCanNestOnce = !std::is_same_v<S, D2>;

}  // namespace

OneParameterFamily::OneParameterFamily(int n, std::shared_ptr<const Impl> impl,
                                       std::shared_ptr<const VectorMap> gen)
    : n_(n), impl_(std::move(impl)), generator_(std::move(gen)) {
  check_identity_at_zero();
}

void OneParameterFamily::check_identity_at_zero() const {
  if (n_ <= 0) throw ArityError("OneParameterFamily: n must be positive");
  // generic probe points, kept away from coordinate singularities
  std::vector<Vec> probes;
  Vec a(n_), b(n_);
  for (int i = 0; i < n_; ++i) {
    a[i] = 0.3 + 0.1 * i;
    b[i] = 1.0 - 0.05 * i;
  }
  probes.push_back(a);
  probes.push_back(b);
  for (const Vec& p : probes) {
    Vec q = impl_->ev(0.0, p);
    if ((q - p).lpNorm<Eigen::Infinity>() > 1e-12)
      throw InputError("OneParameterFamily: map(0, x) != x at probe points");
  }
}

VectorMap OneParameterFamily::at(double s) const {
  auto impl = impl_;
  const int n = n_;
  return VectorMap(n, n, [impl, s](const auto& x) { return impl->ev(s, x); });
}

Vec generator(const OneParameterFamily& fam, const Vec& x) {
  if (fam.has_analytic_generator()) return fam.analytic_generator()(x);
  const double h = 1e-6;
  return (fam(h, x) - fam(-h, x)) / (2.0 * h);
}

PhaseVectorField::PhaseVectorField(int n, VectorMap field) : n_(n), field_(std::move(field)) {
  if (field_.dim_in() != 2 * n || field_.dim_out() != 2 * n)
    throw ArityError("PhaseVectorField: field must map 2n to 2n");
}

PhaseVectorField PhaseVectorField::hamiltonian_of(const ScalarField& G) {
  if (G.dim() % 2 != 0) throw ArityError("PhaseVectorField: scalar arity must be 2n");
  const int n = G.dim() / 2;
  VectorMap f(2 * n, 2 * n, [G, n](const auto& z) {
    using S = typename std::decay_t<decltype(z)>::Scalar;
    if constexpr (!kCanNestOnce<S>) {
      throw NumericDomainError("hamiltonian vector field: second derivatives not provided");
      return VecX<S>();
    } else {
      VecX<S> g = gradient(G, z);
      VecX<S> out(2 * n);
      out.head(n) = g.tail(n);
      out.tail(n) = -g.head(n);
      return out;
    }
  });
  return {n, std::move(f)};
}

std::pair<Vec, Vec> PhaseVectorField::operator()(const PhaseState& s) const {
  Vec w = field_(pack2(s.x, s.xi));
  return {w.head(n_), w.tail(n_)};
}

SymmetryCheck check_lagrangian_symmetry(const LagrangianSystem& L, const OneParameterFamily& fam,
                                        const std::vector<TangentState>& samples,
                                        const std::vector<double>& s_grid) {
  if (fam.n() != L.n()) throw ArityError("check_lagrangian_symmetry: dimension mismatch");
  SymmetryCheck out;
  out.pass = true;
  for (const TangentState& st : samples) {
    const double base = L(st);
    for (double s : s_grid) {
      VectorMap theta = fam.at(s);
      Vec x2 = theta(st.x);
      Vec v2 = jacobian(theta, st.x) * st.v;  // tangent lift
      const double moved = L({x2, v2, st.t});
      const double viol = std::abs(moved - base);
      out.max_violation = std::max(out.max_violation, viol);
      if (viol > 1e-8 * (1.0 + std::abs(base))) out.pass = false;
    }
  }
  return out;
}

Charge noether_charge(const LagrangianSystem& L, const OneParameterFamily& fam,
                      const std::string& name) {
  if (fam.n() != L.n()) throw ArityError("noether_charge: dimension mismatch");
  if (L.time_dependent())
    throw InputError("noether_charge: homogenize time-dependent systems first");
  const int n = L.n();
  const ScalarField Lf = L.field();
  ScalarField f(2 * n, [Lf, fam, n](const auto& z) {
    using S = typename std::decay_t<decltype(z)>::Scalar;
    if constexpr (!kCanNestOnce<S>) {
      throw NumericDomainError("noether_charge: second derivatives not provided");
      return S(0);
    } else {
      VecX<S> x = z.head(n);
      VecX<S> w;
      if (fam.has_analytic_generator()) {
        w = fam.analytic_generator()(x);
      } else {
        const double h = 1e-6;
        w = (fam(h, x) - fam(-h, x)) / (2.0 * h);
      }
      VecX<Dual<S>> zz(2 * n);
      for (int i = 0; i < 2 * n; ++i) zz[i] = Dual<S>(z[i]);
      S acc = S(0);
      for (int i = 0; i < n; ++i) {
        zz[n + i].dot = S(1);
        acc += Lf(zz).dot * w[i];
        zz[n + i].dot = S(0);
      }
      return acc;
    }
  });
  return {name, ChartKind::tangent, std::move(f)};
}

ConservationReport drift(const Charge& G, const Trajectory& traj) {
  if (G.chart != traj.kind) throw KindMismatchError("drift: charge and trajectory chart differ");
  if (G.f.dim() != 2 * traj.n) throw ArityError("drift: charge arity does not match trajectory");
  ConservationReport rep;
  rep.name = G.name;
  rep.samples = traj.size();
  rep.initial = G.f(traj.states[0]);
  for (int i = 1; i < traj.size(); ++i) {
    const double d = std::abs(G.f(traj.states[i]) - rep.initial);
    rep.max_abs_drift = std::max(rep.max_abs_drift, d);
  }
  const double scale = std::abs(rep.initial);
  rep.max_rel_drift = scale > 1e-12 ? rep.max_abs_drift / scale : rep.max_abs_drift;
  return rep;
}

namespace {

// jacobian column of a plain map by Richardson-extrapolated central differences
Vec fd_column(const std::function<Vec(const Vec&)>& f, const Vec& z, int j, double h) {
  Vec e = Vec::Zero(z.size());
  e[j] = 1.0;
  auto cd = [&](double hh) { return Vec(((f(z + hh * e) - f(z - hh * e)) / (2.0 * hh)).eval()); };
  Vec d1 = cd(h);
  Vec d2 = cd(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

HamSymmetryCheck check_hamiltonian_symmetry(const HamiltonianSystem& H, const PhaseVectorField& W,
                                            const std::vector<PhaseState>& samples) {
  if (W.n() != H.n()) throw ArityError("check_hamiltonian_symmetry: dimension mismatch");
  const int n = H.n();
  HamSymmetryCheck out;

  // beta = W _| omega has components (-delta_xi, delta_x) in chart order
  auto beta = [&](const Vec& z) {
    Vec w = W.packed(z);
    Vec b(2 * n);
    b.head(n) = -w.tail(n);
    b.tail(n) = w.head(n);
    return b;
  };

  for (const PhaseState& s : samples) {
    Vec z = pack2(s.x, s.xi);
    Vec gH = gradient(H.field(), z);
    Vec w = W.packed(z);
    out.max_dH = std::max(out.max_dH, std::abs(w.dot(gH)));

    Mat Jb(2 * n, 2 * n);
    for (int j = 0; j < 2 * n; ++j) Jb.col(j) = fd_column(beta, z, j, 1e-5);
    out.max_closedness =
        std::max(out.max_closedness, (Jb - Jb.transpose()).cwiseAbs().maxCoeff());
  }
  out.pass = out.max_dH <= 1e-8 && out.max_closedness <= 1e-6;
  return out;
}

Charge alpha_charge(const PhaseVectorField& W, const std::string& name) {
  const int n = W.n();
  const VectorMap field = W.field();
  ScalarField f(2 * n, [field, n](const auto& z) {
    using S = typename std::decay_t<decltype(z)>::Scalar;
    VecX<S> w = field(z);
    S acc = S(0);
    for (int i = 0; i < n; ++i) acc += z[n + i] * w[i];
    return acc;
  });
  return {name, ChartKind::phase, std::move(f)};
}

namespace {

struct LiftImpl final : OneParameterFamily::Impl {
  OneParameterFamily base;
  int n;
  LiftImpl(OneParameterFamily b, int nn) : base(std::move(b)), n(nn) {}

  template <typename S>
  VecX<S> lift(double s, const VecX<S>& z) const {
    VectorMap theta = base.at(s);
    VecX<S> x = z.head(n);
    VecX<S> xi = z.tail(n);
    MatX<S> J = jacobian(theta, x);
    Eigen::FullPivLU<MatX<S>> lu(J.transpose());
    if (!lu.isInvertible())
      throw SingularJacobianError("lift_symmetry: jacobian singular along probe");
    VecX<S> xi2 = lu.solve(xi);
    VecX<S> out(2 * n);
    out.head(n) = theta(x);
    out.tail(n) = xi2;
    return out;
  }

  Vec ev(double s, const Vec& z) const override { return lift(s, z); }
  VecX<D1> ev(double s, const VecX<D1>& z) const override { return lift(s, z); }
  VecX<D2> ev(double, const VecX<D2>&) const override {
    throw NumericDomainError("lift_symmetry: second derivatives not provided");
  }
};

}  // namespace

OneParameterFamily lift_symmetry(const OneParameterFamily& fam) {
  const int n = fam.n();
  return OneParameterFamily(2 * n, std::make_shared<LiftImpl>(fam, n), nullptr);
}

PhaseVectorField lift_generator(const OneParameterFamily& fam) {
  const int n = fam.n();
  VectorMap gen(n, n, [fam](const auto& xx) {
    using T = typename std::decay_t<decltype(xx)>::Scalar;
    if (fam.has_analytic_generator()) return VecX<T>(fam.analytic_generator()(xx));
    const double h = 1e-6;
    return VecX<T>(((fam(h, xx) - fam(-h, xx)) / (2.0 * h)).eval());
  });
  VectorMap f(2 * n, 2 * n, [gen, n](const auto& z) {
    using S = typename std::decay_t<decltype(z)>::Scalar;
    if constexpr (!kCanNestOnce<S>) {
      throw NumericDomainError("lift_generator: second derivatives not provided");
      return VecX<S>();
    } else {
      VecX<S> x = z.head(n);
      VecX<S> xi = z.tail(n);
      VecX<S> w = gen(x);
      MatX<S> Jw = jacobian(gen, x);
      VecX<S> out(2 * n);
      out.head(n) = w;
      out.tail(n) = -(Jw.transpose() * xi);
      return out;
    }
  });
  return {n, std::move(f)};
}

Charge transfer_charge_to_phase(const Charge& G, const LagrangianSystem& L,
                                const NewtonOptions& opts) {
  if (G.chart != ChartKind::tangent)
    throw KindMismatchError("transfer_charge_to_phase: charge must live on the tangent chart");
  if (!L.strongly_convex()) throw ConvexityError("transfer_charge_to_phase: need strong convexity");
  const int n = L.n();
  if (G.f.dim() != 2 * n) throw ArityError("transfer_charge_to_phase: arity mismatch");

  struct TransferImpl final : ScalarField::Impl {
    ScalarField G;
    LagrangianSystem L;
    NewtonOptions opts;
    int n;
    TransferImpl(ScalarField g, LagrangianSystem l, NewtonOptions o, int nn)
        : G(std::move(g)), L(std::move(l)), opts(o), n(nn) {}

    double ev(const Vec& z) const override {
      Vec v = phi_inverse(L, z.head(n), z.tail(n), Vec(), opts);
      Vec zz(2 * n);
      zz.head(n) = z.head(n);
      zz.tail(n) = v;
      return G(zz);
    }

    // first-order dual input: push the perturbation through the implicit
    // derivative of the fibre inverse, dv = Lvv^{-1} (dxi - Lvx dx)
    D1 ev(const VecX<D1>& z) const override {
      Vec base(2 * n);
      for (int i = 0; i < 2 * n; ++i) base[i] = z[i].val;
      Vec v = phi_inverse(L, base.head(n), base.tail(n), Vec(), opts);
      Vec zl(2 * n);
      zl.head(n) = base.head(n);
      zl.tail(n) = v;
      Mat hL = hessian(L.field(), zl);
      Eigen::LLT<Mat> llt(hL.block(n, n, n, n));
      if (llt.info() != Eigen::Success)
        throw ConvexityError("transfer_charge: fibre Hessian not positive definite");
      Vec dx(n), dxi(n);
      for (int i = 0; i < n; ++i) {
        dx[i] = z[i].dot;
        dxi[i] = z[n + i].dot;
      }
      Vec dv = llt.solve(dxi - hL.block(n, 0, n, n) * dx);
      VecX<D1> zz(2 * n);
      for (int i = 0; i < n; ++i) zz[i] = D1(base[i], dx[i]);
      for (int i = 0; i < n; ++i) zz[n + i] = D1(v[i], dv[i]);
      return G(zz);
    }

    D2 ev(const VecX<D2>&) const override {
      throw NumericDomainError(
          "transfer_charge: second derivatives across the fibre solve are not provided");
    }
  };

  ScalarField f(2 * n, std::make_shared<TransferImpl>(G.f, L, opts, n));
  return {G.name, ChartKind::phase, std::move(f)};
}

Charge transfer_charge_to_tangent(const Charge& G, const LagrangianSystem& L) {
  if (G.chart != ChartKind::phase)
    throw KindMismatchError("transfer_charge_to_tangent: charge must live on the phase chart");
  if (!L.strongly_convex())
    throw ConvexityError("transfer_charge_to_tangent: need strong convexity");
  const int n = L.n();
  if (G.f.dim() != 2 * n) throw ArityError("transfer_charge_to_tangent: arity mismatch");
  const ScalarField Gf = G.f;
  const ScalarField Lf = L.field();
  ScalarField f(2 * n, [Gf, Lf, n](const auto& z) {
    using S = typename std::decay_t<decltype(z)>::Scalar;
    if constexpr (!kCanNestOnce<S>) {
      throw NumericDomainError("transfer_charge: second derivatives not provided");
      return S(0);
    } else {
      // xi = grad_v L(x, v), then evaluate G(x, xi)
      VecX<Dual<S>> zz(2 * n);
      for (int i = 0; i < 2 * n; ++i) zz[i] = Dual<S>(z[i]);
      VecX<S> zeta(2 * n);
      zeta.head(n) = z.head(n);
      for (int i = 0; i < n; ++i) {
        zz[n + i].dot = S(1);
        zeta[n + i] = Lf(zz).dot;
        zz[n + i].dot = S(0);
      }
      return Gf(zeta);
    }
  });
  return {G.name, ChartKind::tangent, std::move(f)};
}

namespace {

Vec lrl_impl(const Vec& x, const Vec& p, double m, double k) {
  if (x.size() != 3 || p.size() != 3) throw ArityError("lrl: dimension 3 required");
  Eigen::Vector3d r = x, mom = p;
  const double rn = r.norm();
  if (rn == 0.0) throw NumericDomainError("lrl: undefined at r = 0");
  Eigen::Vector3d L = r.cross(mom);
  Eigen::Vector3d A = mom.cross(L) - (m * k / rn) * r;
  return Vec(A);
}

}  // namespace

Vec lrl(const PhaseState& s, double m, double k) { return lrl_impl(s.x, s.xi, m, k); }
Vec lrl(const TangentState& s, double m, double k) { return lrl_impl(s.x, Vec(m * s.v), m, k); }

Charge lrl_charge(int component, double m, double k, ChartKind chart) {
  if (component < 0 || component > 2) throw InputError("lrl_charge: component must be 0, 1 or 2");
  const bool phase = chart == ChartKind::phase;
  ScalarField f(6, [component, m, k, phase](const auto& z) {
    using S = typename std::decay_t<decltype(z)>::Scalar;
    using std::sqrt;
    VecX<S> x = z.head(3);
    VecX<S> p = phase ? VecX<S>(z.tail(3)) : VecX<S>((m * z.tail(3)).eval());
    VecX<S> L(3), A(3);
    L[0] = x[1] * p[2] - x[2] * p[1];
    L[1] = x[2] * p[0] - x[0] * p[2];
    L[2] = x[0] * p[1] - x[1] * p[0];
    A[0] = p[1] * L[2] - p[2] * L[1];
    A[1] = p[2] * L[0] - p[0] * L[2];
    A[2] = p[0] * L[1] - p[1] * L[0];
    S rn = sqrt(x.squaredNorm());
    return A[component] - (m * k) * x[component] / rn;
  });
  const char* names[] = {"A1", "A2", "A3"};
  return {names[component], chart, std::move(f)};
}

FibreLinearityCheck fibre_linearity_test(const PhaseVectorField& W, const Vec& x,
                                         const std::vector<Vec>& xi_samples, double tol) {
  const int n = W.n();
  const int m = static_cast<int>(xi_samples.size());
  if (m < 2 * n + 2) throw InputError("fibre_linearity_test: need at least 2n+2 fibre samples");

  Mat design(m, n + 1);
  Mat base_vals(m, n), mom_vals(m, n);
  for (int i = 0; i < m; ++i) {
    if (xi_samples[i].size() != n) throw ArityError("fibre_linearity_test: bad sample size");
    design(i, 0) = 1.0;
    design.row(i).tail(n) = xi_samples[i].transpose();
    Vec w = W.packed(pack2(x, xi_samples[i]));
    base_vals.row(i) = w.head(n).transpose();
    mom_vals.row(i) = w.tail(n).transpose();
  }
  Eigen::ColPivHouseholderQR<Mat> qr(design);
  if (qr.rank() < n + 1) throw InputError("fibre_linearity_test: degenerate sample set");

  FibreLinearityCheck out;
  Mat coef = qr.solve(mom_vals);
  out.momentum_residual = (design * coef - mom_vals).cwiseAbs().maxCoeff();
  for (int i = 0; i < m; ++i)
    out.base_deviation = std::max(
        out.base_deviation, (base_vals.row(i) - base_vals.row(0)).cwiseAbs().maxCoeff());
  out.pass = out.momentum_residual <= tol && out.base_deviation <= tol;
  return out;
}

OneParameterFamily translation_family(int n, const Vec& direction) {
  if (direction.size() != n) throw ArityError("translation_family: direction size mismatch");
  return OneParameterFamily(
      n,
      [direction](double s, const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> out = x;
        for (int i = 0; i < x.size(); ++i) out[i] = x[i] + S(s) * S(direction[i]);
        return out;
      },
      [direction](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> out(x.size());
        for (int i = 0; i < x.size(); ++i) out[i] = S(direction[i]);
        return out;
      });
}

OneParameterFamily rotation_family(int axis) {
  if (axis < 0 || axis > 2) throw InputError("rotation_family: axis must be 0, 1 or 2");
  const int a = (axis + 1) % 3, b = (axis + 2) % 3;
  return OneParameterFamily(
      3,
      [a, b](double s, const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        const double c = std::cos(s), sn = std::sin(s);
        VecX<S> out = x;
        out[a] = S(c) * x[a] - S(sn) * x[b];
        out[b] = S(sn) * x[a] + S(c) * x[b];
        return out;
      },
      [a, b](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> out = VecX<S>::Zero(3);
        out[a] = -x[b];
        out[b] = x[a];
        return out;
      });
}

OneParameterFamily identity_family(int n) {
  return OneParameterFamily(n, [](double, const auto& x) { return x; });
}

}  // namespace mech
