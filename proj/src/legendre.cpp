#include "mech/legendre.hpp"

#include <Eigen/Dense>

namespace mech {

namespace {

// gradient over the fibre block only (coordinates n..2n-1)
Vec fibre_gradient(const ScalarField& f, const Vec& x, const Vec& w, int n) {
  VecX<D1> z(2 * n);
  for (int i = 0; i < n; ++i) z[i] = D1(x[i]);
  for (int i = 0; i < n; ++i) z[n + i] = D1(w[i]);
  Vec g(n);
  for (int i = 0; i < n; ++i) {
    z[n + i].dot = 1.0;
    D1 r = f(z);
    if (!all_finite(r)) throw NumericDomainError("fibre gradient: non-finite evaluation");
    g[i] = r.dot;
    z[n + i].dot = 0.0;
  }
  return g;
}

Mat fibre_hessian(const ScalarField& f, const Vec& x, const Vec& w, int n) {
  VecX<D2> z(2 * n);
  for (int i = 0; i < n; ++i) z[i] = D2(D1(x[i]));
  for (int i = 0; i < n; ++i) z[n + i] = D2(D1(w[i]));
  Mat h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      z[n + i].dot.val = 1.0;
      z[n + j].val.dot = 1.0;
      D2 r = f(z);
      h(i, j) = h(j, i) = r.dot.dot;
      z[n + i].dot.val = 0.0;
      z[n + j].val.dot = 0.0;
    }
  }
  return h;
}

Mat checked_fibre_hessian(const ScalarField& f, const Vec& x, const Vec& w, int n,
                          Eigen::LLT<Mat>* llt) {
  Mat h = fibre_hessian(f, x, w, n);
  llt->compute(h);
  if (llt->info() != Eigen::Success)
    throw ConvexityError("legendre: fibre Hessian not positive definite");
  return h;
}

// Damped Newton on r(w) = grad_fibre f(x, w) - target.
Vec fibre_newton(const ScalarField& f, int n, const Vec& x, const Vec& target, Vec guess,
                 const NewtonOptions& opts) {
  Eigen::LLT<Mat> llt;
  if (guess.size() == 0) {
    // exact for quadratic fibres: w0 = Hess(x, 0)^{-1} target
    checked_fibre_hessian(f, x, Vec::Zero(n), n, &llt);
    guess = llt.solve(target);
  }
  const double tol = opts.tol * (1.0 + target.norm());
  Vec w = std::move(guess);
  Vec r = fibre_gradient(f, x, w, n) - target;
  for (int it = 0; it < opts.max_iter; ++it) {
    if (r.norm() <= tol) return w;
    checked_fibre_hessian(f, x, w, n, &llt);
    Vec step = llt.solve(-r);
    double damp = 1.0;
    for (int halving = 0; halving < 40; ++halving) {
      Vec w_try = w + damp * step;
      Vec r_try = fibre_gradient(f, x, w_try, n) - target;
      if (r_try.allFinite() && r_try.norm() < r.norm()) {
        w = std::move(w_try);
        r = std::move(r_try);
        break;
      }
      damp *= 0.5;
      if (halving == 39)
        throw OutOfImageError("legendre: Newton line search stalled; target may be outside image");
    }
  }
  if (r.norm() <= tol) return w;
  throw OutOfImageError("legendre: fibre Newton did not converge; target may be outside image");
}

// value, gradient, and (optionally) full Hessian of the conjugate function
// at one chart point, obtained through the fibre solve:
//   grad = (-grad_x f(x, w*), w*)
//   Hess_ww* = f_ww^{-1},  cross blocks from the implicit function theorem
struct ConjugateModel {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

ConjugateModel conjugate_model(const ScalarField& src, int n, const Vec& x, const Vec& target,
                               const NewtonOptions& opts, bool need_grad, bool need_hess) {
  ConjugateModel m;
  Vec ws = fibre_newton(src, n, x, target, Vec(), opts);
  Vec z(2 * n);
  z.head(n) = x;
  z.tail(n) = ws;
  m.value = target.dot(ws) - src(z);
  if (!need_grad && !need_hess) return m;

  Vec g_full = gradient(src, z);
  m.grad = Vec(2 * n);
  m.grad.head(n) = -g_full.head(n);
  m.grad.tail(n) = ws;
  if (!need_hess) return m;

  Mat h_full = hessian(src, z);
  Mat s_xx = h_full.block(0, 0, n, n);
  Mat s_xw = h_full.block(0, n, n, n);
  Mat s_ww = h_full.block(n, n, n, n);
  Eigen::LLT<Mat> llt(s_ww);
  if (llt.info() != Eigen::Success)
    throw ConvexityError("legendre: fibre Hessian not positive definite");
  Mat ww_inv = llt.solve(Mat::Identity(n, n));
  Mat cross = -s_xw * ww_inv;  // d(-grad_x src)/d(target) block
  m.hess = Mat(2 * n, 2 * n);
  m.hess.block(0, 0, n, n) = -s_xx + s_xw * ww_inv * s_xw.transpose();
  m.hess.block(0, n, n, n) = cross;
  m.hess.block(n, 0, n, n) = cross.transpose();
  m.hess.block(n, n, n, n) = ww_inv;
  m.hess = 0.5 * (m.hess + m.hess.transpose());
  return m;
}

// ScalarField backend for the lazily-evaluated conjugate.  Dual inputs are
// propagated through the local quadratic model, which is exact to the order
// the duals carry.
class ConjugateField final : public ScalarField::Impl {
 public:
  ConjugateField(ScalarField src, int n, NewtonOptions opts)
      : src_(std::move(src)), n_(n), opts_(opts) {}

  double ev(const Vec& z) const override {
    return conjugate_model(src_, n_, z.head(n_), z.tail(n_), opts_, false, false).value;
  }

  D1 ev(const VecX<D1>& z) const override {
    Vec base(2 * n_);
    for (int i = 0; i < 2 * n_; ++i) base[i] = z[i].val;
    ConjugateModel m =
        conjugate_model(src_, n_, base.head(n_), base.tail(n_), opts_, true, false);
    D1 out(m.value, 0.0);
    for (int i = 0; i < 2 * n_; ++i) out.dot += m.grad[i] * z[i].dot;
    return out;
  }

  D2 ev(const VecX<D2>& z) const override {
    Vec base(2 * n_);
    for (int i = 0; i < 2 * n_; ++i) base[i] = z[i].val.val;
    ConjugateModel m = conjugate_model(src_, n_, base.head(n_), base.tail(n_), opts_, true, true);
    D2 out(D1(m.value, 0.0), D1(0.0, 0.0));
    for (int i = 0; i < 2 * n_; ++i) {
      out.val.dot += m.grad[i] * z[i].val.dot;
      out.dot.val += m.grad[i] * z[i].dot.val;
      out.dot.dot += m.grad[i] * z[i].dot.dot;
      for (int j = 0; j < 2 * n_; ++j)
        out.dot.dot += m.hess(i, j) * z[i].val.dot * z[j].dot.val;
    }
    return out;
  }

 private:
  ScalarField src_;
  int n_;
  NewtonOptions opts_;
};

void require_convex_autonomous(const LagrangianSystem& L, const char* who) {
  if (!L.strongly_convex()) throw ConvexityError(std::string(who) + ": system not strongly convex");
  if (L.time_dependent())
    throw InputError(std::string(who) + ": time-dependent systems are handled fibrewise at fixed t");
}

}  // namespace

PhaseState phi(const LagrangianSystem& L, const TangentState& s) {
  require_convex_autonomous(L, "phi");
  const int n = L.n();
  Eigen::LLT<Mat> llt;
  checked_fibre_hessian(L.field(), s.x, s.v, n, &llt);  // convexity check at the point
  Vec xi = fibre_gradient(L.field(), s.x, s.v, n);
  return {s.x, std::move(xi), s.t};
}

TangentState phi(const HamiltonianSystem& H, const PhaseState& s) {
  if (!H.strongly_convex()) throw ConvexityError("phi: system not strongly convex");
  Vec v = fibre_gradient(H.field(), s.x, s.xi, H.n());
  return {s.x, std::move(v), s.t};
}

Vec phi_inverse(const LagrangianSystem& L, const Vec& x, const Vec& xi, const Vec& guess,
                const NewtonOptions& opts) {
  require_convex_autonomous(L, "phi_inverse");
  return fibre_newton(L.field(), L.n(), x, xi, guess, opts);
}

Vec phi_inverse(const HamiltonianSystem& H, const Vec& x, const Vec& v, const Vec& guess,
                const NewtonOptions& opts) {
  if (!H.strongly_convex()) throw ConvexityError("phi_inverse: system not strongly convex");
  return fibre_newton(H.field(), H.n(), x, v, guess, opts);
}

double dual_value(const LagrangianSystem& L, const Vec& x, const Vec& xi,
                  const NewtonOptions& opts) {
  require_convex_autonomous(L, "dual_value");
  return conjugate_model(L.field(), L.n(), x, xi, opts, false, false).value;
}

double dual_value(const HamiltonianSystem& H, const Vec& x, const Vec& v,
                  const NewtonOptions& opts) {
  if (!H.strongly_convex()) throw ConvexityError("dual_value: system not strongly convex");
  return conjugate_model(H.field(), H.n(), x, v, opts, false, false).value;
}

HamiltonianSystem dualize(const LagrangianSystem& L, const NewtonOptions& opts) {
  require_convex_autonomous(L, "dualize");
  const int n = L.n();
  ScalarField H(2 * n, std::make_shared<ConjugateField>(L.field(), n, opts));
  return {n, std::move(H), /*strongly_convex=*/true};
}

LagrangianSystem dualize(const HamiltonianSystem& H, const NewtonOptions& opts) {
  if (!H.strongly_convex()) throw ConvexityError("dualize: system not strongly convex");
  const int n = H.n();
  ScalarField L(2 * n, std::make_shared<ConjugateField>(H.field(), n, opts));
  return {n, std::move(L), /*time_dependent=*/false, /*strongly_convex=*/true};
}

}  // namespace mech
