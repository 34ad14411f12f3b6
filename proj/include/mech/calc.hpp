#pragma once

#include <memory>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "mech/dual.hpp"
#include "mech/errors.hpp"

namespace mech {

template <typename S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <typename S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = VecX<double>;
using Mat = MatX<double>;

// A smooth real-valued function on a chart domain, stored type-erased so the
// same user callable can be evaluated on plain doubles or on (nested) duals.
// Values are immutable after construction; evaluation is pure.
class ScalarField {
 public:
  struct Impl {
    virtual ~Impl() = default;
    virtual double ev(const Vec& x) const = 0;
    virtual D1 ev(const VecX<D1>& x) const = 0;
    virtual D2 ev(const VecX<D2>& x) const = 0;
  };

  template <typename F,
            std::enable_if_t<!std::is_convertible_v<F, std::shared_ptr<const Impl>>, int> = 0>
  ScalarField(int dim, F f) : dim_(dim), impl_(std::make_shared<Model<F>>(std::move(f))) {
    if (dim <= 0) throw ArityError("ScalarField: dim must be positive");
  }
  ScalarField(int dim, std::shared_ptr<const Impl> impl) : dim_(dim), impl_(std::move(impl)) {
    if (dim <= 0) throw ArityError("ScalarField: dim must be positive");
  }

  int dim() const { return dim_; }

  template <typename S>
  S operator()(const VecX<S>& x) const {
    if (x.size() != dim_)
      throw ArityError("ScalarField: expected arity " + std::to_string(dim_) + ", got " +
                       std::to_string(x.size()));
    return impl_->ev(x);
  }

 private:
  template <typename F>
  struct Model final : Impl {
    F f;
    explicit Model(F fn) : f(std::move(fn)) {}
    double ev(const Vec& x) const override { return f(x); }
    D1 ev(const VecX<D1>& x) const override { return f(x); }
    D2 ev(const VecX<D2>& x) const override { return f(x); }
  };

  int dim_;
  std::shared_ptr<const Impl> impl_;
};

// A smooth map between chart domains, evaluated the same three ways.
class VectorMap {
 public:
  struct Impl {
    virtual ~Impl() = default;
    virtual Vec ev(const Vec& x) const = 0;
    virtual VecX<D1> ev(const VecX<D1>& x) const = 0;
    virtual VecX<D2> ev(const VecX<D2>& x) const = 0;
  };

  template <typename F,
            std::enable_if_t<!std::is_convertible_v<F, std::shared_ptr<const Impl>>, int> = 0>
  VectorMap(int dim_in, int dim_out, F f)
      : dim_in_(dim_in), dim_out_(dim_out), impl_(std::make_shared<Model<F>>(std::move(f))) {
    if (dim_in <= 0 || dim_out <= 0) throw ArityError("VectorMap: dims must be positive");
  }
  VectorMap(int dim_in, int dim_out, std::shared_ptr<const Impl> impl)
      : dim_in_(dim_in), dim_out_(dim_out), impl_(std::move(impl)) {
    if (dim_in <= 0 || dim_out <= 0) throw ArityError("VectorMap: dims must be positive");
  }

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }

  template <typename S>
  VecX<S> operator()(const VecX<S>& x) const {
    if (x.size() != dim_in_)
      throw ArityError("VectorMap: expected arity " + std::to_string(dim_in_) + ", got " +
                       std::to_string(x.size()));
    VecX<S> y = impl_->ev(x);
    if (y.size() != dim_out_) throw ArityError("VectorMap: callable returned wrong output size");
    return y;
  }

 private:
  template <typename F>
  struct Model final : Impl {
    F f;
    explicit Model(F fn) : f(std::move(fn)) {}
    Vec ev(const Vec& x) const override { return f(x); }
    VecX<D1> ev(const VecX<D1>& x) const override { return f(x); }
    VecX<D2> ev(const VecX<D2>& x) const override { return f(x); }
  };

  int dim_in_, dim_out_;
  std::shared_ptr<const Impl> impl_;
};

// Exact gradient via one dual pass per coordinate.  S may itself be a dual
// type, in which case the field is evaluated one nesting level deeper.
template <typename S>
VecX<S> gradient(const ScalarField& f, const VecX<S>& x) {
  const int n = f.dim();
  if (x.size() != n) throw ArityError("gradient: dimension mismatch");
  VecX<Dual<S>> z(n);
  for (int j = 0; j < n; ++j) z[j] = Dual<S>(x[j]);
  VecX<S> g(n);
  for (int i = 0; i < n; ++i) {
    z[i].dot = S(1);
    Dual<S> r = f(z);
    if constexpr (std::is_same_v<S, double>) {
      if (!all_finite(r)) throw NumericDomainError("gradient: non-finite evaluation");
    }
    g[i] = r.dot;
    z[i].dot = S(0);
  }
  return g;
}

template <typename S>
MatX<S> jacobian(const VectorMap& F, const VecX<S>& x) {
  const int n = F.dim_in();
  if (x.size() != n) throw ArityError("jacobian: dimension mismatch");
  VecX<Dual<S>> z(n);
  for (int j = 0; j < n; ++j) z[j] = Dual<S>(x[j]);
  MatX<S> J(F.dim_out(), n);
  for (int j = 0; j < n; ++j) {
    z[j].dot = S(1);
    VecX<Dual<S>> r = F(z);
    for (int i = 0; i < F.dim_out(); ++i) {
      if constexpr (std::is_same_v<S, double>) {
        if (!all_finite(r[i])) throw NumericDomainError("jacobian: non-finite evaluation");
      }
      J(i, j) = r[i].dot;
    }
    z[j].dot = S(0);
  }
  return J;
}

// Exact Hessian via nested duals; symmetrized as (H + H^T)/2 after the
// mirror so the result is symmetric to the bit.
inline Mat hessian(const ScalarField& f, const Vec& x) {
  const int n = f.dim();
  if (x.size() != n) throw ArityError("hessian: dimension mismatch");
  VecX<D2> z(n);
  for (int j = 0; j < n; ++j) z[j] = D2(D1(x[j]));
  Mat h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      z[i].dot.val = 1.0;
      z[j].val.dot = 1.0;
      D2 r = f(z);
      if (!all_finite(r)) throw NumericDomainError("hessian: non-finite evaluation");
      h(i, j) = r.dot.dot;
      h(j, i) = r.dot.dot;
      z[i].dot.val = 0.0;
      z[j].val.dot = 0.0;
    }
  }
  return 0.5 * (h + h.transpose());
}

}  // namespace mech
