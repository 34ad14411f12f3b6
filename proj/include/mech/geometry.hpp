#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mech/calc.hpp"

namespace mech {

// x |-> symmetric positive-definite matrix, evaluable on duals so metric
// derivatives come out of the same engine as everything else.
class MetricField {
 public:
  struct Impl {
    virtual ~Impl() = default;
    virtual Mat ev(const Vec& x) const = 0;
    virtual MatX<D1> ev(const VecX<D1>& x) const = 0;
    virtual MatX<D2> ev(const VecX<D2>& x) const = 0;
  };

  template <typename F>
  MetricField(int dim, F f) : dim_(dim), impl_(std::make_shared<Model<F>>(std::move(f))) {
    if (dim <= 0) throw ArityError("MetricField: dim must be positive");
  }

  int dim() const { return dim_; }

  template <typename S>
  MatX<S> operator()(const VecX<S>& x) const {
    if (x.size() != dim_) throw ArityError("MetricField: dimension mismatch");
    return impl_->ev(x);
  }

  // validated evaluation: symmetric to 1e-12 and Cholesky-positive
  Mat at(const Vec& x) const;

 private:
  template <typename F>
  struct Model final : Impl {
    F f;
    explicit Model(F fn) : f(std::move(fn)) {}
    Mat ev(const Vec& x) const override { return f(x); }
    MatX<D1> ev(const VecX<D1>& x) const override { return f(x); }
    MatX<D2> ev(const VecX<D2>& x) const override { return f(x); }
  };

  int dim_;
  std::shared_ptr<const Impl> impl_;
};

enum class Musical { flat, sharp };

// flat: w |-> g(x) w;  sharp: w |-> g(x)^{-1} w
Vec musical(const MetricField& g, const Vec& x, const Vec& w, Musical direction);

// Gamma^b_{ap}, returned as one matrix per upper index b (symmetric in a, p)
std::vector<Mat> christoffel(const MetricField& g, const Vec& x);

// a^b = -Gamma^b_{ap} v^a v^p
Vec geodesic_accel(const MetricField& g, const Vec& x, const Vec& v);

MetricField euclidean_metric(int n);
MetricField polar_metric();          // diag(1, r^2) on (r, theta)
MetricField sphere_metric(double R); // diag(R^2, R^2 sin^2 phi) on (phi, theta)

// parses "euclidean(n)", "polar", "sphere(R)"
MetricField metric_by_name(const std::string& name);

}  // namespace mech
