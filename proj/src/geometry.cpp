#include "mech/geometry.hpp"

#include <Eigen/Dense>

namespace mech {

Mat MetricField::at(const Vec& x) const {
  Mat g = (*this)(x);
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DefinitenessError("MetricField: matrix not symmetric at queried point");
  Eigen::LLT<Mat> llt(0.5 * (g + g.transpose()));
  if (llt.info() != Eigen::Success)
    throw DefinitenessError("MetricField: matrix not positive definite at queried point");
  return g;
}

Vec musical(const MetricField& g, const Vec& x, const Vec& w, Musical direction) {
  if (w.size() != g.dim()) throw ArityError("musical: vector has wrong dimension");
  Mat gm = g.at(x);
  if (direction == Musical::flat) return gm * w;
  return Eigen::LLT<Mat>(gm).solve(w);
}

namespace {

// all first partials of the metric in one dual pass per coordinate
std::vector<Mat> metric_partials(const MetricField& g, const Vec& x) {
  const int n = g.dim();
  VecX<D1> z(n);
  for (int j = 0; j < n; ++j) z[j] = D1(x[j]);
  std::vector<Mat> dg(n);
  for (int k = 0; k < n; ++k) {
    z[k].dot = 1.0;
    MatX<D1> gm = g(z);
    Mat d(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = gm(i, j).dot;
    dg[k] = d;
    z[k].dot = 0.0;
  }
  return dg;
}

}  // namespace

std::vector<Mat> christoffel(const MetricField& g, const Vec& x) {
  const int n = g.dim();
  Mat gm = g.at(x);
  Eigen::LLT<Mat> llt(gm);
  Mat ginv = llt.solve(Mat::Identity(n, n));
  std::vector<Mat> dg = metric_partials(g, x);

  std::vector<Mat> gamma(n, Mat::Zero(n, n));
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      for (int p = 0; p <= a; ++p) {
        double s = 0.0;
        for (int k = 0; k < n; ++k)
          s += ginv(k, b) * (dg[p](a, k) + dg[a](p, k) - dg[k](a, p));
        gamma[b](a, p) = 0.5 * s;
        gamma[b](p, a) = 0.5 * s;
      }
    }
  }
  return gamma;
}

Vec geodesic_accel(const MetricField& g, const Vec& x, const Vec& v) {
  if (v.size() != g.dim()) throw ArityError("geodesic_accel: velocity has wrong dimension");
  std::vector<Mat> gamma = christoffel(g, x);
  const int n = g.dim();
  Vec a(n);
  for (int b = 0; b < n; ++b) a[b] = -v.dot(gamma[b] * v);
  return a;
}

MetricField euclidean_metric(int n) {
  return MetricField(n, [n](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    (void)x;
    return MatX<S>(MatX<S>::Identity(n, n));
  });
}

MetricField polar_metric() {
  return MetricField(2, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    MatX<S> g = MatX<S>::Zero(2, 2);
    g(0, 0) = S(1);
    g(1, 1) = x[0] * x[0];
    return g;
  });
}

MetricField sphere_metric(double R) {
  return MetricField(2, [R](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    using std::sin;
    MatX<S> g = MatX<S>::Zero(2, 2);
    S s = sin(x[0]);
    g(0, 0) = S(R * R);
    g(1, 1) = (R * R) * s * s;
    return g;
  });
}

MetricField metric_by_name(const std::string& name) {
  auto paren = name.find('(');
  std::string head = name.substr(0, paren);
  if (head == "polar") return polar_metric();
  if (paren == std::string::npos || name.back() != ')')
    throw InputError("metric_by_name: cannot parse '" + name + "'");
  std::string arg = name.substr(paren + 1, name.size() - paren - 2);
  if (head == "euclidean") return euclidean_metric(std::stoi(arg));
  if (head == "sphere") return sphere_metric(std::stod(arg));
  throw InputError("metric_by_name: unknown metric '" + name + "'");
}

}  // namespace mech
