#pragma once

#include <cstdint>
#include <vector>

#include "mech/calc.hpp"

namespace mech::test {

// deterministic 64-bit generator for test inputs
struct SplitMix64 {
  std::uint64_t s;
  explicit SplitMix64(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }
  Vec vec(int n, double lo, double hi) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
};

// independent oracle: second-order central differences
inline Vec cd_gradient(const ScalarField& f, const Vec& x, double h = 1e-5) {
  const int n = f.dim();
  Vec g(n);
  for (int i = 0; i < n; ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline Mat cd_jacobian(const VectorMap& F, const Vec& x, double h = 1e-5) {
  Mat J(F.dim_out(), F.dim_in());
  for (int j = 0; j < F.dim_in(); ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    J.col(j) = (F(xp) - F(xm)) / (2.0 * h);
  }
  return J;
}

inline Mat cd_hessian(const ScalarField& f, const Vec& x, double h = 1e-4) {
  const int n = f.dim();
  Mat H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[i] += h; xpp[j] += h;
      xpm[i] += h; xpm[j] -= h;
      xmp[i] -= h; xmp[j] += h;
      xmm[i] -= h; xmm[j] -= h;
      H(i, j) = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h * h);
    }
  return H;
}

// random multivariate polynomial, evaluable on any scalar type
struct Poly {
  int dim;
  std::vector<std::vector<int>> exponents;
  std::vector<double> coeffs;

  template <typename S>
  S operator()(const VecX<S>& x) const {
    S acc = S(0);
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
      S term = S(coeffs[t]);
      for (int i = 0; i < dim; ++i)
        for (int e = 0; e < exponents[t][i]; ++e) term = term * x[i];
      acc += term;
    }
    return acc;
  }
};

inline Poly random_poly(SplitMix64* rng, int dim, int max_degree, int terms) {
  Poly p;
  p.dim = dim;
  for (int t = 0; t < terms; ++t) {
    std::vector<int> exps(dim, 0);
    int degree_left = max_degree;
    for (int i = 0; i < dim; ++i) {
      const int e = static_cast<int>(rng->next() % (degree_left + 1));
      exps[i] = e;
      degree_left -= e;
    }
    p.exponents.push_back(exps);
    p.coeffs.push_back(rng->uniform(-2.0, 2.0));
  }
  return p;
}

}  // namespace mech::test
