#pragma once

#include <cmath>
#include <cstdint>

#include "mech/calc.hpp"

namespace mech {

// Additive-recurrence (Kronecker) low-discrepancy sequence in a box.
// Pure IEEE arithmetic in a fixed order, so two runs with the same seed
// produce bit-identical samples on any platform.
class QuasiRandomBox {
 public:
  QuasiRandomBox(Vec lo, Vec hi, std::uint64_t seed = 42)
      : lo_(std::move(lo)), hi_(std::move(hi)), k_(static_cast<double>(seed % 100003)) {
    const int d = static_cast<int>(lo_.size());
    if (hi_.size() != d || d <= 0) throw InputError("QuasiRandomBox: bad box");
    // generalized golden ratio: the real root of x^(d+1) = x + 1
    double phi = 1.5;
    for (int it = 0; it < 64; ++it) {
      double f = std::pow(phi, d + 1) - phi - 1.0;
      double df = (d + 1) * std::pow(phi, d) - 1.0;
      phi -= f / df;
    }
    alpha_ = Vec(d);
    double a = 1.0;
    for (int j = 0; j < d; ++j) {
      a /= phi;
      alpha_[j] = a;
    }
  }

  Vec next() {
    const int d = static_cast<int>(lo_.size());
    k_ += 1.0;
    Vec u(d);
    for (int j = 0; j < d; ++j) {
      double t = 0.5 + k_ * alpha_[j];
      u[j] = lo_[j] + (t - std::floor(t)) * (hi_[j] - lo_[j]);
    }
    return u;
  }

 private:
  Vec lo_, hi_, alpha_;
  double k_;
};

}  // namespace mech
