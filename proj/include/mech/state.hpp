#pragma once

#include <string>
#include <vector>

#include "mech/calc.hpp"

namespace mech {

enum class ChartKind { tangent, phase };

// (x, v) point of a tangent chart
struct TangentState {
  Vec x;
  Vec v;
  double t = 0.0;
};

// (x, xi) point of a cotangent chart; xi holds covector components
struct PhaseState {
  Vec x;
  Vec xi;
  double t = 0.0;
};

// Uniform-step time series of 2n-dimensional chart states.
struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;
  int n = 0;  // base dimension
  ChartKind kind = ChartKind::tangent;
  std::string method;  // integrator id, recorded for the sidecar
  std::vector<Vec> states;

  int size() const { return static_cast<int>(states.size()); }
  double time_at(int i) const { return t0 + dt * i; }

  TangentState tangent_at(int i) const {
    if (kind != ChartKind::tangent) throw KindMismatchError("Trajectory: not a tangent trajectory");
    return {states[i].head(n), states[i].tail(n), time_at(i)};
  }
  PhaseState phase_at(int i) const {
    if (kind != ChartKind::phase) throw KindMismatchError("Trajectory: not a phase trajectory");
    return {states[i].head(n), states[i].tail(n), time_at(i)};
  }
};

inline Vec pack2(const Vec& a, const Vec& b) {
  Vec z(a.size() + b.size());
  z << a, b;
  return z;
}

}  // namespace mech
