#pragma once

#include "mech/calc.hpp"

namespace mech {

// Hamiltonian on the canonical T*M chart: scalar field of arity 2n on
// (x, xi).  `separable` marks H = T(xi) + U(x), which leapfrog requires.
class HamiltonianSystem {
 public:
  HamiltonianSystem(int n, ScalarField H, bool strongly_convex, bool separable = false)
      : n_(n), H_(std::move(H)), strongly_convex_(strongly_convex), separable_(separable) {
    if (n <= 0) throw ArityError("HamiltonianSystem: n must be positive");
    if (H_.dim() != 2 * n) throw ArityError("HamiltonianSystem: field arity must be 2n");
  }

  int n() const { return n_; }
  const ScalarField& field() const { return H_; }
  bool strongly_convex() const { return strongly_convex_; }
  bool separable() const { return separable_; }

  HamiltonianSystem with_separable(bool s) const {
    HamiltonianSystem h = *this;
    h.separable_ = s;
    return h;
  }

 private:
  int n_;
  ScalarField H_;
  bool strongly_convex_;
  bool separable_;
};

}  // namespace mech
