#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mech/hamiltonian.hpp"
#include "mech/lagrangian.hpp"
#include "mech/legendre.hpp"
#include "mech/state.hpp"

namespace mech {

// One-parameter family of chart diffeomorphisms theta_s with theta_0 = id.
// The map is stored generically in the point argument so tangent lifts and
// lifted-family jacobians differentiate exactly.
class OneParameterFamily {
 public:
  struct Impl {
    virtual ~Impl() = default;
    virtual Vec ev(double s, const Vec& x) const = 0;
    virtual VecX<D1> ev(double s, const VecX<D1>& x) const = 0;
    virtual VecX<D2> ev(double s, const VecX<D2>& x) const = 0;
  };

  template <typename F,
            std::enable_if_t<!std::is_convertible_v<F, std::shared_ptr<const Impl>>, int> = 0>
  OneParameterFamily(int n, F map) : n_(n), impl_(std::make_shared<Model<F>>(std::move(map))) {
    check_identity_at_zero();
  }
  template <typename F, typename G,
            std::enable_if_t<!std::is_convertible_v<F, std::shared_ptr<const Impl>>, int> = 0>
  OneParameterFamily(int n, F map, G gen)
      : n_(n),
        impl_(std::make_shared<Model<F>>(std::move(map))),
        generator_(std::make_shared<VectorMap>(n, n, std::move(gen))) {
    check_identity_at_zero();
  }
  OneParameterFamily(int n, std::shared_ptr<const Impl> impl,
                     std::shared_ptr<const VectorMap> generator);

  int n() const { return n_; }
  bool has_analytic_generator() const { return generator_ != nullptr; }
  const VectorMap& analytic_generator() const { return *generator_; }

  template <typename S>
  VecX<S> operator()(double s, const VecX<S>& x) const {
    if (x.size() != n_) throw ArityError("OneParameterFamily: point has wrong dimension");
    return impl_->ev(s, x);
  }

  // the map at fixed s, as a differentiable chart map
  VectorMap at(double s) const;

 private:
  template <typename F>
  struct Model final : Impl {
    F f;
    explicit Model(F fn) : f(std::move(fn)) {}
    Vec ev(double s, const Vec& x) const override { return f(s, x); }
    VecX<D1> ev(double s, const VecX<D1>& x) const override { return f(s, x); }
    VecX<D2> ev(double s, const VecX<D2>& x) const override { return f(s, x); }
  };

  void check_identity_at_zero() const;

  int n_;
  std::shared_ptr<const Impl> impl_;
  std::shared_ptr<const VectorMap> generator_;
};

// infinitesimal generator at a point: analytic when provided, otherwise the
// central difference (theta_h(x) - theta_{-h}(x)) / 2h with h = 1e-6
Vec generator(const OneParameterFamily& fam, const Vec& x);

// Vector field on the phase chart, split into base and fibre components.
class PhaseVectorField {
 public:
  PhaseVectorField(int n, VectorMap field);

  // Hamiltonian vector field of a scalar: (grad_xi G, -grad_x G)
  static PhaseVectorField hamiltonian_of(const ScalarField& G);

  int n() const { return n_; }
  const VectorMap& field() const { return field_; }

  std::pair<Vec, Vec> operator()(const PhaseState& s) const;
  Vec packed(const Vec& z) const { return field_(z); }

 private:
  int n_;
  VectorMap field_;
};

// named conserved-quantity candidate on one of the two chart kinds
struct Charge {
  std::string name;
  ChartKind chart = ChartKind::tangent;
  ScalarField f;
};

struct ConservationReport {
  std::string name;
  double initial = 0.0;
  double max_abs_drift = 0.0;
  double max_rel_drift = 0.0;
  int samples = 0;
};

struct SymmetryCheck {
  bool pass = false;
  double max_violation = 0.0;
};

struct HamSymmetryCheck {
  bool pass = false;
  double max_dH = 0.0;         // worst |W . grad H| over samples
  double max_closedness = 0.0; // worst antisymmetry defect of d(W _| omega)
};

struct FibreLinearityCheck {
  bool pass = false;
  double momentum_residual = 0.0;  // affine fit residual of the fibre part
  double base_deviation = 0.0;     // xi-dependence of the base part
};

// |L(theta_s(x), Jac theta_s(x) v) - L(x, v)| <= 1e-8 (1 + |L|) over the grid
SymmetryCheck check_lagrangian_symmetry(const LagrangianSystem& L, const OneParameterFamily& fam,
                                        const std::vector<TangentState>& samples,
                                        const std::vector<double>& s_grid);

// F(x, v) = grad_v L(x, v) . W(x)
Charge noether_charge(const LagrangianSystem& L, const OneParameterFamily& fam,
                      const std::string& name);

ConservationReport drift(const Charge& G, const Trajectory& traj);

// (i) W . grad H = 0, (ii) d(W _| omega) = 0 by Richardson finite differences
HamSymmetryCheck check_hamiltonian_symmetry(const HamiltonianSystem& H, const PhaseVectorField& W,
                                            const std::vector<PhaseState>& samples);

// f(x, xi) = alpha(W) = xi . (base part of W)
Charge alpha_charge(const PhaseVectorField& W, const std::string& name);

// Psi_s = cotangent lift of theta_s, as a family on the 2n phase chart
OneParameterFamily lift_symmetry(const OneParameterFamily& fam);

// generator of the lifted family: (W(x), -(dW/dx)^T xi)
PhaseVectorField lift_generator(const OneParameterFamily& fam);

// charge transport across the fibre map of a strongly convex system
Charge transfer_charge_to_phase(const Charge& G, const LagrangianSystem& L,
                                const NewtonOptions& opts = {});
Charge transfer_charge_to_tangent(const Charge& G, const LagrangianSystem& L);

// Laplace-Runge-Lenz vector p x L - m k r/|r| with p = xi or p = m v
Vec lrl(const PhaseState& s, double m, double k);
Vec lrl(const TangentState& s, double m, double k);
// the same, as chart scalar fields (component 0, 1 or 2)
Charge lrl_charge(int component, double m, double k, ChartKind chart);

// Affine-fit test of whether W can be the lift of a point symmetry at x:
// the fibre component must be affine in xi and the base component must not
// depend on xi at all.  Needs at least 2n+2 fibre samples.
FibreLinearityCheck fibre_linearity_test(const PhaseVectorField& W, const Vec& x,
                                         const std::vector<Vec>& xi_samples, double tol = 1e-8);

// standard symmetry families
OneParameterFamily translation_family(int n, const Vec& direction);
OneParameterFamily rotation_family(int axis);  // about coordinate axis in R^3
OneParameterFamily identity_family(int n);

}  // namespace mech
