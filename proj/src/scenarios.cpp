#include "mech/scenarios.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>

#include "mech/quasirandom.hpp"

namespace mech {

Charge energy_charge(const LagrangianSystem& L) {
  const int n = L.n();
  if (L.time_dependent()) throw InputError("energy_charge: autonomous systems only");
  const ScalarField Lf = L.field();
  ScalarField f(2 * n, [Lf, n](const auto& z) {
    using S = typename std::decay_t<decltype(z)>::Scalar;
    if constexpr (std::is_same_v<S, D2>) {
      throw NumericDomainError("energy_charge: second derivatives not provided");
      return S(0);
    } else {
      VecX<Dual<S>> zz(2 * n);
      for (int i = 0; i < 2 * n; ++i) zz[i] = Dual<S>(z[i]);
      S acc = S(0);
      for (int i = 0; i < n; ++i) {
        zz[n + i].dot = S(1);
        acc += Lf(zz).dot * z[n + i];
        zz[n + i].dot = S(0);
      }
      return acc - Lf(z);
    }
  });
  return {"energy", ChartKind::tangent, std::move(f)};
}

Charge hamiltonian_charge(const HamiltonianSystem& H) {
  return {"hamiltonian", ChartKind::phase, H.field()};
}

namespace {

constexpr double kPi = std::numbers::pi;

struct Params {
  double m = 1.0;
  double l = 1.0;
  double grav = 9.8;
  double k = 1.0;
};

Params read_params(const RunConfig& cfg) {
  Params p;
  for (const auto& [key, value] : cfg.params) {
    if (key == "m") p.m = value;
    else if (key == "l") p.l = value;
    else if (key == "g") p.grav = value;
    else if (key == "k") p.k = value;
    else throw InputError("unknown parameter override '" + key + "'");
  }
  if (p.m <= 0.0 || p.l <= 0.0) throw InputError("parameters m and l must be positive");
  return p;
}

struct GatedCharge {
  Charge charge;
  double tol = 0.0;   // 0 -> report only, no check row
  bool relative = false;
  std::string ref;
};

struct Built {
  std::string name;
  LagrangianSystem L;
  HamiltonianSystem H;
  TangentState s0;
  double dt = 1e-3;
  double t_end = 10.0;
  std::vector<GatedCharge> tangent_charges;
  std::vector<GatedCharge> phase_charges;
  std::function<void(const RunConfig&, const Built&, const Trajectory&, const Trajectory&,
                     std::vector<CheckResult>*)>
      extra;
};

ScalarField zero_potential(int n) {
  return ScalarField(n, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    (void)x;
    return S(0);
  });
}

// ---------------------------------------------------------------- pendulum

Built build_pendulum(const Params& p) {
  const double m = p.m, l = p.l, grav = p.grav;
  MetricField g(1, [l](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    (void)x;
    MatX<S> gm(1, 1);
    gm(0, 0) = S(l * l);
    return gm;
  });
  ScalarField U(1, [m, l, grav](const auto& x) {
    using std::cos;
    return (m * grav * l) * (1.0 - cos(x[0]));
  });
  LagrangianSystem L = natural_lagrangian(g, U, m);
  HamiltonianSystem H = dualize(L).with_separable(true);

  Built b{"pendulum", L, H, TangentState{Vec::Constant(1, 1.0), Vec::Zero(1)}, 1e-3, 10.0,
          {},        {}, {}};

  b.extra = [](const RunConfig&, const Built& bb, const Trajectory& el, const Trajectory&,
               std::vector<CheckResult>* out) {
    // time translation as a point symmetry of the extended system
    LagrangianSystem hom = homogenize(bb.L);
    Vec dir = Vec::Zero(2);
    dir[0] = 1.0;
    Charge tc = noether_charge(hom, translation_family(2, dir), "time_translation");
    Trajectory ext = embed_time(el);
    ConservationReport rep = drift(tc, ext);
    out->push_back({"time-translation-charge", "time-translation-energy",
                    rep.max_abs_drift <= 1e-5, rep.max_abs_drift, 1e-5});
    const double e0 = energy(bb.L, el.tangent_at(0));
    const double f0 = tc.f(ext.states[0]);
    out->push_back({"time-translation-charge-is-minus-energy", "time-translation-energy",
                    std::abs(f0 + e0) <= 1e-9, std::abs(f0 + e0), 1e-9});
  };
  return b;
}

// ------------------------------------------------------------------ kepler

ScalarField kepler_potential(double k) {
  return ScalarField(3, [k](const auto& x) {
    using std::sqrt;
    return -k / sqrt(x.squaredNorm());
  });
}

Built build_kepler(const Params& p) {
  const double m = p.m, k = p.k;
  MetricField g = euclidean_metric(3);
  ScalarField U = kepler_potential(k);
  LagrangianSystem L = natural_lagrangian(g, U, m);
  HamiltonianSystem H = natural_hamiltonian(g, U, m, /*constant_metric=*/true);

  // eccentric orbit, e = 0.6, semi-major axis 1: start at perihelion
  const double ecc = 0.6, a = 1.0;
  Vec x0 = Vec::Zero(3), v0 = Vec::Zero(3);
  x0[0] = a * (1.0 - ecc);
  v0[1] = std::sqrt(k / m * (1.0 + ecc) / (a * (1.0 - ecc)));
  const double period = 2.0 * kPi * std::sqrt(m * a * a * a / k);

  Built b{"kepler", L, H, TangentState{x0, v0}, 1e-3, period, {}, {}, {}};

  for (int axis = 0; axis < 3; ++axis) {
    const char* names[] = {"L1", "L2", "L3"};
    Charge c = noether_charge(L, rotation_family(axis), names[axis]);
    b.tangent_charges.push_back({c, 1e-6, true, "rotation-angular-momentum"});
  }
  for (int i = 0; i < 3; ++i)
    b.tangent_charges.push_back({lrl_charge(i, m, k, ChartKind::tangent), 1e-5, true,
                                 "runge-lenz-conservation"});
  for (int i = 0; i < 3; ++i)
    b.phase_charges.push_back({lrl_charge(i, m, k, ChartKind::phase), 0.0, true,
                               "runge-lenz-conservation"});
  b.phase_charges.push_back(
      {alpha_charge(lift_generator(rotation_family(2)), "L3_phase"), 0.0, true,
       "rotation-angular-momentum"});

  b.extra = [m, k](const RunConfig& cfg, const Built& bb, const Trajectory&, const Trajectory&,
                   std::vector<CheckResult>* out) {
    // rotation charge equals angular momentum about the axis, pointwise
    Charge c3 = noether_charge(bb.L, rotation_family(2), "L3");
    QuasiRandomBox box(Vec::Constant(6, -1.5), Vec::Constant(6, 1.5), cfg.seed);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      Vec z = box.next();
      const double expected = m * (z[0] * z[4] - z[1] * z[3]);
      worst = std::max(worst, std::abs(c3.f(z) - expected));
    }
    out->push_back({"rotation-charge-formula", "rotation-angular-momentum", worst <= 1e-9, worst,
                    1e-9});

    // the first Runge-Lenz component commutes with H
    Charge a1 = lrl_charge(0, m, k, ChartKind::phase);
    QuasiRandomBox pbox(Vec::Constant(6, -1.6), Vec::Constant(6, 1.6), cfg.seed + 1);
    double worst_pb = 0.0;
    int got = 0;
    while (got < 100) {
      Vec z = pbox.next();
      if (z.head(3).norm() < 0.3) continue;
      PhaseState s{z.head(3), z.tail(3)};
      worst_pb = std::max(worst_pb, std::abs(poisson(a1.f, bb.H.field(), s)));
      ++got;
    }
    out->push_back({"runge-lenz-commutes-with-h", "poisson-commutation", worst_pb <= 1e-8,
                    worst_pb, 1e-8});

    // its flow is not fibrewise affine, unlike a lifted point symmetry
    PhaseVectorField xa1 = PhaseVectorField::hamiltonian_of(a1.f);
    Vec probe(3);
    probe << 1.0, 0.2, -0.3;
    QuasiRandomBox fbox(Vec::Constant(3, -1.0), Vec::Constant(3, 1.0), cfg.seed + 2);
    std::vector<Vec> fibre;
    for (int i = 0; i < 10; ++i) fibre.push_back(fbox.next());
    FibreLinearityCheck lin = fibre_linearity_test(xa1, probe, fibre);
    out->push_back({"runge-lenz-flow-not-a-lift", "fibre-linearity", !lin.pass,
                    std::max(lin.momentum_residual, lin.base_deviation), 1e-8});
    FibreLinearityCheck rot = fibre_linearity_test(lift_generator(rotation_family(2)), probe,
                                                   fibre);
    out->push_back({"lifted-rotation-fibre-linear", "fibre-linearity", rot.pass,
                    std::max(rot.momentum_residual, rot.base_deviation), 1e-8});
  };
  return b;
}

// ----------------------------------------------------------- free particle

Built build_free_particle(const Params& p) {
  MetricField g = euclidean_metric(3);
  LagrangianSystem L = natural_lagrangian(g, zero_potential(3), p.m);
  HamiltonianSystem H = natural_hamiltonian(g, zero_potential(3), p.m, true);
  Vec x0 = Vec::Zero(3);
  Vec v0(3);
  v0 << 0.4, -0.3, 0.25;

  Built b{"free-particle", L, H, TangentState{x0, v0}, 1e-3, 10.0, {}, {}, {}};
  for (int i = 0; i < 3; ++i) {
    const char* names[] = {"p1", "p2", "p3"};
    Charge c = noether_charge(L, translation_family(3, Vec::Unit(3, i)), names[i]);
    b.tangent_charges.push_back({c, 1e-12, false, "translation-momentum"});
  }
  b.phase_charges.push_back(
      {alpha_charge(lift_generator(translation_family(3, Vec::Unit(3, 0))), "xi1"), 0.0, false,
       "translation-momentum"});

  b.extra = [](const RunConfig&, const Built& bb, const Trajectory& el, const Trajectory&,
               std::vector<CheckResult>* out) {
    double worst = 0.0;
    for (int i = 0; i < el.size(); ++i) {
      TangentState s = el.tangent_at(i);
      Vec expect = bb.s0.x + el.time_at(i) * bb.s0.v;
      worst = std::max(worst, (s.x - expect).lpNorm<Eigen::Infinity>());
    }
    out->push_back({"straight-line-motion", "free-motion-geodesic", worst <= 1e-9, worst, 1e-9});
  };
  return b;
}

// ------------------------------------------------------ polar free particle

Built build_polar_free(const Params& p) {
  MetricField g = metric_by_name("polar");
  LagrangianSystem L = natural_lagrangian(g, zero_potential(2), p.m);
  HamiltonianSystem H = natural_hamiltonian(g, zero_potential(2), p.m, false);
  Vec x0(2), v0(2);
  x0 << 2.0, 0.0;
  v0 << 0.3, 0.5;

  Built b{"polar-free-particle", L, H, TangentState{x0, v0}, 1e-3, 5.0, {}, {}, {}};
  Charge ang = noether_charge(L, translation_family(2, Vec::Unit(2, 1)), "angular_momentum");
  b.tangent_charges.push_back({ang, 1e-6, true, "rotation-angular-momentum"});

  b.extra = [](const RunConfig&, const Built& bb, const Trajectory& el, const Trajectory&,
               std::vector<CheckResult>* out) {
    // the same motion in the flat chart is a straight line
    const double m = 1.0;
    (void)m;
    TangentState s0 = bb.s0;
    const double r0 = s0.x[0], th0 = s0.x[1];
    Vec cx0(2), cv0(2);
    cx0 << r0 * std::cos(th0), r0 * std::sin(th0);
    cv0 << s0.v[0] * std::cos(th0) - r0 * std::sin(th0) * s0.v[1],
        s0.v[0] * std::sin(th0) + r0 * std::cos(th0) * s0.v[1];
    double worst = 0.0;
    for (int i = 0; i < el.size(); ++i) {
      TangentState s = el.tangent_at(i);
      Vec cart(2);
      cart << s.x[0] * std::cos(s.x[1]), s.x[0] * std::sin(s.x[1]);
      Vec expect = cx0 + el.time_at(i) * cv0;
      worst = std::max(worst, (cart - expect).lpNorm<Eigen::Infinity>());
    }
    out->push_back({"chart-independence", "coordinate-invariance", worst <= 1e-5, worst, 1e-5});

    // Euler-Lagrange acceleration of the kinetic system is geodesic
    MetricField g2 = metric_by_name("polar");
    TangentState probe{Vec::Constant(2, 0.0), Vec::Constant(2, 0.0)};
    probe.x << 2.0, 0.3;
    probe.v << 0.1, 0.7;
    Vec a_el = el_accel(bb.L, probe);
    Vec a_geo = geodesic_accel(g2, probe.x, probe.v);
    const double d = (a_el - a_geo).lpNorm<Eigen::Infinity>();
    out->push_back({"el-accel-is-geodesic", "free-motion-geodesic", d <= 1e-9, d, 1e-9});
  };
  return b;
}

// --------------------------------------------------------- sphere geodesic

Built build_sphere_geodesic(const Params& p) {
  MetricField g = sphere_metric(1.0);
  LagrangianSystem L = natural_lagrangian(g, zero_potential(2), p.m);
  HamiltonianSystem H = natural_hamiltonian(g, zero_potential(2), p.m, false);
  Vec x0(2), v0(2);
  x0 << kPi / 2.0, 0.0;  // equator
  v0 << 0.0, 1.0;

  Built b{"sphere-geodesic", L, H, TangentState{x0, v0}, 1e-3, 2.0 * kPi, {}, {}, {}};
  Charge ang = noether_charge(L, translation_family(2, Vec::Unit(2, 1)), "polar_axis_momentum");
  b.tangent_charges.push_back({ang, 1e-6, true, "rotation-angular-momentum"});

  b.extra = [](const RunConfig& cfg, const Built& bb, const Trajectory& el, const Trajectory&,
               std::vector<CheckResult>* out) {
    // equatorial initial data stays on the analytic great circle
    PhaseState p0 = phi(bb.L, bb.s0);
    Trajectory ham = integrate_hamilton(bb.H, p0, bb.t_end, bb.dt, HamMethod::rk4);
    const double omega = bb.s0.v[1];
    double worst = 0.0;
    for (int i = 0; i < ham.size(); ++i) {
      PhaseState s = ham.phase_at(i);
      worst = std::max(worst, std::abs(s.x[0] - kPi / 2.0));
      worst = std::max(worst, std::abs(s.x[1] - (bb.s0.x[1] + omega * ham.time_at(i))));
    }
    out->push_back({"great-circle", "geodesic-flow", worst <= 1e-6, worst, 1e-6});

    // geodesics have constant speed
    MetricField g2 = sphere_metric(1.0);
    double speed0 = 0.0, worst_speed = 0.0;
    for (int i = 0; i < el.size(); ++i) {
      TangentState s = el.tangent_at(i);
      const double sp = s.v.dot(g2.at(s.x) * s.v);
      if (i == 0) speed0 = sp;
      worst_speed = std::max(worst_speed, std::abs(sp - speed0));
    }
    out->push_back({"geodesic-speed", "geodesic-flow", worst_speed <= 1e-6, worst_speed, 1e-6});

    // derivative identity between the metric and its inverse
    QuasiRandomBox box(Vec::Constant(2, 0.4), Vec::Constant(2, 2.2), cfg.seed);
    double worst_id = 0.0;
    for (int t = 0; t < 20; ++t) {
      Vec x = box.next();
      VecX<D1> z(2);
      for (int i = 0; i < 2; ++i) z[i] = D1(x[i]);
      for (int kdir = 0; kdir < 2; ++kdir) {
        z[kdir].dot = 1.0;
        MatX<D1> gm = g2(z);
        MatX<D1> gi = gm.inverse();
        Mat gval(2, 2), dg(2, 2), dgi(2, 2);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            gval(i, j) = gm(i, j).val;
            dg(i, j) = gm(i, j).dot;
            dgi(i, j) = gi(i, j).dot;
          }
        Mat lhs = -gval * dgi * gval;  // -g d(g^{-1}) g
        worst_id = std::max(worst_id, (lhs - dg).cwiseAbs().maxCoeff());
        z[kdir].dot = 0.0;
      }
    }
    out->push_back({"metric-inverse-derivative", "metric-inverse-derivative", worst_id <= 1e-7,
                    worst_id, 1e-7});
  };
  return b;
}

// -------------------------------------------------------- free translation

Built build_free_translation(const Params& p) {
  MetricField g = euclidean_metric(2);
  LagrangianSystem L = natural_lagrangian(g, zero_potential(2), p.m);
  HamiltonianSystem H = natural_hamiltonian(g, zero_potential(2), p.m, true);
  Vec x0(2), v0(2);
  x0 << 0.3, -0.1;
  v0 << 0.8, 0.5;

  Built b{"free-translation", L, H, TangentState{x0, v0}, 1e-3, 1.0, {}, {}, {}};
  for (int i = 0; i < 2; ++i) {
    const char* names[] = {"p1", "p2"};
    Charge c = noether_charge(L, translation_family(2, Vec::Unit(2, i)), names[i]);
    b.tangent_charges.push_back({c, 1e-12, false, "translation-momentum"});
  }

  b.extra = [](const RunConfig& cfg, const Built& bb, const Trajectory&, const Trajectory&,
               std::vector<CheckResult>* out) {
    // f(x, y) = -|x - y|^2 / 2 generates rigid translation (a, xi) -> (a+xi, xi)
    ScalarField f(4, [](const auto& z) {
      using S = typename std::decay_t<decltype(z)>::Scalar;
      S acc = S(0);
      for (int i = 0; i < 2; ++i) {
        S d = z[i] - z[2 + i];
        acc -= S(0.5) * d * d;
      }
      return acc;
    });
    QuasiRandomBox box(Vec::Constant(4, -2.0), Vec::Constant(4, 2.0), cfg.seed);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      Vec z = box.next();
      Vec a = z.head(2), xi = z.tail(2);
      GeneratedPoint gp = generating_symplectomorphism(f, a, xi, a);
      worst = std::max(worst, (gp.b - (a + xi)).lpNorm<Eigen::Infinity>());
      worst = std::max(worst, (gp.eta - xi).lpNorm<Eigen::Infinity>());
    }
    out->push_back({"generated-map-is-translation", "generating-function-map", worst <= 1e-12,
                    worst, 1e-12});

    // the graph of the generated map annihilates the twisted product form
    auto gen_map = [&f](const Vec& z) {
      GeneratedPoint gp = generating_symplectomorphism(f, z.head(2), z.tail(2), Vec(z.head(2)));
      return Vec(pack2(gp.b, gp.eta));
    };
    double worst_graph = 0.0;
    QuasiRandomBox box2(Vec::Constant(4, -1.5), Vec::Constant(4, 1.5), cfg.seed + 1);
    for (int t = 0; t < 10; ++t) {
      Vec z = box2.next();
      const double h = 1e-4;
      Mat J(4, 4);
      for (int j = 0; j < 4; ++j) {
        Vec e = Vec::Zero(4);
        e[j] = h;
        J.col(j) = (gen_map(z + e) - gen_map(z - e)) / (2.0 * h);
      }
      // twisted pairing on graph tangents (u, Ju), (w, Jw)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          Vec u = Vec::Unit(4, i), w = Vec::Unit(4, j);
          const double tw = omega_eval(u, w) - omega_eval(J.col(i), J.col(j));
          worst_graph = std::max(worst_graph, std::abs(tw));
        }
    }
    out->push_back({"generated-graph-lagrangian", "graph-lagrangian", worst_graph <= 1e-7,
                    worst_graph, 1e-7});

    // time-1 free flow equals the generated map
    PhaseState s0 = phi(bb.L, bb.s0);
    Trajectory flow = integrate_hamilton(bb.H, s0, 1.0, bb.dt, HamMethod::leapfrog);
    PhaseState end = flow.phase_at(flow.size() - 1);
    GeneratedPoint gp = generating_symplectomorphism(f, s0.x, s0.xi, Vec(s0.x));
    double d = std::max((end.x - gp.b).lpNorm<Eigen::Infinity>(),
                        (end.xi - gp.eta).lpNorm<Eigen::Infinity>());
    out->push_back({"free-flow-matches-generated-map", "generating-function-map", d <= 1e-9, d,
                    1e-9});
  };
  return b;
}

// --------------------------------------------------------------- work demo

Built build_work_demo(const Params& p) {
  MetricField g = euclidean_metric(2);
  LagrangianSystem L = natural_lagrangian(g, zero_potential(2), p.m);
  HamiltonianSystem H = natural_hamiltonian(g, zero_potential(2), p.m, true);
  Vec x0(2), v0(2);
  x0 << 1.0, 0.0;
  v0 << 0.0, 1.0;

  Built b{"work-demo", L, H, TangentState{x0, v0}, 1e-3, kPi, {}, {}, {}};
  Charge c = noether_charge(L, translation_family(2, Vec::Unit(2, 0)), "p1");
  b.tangent_charges.push_back({c, 1e-12, false, "translation-momentum"});

  b.extra = [](const RunConfig&, const Built&, const Trajectory&, const Trajectory&,
               std::vector<CheckResult>* out) {
    VectorMap F(2, 2, [](const auto& x) {
      using S = typename std::decay_t<decltype(x)>::Scalar;
      VecX<S> f(2);
      f[0] = -x[1];
      f[1] = x[0];
      return f;
    });
    auto circle = [](bool upper) {
      SampledPath path;
      const int samples = 2000;
      path.t0 = 0.0;
      path.dt = kPi / (samples - 1);
      for (int i = 0; i < samples; ++i) {
        const double t = path.t0 + i * path.dt;
        Vec pt(2);
        pt << std::cos(t), (upper ? 1.0 : -1.0) * std::sin(t);
        path.points.push_back(pt);
      }
      return path;
    };
    const double w_up = work_along(F, circle(true));
    const double w_dn = work_along(F, circle(false));
    out->push_back({"work-upper-semicircle", "work-path-dependence",
                    std::abs(w_up - kPi) <= 1e-6, std::abs(w_up - kPi), 1e-6});
    out->push_back({"work-lower-semicircle", "work-path-dependence",
                    std::abs(w_dn + kPi) <= 1e-6, std::abs(w_dn + kPi), 1e-6});

    // a gradient force does path-independent work U(start) - U(end)
    auto U = [](const Vec& x) { return x[0] * x[0] + std::sin(x[1]); };
    VectorMap Fc(2, 2, [](const auto& x) {
      using S = typename std::decay_t<decltype(x)>::Scalar;
      using std::cos;
      VecX<S> f(2);
      f[0] = S(-2.0) * x[0];
      f[1] = -cos(x[1]);
      return f;
    });
    SampledPath wavy;
    const int samples = 1001;
    wavy.t0 = 0.0;
    wavy.dt = 1.5 / (samples - 1);
    for (int i = 0; i < samples; ++i) {
      const double t = wavy.t0 + i * wavy.dt;
      Vec pt(2);
      pt << t + 0.3 * std::sin(2.0 * t), 0.5 * t * t - 0.2 * std::cos(t);
      wavy.points.push_back(pt);
    }
    const double w = work_along(Fc, wavy);
    const double expect = U(wavy.points.front()) - U(wavy.points.back());
    out->push_back({"conservative-work-potential-difference", "conservative-force",
                    std::abs(w - expect) <= 1e-6, std::abs(w - expect), 1e-6});
  };
  return b;
}

Built build_scenario(const std::string& name, const Params& p) {
  if (name == "pendulum") return build_pendulum(p);
  if (name == "kepler") return build_kepler(p);
  if (name == "free-particle") return build_free_particle(p);
  if (name == "polar-free-particle") return build_polar_free(p);
  if (name == "sphere-geodesic") return build_sphere_geodesic(p);
  if (name == "free-translation") return build_free_translation(p);
  if (name == "work-demo") return build_work_demo(p);
  throw UnknownScenarioError("unknown scenario '" + name + "'");
}

}  // namespace

std::vector<ScenarioInfo> list_scenarios() {
  return {
      {"pendulum", "planar pendulum; both pictures, time-translation charge"},
      {"kepler", "attractive inverse-square orbit; angular momentum and Runge-Lenz charges"},
      {"free-particle", "flat free motion; momentum charges, straight lines"},
      {"polar-free-particle", "free motion in the polar chart; chart independence"},
      {"sphere-geodesic", "great-circle flow on the round sphere chart"},
      {"free-translation", "translation as a generating-function symplectomorphism"},
      {"work-demo", "path-dependent vs conservative work integrals"},
  };
}

RunSummary run_scenario(const RunConfig& config) {
  Params params = read_params(config);
  Built b = build_scenario(config.scenario, params);

  const double dt = config.dt > 0.0 ? config.dt : b.dt;
  const double t_end = config.t_end > 0.0 ? config.t_end : b.t_end;
  if (dt <= 0.0 || t_end <= 0.0) throw InputError("dt and t_end must be positive");
  const HamMethod method = config.method.empty() ? HamMethod::implicit_midpoint
                                                 : ham_method_from_string(config.method);

  Trajectory el = integrate_el(b.L, b.s0, t_end, dt);
  PhaseState p0 = phi(b.L, b.s0);
  Trajectory ham = integrate_hamilton(b.H, p0, t_end, dt, method);

  RunSummary summary;

  // reports for every listed charge, plus the two energies
  Charge eL = energy_charge(b.L);
  Charge eH = hamiltonian_charge(b.H);
  ConservationReport energy_rep = drift(eL, el);
  ConservationReport ham_rep = drift(eH, ham);
  summary.reports.push_back(energy_rep);
  summary.reports.push_back(ham_rep);
  for (const GatedCharge& gc : b.tangent_charges) summary.reports.push_back(drift(gc.charge, el));
  for (const GatedCharge& gc : b.phase_charges) summary.reports.push_back(drift(gc.charge, ham));

  // standard verification rows
  summary.checks.push_back({"energy-drift-el", "energy-conservation",
                            energy_rep.max_abs_drift <= 1e-5, energy_rep.max_abs_drift, 1e-5});
  const double ham_tol = method == HamMethod::rk4 ? 1e-8 : 1e-4;
  summary.checks.push_back({"hamiltonian-drift", "energy-conservation",
                            ham_rep.max_abs_drift <= ham_tol, ham_rep.max_abs_drift, ham_tol});

  Vec v_back = phi_inverse(b.L, p0.x, p0.xi);
  const double round = (v_back - b.s0.v).lpNorm<Eigen::Infinity>();
  summary.checks.push_back(
      {"legendre-roundtrip", "legendre-involution", round <= 1e-9, round, 1e-9});

  {
    Trajectory ham_rk4 = method == HamMethod::rk4
                             ? ham
                             : integrate_hamilton(b.H, p0, t_end, dt, HamMethod::rk4);
    double worst = 0.0;
    for (int i = 0; i < el.size(); ++i) {
      PhaseState mapped = phi(b.L, el.tangent_at(i));
      worst = std::max(worst,
                       (pack2(mapped.x, mapped.xi) - ham_rk4.states[i]).lpNorm<Eigen::Infinity>());
    }
    summary.checks.push_back(
        {"el-hamilton-correspondence", "el-hamilton-transport", worst <= 1e-5, worst, 1e-5});
  }

  int charge_row = 2;  // first two reports are the energies
  for (const GatedCharge& gc : b.tangent_charges) {
    const ConservationReport& rep = summary.reports[charge_row++];
    if (gc.tol > 0.0) {
      const double v = gc.relative ? rep.max_rel_drift : rep.max_abs_drift;
      summary.checks.push_back({"charge-drift-" + gc.charge.name, gc.ref, v <= gc.tol, v, gc.tol});
    }
  }
  for (const GatedCharge& gc : b.phase_charges) {
    const ConservationReport& rep = summary.reports[charge_row++];
    if (gc.tol > 0.0) {
      const double v = gc.relative ? rep.max_rel_drift : rep.max_abs_drift;
      summary.checks.push_back({"charge-drift-" + gc.charge.name, gc.ref, v <= gc.tol, v, gc.tol});
    }
  }

  if (b.extra) b.extra(config, b, el, ham, &summary.checks);

  if (config.write_files) {
    namespace fs = std::filesystem;
    const std::string dir = config.out_dir.empty() ? "runs/" + b.name : config.out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "'");

    std::vector<std::string> charge_names;
    for (const GatedCharge& gc : b.phase_charges) charge_names.push_back(gc.charge.name);
    const std::string csv = dir + "/trajectory.csv";
    write_trajectory_csv(
        csv, ham, [&](int i) { return eH.f(ham.states[i]); }, charge_names,
        [&](int c, int i) { return b.phase_charges[c].charge.f(ham.states[i]); });
    write_trajectory_sidecar(dir + "/trajectory.meta.json", ham);
    write_reports_json(dir + "/charges.json", summary.reports);
    write_verification_json(dir + "/verification.json", summary.checks);
    summary.files_written = {csv, dir + "/trajectory.meta.json", dir + "/charges.json",
                             dir + "/verification.json"};
  }
  return summary;
}

}  // namespace mech
