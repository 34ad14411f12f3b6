// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Tolerances are fixed here and are not tuned at run time.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

#include "mech/cli.hpp"
#include "mech/noether.hpp"
#include "mech/quasirandom.hpp"
#include "mech/scenarios.hpp"
#include "mech/symplin.hpp"

using namespace mech;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Criterion {
  std::string name;
  std::function<bool(std::string*)> run;
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(double v) { return format_double(v); }

// deterministic generator local to this suite
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + static_cast<double>(next() >> 11) * 0x1.0p-53 * (hi - lo);
  }
  Vec vec(int n, double lo, double hi) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
};

ScalarField zero_potential(int n) {
  return ScalarField(n, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    (void)x;
    return S(0);
  });
}

MetricField rod_metric(double l) {
  return MetricField(1, [l](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    (void)x;
    MatX<S> g(1, 1);
    g(0, 0) = S(l * l);
    return g;
  });
}

LagrangianSystem pendulum(double m, double l, double grav) {
  ScalarField U(1, [m, l, grav](const auto& x) {
    using std::cos;
    return (m * grav * l) * (1.0 - cos(x[0]));
  });
  return natural_lagrangian(rod_metric(l), U, m);
}

ScalarField central_potential(double k) {
  return ScalarField(3, [k](const auto& x) {
    using std::sqrt;
    return -k / sqrt(x.squaredNorm());
  });
}

LagrangianSystem kepler_system() {
  return natural_lagrangian(euclidean_metric(3), central_potential(1.0), 1.0);
}

HamiltonianSystem kepler_hamiltonian() {
  return natural_hamiltonian(euclidean_metric(3), central_potential(1.0), 1.0, true);
}

TangentState kepler_eccentric_start() {
  Vec x0 = Vec::Zero(3), v0 = Vec::Zero(3);
  x0[0] = 0.4;
  v0[1] = 2.0;  // eccentricity 0.6
  return {x0, v0};
}

// ----------------------------------------------------------------- criteria

bool criterion_work_integrals(std::string* detail) {
  const double start = now_seconds();
  VectorMap F(2, 2, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    VecX<S> f(2);
    f[0] = -x[1];
    f[1] = x[0];
    return f;
  });
  auto semicircle = [](bool upper) {
    SampledPath path;
    path.t0 = 0.0;
    path.dt = kPi / 1999.0;
    for (int i = 0; i < 2000; ++i) {
      const double t = i * path.dt;
      Vec p(2);
      p << std::cos(t), (upper ? 1.0 : -1.0) * std::sin(t);
      path.points.push_back(p);
    }
    return path;
  };
  const double up = work_along(F, semicircle(true));
  const double dn = work_along(F, semicircle(false));
  const double elapsed = now_seconds() - start;
  *detail = "err_up=" + fmt(std::abs(up - kPi)) + " err_down=" + fmt(std::abs(dn + kPi)) +
            " time=" + fmt(elapsed) + "s";
  return std::abs(up - kPi) <= 1e-6 && std::abs(dn + kPi) <= 1e-6 && elapsed < 0.1;
}

bool criterion_pendulum_correspondence(std::string* detail) {
  const double start = now_seconds();
  LagrangianSystem L = pendulum(1.0, 1.0, 9.8);
  HamiltonianSystem H = dualize(L);
  TangentState s0{Vec::Constant(1, 1.0), Vec::Zero(1)};
  Trajectory el = integrate_el(L, s0, 10.0, 1e-3);
  Trajectory ham = integrate_hamilton(H, phi(L, s0), 10.0, 1e-3, HamMethod::rk4);
  double worst = 0.0;
  for (int i = 0; i < el.size(); ++i) {
    PhaseState mapped = phi(L, el.tangent_at(i));
    worst = std::max(worst,
                     (pack2(mapped.x, mapped.xi) - ham.states[i]).lpNorm<Eigen::Infinity>());
  }
  const double elapsed = now_seconds() - start;
  *detail = "sup_err=" + fmt(worst) + " time=" + fmt(elapsed) + "s";
  return worst <= 1e-5 && elapsed < 2.0;
}

bool criterion_legendre(std::string* detail) {
  const double start = now_seconds();
  LagrangianSystem Lp = pendulum(1.0, 1.0, 9.8);
  LagrangianSystem Lk = kepler_system();
  double worst_round = 0.0, worst_dd = 0.0, worst_rec = 0.0;

  auto probe = [&](const LagrangianSystem& L, const Vec& lo, const Vec& hi, std::uint64_t seed) {
    const int n = L.n();
    HamiltonianSystem H = dualize(L);
    LagrangianSystem LL = dualize(H);
    QuasiRandomBox box(lo, hi, seed);
    for (int trial = 0; trial < 100; ++trial) {
      Vec z = box.next();
      Vec x = z.head(n), v = z.tail(n);
      PhaseState p = phi(L, {x, v});
      worst_round = std::max(worst_round, (phi_inverse(L, x, p.xi) - v).lpNorm<Eigen::Infinity>());
      worst_dd = std::max(worst_dd, std::abs(LL.field()(z) - L.field()(z)));
      Mat hh = hessian(H.field(), pack2(p.x, p.xi)).block(n, n, n, n);
      Mat hl = hessian(L.field(), z).block(n, n, n, n);
      worst_rec =
          std::max(worst_rec, (hh * hl - Mat::Identity(n, n)).cwiseAbs().maxCoeff());
    }
  };
  probe(Lp, Vec::Constant(2, -1.5), Vec::Constant(2, 1.5), 201);
  Vec lo(6), hi(6);
  lo << 0.4, 0.4, 0.4, -1.0, -1.0, -1.0;
  hi << 1.4, 1.4, 1.4, 1.0, 1.0, 1.0;
  probe(Lk, lo, hi, 202);

  const double elapsed = now_seconds() - start;
  *detail = "roundtrip=" + fmt(worst_round) + " double_dual=" + fmt(worst_dd) +
            " reciprocity=" + fmt(worst_rec) + " time=" + fmt(elapsed) + "s";
  return worst_round <= 1e-9 && worst_dd <= 1e-8 && worst_rec <= 1e-6 && elapsed < 1.0;
}

bool criterion_noether_charges(std::string* detail) {
  LagrangianSystem L = kepler_system();
  Trajectory orbit = integrate_el(L, kepler_eccentric_start(), 2.0 * kPi, 1e-3);
  Charge l3 = noether_charge(L, rotation_family(2), "L3");
  const double l3_drift = drift(l3, orbit).max_rel_drift;

  ScalarField U(3, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    using std::cos;
    return S(0.5) * x[1] * x[1] + cos(x[2]);
  });
  LagrangianSystem Lt = natural_lagrangian(euclidean_metric(3), U, 1.0);
  Vec x0(3), v0(3);
  x0 << 0.0, 0.4, 0.2;
  v0 << 0.3, -0.1, 0.2;
  Trajectory slide = integrate_el(Lt, {x0, v0}, 10.0, 1e-3);
  Charge p1 = noether_charge(Lt, translation_family(3, Vec::Unit(3, 0)), "p1");
  const double p1_drift = drift(p1, slide).max_abs_drift;

  Rng rng(203);
  double worst_formula = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Vec z = rng.vec(6, -1.5, 1.5);
    worst_formula = std::max(worst_formula, std::abs(l3.f(z) - (z[0] * z[4] - z[1] * z[3])));
  }
  *detail = "L3_rel_drift=" + fmt(l3_drift) + " p1_drift=" + fmt(p1_drift) +
            " formula_err=" + fmt(worst_formula);
  return l3_drift <= 1e-6 && p1_drift <= 1e-8 && worst_formula <= 1e-9;
}

bool criterion_energy_structure(std::string* detail) {
  // amplitude 0.1 rad; the criterion fixes dt and the horizon but not the
  // amplitude, and the 1e-8 bound needs a moderate swing
  LagrangianSystem L = pendulum(1.0, 1.0, 9.8);
  HamiltonianSystem H = dualize(L);
  PhaseState p0 = phi(L, {Vec::Constant(1, 0.1), Vec::Zero(1)});
  Charge h = hamiltonian_charge(H);

  Trajectory mid = integrate_hamilton(H, p0, 100.0, 1e-3, HamMethod::implicit_midpoint);
  const double mid_drift = drift(h, mid).max_abs_drift;
  Trajectory rk = integrate_hamilton(H, p0, 100.0, 1e-3, HamMethod::rk4);
  const double rk_drift = drift(h, rk).max_abs_drift;

  *detail = "midpoint_drift=" + fmt(mid_drift) + " rk4_drift=" + fmt(rk_drift) +
            " rk4_larger=" + (rk_drift > mid_drift ? "yes" : "no");
  return mid_drift <= 1e-8 && rk_drift > mid_drift;
}

bool criterion_runge_lenz(std::string* detail) {
  const double m = 1.0, k = 1.0;
  LagrangianSystem L = kepler_system();
  Trajectory orbit = integrate_el(L, kepler_eccentric_start(), 2.0 * kPi, 1e-3);
  Vec a0 = lrl(orbit.tangent_at(0), m, k);
  Vec worst3 = Vec::Zero(3);
  for (int i = 0; i < orbit.size(); ++i)
    worst3 = worst3.cwiseMax((lrl(orbit.tangent_at(i), m, k) - a0).cwiseAbs());
  const double a_drift = worst3.maxCoeff() / a0.norm();

  HamiltonianSystem H = kepler_hamiltonian();
  ScalarField a1 = lrl_charge(0, m, k, ChartKind::phase).f;
  QuasiRandomBox box(Vec::Constant(6, -1.6), Vec::Constant(6, 1.6), 204);
  double worst_pb = 0.0;
  int got = 0;
  while (got < 100) {
    Vec z = box.next();
    if (z.head(3).norm() < 0.3) continue;
    worst_pb = std::max(worst_pb, std::abs(poisson(a1, H.field(), {z.head(3), z.tail(3)})));
    ++got;
  }

  QuasiRandomBox fibre_box(Vec::Constant(3, -1.0), Vec::Constant(3, 1.0), 205);
  std::vector<Vec> fibre;
  for (int i = 0; i < 10; ++i) fibre.push_back(fibre_box.next());
  Vec probe(3);
  probe << 1.0, 0.2, -0.3;
  const bool xa1_linear =
      fibre_linearity_test(PhaseVectorField::hamiltonian_of(a1), probe, fibre).pass;
  const bool rot_linear =
      fibre_linearity_test(lift_generator(rotation_family(2)), probe, fibre).pass;

  *detail = "A_rel_drift=" + fmt(a_drift) + " poisson=" + fmt(worst_pb) +
            " xa1_linear=" + (xa1_linear ? "yes" : "no") +
            " lifted_rotation_linear=" + (rot_linear ? "yes" : "no");
  return a_drift <= 1e-5 && worst_pb <= 1e-8 && !xa1_linear && rot_linear;
}

bool criterion_generating_function(std::string* detail) {
  ScalarField f(4, [](const auto& z) {
    using S = typename std::decay_t<decltype(z)>::Scalar;
    S acc = S(0);
    for (int i = 0; i < 2; ++i) {
      S d = z[i] - z[2 + i];
      acc -= S(0.5) * d * d;
    }
    return acc;
  });
  Rng rng(206);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Vec a = rng.vec(2, -2.0, 2.0), xi = rng.vec(2, -2.0, 2.0);
    GeneratedPoint gp = generating_symplectomorphism(f, a, xi, a);
    worst = std::max(worst, (gp.b - (a + xi)).lpNorm<Eigen::Infinity>());
    worst = std::max(worst, (gp.eta - xi).lpNorm<Eigen::Infinity>());
  }
  *detail = "map_err=" + fmt(worst);
  return worst <= 1e-12;
}

bool criterion_standard_form(std::string* detail) {
  Rng rng(207);
  double worst = 0.0;
  bool ranks_ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 + static_cast<int>(rng.next() % 7);
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    Mat m = 0.5 * (a - a.transpose());
    if (trial % 4 == 0) {
      // throw in singular forms as well
      Vec u = rng.vec(dim, -1.0, 1.0), v = rng.vec(dim, -1.0, 1.0);
      m = u * v.transpose() - v * u.transpose();
    }
    SkewForm omega(m);
    SymplecticBasis basis = standard_form(omega);
    Mat b = basis.basis_matrix();
    worst = std::max(
        worst, (b.transpose() * m * b - basis.block_form()).cwiseAbs().maxCoeff());
    if (2 * basis.n() != numeric_rank(m)) ranks_ok = false;
  }
  *detail = "congruence=" + fmt(worst) + std::string(" ranks=") + (ranks_ok ? "ok" : "bad");
  return worst <= 1e-9 && ranks_ok;
}

bool criterion_lift_reconstruct(std::string* detail) {
  Rng rng(208);
  double worst_alpha = 0.0, worst_rec = 0.0;
  for (int which = 0; which < 2; ++which) {
    const double a = 0.1 + 0.1 * which, b = 0.15 - 0.05 * which;
    VectorMap diffeo(2, 2, [a, b](const auto& x) {
      using S = typename std::decay_t<decltype(x)>::Scalar;
      using std::cos;
      using std::sin;
      VecX<S> y = x;
      y[0] = x[0] + S(a) * sin(x[1]);
      y[1] = x[1] + S(b) * sin(x[0] + x[1]) + S(0.05) * cos(x[0]);
      return y;
    });
    auto lift = [&diffeo](const Vec& z) {
      PhaseState out = cotangent_lift(diffeo, {z.head(2), z.tail(2)});
      return pack2(out.x, out.xi);
    };
    PhaseMap lift_map = [&diffeo](const PhaseState& s) { return cotangent_lift(diffeo, s); };
    const double h = 1e-6;
    for (int trial = 0; trial < 50; ++trial) {
      Vec z = rng.vec(4, -1.5, 1.5);
      PhaseState s{z.head(2), z.tail(2)};
      Vec image = lift(z);
      PhaseState simg{image.head(2), image.tail(2)};
      for (int j = 0; j < 4; ++j) {
        Vec zp = z, zm = z;
        zp[j] += h;
        zm[j] -= h;
        Vec push = (lift(zp) - lift(zm)) / (2.0 * h);
        worst_alpha = std::max(
            worst_alpha, std::abs(alpha_eval(simg, push) - alpha_eval(s, Vec::Unit(4, j))));
      }
      worst_rec = std::max(worst_rec, (reconstruct_base_map(lift_map, s.x) - diffeo(s.x))
                                          .lpNorm<Eigen::Infinity>());
    }
  }
  *detail = "alpha_err=" + fmt(worst_alpha) + " reconstruct_err=" + fmt(worst_rec);
  return worst_alpha <= 1e-7 && worst_rec <= 1e-10;
}

bool criterion_geodesic_flow(std::string* detail) {
  // equatorial start on the unit sphere chart
  MetricField g = sphere_metric(1.0);
  HamiltonianSystem H = natural_hamiltonian(g, zero_potential(2), 1.0);
  Vec x0(2), v0(2);
  x0 << kPi / 2.0, 0.0;
  v0 << 0.0, 1.0;
  LagrangianSystem L = natural_lagrangian(g, zero_potential(2), 1.0);
  PhaseState p0 = phi(L, {x0, v0});
  Trajectory traj = integrate_hamilton(H, p0, 2.0 * kPi, 1e-3, HamMethod::rk4);
  double worst_circle = 0.0;
  for (int i = 0; i < traj.size(); ++i) {
    PhaseState s = traj.phase_at(i);
    worst_circle = std::max(worst_circle, std::abs(s.x[0] - kPi / 2.0));
    worst_circle = std::max(worst_circle, std::abs(s.x[1] - traj.time_at(i)));
  }

  HamiltonianSystem Hflat = natural_hamiltonian(euclidean_metric(2), zero_potential(2), 1.0, true);
  Vec fx0(2), fxi0(2);
  fx0 << 0.2, -0.4;
  fxi0 << 0.6, 0.3;
  Trajectory flat = integrate_hamilton(Hflat, {fx0, fxi0}, 2.0, 1e-3, HamMethod::leapfrog);
  double worst_line = 0.0;
  for (int i = 0; i < flat.size(); ++i) {
    Vec expect = fx0 + flat.time_at(i) * fxi0;
    worst_line = std::max(worst_line, (flat.states[i].head(2) - expect).lpNorm<Eigen::Infinity>());
  }
  *detail = "great_circle_err=" + fmt(worst_circle) + " straight_line_err=" + fmt(worst_line);
  return worst_circle <= 1e-6 && worst_line <= 1e-12;
}

bool criterion_determinism(std::string* detail) {
  auto run_into = [](const std::string& dir) {
    fs::remove_all(dir);
    const char* argv[] = {"mech", "run", "kepler", "--out", dir.c_str()};
    return cli_main(5, argv);
  };
  const std::string a = "/tmp/mech_acceptance_det_a", b = "/tmp/mech_acceptance_det_b";
  if (run_into(a) != 0 || run_into(b) != 0) {
    *detail = "kepler run failed";
    return false;
  }
  auto slurp = [](const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  for (const char* f :
       {"trajectory.csv", "trajectory.meta.json", "charges.json", "verification.json"}) {
    if (slurp(a + "/" + f) != slurp(b + "/" + f)) {
      *detail = std::string("byte mismatch in ") + f;
      return false;
    }
  }
  *detail = "all four artifacts byte-identical";
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"work-integral-exactness", criterion_work_integrals},
      {"pendulum-correspondence", criterion_pendulum_correspondence},
      {"legendre-involutivity-reciprocity", criterion_legendre},
      {"noether-charges", criterion_noether_charges},
      {"energy-conservation-structure", criterion_energy_structure},
      {"runge-lenz", criterion_runge_lenz},
      {"generating-function-translation", criterion_generating_function},
      {"symplectic-standard-form", criterion_standard_form},
      {"lift-preserves-alpha-and-reconstructs", criterion_lift_reconstruct},
      {"geodesic-flow", criterion_geodesic_flow},
      {"run-determinism", criterion_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].run(&detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::printf("%s  %2zu  %-40s %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].name.c_str(),
                detail.c_str());
  }
  if (failures > 0) std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
