#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "imbibe/errors.hpp"
#include "imbibe/solver.hpp"
#include "oracles.hpp"

using namespace imbibe;

namespace {

MaterialSpec material(double n0) { return MaterialSpec{"m", n0, std::nullopt}; }

ExperimentSetup setup(double h1, double Tf, double theta_ext = 0.0) {
  ExperimentSetup s;
  s.h1 = h1;
  s.h2 = 0.025;
  s.Tf = Tf;
  s.theta_ext = theta_ext;
  return s;
}

SolverConfig config(double dz, double theta_ext = 0.0) {
  SolverConfig c;
  c.dz = dz;
  c.top_bc = DirichletTop{theta_ext};
  return c;
}

// Smooth profile strictly inside (0, n0) so B stays smooth for the cubic model.
InitialState smooth_state(double n0, double h1, std::size_t N) {
  InitialState s;
  for (std::size_t j = 0; j <= N; ++j) {
    const double z = h1 * static_cast<double>(j) / static_cast<double>(N);
    s.theta.push_back(n0 * (0.8 - 0.6 * z / h1 + 0.1 * std::sin(std::numbers::pi * z / h1)));
  }
  return s;
}

const std::vector<double>& final_profile(const SimulationResult& r) { return r.profiles.back().theta; }

// L2 distance between a fine and a coarse solution at the coarse nodes.
double l2_gap(const std::vector<double>& coarse, const std::vector<double>& fine, double dz_coarse) {
  const std::size_t ratio = (fine.size() - 1) / (coarse.size() - 1);
  double sum = 0.0;
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    const double d = coarse[j] - fine[j * ratio];
    sum += d * d;
  }
  return std::sqrt(sum * dz_coarse);
}

}  // namespace

TEST_CASE("stable time step") {
  const AbsorptionModel m = CubicModel(CubicParams{0.5, 1.0, 1.95e-2});
  auto cfg = config(2.5e-2);
  cfg.cfl_safety = 1.0;
  CHECK(stable_timestep(m, material(0.466), cfg) == doctest::Approx(7.467948717948718e-3).epsilon(1e-14));
  const double base = stable_timestep(m, material(0.466), cfg);
  cfg.dz /= 2.0;
  CHECK(stable_timestep(m, material(0.466), cfg) == doctest::Approx(base / 4.0).epsilon(1e-14));
  cfg.dz *= 2.0;
  const AbsorptionModel m2 = CubicModel(CubicParams{0.5, 1.0, 3.9e-2});
  CHECK(stable_timestep(m2, material(0.466), cfg) == doctest::Approx(base / 2.0).epsilon(1e-14));
  cfg.cfl_safety = 0.9;
  CHECK(stable_timestep(m, material(0.466), cfg) == doctest::Approx(0.9 * base).epsilon(1e-14));
}

TEST_CASE("grid intervals") {
  CHECK(grid_intervals(5.0, 2.5e-2) == 200);
  CHECK(grid_intervals(5.0, 0.1) == 50);
  CHECK(grid_intervals(1.0, 0.3) == 3);
  CHECK_THROWS_AS(grid_intervals(1.0, 2.0), ValidationError);
  CHECK_THROWS_AS(grid_intervals(1.0, 0.0), ValidationError);
}

TEST_CASE("absorbed mass") {
  CHECK(absorbed_mass(SaturationProfile{0.0, std::vector<double>(201, 0.0)}, 0.025, 1.0) == 0.0);
  CHECK(absorbed_mass(SaturationProfile{0.0, std::vector<double>(201, 0.466)}, 0.025, 1.0) ==
        doctest::Approx(2.33).epsilon(1e-13));
  CHECK(absorbed_mass(SaturationProfile{0.0, {1.0, 0.0, 1.0}}, 1.0, 1.0) == 1.0);
  CHECK_THROWS_AS(absorbed_mass(SaturationProfile{0.0, {1.0}}, 1.0, 1.0), ValidationError);
}

TEST_CASE("CFL enforcement") {
  const AbsorptionModel m = CubicModel(CubicParams{0.1, 0.9, 1e-2});
  auto cfg = config(0.05);
  const double bound = stable_timestep(m, material(0.4), cfg);
  cfg.dt = bound * 1.01;
  try {
    simulate(m, material(0.4), setup(1.0, 10.0), cfg);
    FAIL("expected CflViolation");
  } catch (const CflViolation& e) {
    CHECK(e.bound() == doctest::Approx(bound));
    CHECK(e.requested() == doctest::Approx(bound * 1.01));
  }
  cfg.dt = bound;
  CHECK_NOTHROW(simulate(m, material(0.4), setup(1.0, 10.0), cfg));
  // The commonly quoted pair dz = 2.5e-2, dt = 3.5e-2 is unstable for D = 1.95e-2.
  const AbsorptionModel g = CubicModel(CubicParams{0.675, 0.9994, 1.95e-2});
  auto ref = config(2.5e-2);
  ref.dt = 3.5e-2;
  CHECK_THROWS_AS(simulate(g, material(0.466), setup(5.0, 10.0), ref), CflViolation);
}

TEST_CASE("input validation") {
  const AbsorptionModel m = CubicModel(CubicParams{0.1, 0.9, 1e-2});
  auto cfg = config(0.05, 0.5);
  CHECK_THROWS_AS(simulate(m, material(0.4), setup(1.0, 10.0), cfg), ValidationError);  // theta_ext > n0
  cfg = config(0.05);
  cfg.snapshot_times = {11.0};
  CHECK_THROWS_AS(simulate(m, material(0.4), setup(1.0, 10.0), cfg), ValidationError);
  cfg = config(0.6);
  CHECK_THROWS_AS(simulate(m, material(0.4), setup(1.0, 10.0), cfg), ValidationError);  // no interior node
  cfg = config(0.05);
  cfg.cfl_safety = 1.5;
  CHECK_THROWS_AS(simulate(m, material(0.4), setup(1.0, 10.0), cfg), ValidationError);
}

TEST_CASE("equilibrium is a fixed point") {
  for (double n0 : {0.466, 0.385}) {
    const AbsorptionModel models[] = {CubicModel(CubicParams{0.1, 0.9, 1e-2}),
                                      KPModel(KPParams{0.55, 0.9994, 0.25, 1.98e5, 7.93e-10, 1.45}, 8.9e-3)};
    for (const auto& m : models) {
      auto cfg = config(0.05, n0);
      cfg.snapshot_times = {0.0, 5.0, 10.0};
      const auto r = simulate(m, material(n0), setup(1.0, 10.0), cfg, InitialState{std::vector<double>(21, n0)});
      for (const auto& p : r.profiles)
        for (double th : p.theta) CHECK(th == n0);
      for (const auto& q : r.q_curve) CHECK(q.Q == doctest::Approx(n0).epsilon(1e-15));
    }
  }
}

TEST_CASE("discrete max principle, random parameters") {
  test::ParamGenerator gen(101);
  for (int k = 0; k < 60; ++k) {
    const double n0 = gen.uniform(0.1, 0.6);
    const AbsorptionModel m = (k % 2 == 0) ? AbsorptionModel(CubicModel(gen.cubic()))
                                           : AbsorptionModel(KPModel(gen.kp(), 8.9e-3));
    auto cfg = config(0.05, gen.uniform(0.0, n0));
    cfg.cfl_safety = gen.uniform(0.5, 1.0);
    const double dt = stable_timestep(m, material(n0), cfg);
    const double Tf = 1500.0 * dt;
    for (int i = 0; i <= 100; ++i) cfg.snapshot_times.push_back(Tf * (i / 100.0));
    const auto r = simulate(m, material(n0), setup(1.0, Tf), cfg);
    for (const auto& p : r.profiles)
      for (double th : p.theta) {
        CHECK(th >= 0.0);
        CHECK(th <= n0);
      }
    for (const auto& q : r.q_curve) CHECK(q.Q >= 0.0);
  }
}

TEST_CASE("monotone uptake, ghiara setup") {
  const AbsorptionModel m = KPModel(KPParams{0.675, 0.9994, 0.25, 1.4e6, 7.65e-10, 1.865}, 8.9e-3);
  auto cfg = config(0.1, 2.1e-3);
  for (int i = 0; i <= 540; ++i) cfg.sample_times.push_back(10.0 * i);
  cfg.snapshot_times = {5400.0};
  const auto r = simulate(m, material(0.466), setup(5.0, 5400.0, 2.1e-3), cfg);
  REQUIRE(r.q_curve.size() == 541);
  for (std::size_t i = 1; i < r.q_curve.size(); ++i) {
    CHECK(r.q_curve[i].t > r.q_curve[i - 1].t);
    CHECK(r.q_curve[i].Q >= r.q_curve[i - 1].Q - 1e-12 * 0.466 * 5.0);
  }
  CHECK(r.q_curve.back().Q == doctest::Approx(2.0).epsilon(0.1));
  CHECK(r.q_curve.back().Q < 2.33);
}

TEST_CASE("output times and interpolation") {
  const AbsorptionModel m = CubicModel(CubicParams{0.1, 0.9, 1e-2});
  auto cfg = config(0.05);
  cfg.snapshot_times = {10.0, 0.0, 5.0, 5.0};
  cfg.sample_times = {2.345, 5.0};
  const auto r = simulate(m, material(0.4), setup(1.0, 10.0), cfg);
  REQUIRE(r.profiles.size() == 3);
  CHECK(r.profiles[0].t == 0.0);
  CHECK(r.profiles[2].t == 10.0);
  REQUIRE(r.q_curve.size() == 4);
  CHECK(r.q_curve[1].t == 2.345);
  CHECK(r.q_at(std::vector<double>{2.345, 10.0}).size() == 2);
  CHECK_THROWS_AS(r.q_at(std::vector<double>{3.0}), ValidationError);
  CHECK(r.dt * static_cast<double>(r.steps) == doctest::Approx(10.0).epsilon(1e-14));
  for (const auto& p : r.profiles)
    CHECK(absorbed_mass(p, r.dz, r.rho) == doctest::Approx(r.q_at(std::vector<double>{p.t})[0]).epsilon(1e-15));
  // Initial uptake is the trapezoid weight of the bottom node.
  CHECK(r.q_curve[0].Q == doctest::Approx(0.4 * 0.05 / 2.0));
}

TEST_CASE("breakthrough time") {
  const AbsorptionModel m = CubicModel(CubicParams{0.1, 0.9, 1e-2});
  auto cfg = config(0.05);
  for (int i = 0; i <= 20; ++i) cfg.snapshot_times.push_back(10.0 * i);
  const auto r = simulate(m, material(0.4), setup(1.0, 200.0), cfg);
  CHECK(breakthrough_time(r, 0.0) == 0.0);
  CHECK_FALSE(breakthrough_time(r, 1.1).has_value());
  const auto snap = breakthrough_time(r, 0.1);
  REQUIRE(snap.has_value());
  REQUIRE(r.breakthrough_time.has_value());
  // Step-resolution detection lies within one snapshot interval before the snapshot one.
  CHECK(*r.breakthrough_time <= *snap);
  CHECK(*r.breakthrough_time > *snap - 10.0);
  SimulationResult empty;
  CHECK_THROWS_AS(breakthrough_time(empty, 0.1), ValidationError);
}

TEST_CASE("self-convergence in space") {
  const double n0 = 0.5, h1 = 1.0, Tf = 10.0;
  const AbsorptionModel m = CubicModel(CubicParams{0.0, 1.0, 1e-2});
  std::vector<std::vector<double>> sols;
  std::vector<double> dzs = {0.1, 0.05, 0.025, 0.0125};
  for (double dz : dzs) {
    auto cfg = config(dz, 0.2 * n0);
    cfg.snapshot_times = {Tf};
    const double bound = stable_timestep(m, material(n0), cfg);
    cfg.dt = Tf / std::ceil(Tf / (0.5 * bound));
    const auto N = grid_intervals(h1, dz);
    sols.push_back(final_profile(simulate(m, material(n0), setup(h1, Tf), cfg, smooth_state(n0, h1, N))));
  }
  const double e1 = l2_gap(sols[0], sols[1], dzs[0]);
  const double e2 = l2_gap(sols[1], sols[2], dzs[1]);
  const double e3 = l2_gap(sols[2], sols[3], dzs[2]);
  MESSAGE("space ratios " << e1 / e2 << " " << e2 / e3);
  CHECK(e1 / e2 > 3.0);
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("self-convergence in time") {
  const double n0 = 0.5, h1 = 1.0, Tf = 10.0, dz = 0.05;
  const AbsorptionModel m = CubicModel(CubicParams{0.0, 1.0, 1e-2});
  const auto N = grid_intervals(h1, dz);
  std::vector<std::vector<double>> sols;
  for (double steps : {200.0, 400.0, 800.0, 1600.0}) {
    auto cfg = config(dz, 0.2 * n0);
    cfg.snapshot_times = {Tf};
    cfg.dt = Tf / steps;
    sols.push_back(final_profile(simulate(m, material(n0), setup(h1, Tf), cfg, smooth_state(n0, h1, N))));
  }
  const double e1 = l2_gap(sols[0], sols[1], dz);
  const double e2 = l2_gap(sols[1], sols[2], dz);
  const double e3 = l2_gap(sols[2], sols[3], dz);
  MESSAGE("time ratios " << e1 / e2 << " " << e2 / e3);
  CHECK(e1 / e2 > 1.7);
  CHECK(e2 / e3 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("Robin top converges to Dirichlet as K_w grows") {
  const double n0 = 0.4, h1 = 1.0, Tf = 300.0, theta_ext = 0.01;
  const AbsorptionModel m = CubicModel(CubicParams{0.1, 0.9, 1e-2});
  std::vector<double> times;
  for (int i = 0; i <= 60; ++i) times.push_back(5.0 * i);
  auto run = [&](const TopBoundary& bc) {
    SolverConfig cfg = config(0.05);
    cfg.top_bc = bc;
    cfg.sample_times = times;
    return simulate(m, material(n0), setup(h1, Tf, theta_ext), cfg).q_at(times);
  };
  const auto dirichlet = run(DirichletTop{theta_ext});
  double prev = INFINITY;
  for (double K_w : {1e2, 1e3, 1e4}) {
    const auto robin = run(RobinTop{K_w, theta_ext});
    double gap = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) gap = std::max(gap, std::abs(robin[i] - dirichlet[i]));
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-3);
  // Small K_w keeps the top wetter than the Dirichlet value once water arrives.
  const auto weak = run(RobinTop{1e-2, theta_ext});
  CHECK(weak.back() >= dirichlet.back());
}
