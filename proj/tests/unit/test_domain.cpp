#include "doctest.h"
#include "imbibe/domain.hpp"
#include "imbibe/errors.hpp"
#include "oracles.hpp"

using namespace imbibe;

TEST_CASE("saturated vapour density polynomial") {
  CHECK(saturated_vapor_density(0.0) == doctest::Approx(5.018e-6).epsilon(1e-15));
  // 5.018 + 8.08025 + 5.1154375 + 4.88171875 = 23.09540625
  CHECK(saturated_vapor_density(25.0) == doctest::Approx(2.309540625e-5).epsilon(1e-14));
  CHECK_THROWS_AS(saturated_vapor_density(-50.0), ValidationError);
  CHECK_THROWS_AS(saturated_vapor_density(61.0), ValidationError);
  CHECK_NOTHROW(saturated_vapor_density(-10.0));
}

TEST_CASE("saturated vapour density is increasing on [0, 60]") {
  double prev = saturated_vapor_density(0.0);
  for (int i = 1; i <= 600; ++i) {
    const double v = saturated_vapor_density(i * 0.1);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("ambient moisture") {
  const MaterialSpec ghiara{"ghiara", 0.466, 9.9};
  CHECK(ambient_moisture(25.0, 0.0, ghiara, 1.0) == 0.0);
  CHECK(ambient_moisture(25.0, 0.9, ghiara, 1.0) == doctest::Approx(9.68621338125e-6).epsilon(1e-12));
  CHECK_THROWS_AS(ambient_moisture(25.0, 1.5, ghiara, 1.0), ValidationError);
  CHECK_THROWS_AS(ambient_moisture(80.0, 0.5, ghiara, 1.0), ValidationError);
}

TEST_CASE("ambient moisture is linear in UR and n0") {
  test::ParamGenerator gen(7);
  for (int i = 0; i < 200; ++i) {
    const double T = gen.uniform(-10.0, 60.0);
    const double UR = gen.uniform(0.0, 0.5);
    const MaterialSpec m{"x", gen.uniform(0.01, 0.49), std::nullopt};
    const MaterialSpec m2{"x", 2.0 * m.n0, std::nullopt};
    const double base = ambient_moisture(T, UR, m, 1.0);
    CHECK(ambient_moisture(T, 2.0 * UR, m, 1.0) == doctest::Approx(2.0 * base).epsilon(1e-14));
    CHECK(ambient_moisture(T, UR, m2, 1.0) == doctest::Approx(2.0 * base).epsilon(1e-14));
  }
}

TEST_CASE("domain type invariants") {
  CHECK_THROWS_AS((MaterialSpec{"bad", 1.0, std::nullopt}.validate()), ValidationError);
  CHECK_THROWS_AS((MaterialSpec{"bad", 0.3, 0.5}.validate()), ValidationError);
  CHECK_NOTHROW((MaterialSpec{"ok", 0.3, 1.0}.validate()));

  const MaterialSpec m{"m", 0.4, std::nullopt};
  ExperimentSetup s{5.0, 0.025, 1.0, 8.9e-3, 5400.0, 2.1e-3, 25.0, 0.9};
  CHECK_NOTHROW(s.validate(m));
  s.h2 = 5.0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.h2 = 0.0;
  s.theta_ext = 0.4;
  CHECK_THROWS_AS(s.validate(m), ValidationError);

  ImbibitionDataset d{{{60.0, 0.1}, {60.0, 0.2}}};
  CHECK_THROWS_AS(d.validate(), ValidationError);
  d.samples[1].t = 120.0;
  CHECK_NOTHROW(d.validate());
  d.samples[0].Q = -1.0;
  CHECK_THROWS_AS(d.validate(), ValidationError);

  MIPDataset mip{{{1.0, 0.2}, {2.0, 0.3}}, 0.25};
  CHECK_THROWS_AS(mip.validate(), ValidationError);
  mip.V_max = 0.3;
  CHECK_NOTHROW(mip.validate());
}
