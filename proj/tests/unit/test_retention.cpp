#include <cmath>

#include "doctest.h"
#include "imbibe/errors.hpp"
#include "imbibe/retention.hpp"
#include "oracles.hpp"

using namespace imbibe;

TEST_CASE("Laplace conversion") {
  CHECK(mip_to_suction(0.0) == 0.0);
  CHECK(LaplaceConstants{}.factor() == doctest::Approx(0.23224507026750532).epsilon(1e-14));
  CHECK(mip_to_suction(1.0) == doctest::Approx(0.23225).epsilon(1e-4));
  test::ParamGenerator gen(1);
  for (int i = 0; i < 100; ++i) {
    const double x = gen.log_uniform(1e3, 1e10), y = gen.log_uniform(1e3, 1e10);
    CHECK(mip_to_suction(2.0 * x) == doctest::Approx(2.0 * mip_to_suction(x)).epsilon(1e-15));
    CHECK((x < y) == (mip_to_suction(x) < mip_to_suction(y)));
  }
  LaplaceConstants right;
  right.theta_Hg = 90.0;
  CHECK_THROWS_AS(mip_to_suction(1.0, right), DomainError);
  CHECK_THROWS_AS(mip_to_suction(-1.0), ValidationError);
  LaplaceConstants bad;
  bad.T_w = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("MIP saturation") {
  CHECK(mip_saturation(2.0, 2.0) == 0.0);
  CHECK(mip_saturation(0.0, 2.0) == 1.0);
  CHECK(mip_saturation(0.5, 2.0) == 0.75);
  CHECK_THROWS_AS(mip_saturation(3.0, 2.0), ValidationError);
  CHECK_THROWS_AS(mip_saturation(0.0, 0.0), ValidationError);
}

TEST_CASE("retention curve construction") {
  const auto one = build_retention_curve(MIPDataset{{{1.0, 0.0}}, 1.0});
  REQUIRE(one.points.size() == 1);
  CHECK(one.points[0].s == 1.0);
  CHECK(one.points[0].P == doctest::Approx(0.23225).epsilon(1e-4));

  MIPDataset d;
  d.V_max = 0.2;
  for (int i = 0; i <= 20; ++i) d.points.push_back({1e5 * std::pow(1.5, i), 0.01 * i});
  const auto curve = build_retention_curve(d);
  REQUIRE(curve.points.size() == 21);
  CHECK(curve.points.front().s == 0.0);
  CHECK(curve.points.back().s == 1.0);
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    CHECK(curve.points[i].s > curve.points[i - 1].s);
    CHECK(curve.points[i].P < curve.points[i - 1].P);
  }
  for (const auto& p : curve.points) {
    CHECK(p.s >= 0.0);
    CHECK(p.s <= 1.0);
    CHECK(p.P >= 0.0);
  }
}

TEST_CASE("self-comparison is exact") {
  test::ParamGenerator gen(9);
  for (int k = 0; k < 50; ++k) {
    const KPParams p = gen.kp();
    RetentionCurve curve;
    for (int i = 1; i <= 40; ++i) {
      const double s = p.s_R + (p.s_S - p.s_R) * i / 41.0;
      curve.points.push_back({s, kp_capillary_pressure(s, p)});
    }
    const auto rep = retention_compare(curve, p);
    CHECK(rep.compared == 40);
    CHECK(rep.excluded == 0);
    CHECK(rep.max_abs_log_ratio < 1e-12);
    CHECK(rep.within_decade == 1.0);

    KPParams scaled = p;
    scaled.c *= 10.0;
    CHECK(retention_compare(curve, scaled).mean_log_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit_capillary_coefficient(curve, scaled) == doctest::Approx(p.c).epsilon(1e-10));
  }
}

TEST_CASE("comparison excludes points outside the support") {
  const KPParams p{0.3, 0.9, 0.25, 1e6, 1e-10, 1.45};
  RetentionCurve curve{{{0.1, 1e7}, {0.3, 1e7}, {0.5, 2e5}, {0.9, 1e3}, {0.95, 1e3}, {0.6, 0.0}}};
  const auto rep = retention_compare(curve, p);
  CHECK(rep.compared == 1);
  CHECK(rep.excluded == 5);
  CHECK_THROWS_AS(retention_compare(RetentionCurve{{{0.1, 1.0}}}, p), ValidationError);
  CHECK_THROWS_AS(retention_compare(RetentionCurve{}, p), ValidationError);
}
