#include "imbibe/retention.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "imbibe/errors.hpp"

namespace imbibe {

namespace {

double cos_deg(double deg) { return std::cos(deg * std::numbers::pi / 180.0); }

}  // namespace

void LaplaceConstants::validate() const {
  if (!(T_w > 0.0 && T_Hg > 0.0)) throw ValidationError("Laplace constants: surface tensions must be positive");
  if (!(std::abs(cos_deg(theta_Hg)) > 1e-12))
    throw DomainError("Laplace constants: mercury contact angle of 90 degrees makes the conversion singular");
}

double LaplaceConstants::factor() const {
  validate();
  return T_w * cos_deg(theta_w) / (T_Hg * std::abs(cos_deg(theta_Hg)));
}

double mip_to_suction(double p_hg, const LaplaceConstants& k) {
  if (!(p_hg >= 0.0)) throw ValidationError("mip_to_suction: mercury pressure must be >= 0");
  return k.factor() * p_hg;
}

double mip_saturation(double v, double v_max) {
  if (!(v_max > 0.0)) throw ValidationError("mip_saturation: V_max must be positive");
  if (!(v >= 0.0 && v <= v_max)) throw ValidationError("mip_saturation: V must lie in [0, V_max]");
  return 1.0 - v / v_max;
}

RetentionCurve build_retention_curve(const MIPDataset& data, const LaplaceConstants& k) {
  data.validate();
  RetentionCurve curve;
  curve.points.reserve(data.points.size());
  for (const auto& p : data.points) curve.points.push_back({mip_saturation(p.V, data.V_max), mip_to_suction(p.P_Hg, k)});
  std::stable_sort(curve.points.begin(), curve.points.end(),
                   [](const RetentionPoint& a, const RetentionPoint& b) { return a.s < b.s; });
  return curve;
}

RetentionReport retention_compare(const RetentionCurve& curve, const KPParams& p) {
  if (curve.points.empty()) throw ValidationError("retention_compare: empty curve");
  const KPFunctions f(p, 1.0);
  RetentionReport rep;
  double sum = 0.0;
  std::size_t within = 0;
  for (const auto& pt : curve.points) {
    if (!(pt.s > p.s_R && pt.s <= p.s_S) || !(pt.P > 0.0)) {
      ++rep.excluded;
      continue;
    }
    const double pc = f.capillary_pressure(pt.s);
    if (!(pc > 0.0)) {
      ++rep.excluded;
      continue;
    }
    const double lr = std::log10(pc / pt.P);
    rep.log_ratios.push_back(lr);
    sum += lr;
    rep.max_abs_log_ratio = std::max(rep.max_abs_log_ratio, std::abs(lr));
    if (std::abs(lr) <= 1.0) ++within;
  }
  rep.compared = rep.log_ratios.size();
  if (rep.compared == 0)
    throw ValidationError("retention_compare: no curve point falls inside the model support (s_R, s_S)");
  rep.mean_log_ratio = sum / static_cast<double>(rep.compared);
  rep.within_decade = static_cast<double>(within) / static_cast<double>(rep.compared);
  return rep;
}

double fit_capillary_coefficient(const RetentionCurve& curve, const KPParams& shape) {
  KPParams unit = shape;
  unit.c = 1.0;
  // With c = 1 the mean log ratio is exactly -log10(c_opt).
  const auto rep = retention_compare(curve, unit);
  return std::pow(10.0, -rep.mean_log_ratio);
}

}  // namespace imbibe
