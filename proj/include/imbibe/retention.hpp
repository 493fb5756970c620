#pragma once

// MIP intrusion data -> water retention curve, and comparison of a calibrated
// capillary-pressure law against it.

#include <cstddef>
#include <vector>

#include "imbibe/absorption.hpp"
#include "imbibe/domain.hpp"

namespace imbibe {

struct RetentionPoint {
  double s = 0.0;  ///< saturation
  double P = 0.0;  ///< suction [g/(cm s^2)]
};

struct RetentionCurve {
  std::vector<RetentionPoint> points;
};

/// Surface tensions [N/m] and contact angles [deg]; only their ratio matters.
struct LaplaceConstants {
  double T_w = 0.073;
  double T_Hg = 0.489;
  double theta_w = 0.0;
  double theta_Hg = 130.0;

  void validate() const;
  /// T_w cos(theta_w) / (T_Hg |cos(theta_Hg)|)
  double factor() const;
};

double mip_to_suction(double p_hg, const LaplaceConstants& k = {});
double mip_saturation(double v, double v_max);
RetentionCurve build_retention_curve(const MIPDataset& data, const LaplaceConstants& k = {});

struct RetentionReport {
  std::size_t compared = 0;
  std::size_t excluded = 0;        ///< outside (s_R, s_S] or with zero pressure
  double mean_log_ratio = 0.0;     ///< mean of log10(P_c / P_MIP)
  double max_abs_log_ratio = 0.0;
  double within_decade = 0.0;      ///< fraction with |log10 ratio| <= 1
  std::vector<double> log_ratios;
};

RetentionReport retention_compare(const RetentionCurve& curve, const KPParams& p);

/// Least-squares fit of c in log space, holding the other parameters of `shape`.
double fit_capillary_coefficient(const RetentionCurve& curve, const KPParams& shape);

}  // namespace imbibe
