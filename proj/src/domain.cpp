#include "imbibe/domain.hpp"

#include <cmath>
#include <string>

#include "imbibe/errors.hpp"

namespace imbibe {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

void MaterialSpec::validate() const {
  require(std::isfinite(n0) && n0 > 0.0 && n0 < 1.0,
          "material '" + name + "': porosity n0 must lie in (0, 1)");
  if (tau) require(std::isfinite(*tau) && *tau >= 1.0, "material '" + name + "': tortuosity must be >= 1");
}

void ExperimentSetup::validate() const {
  require(std::isfinite(h1) && h1 > 0.0, "setup: h1 must be positive");
  require(std::isfinite(h2) && h2 >= 0.0 && h2 < h1, "setup: h2 must satisfy 0 <= h2 < h1");
  require(std::isfinite(rho) && rho > 0.0, "setup: rho must be positive");
  require(std::isfinite(mu) && mu > 0.0, "setup: mu must be positive");
  require(std::isfinite(Tf) && Tf > 0.0, "setup: Tf must be positive");
  require(std::isfinite(theta_ext) && theta_ext >= 0.0, "setup: theta_ext must be >= 0");
  if (UR) require(*UR >= 0.0 && *UR <= 1.0, "setup: UR must lie in [0, 1]");
}

void ExperimentSetup::validate(const MaterialSpec& material) const {
  validate();
  material.validate();
  require(theta_ext < material.n0, "setup: theta_ext must be below the porosity n0");
}

std::vector<double> ImbibitionDataset::times() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.t);
  return out;
}

std::vector<double> ImbibitionDataset::values() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.Q);
  return out;
}

void ImbibitionDataset::validate() const {
  require(!samples.empty(), "imbibition dataset is empty");
  double prev = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    const std::string at = " (sample " + std::to_string(k + 1) + ")";
    require(std::isfinite(s.t) && s.t > 0.0, "imbibition dataset: times must be positive" + at);
    require(k == 0 || s.t > prev, "imbibition dataset: times must be strictly increasing" + at);
    require(std::isfinite(s.Q) && s.Q >= 0.0, "imbibition dataset: Q must be >= 0" + at);
    prev = s.t;
  }
}

void MIPDataset::validate() const {
  require(!points.empty(), "MIP dataset is empty");
  require(std::isfinite(V_max) && V_max > 0.0, "MIP dataset: V_max must be positive");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const std::string at = " (point " + std::to_string(i + 1) + ")";
    require(std::isfinite(p.P_Hg) && p.P_Hg >= 0.0, "MIP dataset: pressure must be >= 0" + at);
    require(std::isfinite(p.V) && p.V >= 0.0 && p.V <= V_max, "MIP dataset: V must lie in [0, V_max]" + at);
  }
}

double saturated_vapor_density(double temperature_c) {
  if (!(temperature_c >= -10.0 && temperature_c <= 60.0))
    throw ValidationError("saturated_vapor_density: temperature " + std::to_string(temperature_c) +
                          " degC outside the fit range [-10, 60]");
  const double T = temperature_c;
  return (5.018 + 0.32321 * T + 8.1847e-3 * T * T + 3.1243e-4 * T * T * T) * 1e-6;
}

double ambient_moisture(double temperature_c, double UR, const MaterialSpec& material, double rho) {
  require(UR >= 0.0 && UR <= 1.0, "ambient_moisture: UR must lie in [0, 1]");
  require(rho > 0.0, "ambient_moisture: rho must be positive");
  material.validate();
  return saturated_vapor_density(temperature_c) / rho * material.n0 * UR;
}

}  // namespace imbibe
