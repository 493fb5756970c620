#pragma once

// Core domain types. Units are CGS throughout: lengths in cm, masses in g,
// times in s, pressures in g/(cm s^2) (= 0.1 Pa), viscosity in Poise.

#include <optional>
#include <string>
#include <vector>

namespace imbibe {

struct MaterialSpec {
  std::string name;
  double n0 = 0.0;             ///< open porosity, volume fraction in (0, 1)
  std::optional<double> tau;   ///< tortuosity (informational), >= 1

  void validate() const;
};

struct ExperimentSetup {
  double h1 = 0.0;      ///< specimen height [cm]
  double h2 = 0.0;      ///< immersed height [cm]; metadata only in the 1-D model
  double rho = 1.0;     ///< liquid density [g/cm^3]
  double mu = 8.9e-3;   ///< liquid viscosity [Poise]
  double Tf = 0.0;      ///< final observation time [s]
  double theta_ext = 0.0;  ///< ambient moisture volume fraction
  std::optional<double> temperature;  ///< [degC]
  std::optional<double> UR;           ///< relative humidity fraction

  void validate() const;
  void validate(const MaterialSpec& material) const;
};

struct ImbibitionSample {
  double t = 0.0;  ///< [s]
  double Q = 0.0;  ///< absorbed mass per unit area [g/cm^2]
};

struct ImbibitionDataset {
  std::vector<ImbibitionSample> samples;

  std::size_t size() const noexcept { return samples.size(); }
  std::vector<double> times() const;
  std::vector<double> values() const;
  void validate() const;
};

struct MIPPoint {
  double P_Hg = 0.0;  ///< mercury pressure [g/(cm s^2)]
  double V = 0.0;     ///< specific intruded volume
};

struct MIPDataset {
  std::vector<MIPPoint> points;
  double V_max = 0.0;

  void validate() const;
};

/// Saturated vapour density [g/cm^3] from the cubic fit in temperature,
/// valid on [-10, 60] degC.
double saturated_vapor_density(double temperature_c);

/// Ambient moisture volume fraction SVD(T)/rho * n0 * UR.
double ambient_moisture(double temperature_c, double UR, const MaterialSpec& material, double rho);

}  // namespace imbibe
