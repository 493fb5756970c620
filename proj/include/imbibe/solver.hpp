#pragma once

// Explicit finite-difference solver for  d_t theta = d_zz B(theta / n0)  on a
// 1-D column z in [0, h1]. Node 0 is the immersed face, node N the top face.

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "imbibe/absorption.hpp"
#include "imbibe/domain.hpp"

namespace imbibe {

/// Top face held at theta_ext.
struct DirichletTop {
  double theta_ext = 0.0;
};

/// Top face loses water at rate K_w [1/cm]: -d_z theta = K_w (theta - theta_ext).
struct RobinTop {
  double K_w = 0.0;
  double theta_ext = 0.0;
};

using TopBoundary = std::variant<DirichletTop, RobinTop>;

struct SolverConfig {
  double dz = 2.5e-2;        ///< [cm]
  std::optional<double> dt;  ///< [s]; derived from the stability bound when absent
  double cfl_safety = 0.9;
  TopBoundary top_bc = DirichletTop{};
  std::vector<double> snapshot_times;  ///< profile + Q output times [s]
  std::vector<double> sample_times;    ///< Q-only output times [s], e.g. dataset times
  std::optional<double> breakthrough_threshold;  ///< saturation; defaults to s_R

  void validate() const;
};

struct SaturationProfile {
  double t = 0.0;
  std::vector<double> theta;  ///< nodal volume fractions, j = 0..N
};

struct QSample {
  double t = 0.0;
  double Q = 0.0;  ///< [g/cm^2]
};

struct SimulationResult {
  double dz = 0.0;
  double dt = 0.0;  ///< step actually used (<= requested / stable step)
  double n0 = 0.0;
  double rho = 0.0;
  std::size_t steps = 0;
  std::vector<SaturationProfile> profiles;
  std::vector<QSample> q_curve;  ///< union of snapshot and sample times, increasing
  /// Step-resolution time at which the last interior node reached the threshold.
  std::optional<double> breakthrough_time;

  /// Q at exactly the given output times (each must be one of the q_curve times).
  std::vector<double> q_at(std::span<const double> times) const;
};

/// Explicit initial state: theta at every node. Node 0 is then held fixed at
/// theta[0] instead of n0.
struct InitialState {
  std::vector<double> theta;
};

/// Number of grid intervals N = floor(h1 / dz).
std::size_t grid_intervals(double h1, double dz);

/// cfl_safety * n0 dz^2 / (2 max B').
double stable_timestep(const AbsorptionModel& model, const MaterialSpec& material, const SolverConfig& config);

/// Imbibition run: dry interior, bottom node saturated (theta = n0), top per config.
SimulationResult simulate(const AbsorptionModel& model, const MaterialSpec& material, const ExperimentSetup& setup,
                          const SolverConfig& config);

SimulationResult simulate(const AbsorptionModel& model, const MaterialSpec& material, const ExperimentSetup& setup,
                          const SolverConfig& config, const InitialState& initial);

/// Trapezoidal rho * integral of theta over the column.
double absorbed_mass(const SaturationProfile& profile, double dz, double rho);

/// Earliest snapshot time at which theta/n0 at the last interior node reaches
/// `threshold`; std::nullopt if it never does.
std::optional<double> breakthrough_time(const SimulationResult& result, double threshold);

}  // namespace imbibe
