#pragma once

// Inverse problem: fit absorption-model parameters to imbibition data by
// minimizing the mean relative square error of the absorbed-mass curve with
// simulated annealing. Step 1 fits the cubic model; step 2 fits the kP model
// starting from the step-1 saturation bounds.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "imbibe/absorption.hpp"
#include "imbibe/domain.hpp"
#include "imbibe/retention.hpp"
#include "imbibe/solver.hpp"

namespace imbibe {

/// (1/N) sum (q_num - q_data)^2 / q_num^2.
double error_functional(std::span<const double> q_num, std::span<const double> q_data);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct CubicBounds {
  Interval s_R{0.05, 0.95};
  Interval s_S{0.06, 1.0};
  Interval D{1e-5, 1e-1};    ///< searched in log space
  double min_gap = 0.01;     ///< s_S >= s_R + min_gap

  void validate() const;
};

/// Step-2 search box. The absorption function depends on K_s and c only
/// through C = K_s c, so the search runs over C.
struct KPBounds {
  std::optional<Interval> s_R;  ///< default: warm start +/- warm_width
  std::optional<Interval> s_S;
  double warm_width = 0.05;
  Interval alpha{0.05, 0.95};
  Interval gamma{1.06, 5.0};
  Interval product{1e-7, 1e-2};  ///< C [g cm / s^2], searched in log space
  double min_gap = 0.01;
  double gamma_margin = 1.01;  ///< gamma >= alpha + gamma_margin
  double alpha0 = 0.25;        ///< initial alpha
  double gamma0 = 1.6;         ///< initial gamma

  void validate() const;
};

struct AnnealerConfig {
  /// Acceptance is exp(-ln(E_new / E_old) / T), so T is in units of ln E. Default 3.
  std::optional<double> initial_temperature;
  double cooling_factor = 0.95;
  std::size_t iterations_per_temperature = 50;
  std::size_t max_evaluations = 5000;
  double neighbor_scale = 0.1;  ///< initial proposal std-dev as a fraction of bound width
  std::uint64_t rng_seed = 1;
  /// Evaluations reserved (out of max_evaluations) for a Nelder-Mead polish of
  /// the best annealing point. 0 disables it.
  std::size_t polish_evaluations = 500;

  void validate() const;
};

struct SearchDimension {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  bool log_scale = false;
};

struct TracePoint {
  std::size_t evaluation = 0;
  double error = 0.0;  ///< error of the candidate evaluated at this index
  double best = 0.0;   ///< running minimum
};

struct AnnealResult {
  std::vector<double> x;
  double error = 0.0;
  std::size_t evaluations = 0;
  std::vector<TracePoint> trace;
};

using Objective = std::function<double(std::span<const double>)>;
/// Projects a clipped candidate onto dependent constraints (e.g. s_S >= s_R + gap).
using Repair = std::function<void(std::span<double>)>;

/// Metropolis acceptance with geometric cooling; single-coordinate Gaussian
/// proposals clipped to the box, with per-coordinate step adaptation on the
/// acceptance ratio of each temperature stage. Non-finite objective values are
/// rejected. The best point is then polished with Nelder-Mead inside the same
/// box. Deterministic for a given seed.
AnnealResult simulated_annealing(const Objective& objective, std::span<const SearchDimension> dims,
                                 const AnnealerConfig& config, std::optional<std::vector<double>> x0 = std::nullopt,
                                 const Repair& repair = {});

struct CalibrationResult {
  std::variant<CubicParams, KPParams> params;
  double error = 0.0;
  std::size_t evaluations = 0;
  std::vector<TracePoint> trace;
};

/// E for one forward solve of `model` against `data` (CFL-derived step).
double imbibition_error(const AbsorptionModel& model, const ImbibitionDataset& data, const MaterialSpec& material,
                        const ExperimentSetup& setup, const SolverConfig& solver);

CalibrationResult calibrate_cubic(const ImbibitionDataset& data, const MaterialSpec& material,
                                  const ExperimentSetup& setup, const SolverConfig& solver, const CubicBounds& bounds,
                                  const AnnealerConfig& annealer,
                                  std::optional<CubicParams> initial = std::nullopt);

/// How to split the fitted C = K_s c into its factors.
struct ProductSplit {
  std::optional<double> K_s;             ///< measured permeability at saturation [cm^2]
  std::optional<RetentionCurve> retention;  ///< MIP-derived curve used to fit c
};

/// Initial kP point for step 2: saturation bounds from the warm start and C
/// chosen so that D_kP equals the warm-start D.
KPParams kp_initial_guess(const CubicParams& warm_start, const KPBounds& bounds, double mu);

CalibrationResult calibrate_kp(const ImbibitionDataset& data, const MaterialSpec& material,
                               const ExperimentSetup& setup, const SolverConfig& solver, const KPBounds& bounds,
                               const AnnealerConfig& annealer, const CubicParams& warm_start,
                               const ProductSplit& split);

struct SweepAxis {
  std::string parameter;  ///< one of s_R, s_S, alpha, c, K_s, gamma
  std::vector<double> values;
};

struct SensitivityCurve {
  std::string parameter;
  std::vector<std::pair<double, double>> points;  ///< (value, E2)
};

/// One-at-a-time sweep around `best`.
std::vector<SensitivityCurve> oat_sensitivity(const KPParams& best, const ImbibitionDataset& data,
                                              const MaterialSpec& material, const ExperimentSetup& setup,
                                              const SolverConfig& solver, std::span<const SweepAxis> sweep);

/// Copy of `p` with the named parameter replaced; throws ValidationError for
/// unknown names.
KPParams with_parameter(KPParams p, const std::string& name, double value);

}  // namespace imbibe
