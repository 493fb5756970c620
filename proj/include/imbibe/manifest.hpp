#pragma once

// Run manifest: a JSON document describing material, setup, model and solver
// choices for one CLI command. `material` and `setup` may be inline objects or
// paths (relative to the manifest) to JSON files holding them.
//
//   {
//     "material": "materials/ghiara.json",
//     "setup":    {"h1": 5.0, "h2": 0.025, "rho": 1.0, "mu": 8.9e-3, "Tf": 5400, "theta_ext": 2.1e-3},
//     "model":    {"type": "kp", "params": {"s_R": 0.675, ...}},
//     "solver":   {"dz": 0.025, "cfl_safety": 0.9, "top_bc": {"type": "dirichlet"}, "snapshots": [600, 1200]},
//     "data":     {"imbibition": "ghiara_q.csv", "mip": "ghiara_mip.csv"},
//     "seed": 42
//   }

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "imbibe/absorption.hpp"
#include "imbibe/calibration.hpp"
#include "imbibe/domain.hpp"
#include "imbibe/retention.hpp"
#include "imbibe/solver.hpp"

namespace imbibe {

enum class ModelKind { Cubic, KP };

std::string to_string(ModelKind k);
ModelKind parse_model_kind(const std::string& s);

struct RunManifest {
  std::filesystem::path source;    ///< manifest file, empty when built in memory
  std::filesystem::path base_dir;  ///< for resolving relative paths

  MaterialSpec material;
  ExperimentSetup setup;
  std::optional<std::filesystem::path> material_file;  ///< when given by reference
  std::optional<std::filesystem::path> setup_file;
  bool theta_ext_supplied = false;
  std::optional<double> theta_ext_formula;  ///< from temperature and UR when both are given

  ModelKind model = ModelKind::Cubic;
  std::optional<CubicParams> cubic;
  std::optional<KPParams> kp;
  bool has_bounds = false;
  CubicBounds cubic_bounds;
  KPBounds kp_bounds;

  SolverConfig solver;
  std::optional<double> q_interval;  ///< extra Q sampling interval for `simulate` [s]
  AnnealerConfig annealer;
  std::optional<double> K_s;         ///< splits C = K_s c after step 2

  std::optional<std::filesystem::path> imbibition_data;
  std::optional<std::filesystem::path> mip_data;
  std::optional<std::filesystem::path> raw_imbibition;
  std::optional<std::array<double, 2>> capillary_masses;  ///< (M1, M2) [g]

  LaplaceConstants laplace;
  std::vector<SweepAxis> sweep;
  std::optional<std::vector<double>> sweep_factors;  ///< multiplicative grid around the optimum

  std::optional<std::filesystem::path> out;
  std::uint64_t seed = 1;
};

RunManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir = {});
RunManifest load_manifest(const std::filesystem::path& path);

/// Resolves `p` against the manifest directory unless it is absolute.
std::filesystem::path resolve(const RunManifest& m, const std::filesystem::path& p);

}  // namespace imbibe
