#pragma once

// File formats. Time series are CSV with `# key: value` metadata lines, one
// header row naming columns with units, and numbers in shortest round-trip
// scientific notation.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "imbibe/calibration.hpp"
#include "imbibe/domain.hpp"
#include "imbibe/retention.hpp"
#include "imbibe/solver.hpp"

namespace imbibe {

namespace headers {
inline constexpr const char* kQCurve = "t_s,Q_g_per_cm2";
inline constexpr const char* kProfiles = "t_s,z_cm,theta";
inline constexpr const char* kRetention = "saturation,P_model_g_per_cm_s2,P_mip_g_per_cm_s2";
inline constexpr const char* kTrace = "step,evaluation,error,best_error";
inline constexpr const char* kSensitivity = "value,E2";
inline constexpr const char* kRawImbibition = "t_s,w_g";
inline constexpr const char* kMip = "P_Hg_MPa,V_mL_per_g";
}  // namespace headers

/// Shortest representation that parses back to the same double, e.g. "1.95e-02".
std::string format_double(double v);
double parse_double(const std::string& text);

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::optional<std::string> meta(const std::string& key) const;
};

CsvTable parse_csv(std::istream& in, const std::string& source = "<stream>");
CsvTable read_csv(const std::filesystem::path& path);
void write_csv(std::ostream& out, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

struct RawImbibitionRecord {
  double t = 0.0;  ///< [s]
  double w = 0.0;  ///< specimen weight [g]
};

struct RawImbibitionSeries {
  double w0 = 0.0;  ///< dry weight [g]
  double A = 0.0;   ///< exposed area [cm^2]
  std::vector<RawImbibitionRecord> records;
};

/// Q_k = (w_k - w0) / A.
ImbibitionDataset ingest_imbibition(const RawImbibitionSeries& raw);

/// 0.1 (M2 - M1) [g/(cm^2 s^1/2)] from the 10 and 90 minute weighings.
double capillary_coefficient(double m1, double m2);

RawImbibitionSeries raw_imbibition_from_table(const CsvTable& table);
ImbibitionDataset imbibition_from_table(const CsvTable& table);
/// Processed (t_s, Q) or raw (t_s, w_g with w0/area metadata) series.
ImbibitionDataset read_imbibition(const std::filesystem::path& path);
CsvTable imbibition_table(const ImbibitionDataset& data);

/// MIP export: pressures in MPa (converted to g/(cm s^2)), specific volumes.
/// `# V_max_mL_per_g` metadata overrides the largest observed volume.
MIPDataset mip_from_table(const CsvTable& table);
MIPDataset read_mip(const std::filesystem::path& path);

CsvTable q_curve_table(const SimulationResult& result);
CsvTable profiles_table(const SimulationResult& result);
/// P_model is written as nan outside (s_R, s_S].
CsvTable retention_table(const RetentionCurve& curve, const KPParams& params);
CsvTable trace_table(const std::vector<std::pair<int, const std::vector<TracePoint>*>>& steps);
CsvTable sensitivity_table(const SensitivityCurve& curve);

}  // namespace imbibe
