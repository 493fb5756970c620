#include "imbibe/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "imbibe/errors.hpp"

namespace imbibe {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::size_t column_index(const CsvTable& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return i;
  throw ValidationError("CSV is missing column '" + name + "'");
}

double required_meta(const CsvTable& t, const std::string& key) {
  const auto v = t.meta(key);
  if (!v) throw ValidationError("CSV is missing metadata '# " + key + ": ...'");
  return parse_double(*v);
}

bool has_column(const CsvTable& t, const std::string& name) {
  for (const auto& c : t.columns)
    if (c == name) return true;
  return false;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  if (t == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (t == "inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  const auto r = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size())
    throw ValidationError("not a number: '" + text + "'");
  return v;
}

std::optional<std::string> CsvTable::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return std::nullopt;
}

CsvTable parse_csv(std::istream& in, const std::string& source) {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      const std::string body = trim(s.substr(1));
      const auto colon = body.find(':');
      if (colon != std::string::npos) t.metadata.emplace_back(trim(body.substr(0, colon)), trim(body.substr(colon + 1)));
      continue;
    }
    auto fields = split(s, ',');
    if (t.columns.empty()) {
      t.columns = std::move(fields);
      continue;
    }
    if (fields.size() != t.columns.size())
      throw ValidationError(source + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.columns.size()) +
                            " fields, found " + std::to_string(fields.size()));
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      try {
        row.push_back(parse_double(f));
      } catch (const ValidationError& e) {
        throw ValidationError(source + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty()) throw ValidationError(source + ": no header row");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return parse_csv(in, path.string());
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (const auto& [k, v] : table.metadata) out << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_csv(out, table);
  if (!out) throw ValidationError("error while writing " + path.string());
}

ImbibitionDataset ingest_imbibition(const RawImbibitionSeries& raw) {
  if (!(std::isfinite(raw.w0) && raw.w0 >= 0.0)) throw ValidationError("raw imbibition: w0 must be >= 0");
  if (!(std::isfinite(raw.A) && raw.A > 0.0)) throw ValidationError("raw imbibition: area must be positive");
  if (raw.records.empty()) throw ValidationError("raw imbibition: no records");
  ImbibitionDataset out;
  for (std::size_t k = 0; k < raw.records.size(); ++k) {
    const auto& r = raw.records[k];
    const std::string row = " (row " + std::to_string(k + 1) + ")";
    if (!(std::isfinite(r.t) && r.t > 0.0)) throw ValidationError("raw imbibition: times must be positive" + row);
    if (k > 0 && !(r.t > raw.records[k - 1].t))
      throw ValidationError("raw imbibition: times must be strictly increasing" + row);
    if (!(r.w >= raw.w0)) throw ValidationError("raw imbibition: weight below the dry weight" + row);
    out.samples.push_back({r.t, (r.w - raw.w0) / raw.A});
  }
  return out;
}

double capillary_coefficient(double m1, double m2) {
  if (!(std::isfinite(m1) && std::isfinite(m2))) throw ValidationError("capillary coefficient: masses must be finite");
  if (m2 < m1) throw ValidationError("capillary coefficient: M2 must not be below M1");
  return 0.1 * (m2 - m1);
}

RawImbibitionSeries raw_imbibition_from_table(const CsvTable& table) {
  RawImbibitionSeries raw;
  raw.w0 = required_meta(table, "w0_g");
  raw.A = required_meta(table, "area_cm2");
  const auto it = column_index(table, "t_s");
  const auto iw = column_index(table, "w_g");
  for (const auto& row : table.rows) raw.records.push_back({row[it], row[iw]});
  return raw;
}

ImbibitionDataset imbibition_from_table(const CsvTable& table) {
  if (has_column(table, "w_g")) return ingest_imbibition(raw_imbibition_from_table(table));
  const auto it = column_index(table, "t_s");
  const auto iq = column_index(table, "Q_g_per_cm2");
  ImbibitionDataset d;
  for (const auto& row : table.rows) d.samples.push_back({row[it], row[iq]});
  d.validate();
  return d;
}

ImbibitionDataset read_imbibition(const std::filesystem::path& path) { return imbibition_from_table(read_csv(path)); }

CsvTable imbibition_table(const ImbibitionDataset& data) {
  CsvTable t;
  t.metadata.emplace_back("quantity", "absorbed water per unit area");
  t.columns = {"t_s", "Q_g_per_cm2"};
  for (const auto& s : data.samples) t.rows.push_back({s.t, s.Q});
  return t;
}

MIPDataset mip_from_table(const CsvTable& table) {
  const auto ip = column_index(table, "P_Hg_MPa");
  const auto iv = column_index(table, "V_mL_per_g");
  MIPDataset d;
  double vmax = 0.0;
  for (const auto& row : table.rows) {
    // 1 MPa = 1e7 g/(cm s^2)
    d.points.push_back({row[ip] * 1e7, row[iv]});
    vmax = std::max(vmax, row[iv]);
  }
  d.V_max = table.meta("V_max_mL_per_g") ? required_meta(table, "V_max_mL_per_g") : vmax;
  d.validate();
  return d;
}

MIPDataset read_mip(const std::filesystem::path& path) { return mip_from_table(read_csv(path)); }

CsvTable q_curve_table(const SimulationResult& result) {
  CsvTable t;
  t.metadata.emplace_back("dz_cm", format_double(result.dz));
  t.metadata.emplace_back("dt_s", format_double(result.dt));
  t.columns = {"t_s", "Q_g_per_cm2"};
  for (const auto& q : result.q_curve) t.rows.push_back({q.t, q.Q});
  return t;
}

CsvTable profiles_table(const SimulationResult& result) {
  CsvTable t;
  t.metadata.emplace_back("n0", format_double(result.n0));
  t.columns = {"t_s", "z_cm", "theta"};
  for (const auto& p : result.profiles)
    for (std::size_t j = 0; j < p.theta.size(); ++j)
      t.rows.push_back({p.t, static_cast<double>(j) * result.dz, p.theta[j]});
  return t;
}

CsvTable retention_table(const RetentionCurve& curve, const KPParams& params) {
  const KPFunctions f(params, 1.0);
  CsvTable t;
  t.columns = {"saturation", "P_model_g_per_cm_s2", "P_mip_g_per_cm_s2"};
  for (const auto& p : curve.points) {
    const double model = (p.s > params.s_R && p.s <= params.s_S) ? f.capillary_pressure(p.s)
                                                                  : std::numeric_limits<double>::quiet_NaN();
    t.rows.push_back({p.s, model, p.P});
  }
  return t;
}

CsvTable trace_table(const std::vector<std::pair<int, const std::vector<TracePoint>*>>& steps) {
  CsvTable t;
  t.columns = {"step", "evaluation", "error", "best_error"};
  for (const auto& [step, trace] : steps)
    for (const auto& p : *trace)
      t.rows.push_back({static_cast<double>(step), static_cast<double>(p.evaluation), p.error, p.best});
  return t;
}

CsvTable sensitivity_table(const SensitivityCurve& curve) {
  CsvTable t;
  t.metadata.emplace_back("parameter", curve.parameter);
  t.columns = {"value", "E2"};
  for (const auto& [v, e] : curve.points) t.rows.push_back({v, e});
  return t;
}

}  // namespace imbibe
