#include "imbibe/commands.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "imbibe/errors.hpp"
#include "imbibe/io.hpp"
#include "json.hpp"

#ifndef IMBIBE_VERSION
#define IMBIBE_VERSION "dev"
#endif

namespace imbibe {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string compiler_id() {
#if defined(__clang__)
  return "clang " __clang_version__;
#elif defined(__GNUC__)
  return "gcc " __VERSION__;
#else
  return "unknown";
#endif
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json cubic_json(const CubicParams& p) { return {{"s_R", p.s_R}, {"s_S", p.s_S}, {"D", p.D}}; }

json kp_json(const KPParams& p, double mu) {
  return {{"s_R", p.s_R},     {"s_S", p.s_S},   {"alpha", p.alpha},
          {"c", p.c},         {"K_s", p.K_s},   {"gamma", p.gamma},
          {"C", p.product()}, {"D_kP", kp_diffusion_coefficient(p, mu)}};
}

AbsorptionModel model_from(const RunManifest& m) {
  if (m.model == ModelKind::Cubic) {
    if (!m.cubic) throw ValidationError("manifest: cubic model parameters required for this command");
    return CubicModel(*m.cubic);
  }
  if (!m.kp) throw ValidationError("manifest: kP model parameters required for this command");
  return KPModel(*m.kp, m.setup.mu);
}

const KPParams& require_kp(const RunManifest& m) {
  if (m.model != ModelKind::KP || !m.kp) throw ValidationError("manifest: kP model parameters required for this command");
  return *m.kp;
}

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  fs::path csv(const std::string& name, const CsvTable& t) {
    write_csv(dir_ / name, t);
    return add(name);
  }
  fs::path json_file(const std::string& name, const json& j) {
    write_json(dir_ / name, j);
    return add(name);
  }
  const std::vector<fs::path>& files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path add(const std::string& name) {
    files_.push_back(dir_ / name);
    return files_.back();
  }
  fs::path dir_;
  std::vector<fs::path> files_;
};

json inputs_digest(const RunManifest& m) {
  json inputs = json::array();
  auto add = [&](const std::string& role, const fs::path& p) {
    inputs.push_back({{"role", role}, {"path", p.generic_string()}, {"sha256", sha256_file(resolve(m, p))}});
  };
  if (!m.source.empty()) inputs.push_back({{"role", "manifest"}, {"path", m.source.filename().generic_string()},
                                           {"sha256", sha256_file(m.source)}});
  if (m.material_file) add("material", *m.material_file);
  if (m.setup_file) add("setup", *m.setup_file);
  if (m.imbibition_data) add("imbibition", *m.imbibition_data);
  if (m.mip_data) add("mip", *m.mip_data);
  if (m.raw_imbibition) add("raw_imbibition", *m.raw_imbibition);
  return inputs;
}

json run_simulate(const RunManifest& m, Outputs& out) {
  const auto model = model_from(m);
  SolverConfig cfg = m.solver;
  if (cfg.snapshot_times.empty())
    for (int i = 0; i <= 10; ++i) cfg.snapshot_times.push_back(m.setup.Tf * i / 10.0);
  const double q_step = m.q_interval.value_or(m.setup.Tf / 100.0);
  if (!(q_step > 0.0)) throw ValidationError("manifest: q_interval must be positive");
  for (double t = 0.0; t < m.setup.Tf; t += q_step) cfg.sample_times.push_back(t);
  cfg.sample_times.push_back(m.setup.Tf);

  std::optional<ImbibitionDataset> data;
  if (m.imbibition_data) {
    data = read_imbibition(resolve(m, *m.imbibition_data));
    for (const auto& s : data->samples) cfg.sample_times.push_back(s.t);
  }
  const auto result = simulate(model, m.material, m.setup, cfg);
  out.csv("q_curve.csv", q_curve_table(result));
  out.csv("profiles.csv", profiles_table(result));

  json summary{{"Q_final", result.q_curve.back().Q},
               {"dt", result.dt},
               {"steps", result.steps},
               {"max_Bprime", max_Bprime(model)}};
  summary["breakthrough_time"] = result.breakthrough_time ? json(*result.breakthrough_time) : json(nullptr);
  if (data) summary["error"] = error_functional(result.q_at(data->times()), data->values());
  return summary;
}

json run_calibrate(const RunManifest& m, Outputs& out) {
  if (!m.imbibition_data) throw ValidationError("manifest: calibrate needs data.imbibition");
  if (m.cubic || m.kp) throw ValidationError("manifest: calibrate takes model bounds, not params");
  const auto data = read_imbibition(resolve(m, *m.imbibition_data));

  const auto step1 =
      calibrate_cubic(data, m.material, m.setup, m.solver, m.cubic_bounds, m.annealer);
  const auto& cubic = std::get<CubicParams>(step1.params);
  json params{{"material", m.material.name}, {"seed", m.seed}};
  params["step1"] = {{"model", "cubic"},
                     {"params", cubic_json(cubic)},
                     {"E1", step1.error},
                     {"evaluations", step1.evaluations}};
  std::vector<std::pair<int, const std::vector<TracePoint>*>> traces{{1, &step1.trace}};

  std::optional<CalibrationResult> step2;
  if (m.model == ModelKind::KP) {
    ProductSplit split;
    split.K_s = m.K_s;
    if (!split.K_s && m.mip_data) split.retention = build_retention_curve(read_mip(resolve(m, *m.mip_data)), m.laplace);
    AnnealerConfig a2 = m.annealer;
    a2.rng_seed = m.annealer.rng_seed + 1;
    step2 = calibrate_kp(data, m.material, m.setup, m.solver, m.kp_bounds, a2, cubic, split);
    const auto& kp = std::get<KPParams>(step2->params);
    params["step2"] = {{"model", "kp"},
                       {"params", kp_json(kp, m.setup.mu)},
                       {"E2", step2->error},
                       {"evaluations", step2->evaluations},
                       {"split", split.K_s ? "K_s" : "mip"}};
    traces.emplace_back(2, &step2->trace);
  }
  out.json_file("params.json", params);
  out.csv("trace.csv", trace_table(traces));
  json summary{{"E1", step1.error}};
  if (step2) summary["E2"] = step2->error;
  return summary;
}

json run_retention(const RunManifest& m, Outputs& out) {
  if (!m.mip_data) throw ValidationError("manifest: retention needs data.mip");
  const auto& kp = require_kp(m);
  const auto curve = build_retention_curve(read_mip(resolve(m, *m.mip_data)), m.laplace);
  const auto rep = retention_compare(curve, kp);
  out.csv("retention.csv", retention_table(curve, kp));
  const json report{{"compared", rep.compared},
                    {"excluded", rep.excluded},
                    {"mean_log10_ratio", rep.mean_log_ratio},
                    {"max_abs_log10_ratio", rep.max_abs_log_ratio},
                    {"within_one_decade", rep.within_decade},
                    {"laplace_factor", m.laplace.factor()}};
  out.json_file("retention_report.json", report);
  return report;
}

json run_sensitivity(const RunManifest& m, Outputs& out) {
  if (!m.imbibition_data) throw ValidationError("manifest: sensitivity needs data.imbibition");
  const auto& best = require_kp(m);
  const auto data = read_imbibition(resolve(m, *m.imbibition_data));
  std::vector<SweepAxis> sweep = m.sweep;
  if (m.sweep_factors) {
    for (const char* name : {"s_R", "s_S", "alpha", "c", "K_s", "gamma"}) {
      if (std::any_of(sweep.begin(), sweep.end(), [&](const SweepAxis& a) { return a.parameter == name; })) continue;
      const double base = [&] {
        if (std::string(name) == "s_R") return best.s_R;
        if (std::string(name) == "s_S") return best.s_S;
        if (std::string(name) == "alpha") return best.alpha;
        if (std::string(name) == "c") return best.c;
        if (std::string(name) == "K_s") return best.K_s;
        return best.gamma;
      }();
      SweepAxis axis{name, {}};
      // scaled values that leave the parameter domain (s_S > 1, gamma <= alpha, ...) are dropped
      for (double f : *m.sweep_factors) {
        try {
          with_parameter(best, name, base * f).validate();
        } catch (const ValidationError&) {
          continue;
        }
        axis.values.push_back(base * f);
      }
      sweep.push_back(std::move(axis));
    }
  }
  if (sweep.empty()) throw ValidationError("manifest: sensitivity needs sensitivity.grid or sensitivity.factors");
  const auto curves = oat_sensitivity(best, data, m.material, m.setup, m.solver, sweep);
  json summary = json::object();
  for (const auto& c : curves) {
    out.csv("sensitivity_" + c.parameter + ".csv", sensitivity_table(c));
    const auto it = std::min_element(c.points.begin(), c.points.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
    summary[c.parameter] = {{"argmin", it->first}, {"min_E2", it->second}};
  }
  return summary;
}

json run_ingest(const RunManifest& m, Outputs& out) {
  json summary = json::object();
  if (m.raw_imbibition) {
    const auto data = ingest_imbibition(raw_imbibition_from_table(read_csv(resolve(m, *m.raw_imbibition))));
    out.csv("imbibition.csv", imbibition_table(data));
    summary["samples"] = data.size();
    summary["Q_final"] = data.samples.back().Q;
  }
  if (m.capillary_masses) {
    summary["capillary_coefficient"] = capillary_coefficient((*m.capillary_masses)[0], (*m.capillary_masses)[1]);
  }
  if (summary.empty()) throw ValidationError("ingest needs --input or data.raw_imbibition / data.capillary");
  out.json_file("ingest.json", summary);
  return summary;
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "simulate") return Command::Simulate;
  if (name == "calibrate") return Command::Calibrate;
  if (name == "retention") return Command::Retention;
  if (name == "sensitivity") return Command::Sensitivity;
  if (name == "ingest") return Command::Ingest;
  throw ValidationError("unknown command '" + name + "'");
}

std::string to_string(Command c) {
  switch (c) {
    case Command::Simulate: return "simulate";
    case Command::Calibrate: return "calibrate";
    case Command::Retention: return "retention";
    case Command::Sensitivity: return "sensitivity";
    case Command::Ingest: return "ingest";
  }
  return "unknown";
}

std::vector<double> parse_number_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
  return out;
}

void apply_overrides(RunManifest& m, const Overrides& o) {
  if (o.out) m.out = *o.out;
  if (o.seed) {
    m.seed = *o.seed;
    m.annealer.rng_seed = *o.seed;
  }
  if (o.model) m.model = parse_model_kind(*o.model);
  if (o.dz) m.solver.dz = *o.dz;
  if (o.dt) m.solver.dt = *o.dt;
  if (o.snapshots) m.solver.snapshot_times = *o.snapshots;
  if (o.input) m.raw_imbibition = fs::absolute(*o.input);
  m.solver.validate();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[md[i] >> 4]);
    hex.push_back(kHex[md[i] & 0xF]);
  }
  return hex;
}

CommandOutcome run_command(const RunManifest& m, Command command, const fs::path& out_dir) {
  Outputs out(out_dir);
  json summary;
  switch (command) {
    case Command::Simulate: summary = run_simulate(m, out); break;
    case Command::Calibrate: summary = run_calibrate(m, out); break;
    case Command::Retention: summary = run_retention(m, out); break;
    case Command::Sensitivity: summary = run_sensitivity(m, out); break;
    case Command::Ingest: summary = run_ingest(m, out); break;
  }

  json record{{"command", to_string(command)},
              {"tool", "imbibe"},
              {"version", IMBIBE_VERSION},
              {"compiler", compiler_id()},
              {"seed", m.seed},
              {"inputs", inputs_digest(m)},
              {"summary", summary}};
  if (command != Command::Ingest) {
    record["material"] = m.material.name;
    record["model"] = to_string(m.model);
    record["solver"] = {{"dz", m.solver.dz}, {"cfl_safety", m.solver.cfl_safety}};
    if (m.solver.dt) record["solver"]["dt"] = *m.solver.dt;
    record["theta_ext"] = {{"used", m.setup.theta_ext}, {"supplied", m.theta_ext_supplied}};
    if (m.theta_ext_formula) record["theta_ext"]["formula"] = *m.theta_ext_formula;
  }
  json outputs = json::array();
  for (const auto& f : out.files()) outputs.push_back(f.filename().generic_string());
  record["outputs"] = outputs;
  out.json_file("run_record.json", record);

  return {out.dir(), out.files(), summary.dump()};
}

int execute(Command command, const Overrides& overrides, std::ostream& out, std::ostream& err) {
  try {
    RunManifest m;
    if (overrides.manifest) {
      m = load_manifest(*overrides.manifest);
    } else if (command != Command::Ingest) {
      throw ValidationError("--manifest is required for " + to_string(command));
    }
    apply_overrides(m, overrides);
    const fs::path dir = m.out ? (overrides.out ? *m.out : resolve(m, *m.out)) : fs::path("out");
    const auto outcome = run_command(m, command, dir);
    out << outcome.summary << '\n';
    return 0;
  } catch (const Error& e) {
    err << json{{"error", {{"kind", e.kind()}, {"message", e.what()}}}}.dump() << '\n';
  } catch (const std::exception& e) {
    err << json{{"error", {{"kind", "InternalError"}, {"message", e.what()}}}}.dump() << '\n';
  }
  return 1;
}

}  // namespace imbibe
