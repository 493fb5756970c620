#include "imbibe/manifest.hpp"

#include <fstream>
#include <sstream>

#include "imbibe/errors.hpp"
#include "json.hpp"

namespace imbibe {

using nlohmann::json;

namespace {

double num(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("manifest: missing key '") + key + "'");
  if (!j.at(key).is_number()) throw ValidationError(std::string("manifest: '") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::optional<double> opt_num(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return num(j, key);
}

Interval interval(const json& j, const char* key, Interval fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 2) throw ValidationError(std::string("manifest: bounds '") + key + "' must be [lo, hi]");
  return {a[0].get<double>(), a[1].get<double>()};
}

json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ValidationError("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(p.string() + ": " + e.what());
  }
}

// Inline object, or a path to a JSON file holding it.
json section(const json& root, const char* key, const std::filesystem::path& base) {
  if (!root.contains(key)) throw ValidationError(std::string("manifest: missing section '") + key + "'");
  const auto& v = root.at(key);
  if (v.is_string()) {
    std::filesystem::path p = v.get<std::string>();
    return read_json_file(p.is_absolute() ? p : base / p);
  }
  if (!v.is_object()) throw ValidationError(std::string("manifest: '") + key + "' must be an object or a path");
  return v;
}

CubicParams cubic_params(const json& j) { return {num(j, "s_R"), num(j, "s_S"), num(j, "D")}; }

KPParams kp_params(const json& j) {
  return {num(j, "s_R"), num(j, "s_S"), num(j, "alpha"), num(j, "c"), num(j, "K_s"), num(j, "gamma")};
}

}  // namespace

std::string to_string(ModelKind k) { return k == ModelKind::Cubic ? "cubic" : "kp"; }

ModelKind parse_model_kind(const std::string& s) {
  if (s == "cubic") return ModelKind::Cubic;
  if (s == "kp") return ModelKind::KP;
  throw ValidationError("unknown model '" + s + "' (expected cubic or kp)");
}

std::filesystem::path resolve(const RunManifest& m, const std::filesystem::path& p) {
  return p.is_absolute() ? p : m.base_dir / p;
}

namespace {

RunManifest parse_manifest_impl(const std::string& json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
  if (!root.is_object()) throw ValidationError("manifest: top level must be an object");

  RunManifest m;
  m.base_dir = base_dir;

  if (root.contains("material") && root.at("material").is_string())
    m.material_file = root.at("material").get<std::string>();
  if (root.contains("setup") && root.at("setup").is_string()) m.setup_file = root.at("setup").get<std::string>();
  const json mat = section(root, "material", base_dir);
  m.material.name = mat.value("name", std::string{});
  m.material.n0 = num(mat, "n0");
  m.material.tau = opt_num(mat, "tau");
  m.material.validate();

  const json st = section(root, "setup", base_dir);
  m.setup.h1 = num(st, "h1");
  m.setup.h2 = opt_num(st, "h2").value_or(0.0);
  m.setup.rho = opt_num(st, "rho").value_or(1.0);
  m.setup.mu = opt_num(st, "mu").value_or(8.9e-3);
  m.setup.Tf = num(st, "Tf");
  m.setup.temperature = opt_num(st, "temperature");
  m.setup.UR = opt_num(st, "UR");
  if (m.setup.temperature && m.setup.UR)
    m.theta_ext_formula = ambient_moisture(*m.setup.temperature, *m.setup.UR, m.material, m.setup.rho);
  if (auto te = opt_num(st, "theta_ext")) {
    m.setup.theta_ext = *te;
    m.theta_ext_supplied = true;
  } else if (m.theta_ext_formula) {
    m.setup.theta_ext = *m.theta_ext_formula;
  } else {
    throw ValidationError("manifest: setup needs theta_ext, or temperature and UR");
  }
  m.setup.validate(m.material);

  if (root.contains("model")) {
    const auto& mo = root.at("model");
    m.model = parse_model_kind(mo.value("type", std::string{"cubic"}));
    if (mo.contains("params") && mo.contains("bounds"))
      throw ValidationError("manifest: model must carry either params or bounds, not both");
    if (mo.contains("params")) {
      if (m.model == ModelKind::Cubic) m.cubic = cubic_params(mo.at("params"));
      else m.kp = kp_params(mo.at("params"));
    }
    if (mo.contains("bounds")) {
      m.has_bounds = true;
      const auto& b = mo.at("bounds");
      const json cb = b.value("cubic", json::object());
      m.cubic_bounds.s_R = interval(cb, "s_R", m.cubic_bounds.s_R);
      m.cubic_bounds.s_S = interval(cb, "s_S", m.cubic_bounds.s_S);
      m.cubic_bounds.D = interval(cb, "D", m.cubic_bounds.D);
      const json kb = b.value("kp", json::object());
      if (kb.contains("s_R")) m.kp_bounds.s_R = interval(kb, "s_R", {});
      if (kb.contains("s_S")) m.kp_bounds.s_S = interval(kb, "s_S", {});
      m.kp_bounds.warm_width = opt_num(kb, "warm_width").value_or(m.kp_bounds.warm_width);
      m.kp_bounds.alpha = interval(kb, "alpha", m.kp_bounds.alpha);
      m.kp_bounds.gamma = interval(kb, "gamma", m.kp_bounds.gamma);
      m.kp_bounds.product = interval(kb, "C", m.kp_bounds.product);
      m.kp_bounds.alpha0 = opt_num(kb, "alpha0").value_or(m.kp_bounds.alpha0);
      m.kp_bounds.gamma0 = opt_num(kb, "gamma0").value_or(m.kp_bounds.gamma0);
      m.cubic_bounds.validate();
      m.kp_bounds.validate();
    }
    if (m.cubic) m.cubic->validate();
    if (m.kp) m.kp->validate();
  }

  if (root.contains("solver")) {
    const auto& so = root.at("solver");
    m.solver.dz = opt_num(so, "dz").value_or(m.solver.dz);
    m.solver.dt = opt_num(so, "dt");
    m.solver.cfl_safety = opt_num(so, "cfl_safety").value_or(m.solver.cfl_safety);
    m.solver.breakthrough_threshold = opt_num(so, "breakthrough_threshold");
    m.q_interval = opt_num(so, "q_interval");
    if (so.contains("snapshots")) m.solver.snapshot_times = so.at("snapshots").get<std::vector<double>>();
    if (so.contains("top_bc")) {
      const auto& bc = so.at("top_bc");
      const std::string type = bc.value("type", std::string{"dirichlet"});
      if (type == "dirichlet") m.solver.top_bc = DirichletTop{m.setup.theta_ext};
      else if (type == "robin") m.solver.top_bc = RobinTop{num(bc, "K_w"), m.setup.theta_ext};
      else throw ValidationError("manifest: unknown top_bc type '" + type + "'");
    } else {
      m.solver.top_bc = DirichletTop{m.setup.theta_ext};
    }
  } else {
    m.solver.top_bc = DirichletTop{m.setup.theta_ext};
  }
  m.solver.validate();

  if (root.contains("annealer")) {
    const auto& a = root.at("annealer");
    m.annealer.initial_temperature = opt_num(a, "initial_temperature");
    m.annealer.cooling_factor = opt_num(a, "cooling_factor").value_or(m.annealer.cooling_factor);
    if (a.contains("iterations_per_temperature"))
      m.annealer.iterations_per_temperature = a.at("iterations_per_temperature").get<std::size_t>();
    if (a.contains("max_evaluations")) m.annealer.max_evaluations = a.at("max_evaluations").get<std::size_t>();
    m.annealer.neighbor_scale = opt_num(a, "neighbor_scale").value_or(m.annealer.neighbor_scale);
    if (a.contains("polish_evaluations"))
      m.annealer.polish_evaluations = a.at("polish_evaluations").get<std::size_t>();
  }
  if (root.contains("seed")) m.seed = root.at("seed").get<std::uint64_t>();
  m.annealer.rng_seed = m.seed;
  m.annealer.validate();

  if (root.contains("calibration")) m.K_s = opt_num(root.at("calibration"), "K_s");

  if (root.contains("data")) {
    const auto& d = root.at("data");
    if (d.contains("imbibition")) m.imbibition_data = d.at("imbibition").get<std::string>();
    if (d.contains("mip")) m.mip_data = d.at("mip").get<std::string>();
    if (d.contains("raw_imbibition")) m.raw_imbibition = d.at("raw_imbibition").get<std::string>();
    if (d.contains("capillary")) {
      const auto& c = d.at("capillary");
      m.capillary_masses = std::array<double, 2>{num(c, "M1"), num(c, "M2")};
    }
  }

  if (root.contains("laplace")) {
    const auto& l = root.at("laplace");
    m.laplace.T_w = opt_num(l, "T_w").value_or(m.laplace.T_w);
    m.laplace.T_Hg = opt_num(l, "T_Hg").value_or(m.laplace.T_Hg);
    m.laplace.theta_w = opt_num(l, "theta_w").value_or(m.laplace.theta_w);
    m.laplace.theta_Hg = opt_num(l, "theta_Hg").value_or(m.laplace.theta_Hg);
    m.laplace.validate();
  }

  if (root.contains("sensitivity")) {
    const auto& s = root.at("sensitivity");
    if (s.contains("grid")) {
      for (const auto& [name, values] : s.at("grid").items())
        m.sweep.push_back({name, values.get<std::vector<double>>()});
    }
    if (s.contains("factors")) m.sweep_factors = s.at("factors").get<std::vector<double>>();
  }

  if (root.contains("out")) m.out = root.at("out").get<std::string>();
  return m;
}

}  // namespace

RunManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir) {
  try {
    return parse_manifest_impl(json_text, base_dir);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
}

RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open manifest " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto m = parse_manifest(ss.str(), path.parent_path());
  m.source = path;
  return m;
}

}  // namespace imbibe
