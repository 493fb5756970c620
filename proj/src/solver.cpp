#include "imbibe/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "imbibe/errors.hpp"

namespace imbibe {

namespace {

double top_theta_ext(const TopBoundary& bc) {
  return std::visit([](const auto& b) { return b.theta_ext; }, bc);
}

// Output request merged from snapshot and sample times.
struct OutputTime {
  double t;
  bool profile;
};

std::vector<OutputTime> merge_outputs(const SolverConfig& cfg, double Tf) {
  std::vector<OutputTime> out;
  for (double t : cfg.snapshot_times) out.push_back({t, true});
  for (double t : cfg.sample_times) out.push_back({t, false});
  for (const auto& o : out) {
    if (!(std::isfinite(o.t) && o.t >= 0.0 && o.t <= Tf))
      throw ValidationError("output time " + std::to_string(o.t) + " s outside [0, Tf]");
  }
  std::sort(out.begin(), out.end(), [](const OutputTime& a, const OutputTime& b) { return a.t < b.t; });
  std::vector<OutputTime> merged;
  for (const auto& o : out) {
    if (!merged.empty() && merged.back().t == o.t) {
      merged.back().profile = merged.back().profile || o.profile;
    } else {
      merged.push_back(o);
    }
  }
  return merged;
}

double trapezoid(std::span<const double> theta, double dz, double rho) {
  double interior = 0.0;
  for (std::size_t j = 1; j + 1 < theta.size(); ++j) interior += theta[j];
  return rho * dz / 2.0 * (theta.front() + 2.0 * interior + theta.back());
}

class Stepper {
 public:
  Stepper(const MaterialSpec& material, const ExperimentSetup& setup, const SolverConfig& cfg,
          std::vector<double> theta0, double threshold)
      : n0_(material.n0),
        rho_(setup.rho),
        dz_(cfg.dz),
        bottom_(theta0.front()),
        bc_(cfg.top_bc),
        threshold_(threshold),
        theta_(std::move(theta0)),
        next_(theta_.size()),
        b_(theta_.size()) {}

  template <class Model>
  SimulationResult run(const Model& model, double dt, std::size_t nsteps, const std::vector<OutputTime>& outputs) {
    SimulationResult res;
    res.dz = dz_;
    res.dt = dt;
    res.n0 = n0_;
    res.rho = rho_;
    res.steps = nsteps;

    const std::size_t N = theta_.size() - 1;
    const double inv_n0 = 1.0 / n0_;
    const double r = dt / (dz_ * dz_);
    apply_top(theta_);

    std::size_t next_out = 0;
    auto emit = [&](double t, std::span<const double> lo, std::span<const double> hi, double w) {
      std::vector<double> state(lo.size());
      for (std::size_t j = 0; j < lo.size(); ++j) {
        // Stay inside [lo, hi] exactly; (1-w) lo + w hi can overshoot by an ulp.
        const double v = lo[j] + w * (hi[j] - lo[j]);
        state[j] = std::clamp(v, std::min(lo[j], hi[j]), std::max(lo[j], hi[j]));
      }
      res.q_curve.push_back({t, trapezoid(state, dz_, rho_)});
      if (outputs[next_out].profile) res.profiles.push_back({t, std::move(state)});
      ++next_out;
    };
    while (next_out < outputs.size() && outputs[next_out].t <= 0.0) emit(0.0, theta_, theta_, 0.0);
    if (theta_[N - 1] * inv_n0 >= threshold_) res.breakthrough_time = 0.0;

    for (std::size_t k = 1; k <= nsteps; ++k) {
      double check = 0.0;
      for (std::size_t j = 0; j <= N; ++j) {
        b_[j] = model.B(theta_[j] * inv_n0);
        check += b_[j];
      }
      for (std::size_t j = 1; j < N; ++j) next_[j] = theta_[j] + r * (b_[j + 1] - 2.0 * b_[j] + b_[j - 1]);
      next_[0] = bottom_;
      apply_top(next_);
      if (!std::isfinite(check) || !std::isfinite(next_[N - 1])) throw NonFiniteState(k);

      const double t_prev = static_cast<double>(k - 1) * dt;
      const double t_now = k == nsteps ? static_cast<double>(nsteps) * dt : static_cast<double>(k) * dt;
      while (next_out < outputs.size() && (outputs[next_out].t <= t_now || k == nsteps)) {
        const double t = outputs[next_out].t;
        const double w = std::clamp((t - t_prev) / dt, 0.0, 1.0);
        emit(t, theta_, next_, w);
      }
      if (!res.breakthrough_time && next_[N - 1] * inv_n0 >= threshold_) res.breakthrough_time = t_now;
      theta_.swap(next_);
    }
    return res;
  }

 private:
  void apply_top(std::vector<double>& th) const {
    const std::size_t N = th.size() - 1;
    if (const auto* d = std::get_if<DirichletTop>(&bc_)) {
      th[N] = d->theta_ext;
    } else {
      const auto& rb = std::get<RobinTop>(bc_);
      const double kdz = rb.K_w * dz_;
      th[N] = (th[N - 1] + kdz * rb.theta_ext) / (1.0 + kdz);
    }
  }

  double n0_, rho_, dz_, bottom_;
  TopBoundary bc_;
  double threshold_;
  std::vector<double> theta_, next_, b_;
};

}  // namespace

void SolverConfig::validate() const {
  if (!(std::isfinite(dz) && dz > 0.0)) throw ValidationError("solver: dz must be positive");
  if (dt && !(std::isfinite(*dt) && *dt > 0.0)) throw ValidationError("solver: dt must be positive");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw ValidationError("solver: cfl_safety must lie in (0, 1]");
  if (const auto* r = std::get_if<RobinTop>(&top_bc)) {
    if (!(std::isfinite(r->K_w) && r->K_w > 0.0)) throw ValidationError("solver: Robin K_w must be positive");
  }
  if (!(top_theta_ext(top_bc) >= 0.0)) throw ValidationError("solver: theta_ext must be >= 0");
}

std::vector<double> SimulationResult::q_at(std::span<const double> times) const {
  std::vector<double> out;
  out.reserve(times.size());
  std::size_t i = 0;
  for (double t : times) {
    while (i < q_curve.size() && q_curve[i].t < t) ++i;
    if (i == q_curve.size() || q_curve[i].t != t)
      throw ValidationError("no Q sample at t = " + std::to_string(t) + " s");
    out.push_back(q_curve[i].Q);
  }
  return out;
}

std::size_t grid_intervals(double h1, double dz) {
  if (!(dz > 0.0 && dz <= h1)) throw ValidationError("solver: dz must satisfy 0 < dz <= h1");
  // Tolerate h1/dz landing one ulp below an integer.
  return static_cast<std::size_t>(std::floor(h1 / dz * (1.0 + 1e-12)));
}

double stable_timestep(const AbsorptionModel& model, const MaterialSpec& material, const SolverConfig& config) {
  material.validate();
  config.validate();
  const double peak = max_Bprime(model);
  if (!(peak > 0.0) || !std::isfinite(peak))
    throw ValidationError("degenerate absorption model: max B' = " + std::to_string(peak));
  return config.cfl_safety * material.n0 * config.dz * config.dz / (2.0 * peak);
}

SimulationResult simulate(const AbsorptionModel& model, const MaterialSpec& material, const ExperimentSetup& setup,
                          const SolverConfig& config) {
  setup.validate();
  const std::size_t N = grid_intervals(setup.h1, config.dz);
  std::vector<double> theta(N + 1, 0.0);
  theta[0] = material.n0;
  return simulate(model, material, setup, config, InitialState{std::move(theta)});
}

SimulationResult simulate(const AbsorptionModel& model, const MaterialSpec& material, const ExperimentSetup& setup,
                          const SolverConfig& config, const InitialState& initial) {
  setup.validate();
  const double bound = stable_timestep(model, material, config);
  const std::size_t N = grid_intervals(setup.h1, config.dz);
  if (N < 2) throw ValidationError("solver: grid needs at least one interior node (h1/dz >= 2)");
  if (initial.theta.size() != N + 1)
    throw ValidationError("initial state has " + std::to_string(initial.theta.size()) + " nodes, expected " +
                          std::to_string(N + 1));
  for (double th : initial.theta) {
    if (!(th >= 0.0 && th <= material.n0)) throw ValidationError("initial state must lie in [0, n0]");
  }
  const double theta_ext = top_theta_ext(config.top_bc);
  if (theta_ext > material.n0) throw ValidationError("solver: theta_ext must not exceed n0");

  double dt = bound;
  if (config.dt) {
    if (*config.dt > bound * (1.0 + 1e-12)) throw CflViolation(*config.dt, bound);
    dt = *config.dt;
  }
  const auto nsteps = static_cast<std::size_t>(std::ceil(setup.Tf / dt * (1.0 - 1e-12)));
  dt = setup.Tf / static_cast<double>(nsteps);

  const auto outputs = merge_outputs(config, setup.Tf);
  const double threshold = config.breakthrough_threshold.value_or(residual_saturation(model));

  Stepper stepper(material, setup, config, initial.theta, threshold);
  return std::visit([&](const auto& m) { return stepper.run(m, dt, nsteps, outputs); }, model);
}

double absorbed_mass(const SaturationProfile& profile, double dz, double rho) {
  if (profile.theta.size() < 2) throw ValidationError("absorbed_mass: profile needs at least two nodes");
  return trapezoid(profile.theta, dz, rho);
}

std::optional<double> breakthrough_time(const SimulationResult& result, double threshold) {
  if (result.profiles.empty()) throw ValidationError("breakthrough_time: result has no profiles");
  for (const auto& p : result.profiles) {
    if (p.theta.size() < 3) throw ValidationError("breakthrough_time: profile has no interior node");
    if (p.theta[p.theta.size() - 2] / result.n0 >= threshold) return p.t;
  }
  return std::nullopt;
}

}  // namespace imbibe
