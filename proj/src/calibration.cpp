#include "imbibe/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "imbibe/errors.hpp"

namespace imbibe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_interval(const Interval& i, const char* name) {
  if (!(std::isfinite(i.lo) && std::isfinite(i.hi) && i.lo < i.hi))
    throw ValidationError(std::string("bounds for ") + name + " must satisfy lo < hi");
}

// Search coordinates: natural value, or log10 of it for log-scaled dimensions.
double to_search(const SearchDimension& d, double v) { return d.log_scale ? std::log10(v) : v; }
double from_search(const SearchDimension& d, double u) { return d.log_scale ? std::pow(10.0, u) : u; }

}  // namespace

double error_functional(std::span<const double> q_num, std::span<const double> q_data) {
  if (q_num.size() != q_data.size())
    throw ValidationError("error_functional: length mismatch (" + std::to_string(q_num.size()) + " vs " +
                          std::to_string(q_data.size()) + ")");
  if (q_num.empty()) throw ValidationError("error_functional: no measurements");
  double sum = 0.0;
  for (std::size_t k = 0; k < q_num.size(); ++k) {
    if (q_num[k] == 0.0)
      throw DomainError("error_functional: simulated Q is zero at index " + std::to_string(k));
    const double rel = (q_num[k] - q_data[k]) / q_num[k];
    sum += rel * rel;
  }
  return sum / static_cast<double>(q_num.size());
}

void CubicBounds::validate() const {
  check_interval(s_R, "s_R");
  check_interval(s_S, "s_S");
  check_interval(D, "D");
  if (s_R.lo < 0.0 || s_S.hi > 1.0) throw ValidationError("cubic bounds: saturations must lie in [0, 1]");
  if (D.lo <= 0.0) throw ValidationError("cubic bounds: D must be positive");
  if (!(min_gap > 0.0) || s_R.lo + min_gap > s_S.hi)
    throw ValidationError("cubic bounds: no feasible (s_R, s_S) pair");
}

void KPBounds::validate() const {
  if (s_R) check_interval(*s_R, "s_R");
  if (s_S) check_interval(*s_S, "s_S");
  check_interval(alpha, "alpha");
  check_interval(gamma, "gamma");
  check_interval(product, "C");
  if (!(warm_width >= 0.0)) throw ValidationError("kP bounds: warm_width must be >= 0");
  if (alpha.lo <= 0.0 || alpha.hi >= 1.0) throw ValidationError("kP bounds: alpha must lie inside (0, 1)");
  if (product.lo <= 0.0) throw ValidationError("kP bounds: C must be positive");
  if (!(gamma_margin > 1.0)) throw ValidationError("kP bounds: gamma_margin must exceed 1");
  if (alpha.lo + gamma_margin > gamma.hi) throw ValidationError("kP bounds: no feasible (alpha, gamma) pair");
  if (!(min_gap > 0.0)) throw ValidationError("kP bounds: min_gap must be positive");
}

void AnnealerConfig::validate() const {
  if (initial_temperature && !(*initial_temperature > 0.0))
    throw ValidationError("annealer: initial temperature must be positive");
  if (!(cooling_factor > 0.0 && cooling_factor < 1.0))
    throw ValidationError("annealer: cooling factor must lie in (0, 1)");
  if (iterations_per_temperature == 0) throw ValidationError("annealer: iterations per temperature must be positive");
  if (max_evaluations == 0) throw ValidationError("annealer: max evaluations must be positive");
  if (polish_evaluations >= max_evaluations)
    throw ValidationError("annealer: polish evaluations must leave room for annealing");
  if (!(neighbor_scale > 0.0)) throw ValidationError("annealer: neighbor scale must be positive");
}

AnnealResult simulated_annealing(const Objective& objective, std::span<const SearchDimension> dims,
                                 const AnnealerConfig& config, std::optional<std::vector<double>> x0,
                                 const Repair& repair) {
  config.validate();
  if (dims.empty()) throw ValidationError("annealer: no search dimensions");
  const std::size_t n = dims.size();
  std::vector<double> lo(n), hi(n), width(n);
  for (std::size_t d = 0; d < n; ++d) {
    if (!(dims[d].lo < dims[d].hi)) throw ValidationError("annealer: empty bounds for " + dims[d].name);
    if (dims[d].log_scale && !(dims[d].lo > 0.0))
      throw ValidationError("annealer: log-scaled bounds must be positive for " + dims[d].name);
    lo[d] = to_search(dims[d], dims[d].lo);
    hi[d] = to_search(dims[d], dims[d].hi);
    width[d] = hi[d] - lo[d];
  }

  std::mt19937_64 rng(config.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  AnnealResult res;
  std::vector<double> natural(n);
  // Evaluates a search-space point in place (clip, repair) and records it.
  auto evaluate = [&](std::vector<double>& u) {
    for (std::size_t d = 0; d < n; ++d) {
      u[d] = std::clamp(u[d], lo[d], hi[d]);
      natural[d] = from_search(dims[d], u[d]);
    }
    if (repair) {
      repair(natural);
      for (std::size_t d = 0; d < n; ++d) u[d] = to_search(dims[d], natural[d]);
    }
    double e = kInf;
    try {
      e = objective(natural);
    } catch (const Error&) {
      e = kInf;
    }
    if (!std::isfinite(e)) e = kInf;
    ++res.evaluations;
    const double best = res.trace.empty() ? e : std::min(res.trace.back().best, e);
    res.trace.push_back({res.evaluations, e, best});
    return e;
  };

  std::vector<double> x(n);
  if (x0) {
    if (x0->size() != n) throw ValidationError("annealer: initial point has the wrong dimension");
    for (std::size_t d = 0; d < n; ++d) x[d] = to_search(dims[d], (*x0)[d]);
  } else {
    for (std::size_t d = 0; d < n; ++d) x[d] = 0.5 * (lo[d] + hi[d]);
  }
  double e = evaluate(x);
  while (!std::isfinite(e) && res.evaluations < config.max_evaluations) {
    for (std::size_t d = 0; d < n; ++d) x[d] = lo[d] + unit(rng) * width[d];
    e = evaluate(x);
  }
  if (!std::isfinite(e))
    throw CalibrationFailure("annealer: objective was never finite within " +
                             std::to_string(config.max_evaluations) + " evaluations");

  std::vector<double> best_x = x;
  double best_e = e;
  // Metropolis on ln E: the relative-error objective spans many decades, and a
  // rule on E itself cannot tell a 1e-5 basin from an exact fit.
  double temperature = config.initial_temperature.value_or(3.0);

  std::vector<double> step(n);
  for (std::size_t d = 0; d < n; ++d) step[d] = config.neighbor_scale * width[d];
  std::vector<std::size_t> tried(n, 0), accepted(n, 0);

  const std::size_t anneal_budget = config.max_evaluations - config.polish_evaluations;
  std::size_t coord = 0;
  std::vector<double> cand(n);
  while (res.evaluations < anneal_budget && best_e > 0.0) {
    std::fill(tried.begin(), tried.end(), 0);
    std::fill(accepted.begin(), accepted.end(), 0);
    for (std::size_t it = 0; it < config.iterations_per_temperature && res.evaluations < anneal_budget; ++it) {
      cand = x;
      cand[coord] += step[coord] * normal(rng);
      const double ec = evaluate(cand);
      ++tried[coord];
      const bool accept =
          ec <= e || (std::isfinite(ec) && unit(rng) < std::exp(-std::log(ec / e) / temperature));
      if (accept) {
        x = cand;
        e = ec;
        ++accepted[coord];
        if (e < best_e) {
          best_e = e;
          best_x = x;
        }
      }
      coord = (coord + 1) % n;
    }
    for (std::size_t d = 0; d < n; ++d) {
      if (tried[d] == 0) continue;
      const double ratio = static_cast<double>(accepted[d]) / static_cast<double>(tried[d]);
      if (ratio > 0.6) step[d] = std::min(step[d] * 2.0, width[d]);
      if (ratio < 0.2) step[d] = std::max(step[d] * 0.5, 1e-12 * width[d]);
    }
    temperature *= config.cooling_factor;
  }

  // Nelder-Mead polish. Coordinate moves crawl along narrow curved valleys;
  // the simplex follows them.
  if (best_e > 0.0 && res.evaluations < config.max_evaluations) {
    struct Vertex {
      std::vector<double> u;
      double e;
    };
    // Points outside the box, or moved by the repair, are infeasible rather
    // than projected; projection would flatten the simplex onto a face.
    auto polish_eval = [&](std::vector<double>& u) {
      for (std::size_t d = 0; d < n; ++d)
        if (u[d] < lo[d] || u[d] > hi[d]) return kInf;
      if (repair) {
        std::vector<double> v(n);
        for (std::size_t d = 0; d < n; ++d) v[d] = from_search(dims[d], u[d]);
        const auto before = v;
        repair(v);
        if (v != before) return kInf;
      }
      return evaluate(u);
    };
    auto by_error = [](const Vertex& a, const Vertex& b) { return a.e < b.e; };
    auto blend = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
      std::vector<double> u(n);
      for (std::size_t d = 0; d < n; ++d) u[d] = c[d] + t * (w[d] - c[d]);
      return u;
    };
    auto budget_left = [&] { return res.evaluations < config.max_evaluations; };
    // One Nelder-Mead run from the current best; the simplex may collapse
    // against a face of the box, so the caller restarts it.
    auto nelder_mead = [&](double scale) {
      std::vector<Vertex> simplex{{best_x, best_e}};
      for (std::size_t d = 0; d < n && budget_left(); ++d) {
        std::vector<double> u = best_x;
        const double h = scale * width[d];
        u[d] += (u[d] + h <= hi[d]) ? h : -h;
        const double ev = polish_eval(u);
        simplex.push_back({u, ev});
      }
      while (simplex.size() == n + 1 && budget_left()) {
        std::sort(simplex.begin(), simplex.end(), by_error);
        if (simplex.front().e <= 0.0) break;
        double size = 0.0;
        for (std::size_t v = 1; v <= n; ++v)
          for (std::size_t d = 0; d < n; ++d)
            size = std::max(size, std::abs(simplex[v].u[d] - simplex[0].u[d]) / width[d]);
        if (size < 1e-10) break;
        std::vector<double> centroid(n, 0.0);
        for (std::size_t v = 0; v < n; ++v)
          for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[v].u[d] / static_cast<double>(n);
        Vertex& worst = simplex.back();
        std::vector<double> ur = blend(centroid, worst.u, -1.0);
        const double er = polish_eval(ur);
        if (er < simplex.front().e && budget_left()) {
          std::vector<double> ue = blend(centroid, worst.u, -2.0);
          const double ee = polish_eval(ue);
          worst = ee < er ? Vertex{ue, ee} : Vertex{ur, er};
        } else if (er < simplex[n - 1].e) {
          worst = {ur, er};
        } else if (budget_left()) {
          std::vector<double> uc = blend(centroid, worst.u, er < worst.e ? -0.5 : 0.5);
          const double ec = polish_eval(uc);
          if (ec < std::min(er, worst.e)) {
            worst = {uc, ec};
          } else {
            for (std::size_t v = 1; v <= n && budget_left(); ++v) {
              simplex[v].u = blend(simplex[0].u, simplex[v].u, 0.5);
              simplex[v].e = polish_eval(simplex[v].u);
            }
          }
        }
      }
      for (const auto& v : simplex) {
        if (v.e < best_e) {
          best_e = v.e;
          best_x = v.u;
        }
      }
    };
    double scale = 0.05;
    while (budget_left() && best_e > 0.0) {
      const double before = best_e;
      nelder_mead(scale);
      // Shrink the restart simplex once a restart stops paying off.
      if (best_e > before * (1.0 - 1e-3)) scale *= 0.1;
      if (scale < 1e-9) break;
    }
  }

  res.x.resize(n);
  for (std::size_t d = 0; d < n; ++d) res.x[d] = from_search(dims[d], best_x[d]);
  res.error = best_e;
  return res;
}

double imbibition_error(const AbsorptionModel& model, const ImbibitionDataset& data, const MaterialSpec& material,
                        const ExperimentSetup& setup, const SolverConfig& solver) {
  data.validate();
  if (data.samples.back().t > setup.Tf)
    throw ValidationError("dataset extends beyond the final observation time Tf");
  ExperimentSetup s = setup;
  s.Tf = data.samples.back().t;
  SolverConfig cfg = solver;
  cfg.dt.reset();
  cfg.snapshot_times.clear();
  cfg.sample_times = data.times();
  const auto result = simulate(model, material, s, cfg);
  const auto times = data.times();
  return error_functional(result.q_at(times), data.values());
}

CalibrationResult calibrate_cubic(const ImbibitionDataset& data, const MaterialSpec& material,
                                  const ExperimentSetup& setup, const SolverConfig& solver, const CubicBounds& bounds,
                                  const AnnealerConfig& annealer, std::optional<CubicParams> initial) {
  data.validate();
  bounds.validate();
  setup.validate(material);

  const std::vector<SearchDimension> dims{
      {"s_R", bounds.s_R.lo, bounds.s_R.hi, false},
      {"s_S", bounds.s_S.lo, bounds.s_S.hi, false},
      {"D", bounds.D.lo, bounds.D.hi, true},
  };
  const double gap = bounds.min_gap;
  const double s_S_max = bounds.s_S.hi;
  Repair repair = [gap, s_S_max](std::span<double> v) {
    if (v[0] + gap > s_S_max) v[0] = s_S_max - gap;
    v[1] = std::max(v[1], v[0] + gap);
  };
  Objective objective = [&](std::span<const double> v) {
    return imbibition_error(CubicModel(CubicParams{v[0], v[1], v[2]}), data, material, setup, solver);
  };

  std::vector<double> x0;
  if (initial) {
    x0 = {initial->s_R, initial->s_S, initial->D};
  } else {
    const double sR = 0.5 * (bounds.s_R.lo + bounds.s_R.hi);
    x0 = {sR, 0.5 * (std::max(bounds.s_S.lo, sR + gap) + bounds.s_S.hi), std::sqrt(bounds.D.lo * bounds.D.hi)};
  }
  auto r = simulated_annealing(objective, dims, annealer, x0, repair);
  return {CubicParams{r.x[0], r.x[1], r.x[2]}, r.error, r.evaluations, std::move(r.trace)};
}

namespace {

struct KPSearchBox {
  Interval s_R, s_S;
};

KPSearchBox kp_saturation_box(const CubicParams& warm, const KPBounds& b) {
  KPSearchBox box;
  box.s_R = b.s_R.value_or(Interval{std::max(0.0, warm.s_R - b.warm_width), std::min(1.0, warm.s_R + b.warm_width)});
  box.s_S = b.s_S.value_or(Interval{std::max(0.0, warm.s_S - b.warm_width), std::min(1.0, warm.s_S + b.warm_width)});
  // Degenerate when the warm start sits on a bound and warm_width is 0.
  if (!(box.s_R.lo < box.s_R.hi)) box.s_R.hi = std::min(1.0, box.s_R.lo + 1e-9);
  if (!(box.s_S.lo < box.s_S.hi)) box.s_S.lo = std::max(0.0, box.s_S.hi - 1e-9);
  return box;
}

}  // namespace

KPParams kp_initial_guess(const CubicParams& warm_start, const KPBounds& bounds, double mu) {
  warm_start.validate();
  bounds.validate();
  const auto box = kp_saturation_box(warm_start, bounds);
  KPParams p;
  p.s_R = std::clamp(warm_start.s_R, box.s_R.lo, box.s_R.hi);
  p.s_S = std::max(std::clamp(warm_start.s_S, box.s_S.lo, box.s_S.hi), p.s_R + bounds.min_gap);
  p.s_S = std::min(p.s_S, 1.0);
  p.alpha = std::clamp(bounds.alpha0, bounds.alpha.lo, bounds.alpha.hi);
  p.gamma = std::clamp(std::max(bounds.gamma0, p.alpha + bounds.gamma_margin), bounds.gamma.lo, bounds.gamma.hi);
  p.K_s = 1.0;
  p.c = 1.0;
  // D_kP is linear in C.
  const double unit_peak = kp_diffusion_coefficient(p, mu);
  p.c = std::clamp(warm_start.D / unit_peak, bounds.product.lo, bounds.product.hi);
  return p;
}

CalibrationResult calibrate_kp(const ImbibitionDataset& data, const MaterialSpec& material,
                               const ExperimentSetup& setup, const SolverConfig& solver, const KPBounds& bounds,
                               const AnnealerConfig& annealer, const CubicParams& warm_start,
                               const ProductSplit& split) {
  data.validate();
  bounds.validate();
  setup.validate(material);
  if (!split.K_s && !split.retention)
    throw ValidationError("kP calibration needs K_s or an MIP retention curve to split C = K_s c");
  if (split.K_s && !(*split.K_s > 0.0)) throw ValidationError("kP calibration: K_s must be positive");

  const auto box = kp_saturation_box(warm_start, bounds);
  const std::vector<SearchDimension> dims{
      {"s_R", box.s_R.lo, box.s_R.hi, false},
      {"s_S", box.s_S.lo, box.s_S.hi, false},
      {"alpha", bounds.alpha.lo, bounds.alpha.hi, false},
      {"gamma", bounds.gamma.lo, bounds.gamma.hi, false},
      {"C", bounds.product.lo, bounds.product.hi, true},
  };
  const double gap = bounds.min_gap, margin = bounds.gamma_margin, gamma_max = bounds.gamma.hi;
  const double s_S_max = std::min(1.0, box.s_S.hi);
  Repair repair = [=](std::span<double> v) {
    if (v[0] + gap > s_S_max) v[0] = s_S_max - gap;
    v[1] = std::min(std::max(v[1], v[0] + gap), 1.0);
    if (v[2] + margin > gamma_max) v[2] = gamma_max - margin;
    v[3] = std::max(v[3], v[2] + margin);
  };
  const double mu = setup.mu;
  auto to_params = [](std::span<const double> v) {
    // K_s = 1 while searching: only the product enters B.
    return KPParams{v[0], v[1], v[2], v[4], 1.0, v[3]};
  };
  Objective objective = [&](std::span<const double> v) {
    return imbibition_error(KPModel(to_params(v), mu), data, material, setup, solver);
  };

  const KPParams init = kp_initial_guess(warm_start, bounds, mu);
  std::vector<double> x0{init.s_R, init.s_S, init.alpha, init.gamma, init.product()};
  auto r = simulated_annealing(objective, dims, annealer, x0, repair);

  KPParams fitted = to_params(r.x);
  const double C = fitted.product();
  if (split.K_s) {
    fitted.K_s = *split.K_s;
    fitted.c = C / *split.K_s;
  } else {
    fitted.c = fit_capillary_coefficient(*split.retention, fitted);
    fitted.K_s = C / fitted.c;
  }
  return {fitted, r.error, r.evaluations, std::move(r.trace)};
}

KPParams with_parameter(KPParams p, const std::string& name, double value) {
  if (name == "s_R") p.s_R = value;
  else if (name == "s_S") p.s_S = value;
  else if (name == "alpha") p.alpha = value;
  else if (name == "c") p.c = value;
  else if (name == "K_s") p.K_s = value;
  else if (name == "gamma") p.gamma = value;
  else throw ValidationError("unknown kP parameter '" + name + "'");
  return p;
}

std::vector<SensitivityCurve> oat_sensitivity(const KPParams& best, const ImbibitionDataset& data,
                                              const MaterialSpec& material, const ExperimentSetup& setup,
                                              const SolverConfig& solver, std::span<const SweepAxis> sweep) {
  best.validate();
  std::vector<SensitivityCurve> out;
  for (const auto& axis : sweep) {
    SensitivityCurve curve{axis.parameter, {}};
    for (double v : axis.values) {
      const KPParams p = with_parameter(best, axis.parameter, v);
      p.validate();
      curve.points.emplace_back(v, imbibition_error(KPModel(p, setup.mu), data, material, setup, solver));
    }
    out.push_back(std::move(curve));
  }
  return out;
}

}  // namespace imbibe
