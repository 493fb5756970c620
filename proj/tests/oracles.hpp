#pragma once

// Test-only reference computations, independent of the library's closed forms.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>
#include <random>

#include "imbibe/absorption.hpp"

namespace imbibe::test {

/// Composite trapezoid with `panels` equal panels.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < panels; ++i) sum += f(a + i * h);
  return sum * h;
}

/// Tanh-sinh quadrature; copes with the power-law endpoint behaviour of B'.
inline double adaptive_integral(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  static boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate([&f](double x) { return f(x); }, a, b, 1e-12);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// B_kP by integrating B'_kP from s_R; never touches the closed form.
inline double kp_B_by_quadrature(double s, const KPParams& p, double mu) {
  const KPFunctions f(p, mu);
  const double upper = std::min(s, p.s_S);
  return adaptive_integral([&](double x) { return f.Bprime(x); }, p.s_R, upper);
}

struct ParamGenerator {
  std::mt19937_64 rng;
  explicit ParamGenerator(std::uint64_t seed) : rng(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  double log_uniform(double a, double b) { return std::pow(10.0, uniform(std::log10(a), std::log10(b))); }

  CubicParams cubic() {
    CubicParams p;
    p.s_R = uniform(0.0, 0.8);
    p.s_S = uniform(p.s_R + 0.05, 1.0);
    p.D = log_uniform(1e-4, 1e-1);
    return p;
  }

  KPParams kp() {
    KPParams p;
    p.s_R = uniform(0.0, 0.8);
    p.s_S = uniform(p.s_R + 0.05, 1.0);
    p.alpha = uniform(0.05, 0.95);
    p.gamma = uniform(p.alpha + 1.05, p.alpha + 4.0);
    p.c = log_uniform(1e4, 1e7);
    p.K_s = log_uniform(1e-11, 1e-8);
    return p;
  }
};

}  // namespace imbibe::test
