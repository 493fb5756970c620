#include "imbibe/absorption.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "imbibe/errors.hpp"

namespace imbibe {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(what);
}

void validate_support(double s_R, double s_S) {
  require(std::isfinite(s_R) && std::isfinite(s_S), "saturation bounds must be finite");
  require(s_R >= 0.0 && s_R < s_S && s_S <= 1.0, "saturation bounds must satisfy 0 <= s_R < s_S <= 1");
}

double golden_section_max(const KPFunctions& m, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = m.Bprime(x1), f2 = m.Bprime(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = m.Bprime(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = m.Bprime(x1);
    }
  }
  return std::max({f1, f2, m.Bprime(0.5 * (a + b))});
}

}  // namespace

void CubicParams::validate() const {
  validate_support(s_R, s_S);
  require(std::isfinite(D) && D > 0.0, "cubic model: D must be positive");
}

void KPParams::validate() const {
  validate_support(s_R, s_S);
  require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0, "kP model: alpha must lie in (0, 1)");
  require(std::isfinite(c) && c > 0.0, "kP model: c must be positive");
  require(std::isfinite(K_s) && K_s > 0.0, "kP model: K_s must be positive");
  require(std::isfinite(gamma) && gamma > 0.0, "kP model: gamma must be positive");
  require(gamma - alpha - 1.0 > 0.0, "kP model: gamma - alpha - 1 must be positive");
}

// ---- cubic -----------------------------------------------------------------

CubicModel::CubicModel(const CubicParams& params) : p_(params) {
  p_.validate();
  const double w = p_.s_R - p_.s_S;
  scale_ = 2.0 * p_.D / (3.0 * w * w);
}

double CubicModel::B(double s) const noexcept {
  if (s < p_.s_R) return 0.0;
  if (s > p_.s_S) return 2.0 / 3.0 * p_.D * (p_.s_S - p_.s_R);
  const double r = p_.s_R - s;
  return -scale_ * r * r * (p_.s_R - 3.0 * p_.s_S + 2.0 * s);
}

double CubicModel::Bprime(double s) const noexcept {
  const double w = p_.s_R - p_.s_S;
  return std::max(0.0, -4.0 * p_.D * (p_.s_R - s) * (p_.s_S - s) / (w * w));
}

double cubic_B(double s, const CubicParams& p) { return CubicModel(p).B(s); }
double cubic_Bprime(double s, const CubicParams& p) { return CubicModel(p).Bprime(s); }

// ---- kP --------------------------------------------------------------------

KPFunctions::KPFunctions(const KPParams& params, double mu) : p_(params), mu_(mu) {
  p_.validate();
  require(std::isfinite(mu) && mu > 0.0, "kP model: viscosity must be positive");

  const double a = p_.alpha, g = p_.gamma, sR = p_.s_R, sS = p_.s_S;
  width_ = sS - sR;
  prefactor_ = p_.K_s * p_.c / (mu_ * std::pow(width_, g));

  den_ = -a * a * a + 3.0 * a * a * (g + 1.0) - 3.0 * a * g * (g + 2.0) - 2.0 * a + g * g * g +
         3.0 * g * g + 2.0 * g;
  if (!(std::abs(den_) > 0.0) || !std::isfinite(den_))
    throw ValidationError("kP model: closed-form denominator vanishes");

  u_ = a * a * a - a * a * (2.0 * g + 3.0) + a * (g * g + 5.0 * g + 2.0) - 2.0 * g * (g + 1.0);
  v_ = 2.0 * g * (-sR * a + 2.0 * a * a * sS + 2.0 * sS - 4.0 * a * sS) +
       2.0 * g * g * (sR - a * sS + sS) + 2.0 * a * sS * (-a * a + 3.0 * a - 2.0);
  const double z = 2.0 * sR * sR + a * sS * sS * (-2.0 * a + 3.0) + 2.0 * sR * sS * (a - 2.0);
  w_ = g * g * sS * (-2.0 * sR + a * sS) + g * z + a * sS * sS * (a * a - 3.0 * a + 2.0);

  plateau_ = 2.0 * p_.K_s * p_.c * g * std::pow(width_, 2.0 - a) / (mu_ * den_);

}

KPModel::KPModel(const KPParams& params, double mu) : KPFunctions(params, mu) {
  // Coarse scan, then golden section around the best sample.
  constexpr int kScan = 1024;
  const double sR = params.s_R;
  const double width = params.s_S - params.s_R;
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i <= kScan; ++i) {
    const double v = Bprime(sR + width * i / kScan);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double lo = sR + width * std::max(0, best - 1) / kScan;
  const double hi = sR + width * std::min(kScan, best + 1) / kScan;
  d_kp_ = std::max(best_val, golden_section_max(*this, lo, hi, 1e-10));
}

double KPFunctions::permeability(double s) const noexcept {
  if (s <= p_.s_R) return 0.0;
  if (s >= p_.s_S) return p_.K_s;
  return p_.K_s * std::pow((s - p_.s_R) / width_, p_.gamma);
}

double KPFunctions::capillary_pressure(double s) const {
  if (!(s > p_.s_R && s <= p_.s_S))
    throw DomainError("capillary pressure is defined only on (s_R, s_S]; got s = " + std::to_string(s));
  const double d = s - p_.s_S;
  return p_.c * d * d / std::pow(s - p_.s_R, p_.alpha);
}

double KPFunctions::capillary_pressure_deriv(double s) const {
  if (!(s > p_.s_R && s < p_.s_S))
    throw DomainError("capillary pressure derivative is defined only on (s_R, s_S); got s = " +
                      std::to_string(s));
  const double a = p_.alpha;
  return -p_.c * (s - p_.s_S) * (2.0 * p_.s_R - 2.0 * s - a * p_.s_S + a * s) /
         std::pow(s - p_.s_R, a + 1.0);
}

double KPFunctions::Bprime(double s) const noexcept {
  if (s <= p_.s_R || s >= p_.s_S) return 0.0;
  const double a = p_.alpha;
  const double v = prefactor_ * std::pow(s - p_.s_R, p_.gamma - a - 1.0) * (s - p_.s_S) *
                   (2.0 * p_.s_R + s * (a - 2.0) - a * p_.s_S);
  return std::max(0.0, v);
}

double KPFunctions::B(double s) const noexcept {
  if (s <= p_.s_R) return 0.0;
  if (s >= p_.s_S) return plateau_;
  const double poly = s * s * u_ + s * v_ + w_;
  return prefactor_ * std::pow(s - p_.s_R, p_.gamma - p_.alpha) * poly / den_;
}

double kp_permeability(double s, const KPParams& p) {
  // The permeability alone does not depend on mu; any positive value works.
  return KPFunctions(p, 1.0).permeability(s);
}
double kp_capillary_pressure(double s, const KPParams& p) { return KPFunctions(p, 1.0).capillary_pressure(s); }
double kp_capillary_pressure_deriv(double s, const KPParams& p) {
  return KPFunctions(p, 1.0).capillary_pressure_deriv(s);
}
double kp_Bprime(double s, const KPParams& p, double mu) { return KPFunctions(p, mu).Bprime(s); }
double kp_B(double s, const KPParams& p, double mu) { return KPFunctions(p, mu).B(s); }
double kp_diffusion_coefficient(const KPParams& p, double mu) { return KPModel(p, mu).max_Bprime(); }

}  // namespace imbibe
