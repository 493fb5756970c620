#pragma once

// Absorption functions B(s) and their derivatives for the two model families:
//
//  * cubic:  B' is a concave parabola on [s_R, s_S] with peak D at the midpoint;
//  * kP:     B' = -(k(s)/mu) P_c'(s) with a power-law permeability
//            k(s) = K_s ((s - s_R)/(s_S - s_R))^gamma and capillary pressure
//            P_c(s) = c (s - s_S)^2 / (s - s_R)^alpha.
//
// Saturation s is dimensionless; B and B' carry units of a diffusivity (cm^2/s).

#include <variant>

namespace imbibe {

struct CubicParams {
  double s_R = 0.0;  ///< residual saturation
  double s_S = 1.0;  ///< maximum saturation
  double D = 0.0;    ///< peak diffusivity [cm^2/s]

  void validate() const;
};

struct KPParams {
  double s_R = 0.0;
  double s_S = 1.0;
  double alpha = 0.25;  ///< capillary-pressure exponent, (0, 1)
  double c = 0.0;       ///< capillary-pressure coefficient [g/(cm s^2)]
  double K_s = 0.0;     ///< permeability at saturation [cm^2]
  double gamma = 2.0;   ///< permeability curvature; gamma - alpha - 1 > 0

  /// C = K_s c; the only combination of the two that the absorption function sees.
  double product() const noexcept { return K_s * c; }
  void validate() const;
};

double cubic_B(double s, const CubicParams& p);
double cubic_Bprime(double s, const CubicParams& p);

double kp_permeability(double s, const KPParams& p);
/// Throws DomainError unless s_R < s <= s_S.
double kp_capillary_pressure(double s, const KPParams& p);
/// Throws DomainError unless s_R < s < s_S.
double kp_capillary_pressure_deriv(double s, const KPParams& p);
double kp_Bprime(double s, const KPParams& p, double mu);
double kp_B(double s, const KPParams& p, double mu);
/// max of kp_Bprime over [s_R, s_S].
double kp_diffusion_coefficient(const KPParams& p, double mu);

/// Cubic family with validated parameters.
class CubicModel {
 public:
  explicit CubicModel(const CubicParams& params);

  const CubicParams& params() const noexcept { return p_; }
  double B(double s) const noexcept;
  double Bprime(double s) const noexcept;
  double max_Bprime() const noexcept { return p_.D; }
  double residual_saturation() const noexcept { return p_.s_R; }

 private:
  CubicParams p_;
  double scale_;  // 2D / (3 (s_R - s_S)^2)
};

/// Closed-form kP functions for one validated parameter set.
class KPFunctions {
 public:
  KPFunctions(const KPParams& params, double mu);

  const KPParams& params() const noexcept { return p_; }
  double mu() const noexcept { return mu_; }

  double B(double s) const noexcept;
  double Bprime(double s) const noexcept;
  double permeability(double s) const noexcept;
  double capillary_pressure(double s) const;
  double capillary_pressure_deriv(double s) const;

  /// Denominator (gamma-alpha)(gamma-alpha+1)(gamma-alpha+2) written out as a
  /// cubic in alpha and gamma.
  double denominator() const noexcept { return den_; }
  double plateau() const noexcept { return plateau_; }

 private:
  KPParams p_;
  double mu_;
  double width_;      // s_S - s_R
  double prefactor_;  // K_s c / (mu (s_S - s_R)^gamma)
  double den_;
  double u_, v_, w_;  // numerator s^2 u + s v + w
  double plateau_;
};

/// kP family with its diffusion coefficient D_kP cached.
class KPModel : public KPFunctions {
 public:
  KPModel(const KPParams& params, double mu);

  double max_Bprime() const noexcept { return d_kp_; }
  double residual_saturation() const noexcept { return params().s_R; }

 private:
  double d_kp_;
};

using AbsorptionModel = std::variant<CubicModel, KPModel>;

inline double max_Bprime(const AbsorptionModel& m) {
  return std::visit([](const auto& x) { return x.max_Bprime(); }, m);
}
inline double residual_saturation(const AbsorptionModel& m) {
  return std::visit([](const auto& x) { return x.residual_saturation(); }, m);
}

}  // namespace imbibe
