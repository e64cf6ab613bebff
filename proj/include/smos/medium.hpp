#pragma once

#include <utility>

namespace smos {

/// Fractional orders from quality factors: gamma = atan(1/Q) / pi.
std::pair<double, double> derive_gammas(double q_p, double q_s);

/// Material description. The 1-D diffusive benchmark uses {gamma, C, rho};
/// 2-D constant-Q media use wave speeds and quality factors with the moduli
/// constants C_p = c_p^2 cos^2(pi gamma_p / 2) omega0^(-2 gamma_p) (and the
/// S analogue) unless overridden. elastic = true switches the steppers to the
/// gamma = 0 constitutive law (stress from strain, no memory field).
struct Medium {
  double rho = 1.0;

  // 1-D
  double gamma = 0.0;
  double C = 1.0;

  // 2-D
  double c_p = 0.0, c_s = 0.0;
  double q_p = 0.0, q_s = 0.0;
  double gamma_p = 0.0, gamma_s = 0.0;
  double C_p = 0.0, C_s = 0.0;
  double omega0 = 0.0;

  bool elastic = false;

  static Medium make_1d(double gamma, double C = 1.0, double rho = 1.0);
  static Medium make_1d_elastic(double C = 1.0, double rho = 1.0);

  /// Derives gamma_p/gamma_s from Q and the moduli constants from the wave
  /// speeds; pass gamma or C overrides as non-negative values.
  static Medium make_2d(double rho, double c_p, double c_s, double q_p, double q_s,
                        double omega0 = 628.3185307179587,
                        double gamma_p_override = -1.0, double gamma_s_override = -1.0,
                        double C_p_override = -1.0, double C_s_override = -1.0);
  static Medium make_2d_elastic(double rho, double c_p, double c_s);
};

}  // namespace smos
