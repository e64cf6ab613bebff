#include "smos/gamma.hpp"

#include <cmath>
#include <stdexcept>

namespace smos {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Lanczos approximation, g = 7, 9 terms (Godfrey's coefficients).
// Relative accuracy ~1e-13 on the positive half line.
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_gamma(double x) {
  // valid for x >= 0.5
  double a = kLanczos[0];
  for (int k = 1; k < 9; ++k) a += kLanczos[k] / (x - 1.0 + k);
  const double t = x + 6.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, x - 0.5) * std::exp(-t) * a;
}

}  // namespace

double sin_pi(double x) {
  // reduce to |r| <= 0.5 with n = round(x); sin(pi x) = (-1)^n sin(pi r)
  const double n = std::round(x);
  const double r = x - n;
  double s = std::sin(kPi * r);
  if (std::fmod(std::fabs(n), 2.0) == 1.0) s = -s;
  return s;
}

double cos_pi(double x) {
  const double n = std::round(x);
  const double r = x - n;
  double c = std::cos(kPi * r);
  if (std::fmod(std::fabs(n), 2.0) == 1.0) c = -c;
  return c;
}

double gamma_fn(double x) {
  if (!std::isfinite(x)) throw std::domain_error("gamma_fn: non-finite argument");
  if (x >= 0.5) return lanczos_gamma(x);
  if (x == std::floor(x))
    throw std::domain_error("gamma_fn: pole at non-positive integer argument");
  // reflection: Gamma(x) = pi / (sin(pi x) * Gamma(1 - x))
  return kPi / (sin_pi(x) * lanczos_gamma(1.0 - x));
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
  return std::lgamma(x);
}

}  // namespace smos
