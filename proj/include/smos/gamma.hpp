#pragma once

namespace smos {

/// Gamma function on the real line. Uses a Lanczos core for x >= 0.5 and the
/// reflection formula Gamma(x)Gamma(1-x) = pi/sin(pi x) for x < 0.5.
/// Throws std::domain_error at the poles (non-positive integers).
double gamma_fn(double x);

/// log(Gamma(x)) for x > 0.
double log_gamma(double x);

/// sin(pi*x) with argument reduction, accurate for large |x|.
double sin_pi(double x);

/// cos(pi*x) with argument reduction.
double cos_pi(double x);

}  // namespace smos
