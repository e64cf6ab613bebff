#pragma once

#include <span>
#include <vector>

namespace smos {

enum class QuadKind { laguerre, hermite };

/// Gauss quadrature rule. For kind == laguerre the weight is y^alpha e^(-beta y)
/// on (0, inf); for kind == hermite the weight is e^(-y^2) on (-inf, inf).
///
/// log_weights carries log(weights) computed analytically; for large rules the
/// plain weights underflow while the log form stays usable (the memory integral
/// needs w_j * e^(beta y_j), which is O(poly) even when w_j underflows).
struct QuadRule {
  QuadKind kind = QuadKind::laguerre;
  double alpha = 0.0;
  double beta = 1.0;
  std::vector<double> nodes;        // strictly increasing
  std::vector<double> weights;      // all positive (may underflow to 0 for huge n)
  std::vector<double> log_weights;  // log of each weight

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Generalized Laguerre-Gauss rule with n nodes, exact for polynomials of
/// degree <= 2n-1 against y^alpha e^(-beta y). Built from the beta = 1 rule by
/// the scaling relations y_j -> y_j / beta, w_j -> w_j / beta^(alpha+1), so the
/// scaling consistency holds elementwise by construction.
QuadRule gauss_laguerre(double alpha, double beta, int n);

/// Hermite-Gauss rule with n nodes, exact for polynomials of degree <= 2n-1
/// against e^(-y^2). Nodes are exactly symmetric about 0.
QuadRule gauss_hermite(int n);

/// Combined weights w_j * e^(beta y_j) (laguerre), evaluated in log space.
/// These are the coefficients that the memory integral applies to Phi samples.
std::vector<double> bare_weights(const QuadRule& rule);

/// Sum_j w_j e^(beta y_j) phi[j], approximating the weakly singular integral
/// int_0^inf y^alpha Phi(y) dy when phi[j] = Phi(y_j).
double memory_integral(const QuadRule& rule, std::span<const double> phi_samples);

/// Diagnostic integral I(t) = int_0^inf y^(4 gamma - 1) phi(y, t) dy with the
/// relaxed-dynamics solution phi(y, t) = e^(-y^2 t) + (1 - e^(-y^2 t)) / y^2,
/// evaluated by the scaled rule with n_mem nodes.
double diag_relaxed_integral(double gamma, int n_mem, double beta, double t);

/// Closed form of the diagnostic integral:
/// I(t) = Gamma(2 gamma) t^(-2 gamma) / 2 - Gamma(2 gamma - 1) t^(1 - 2 gamma) / 2.
double exact_relaxed_integral(double gamma, double t);

namespace detail {

/// Extended-precision beta = 1 Laguerre rule (nodes ascending, log weights).
/// The Wright evaluation needs this for its boundary-scaled regime, where the
/// exponential amplification turns O(n eps) node/weight errors into a noise
/// floor above the matching tolerance.
struct LaguerreRuleLd {
  std::vector<long double> nodes;
  std::vector<long double> log_weights;
};
LaguerreRuleLd laguerre_rule_ld(long double alpha, int n);

}  // namespace detail

}  // namespace smos
