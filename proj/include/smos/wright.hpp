#pragma once

#include <string>

namespace smos {

/// Parameter pair of the Wright function of the second kind W_{lambda,mu}.
/// Construction rejects values outside -1 < lambda < 0, mu < 1.
struct WrightParams {
  double lambda;
  double mu;
  WrightParams(double lambda_, double mu_);
};

enum class WrightBranch {
  origin_series,    // x == 0, series value 1/Gamma(mu)
  gaussian,         // lambda == -1/2, plain kernel quadrature
  sub_gaussian,     // -1/2 < lambda < 0, scaled quadrature
  kernel,           // -1 < lambda < -1/2, x below -1/cos(lambda pi)
  boundary_scaled,  // -1 < lambda < -1/2, mid range up to x_lambda
  saddle_point      // -1 < lambda < -1/2, x >= x_lambda, asymptotic leading term
};

const char* to_string(WrightBranch b);

struct WrightOptions {
  int n_start = 128;         // initial quadrature order
  int n_max = 512;           // doubling cap
  double tol = 1e-9;         // successive-order agreement target
  bool strict = true;        // throw on quadrature non-convergence
  bool allow_rescue = true;  // direct integration when the doubling check fails
  double tol_floor = 1.0;    // convergence scale: residual <= tol * max(tol_floor, |value|)
};

struct WrightEval {
  double value = 0.0;
  WrightBranch branch = WrightBranch::origin_series;
  int order = 0;        // quadrature order actually used (0 for closed forms)
  double residual = 0;  // |last - previous| of the doubling sequence
  bool converged = true;
};

/// W_{lambda,mu}(-x) for x >= 0 by the five-branch regime dispatch.
/// Non-convergence of the internal quadrature is reported through the
/// returned residual/converged fields (and throws when opt.strict).
WrightEval wright_neg_eval(const WrightParams& p, double x, const WrightOptions& opt = {});
double wright_neg(const WrightParams& p, double x);

/// Mainardi function M_nu(z) = W_{-nu, 1-nu}(-z), 0 < nu < 1, z >= 0.
WrightEval mainardi_eval(double nu, double z, const WrightOptions& opt = {});
double mainardi(double nu, double z);

/// Saddle-point leading term used by the saddle_point branch.
double wright_asymptotic(const WrightParams& p, double x);

/// Matching threshold x_lambda: the smallest x in (-1/cos(lambda pi), X_max]
/// at which the boundary_scaled quadrature and the asymptotic leading term
/// differ by at most tol. Requires -1 < lambda < -1/2. Throws (reporting the
/// minimal observed difference) if no match exists in the window.
double match_threshold(const WrightParams& p, double tol);

}  // namespace smos
