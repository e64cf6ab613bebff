#include "smos/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "smos/gamma.hpp"

namespace smos {

namespace {

// Eigenvalues of a symmetric tridiagonal matrix by the implicit QL method
// (EISPACK imtql1 lineage). d = diagonal, e = off-diagonal (e[0..n-2]).
// On return d holds the eigenvalues, unsorted.
template <typename T>
void tridiag_eigenvalues(std::vector<T>& d, std::vector<T>& e) {
  const int n = static_cast<int>(d.size());
  if (n == 1) return;
  e.resize(n, T(0));
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const T dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= std::numeric_limits<T>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == 60)
          throw std::runtime_error("tridiag_eigenvalues: QL iteration failed to converge");
        T g = (d[l + 1] - d[l]) / (T(2) * e[l]);
        T r = std::hypot(g, T(1));
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        T s = 1, c = 1, p = 0;
        int i;
        for (i = m - 1; i >= l; --i) {
          T f = s * e[i];
          const T b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == T(0)) {
            d[i + 1] -= p;
            e[m] = 0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + T(2) * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == T(0) && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0;
      }
    } while (m != l);
  }
}

// Scaled evaluation of the generalized Laguerre polynomial L_n^{(alpha)} at y.
// Returns p_n and p_{n-1} rescaled by a common factor 2^(-ex2) to avoid
// overflow; log|L_{n-1}| is recoverable as log|pnm1| + ex2*log(2).
template <typename T>
struct ScaledEval {
  T pn = 0;
  T pnm1 = 0;
  long ex2 = 0;
};

template <typename T>
ScaledEval<T> laguerre_eval(int n, T alpha, T y) {
  ScaledEval<T> ev;
  T pkm1 = 1;                // L_0
  T pk = T(1) + alpha - y;   // L_1
  long ex2 = 0;
  for (int k = 1; k < n; ++k) {
    T pkp1 = ((T(2 * k) + alpha + T(1) - y) * pk - (T(k) + alpha) * pkm1) / T(k + 1);
    pkm1 = pk;
    pk = pkp1;
    const T mag = std::max(std::fabs(pk), std::fabs(pkm1));
    if (mag > T(1e250)) {
      pk = std::ldexp(pk, -850);
      pkm1 = std::ldexp(pkm1, -850);
      ex2 += 850;
    } else if (mag > T(0) && mag < T(1e-250)) {
      pk = std::ldexp(pk, 850);
      pkm1 = std::ldexp(pkm1, 850);
      ex2 -= 850;
    }
  }
  ev.pn = pk;
  ev.pnm1 = pkm1;
  ev.ex2 = ex2;
  return ev;
}

ScaledEval<double> hermite_eval(int n, double y) {
  ScaledEval<double> ev;
  double pkm1 = 1.0;       // H_0
  double pk = 2.0 * y;     // H_1
  long ex2 = 0;
  for (int k = 1; k < n; ++k) {
    double pkp1 = 2.0 * y * pk - 2.0 * k * pkm1;
    pkm1 = pk;
    pk = pkp1;
    const double mag = std::max(std::fabs(pk), std::fabs(pkm1));
    if (mag > 1e250) {
      pk = std::ldexp(pk, -850);
      pkm1 = std::ldexp(pkm1, -850);
      ex2 += 850;
    } else if (mag > 0.0 && mag < 1e-250) {
      pk = std::ldexp(pk, 850);
      pkm1 = std::ldexp(pkm1, 850);
      ex2 -= 850;
    }
  }
  ev.pn = pk;
  ev.pnm1 = pkm1;
  ev.ex2 = ex2;
  return ev;
}

template <typename T>
T lgamma_t(T x) {
  if constexpr (sizeof(T) > sizeof(double))
    return lgammal(x);
  else
    return std::lgamma(x);
}

constexpr double kLog2 = 0.6931471805599453094;

// Nodes (ascending) and log-weights of the beta = 1 generalized Laguerre rule.
template <typename T>
void laguerre_core(T alpha, int n, std::vector<T>& nodes, std::vector<T>& log_weights) {
  std::vector<T> d(n), e(n, T(0));
  for (int k = 0; k < n; ++k) d[k] = T(2 * k) + alpha + T(1);
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(T(k) * (T(k) + alpha));
  tridiag_eigenvalues(d, e);
  std::sort(d.begin(), d.end());

  nodes.resize(n);
  log_weights.resize(n);
  const T log_norm = lgamma_t(T(n) + alpha) - std::log(T(n) + alpha) - lgamma_t(T(n + 1));
  for (int j = 0; j < n; ++j) {
    T y = d[j];
    // Newton polish on L_n^{(alpha)}; derivative via
    // y L_n' = n L_n - (n + alpha) L_{n-1}.
    for (int it = 0; it < 3 && y > T(0); ++it) {
      const ScaledEval<T> ev = laguerre_eval(n, alpha, y);
      const T deriv = (T(n) * ev.pn - (T(n) + alpha) * ev.pnm1) / y;
      if (deriv == T(0)) break;
      const T dy = ev.pn / deriv;
      y -= dy;
      if (std::fabs(dy) <= std::numeric_limits<T>::epsilon() * std::max(y, T(1))) break;
    }
    if (!(y > T(0))) throw std::runtime_error("gauss_laguerre: node iteration left (0, inf)");
    const ScaledEval<T> ev = laguerre_eval(n, alpha, y);
    const T log_lnm1 = std::log(std::fabs(ev.pnm1)) + T(ev.ex2) * T(kLog2);
    nodes[j] = y;
    log_weights[j] = log_norm + std::log(y) - T(2) * log_lnm1;
  }
  for (int j = 1; j < n; ++j)
    if (!(nodes[j] > nodes[j - 1]))
      throw std::runtime_error("gauss_laguerre: nodes not strictly increasing");
}

}  // namespace

QuadRule gauss_laguerre(double alpha, double beta, int n) {
  if (!(alpha > -1.0)) throw std::invalid_argument("gauss_laguerre: requires alpha > -1");
  if (!(beta > 0.0)) throw std::invalid_argument("gauss_laguerre: requires beta > 0");
  if (n < 1) throw std::invalid_argument("gauss_laguerre: requires n >= 1");

  QuadRule rule;
  rule.kind = QuadKind::laguerre;
  rule.alpha = alpha;
  rule.beta = beta;
  laguerre_core<double>(alpha, n, rule.nodes, rule.log_weights);
  rule.weights.resize(n);
  for (int j = 0; j < n; ++j) rule.weights[j] = std::exp(rule.log_weights[j]);

  // Sanity: the weights must sum to Gamma(alpha+1).
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  const double expect = gamma_fn(alpha + 1.0);
  if (!(std::fabs(wsum - expect) <= 1e-8 * expect))
    throw std::runtime_error("gauss_laguerre: weight-sum check failed (eigen-solve failure?)");

  if (beta != 1.0) {
    const double log_beta = std::log(beta);
    for (int j = 0; j < n; ++j) {
      rule.nodes[j] /= beta;
      rule.weights[j] /= std::pow(beta, alpha + 1.0);
      rule.log_weights[j] -= (alpha + 1.0) * log_beta;
    }
  }
  return rule;
}

QuadRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: requires n >= 1");

  QuadRule rule;
  rule.kind = QuadKind::hermite;
  rule.alpha = 0.0;
  rule.beta = 1.0;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.log_weights.resize(n);

  constexpr double kLogSqrtPi = 0.5723649429247000870;  // log(sqrt(pi))
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.log_weights[0] = kLogSqrtPi;
    rule.weights[0] = std::sqrt(3.141592653589793238462643383279502884);
    return rule;
  }

  std::vector<double> d(n, 0.0), e(n, 0.0);
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(0.5 * k);
  tridiag_eigenvalues(d, e);
  std::sort(d.begin(), d.end());

  // polish and enforce exact symmetry
  for (int j = 0; j < n; ++j) {
    double y = d[j];
    for (int it = 0; it < 3; ++it) {
      const ScaledEval<double> ev = hermite_eval(n, y);
      const double deriv = 2.0 * n * ev.pnm1;
      if (deriv == 0.0) break;
      const double dy = ev.pn / deriv;
      y -= dy;
      if (std::fabs(dy) <= 1e-16 * std::max(std::fabs(y), 1.0)) break;
    }
    d[j] = y;
  }
  for (int j = 0; j < n / 2; ++j) {
    const double m = 0.5 * (d[n - 1 - j] - d[j]);
    d[j] = -m;
    d[n - 1 - j] = m;
  }
  if (n % 2 == 1) d[n / 2] = 0.0;

  const double log_norm =
      (n - 1.0) * kLog2 + log_gamma(n + 1.0) + kLogSqrtPi - 2.0 * std::log(static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    const int src = (j < n - 1 - j) ? j : n - 1 - j;  // mirror weights exactly
    if (src != j) {
      rule.nodes[j] = d[j];
      rule.weights[j] = rule.weights[src];
      rule.log_weights[j] = rule.log_weights[src];
      continue;
    }
    const double y = d[j];
    const ScaledEval<double> ev = hermite_eval(n, y);
    const double log_hnm1 = std::log(std::fabs(ev.pnm1)) + ev.ex2 * kLog2;
    rule.nodes[j] = y;
    rule.log_weights[j] = log_norm - 2.0 * log_hnm1;
    rule.weights[j] = std::exp(rule.log_weights[j]);
  }

  for (int j = 1; j < n; ++j)
    if (!(rule.nodes[j] > rule.nodes[j - 1]))
      throw std::runtime_error("gauss_hermite: nodes not strictly increasing");
  return rule;
}

std::vector<double> bare_weights(const QuadRule& rule) {
  if (rule.kind != QuadKind::laguerre)
    throw std::invalid_argument("bare_weights: laguerre rule required");
  std::vector<double> w(rule.nodes.size());
  for (size_t j = 0; j < w.size(); ++j)
    w[j] = std::exp(rule.log_weights[j] + rule.beta * rule.nodes[j]);
  return w;
}

double memory_integral(const QuadRule& rule, std::span<const double> phi_samples) {
  if (rule.kind != QuadKind::laguerre)
    throw std::invalid_argument("memory_integral: laguerre rule required");
  if (phi_samples.size() != rule.nodes.size())
    throw std::invalid_argument("memory_integral: sample count does not match rule size");
  double acc = 0.0;
  for (size_t j = 0; j < phi_samples.size(); ++j)
    acc += std::exp(rule.log_weights[j] + rule.beta * rule.nodes[j]) * phi_samples[j];
  return acc;
}

double diag_relaxed_integral(double gamma, int n_mem, double beta, double t) {
  if (!(gamma > 0.0 && gamma < 0.5))
    throw std::invalid_argument("diag_relaxed_integral: requires 0 < gamma < 1/2");
  if (!(t > 0.0)) throw std::invalid_argument("diag_relaxed_integral: requires t > 0");
  const QuadRule rule = gauss_laguerre(4.0 * gamma - 1.0, beta, n_mem);
  std::vector<double> phi(rule.nodes.size());
  for (size_t j = 0; j < phi.size(); ++j) {
    const double y2 = rule.nodes[j] * rule.nodes[j];
    const double em = std::expm1(-y2 * t);  // e^(-y^2 t) - 1
    phi[j] = (1.0 + em) - em / y2;
  }
  return memory_integral(rule, phi);
}

namespace detail {

LaguerreRuleLd laguerre_rule_ld(long double alpha, int n) {
  if (!(alpha > -1.0L)) throw std::invalid_argument("laguerre_rule_ld: requires alpha > -1");
  if (n < 1) throw std::invalid_argument("laguerre_rule_ld: requires n >= 1");
  LaguerreRuleLd rule;
  laguerre_core<long double>(alpha, n, rule.nodes, rule.log_weights);
  return rule;
}

}  // namespace detail

double exact_relaxed_integral(double gamma, double t) {
  if (!(gamma > 0.0 && gamma < 0.5))
    throw std::invalid_argument("exact_relaxed_integral: requires 0 < gamma < 1/2");
  if (!(t > 0.0)) throw std::invalid_argument("exact_relaxed_integral: requires t > 0");
  return 0.5 * gamma_fn(2.0 * gamma) * std::pow(t, -2.0 * gamma) -
         0.5 * gamma_fn(2.0 * gamma - 1.0) * std::pow(t, 1.0 - 2.0 * gamma);
}

}  // namespace smos
