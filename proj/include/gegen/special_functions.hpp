#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gegen/precision.hpp"

namespace gegen {

/// Index of the Gegenbauer family C_n^lambda. Valid for lambda > -1/2,
/// lambda != 0 (lambda = 0 collapses the family to zero for n >= 1).
class GegenbauerParam {
 public:
  explicit GegenbauerParam(double lambda);

  double lambda() const noexcept { return lambda_; }
  bool positive() const noexcept { return lambda_ > 0.0; }

  /// Parameter lambda + k, used by derivatives and Lobatto interiors.
  GegenbauerParam shifted(int k = 1) const { return GegenbauerParam(lambda_ + k); }

  friend bool operator==(const GegenbauerParam&, const GegenbauerParam&) = default;

 private:
  double lambda_;
};

namespace detail {
inline double lgamma_positive(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}
template <class Real>
Real lgamma_positive(const Real& x) {
  using std::lgamma;
  return lgamma(x);
}
}  // namespace detail

/// ln Gamma(x) for x > 0.
template <class Real = double>
Real ln_gamma(const Real& x) {
  if (!(x > 0)) throw std::domain_error("ln_gamma: argument must be positive");
  return detail::lgamma_positive(x);
}

/// ln |Gamma(x)| for x > -1, x != 0; shifts (-1, 0) up by one.
template <class Real = double>
Real ln_abs_gamma(const Real& x) {
  using std::abs;
  using std::log;
  if (x > 0) return ln_gamma<Real>(x);
  if (x > -1 && x != 0) return ln_gamma<Real>(x + 1) - log(abs(x));
  throw std::domain_error("ln_abs_gamma: argument must exceed -1 and be nonzero");
}

/// g_k = Gamma(k + lambda) / (k! Gamma(lambda)) by the ratio recurrence
/// g_{k+1} = g_k (k + lambda) / (k + 1), g_0 = 1.
template <class Real = double>
Real g_coeff(const GegenbauerParam& param, int k) {
  if (k < 0) throw std::domain_error("g_coeff: k must be nonnegative");
  const Real lam(param.lambda());
  Real g(1);
  for (int j = 0; j < k; ++j) g = g * (Real(j) + lam) / Real(j + 1);
  return g;
}

/// g_0 .. g_kmax in one pass.
std::vector<double> g_sequence(const GegenbauerParam& param, int kmax);

/// d_{n,k} = 1 - g_{n-k} / g_n for 1 <= k <= n.
double d_coeff(const GegenbauerParam& param, int n, int k);

/// Gamma(n + 1, x) = n! e^{-x} sum_{k<=n} x^k / k!.
double upper_incomplete_gamma_int(int n, double x);

/// Weighted norm h_n = int C_n^2 (1 - x^2)^{lambda - 1/2} dx, assembled in
/// log-space: 2^{1-2 lambda} pi Gamma(n + 2 lambda) / (Gamma(lambda)^2 n! (n + lambda)).
template <class Real = double>
Real h_norm(const GegenbauerParam& param, int n);

/// Total mass of the weight, sqrt(pi) Gamma(lambda + 1/2) / Gamma(lambda + 1) = h_0.
template <class Real = double>
Real total_mass(const GegenbauerParam& param) {
  using std::exp;
  using std::log;
  const Real lam(param.lambda());
  const Real pi_r = pi<Real>();
  return exp(log(pi_r) / 2 + ln_gamma<Real>(lam + Real(0.5)) - ln_gamma<Real>(lam + 1));
}

template <class Real>
Real h_norm(const GegenbauerParam& param, int n) {
  using std::exp;
  using std::log;
  if (n < 0) throw std::domain_error("h_norm: n must be nonnegative");
  if (n == 0) return total_mass<Real>(param);
  const Real lam(param.lambda());
  const Real pi_r = pi<Real>();
  const Real log_h = (1 - 2 * lam) * log(Real(2)) + log(pi_r) + ln_gamma<Real>(Real(n) + 2 * lam) -
                     2 * ln_abs_gamma<Real>(lam) - ln_gamma<Real>(Real(n + 1)) -
                     log(Real(n) + lam);
  return exp(log_h);
}

}  // namespace gegen
