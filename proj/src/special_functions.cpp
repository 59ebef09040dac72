#include "gegen/special_functions.hpp"

#include <cmath>
#include <string>

namespace gegen {

GegenbauerParam::GegenbauerParam(double lambda) : lambda_(lambda) {
  if (!std::isfinite(lambda) || !(lambda > -0.5)) {
    throw std::domain_error("GegenbauerParam: lambda must exceed -1/2, got " + std::to_string(lambda));
  }
  if (lambda == 0.0) {
    throw std::domain_error("GegenbauerParam: lambda = 0 is excluded");
  }
}

std::vector<double> g_sequence(const GegenbauerParam& param, int kmax) {
  if (kmax < 0) throw std::domain_error("g_sequence: kmax must be nonnegative");
  const double lam = param.lambda();
  std::vector<double> g(static_cast<std::size_t>(kmax) + 1);
  g[0] = 1.0;
  for (int k = 0; k < kmax; ++k) g[k + 1] = g[k] * (k + lam) / (k + 1);
  return g;
}

double d_coeff(const GegenbauerParam& param, int n, int k) {
  if (k < 1 || k > n) {
    throw std::domain_error("d_coeff: requires 1 <= k <= n");
  }
  // g_{n-k} / g_n = prod_{j<k} (n - j) / (n - j - 1 + lambda)
  const double lam = param.lambda();
  double ratio = 1.0;
  for (int j = 0; j < k; ++j) ratio *= (n - j) / (n - j - 1 + lam);
  return 1.0 - ratio;
}

double upper_incomplete_gamma_int(int n, double x) {
  if (n < 0) throw std::domain_error("upper_incomplete_gamma_int: n must be nonnegative");
  if (!(x >= 0.0)) throw std::domain_error("upper_incomplete_gamma_int: x must be nonnegative");
  // Horner in x over c_k = n!/k!, with c_{k-1} = k c_k.
  double sum = 0.0;
  double c = 1.0;
  for (int k = n; k >= 0; --k) {
    sum = sum * x + c;
    c *= k;
  }
  return sum * std::exp(-x);
}

}  // namespace gegen
