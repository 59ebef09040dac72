#include "gegen/gegenbauer_poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace gegen {

std::complex<double> eval_w_series(const GegenbauerParam& param, int n, std::complex<double> w) {
  if (n < 0) throw std::domain_error("eval_w_series: n must be nonnegative");
  if (!(std::abs(w) > 1.0)) throw std::domain_error("eval_w_series: requires |w| > 1");
  const std::vector<double> g = g_sequence(param, n);
  const std::complex<double> q = 1.0 / (w * w);
  std::complex<double> power = std::pow(w, n);
  CompensatedSum<std::complex<double>> sum;
  for (int k = 0; k <= n; ++k) {
    sum.add(g[k] * g[n - k] * power);
    power *= q;
  }
  return sum.value();
}

NormalizedEllipseSeries::NormalizedEllipseSeries(const GegenbauerParam& param, int n)
    : n_(n), coeff_(static_cast<std::size_t>(std::max(n, 0)) + 1), tail_max_(coeff_.size() + 1, 0.0) {
  if (n < 0) throw std::domain_error("NormalizedEllipseSeries: n must be nonnegative");
  const double lam = param.lambda();
  // r_k = g_{n-k} / g_n by the backward ratio, g_k by the forward ratio.
  double r = 1.0;
  double g = 1.0;
  for (int k = 0; k <= n; ++k) {
    coeff_[k] = r * g;
    if (k < n) {
      r *= (n - k) / (n - k - 1 + lam);
      g *= (k + lam) / (k + 1);
    }
  }
  for (int k = n; k >= 0; --k) tail_max_[k] = std::max(tail_max_[k + 1], std::abs(coeff_[k]));
}

std::complex<double> NormalizedEllipseSeries::operator()(std::complex<double> w) const {
  const double modulus = std::abs(w);
  if (!(modulus > 1.0)) throw std::domain_error("normalized_on_ellipse: requires |w| > 1");
  const std::complex<double> q = 1.0 / (w * w);
  const double aq = 1.0 / (modulus * modulus);
  constexpr double kTailTolerance = 1e-3 * std::numeric_limits<double>::epsilon();

  CompensatedSum<std::complex<double>> sum;
  std::complex<double> power(1.0, 0.0);
  double power_abs = 1.0;
  for (int k = 0; k <= n_; ++k) {
    sum.add(coeff_[k] * power);
    power *= q;
    power_abs *= aq;
    // |sum_{j>k} c_j q^j| <= max_{j>k}|c_j| |q|^{k+1} / (1 - |q|)
    if (k < n_ && tail_max_[k + 1] * power_abs / (1.0 - aq) <= kTailTolerance * std::abs(sum.value())) break;
  }
  return sum.value();
}

std::complex<double> normalized_on_ellipse(const GegenbauerParam& param, int n, std::complex<double> w) {
  return NormalizedEllipseSeries(param, n)(w);
}

double value_at_one(const GegenbauerParam& param, int n) {
  if (n < 0) throw std::domain_error("value_at_one: n must be nonnegative");
  if (n == 0) return 1.0;
  const double lam = param.lambda();
  // Gamma(2 lambda) < 0 for -1/2 < lambda < 0.
  const double sign = lam > 0 ? 1.0 : -1.0;
  return sign * std::exp(ln_gamma(n + 2 * lam) - ln_gamma(n + 1.0) - ln_abs_gamma(2 * lam));
}

namespace {

double compute_d_lambda(const GegenbauerParam& param) {
  const double lam = param.lambda();
  std::vector<double> max_abs(kCalibrationMaxDegree + 1, 0.0);
  for (int i = 0; i < kCalibrationGridPoints; ++i) {
    const double x = -1.0 + 2.0 * i / (kCalibrationGridPoints - 1);
    double prev = 1.0;
    double cur = 2.0 * lam * x;
    max_abs[1] = std::max(max_abs[1], std::abs(cur));
    for (int k = 2; k <= kCalibrationMaxDegree; ++k) {
      const double next = (2.0 * (k + lam - 1) * x * cur - (k + 2 * lam - 2) * prev) / k;
      prev = cur;
      cur = next;
      max_abs[k] = std::max(max_abs[k], std::abs(cur));
    }
  }
  double d = 0.0;
  for (int n = 1; n <= kCalibrationMaxDegree; ++n) d = std::max(d, max_abs[n] / std::pow(n, lam - 1));
  return d;
}

}  // namespace

double calibrated_d_lambda(const GegenbauerParam& param) {
  if (param.positive()) throw std::domain_error("calibrated_d_lambda: only defined for -1/2 < lambda < 0");
  static std::mutex mutex;
  static std::map<double, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(param.lambda()); it != cache.end()) return it->second;
  }
  const double d = compute_d_lambda(param);
  std::lock_guard lock(mutex);
  return cache.emplace(param.lambda(), d).first->second;
}

double max_abs_bound(const GegenbauerParam& param, int n) {
  if (n < 0) throw std::domain_error("max_abs_bound: n must be nonnegative");
  if (param.positive()) return value_at_one(param, n);
  if (n == 0) return 1.0;
  return calibrated_d_lambda(param) * std::pow(n, param.lambda() - 1);
}

}  // namespace gegen
