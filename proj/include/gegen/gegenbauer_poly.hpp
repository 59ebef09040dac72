#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "gegen/precision.hpp"
#include "gegen/special_functions.hpp"

namespace gegen {

/// Neumaier-compensated running sum for real or complex values.
template <class T>
class CompensatedSum {
 public:
  void add(const T& v) {
    if constexpr (is_complex_v<T>) {
      re_.add(v.real());
      im_.add(v.imag());
    } else {
      using std::abs;
      const T t = sum_ + v;
      if (abs(sum_) >= abs(v)) {
        comp_ += (sum_ - t) + v;
      } else {
        comp_ += (v - t) + sum_;
      }
      sum_ = t;
    }
  }

  T value() const {
    if constexpr (is_complex_v<T>) {
      return T(re_.value(), im_.value());
    } else {
      return sum_ + comp_;
    }
  }

 private:
  struct Empty {};
  using Part = std::conditional_t<is_complex_v<T>, CompensatedSum<scalar_of_t<T>>, Empty>;
  T sum_{};
  T comp_{};
  [[no_unique_address]] Part re_{};
  [[no_unique_address]] Part im_{};
};

/// C_n^lambda(x) by the forward three-term recurrence from C_0 = 1, C_1 = 2 lambda x.
/// T may be real (double, quad) or std::complex<double>.
template <class T>
T eval_recurrence(const GegenbauerParam& param, int n, const T& x) {
  using Real = scalar_of_t<T>;
  if (n < 0) throw std::domain_error("eval_recurrence: n must be nonnegative");
  if (n == 0) return T(1);
  const Real lam(param.lambda());
  T prev(1);
  T cur = Real(2) * lam * x;
  for (int k = 2; k <= n; ++k) {
    T next = (Real(2) * (Real(k) + lam - 1) * x * cur - (Real(k) + 2 * lam - 2) * prev) / Real(k);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// (C_n^lambda)'(x) = 2 lambda C_{n-1}^{lambda+1}(x), n >= 1.
template <class T>
T eval_derivative(const GegenbauerParam& param, int n, const T& x) {
  using Real = scalar_of_t<T>;
  if (n < 1) throw std::domain_error("eval_derivative: n must be at least 1");
  return Real(2) * Real(param.lambda()) * eval_recurrence(param.shifted(), n - 1, x);
}

/// C_n^lambda(z) at z = (w + 1/w)/2 through sum_k g_k g_{n-k} w^{n-2k}; |w| > 1.
std::complex<double> eval_w_series(const GegenbauerParam& param, int n, std::complex<double> w);

/// C_n^lambda(z) / (g_n w^n) = sum_k (g_{n-k}/g_n) g_k w^{-2k}, built for repeated
/// evaluation at many w of the same modulus. All coefficients stay O(n^{|1-lambda|}),
/// so the series is overflow-free for any n.
class NormalizedEllipseSeries {
 public:
  NormalizedEllipseSeries(const GegenbauerParam& param, int n);

  std::complex<double> operator()(std::complex<double> w) const;

  int degree() const noexcept { return n_; }
  const std::vector<double>& coefficients() const noexcept { return coeff_; }

 private:
  int n_;
  std::vector<double> coeff_;
  std::vector<double> tail_max_;
};

std::complex<double> normalized_on_ellipse(const GegenbauerParam& param, int n, std::complex<double> w);

/// C_n^lambda(1) = Gamma(n + 2 lambda) / (n! Gamma(2 lambda)), in log-space.
double value_at_one(const GegenbauerParam& param, int n);

/// Sample sizes of the D_lambda calibration for -1/2 < lambda < 0.
inline constexpr int kCalibrationMaxDegree = 200;
inline constexpr int kCalibrationGridPoints = 2001;

/// D_lambda := max_{1<=n<=200} max_x |C_n^lambda(x)| / n^{lambda-1} over a uniform
/// 2001-point grid. Computed once per lambda and cached; thread-safe.
double calibrated_d_lambda(const GegenbauerParam& param);

/// Upper bound for max_{|x|<=1} |C_n^lambda(x)|: C_n(1) for lambda > 0, the calibrated
/// D_lambda n^{lambda-1} for lambda < 0.
double max_abs_bound(const GegenbauerParam& param, int n);

}  // namespace gegen
