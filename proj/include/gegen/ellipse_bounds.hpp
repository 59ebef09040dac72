#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gegen/special_functions.hpp"

namespace gegen {

using Complex = std::complex<double>;
using ComplexFunction = std::function<Complex(Complex)>;

/// Bernstein ellipse E_rho, the image of |w| = rho under z = (w + 1/w)/2, sampled at
/// `samples` equally spaced angles.
class EllipseSpec {
 public:
  static constexpr int kDefaultSamples = 2048;

  explicit EllipseSpec(double rho, int samples = kDefaultSamples);

  double rho() const noexcept { return rho_; }
  int samples() const noexcept { return samples_; }
  double semi_major() const noexcept { return 0.5 * (rho_ + 1.0 / rho_); }
  double semi_minor() const noexcept { return 0.5 * (rho_ - 1.0 / rho_); }
  /// Distance from E_rho to [-1, 1].
  double distance() const noexcept { return semi_major() - 1.0; }

 private:
  double rho_;
  int samples_;
};

struct EllipsePoint {
  Complex w;
  Complex z;
};

std::vector<EllipsePoint> ellipse_points(const EllipseSpec& spec);

/// Arc length of E_rho by the periodic trapezoidal rule.
double ellipse_perimeter(double rho, int samples = 4096);

/// pi sqrt(rho^2 + rho^{-2}), an upper bound of the perimeter within 12 percent.
double perimeter_bound(double rho);

/// Raised when the function is not finite at a sample point of the contour.
class NonFiniteSample : public std::runtime_error {
 public:
  NonFiniteSample(double rho, Complex z);
  Complex where() const noexcept { return z_; }

 private:
  Complex z_;
};

/// max_j |u(z_j)| over the sampled ellipse (M_rho).
double sup_on_ellipse(const ComplexFunction& u, const EllipseSpec& spec);

/// R_n(rho, lambda) = sum_{k=1}^n |d_{n,k}||g_k| rho^{-2k} + sum_{k>n} |g_k| rho^{-2k}.
/// The tail stops once a term drops below 1e-17 of the running sum on the decreasing branch.
double remainder_exact(const GegenbauerParam& param, int n, double rho);

enum class BoundKind {
  RemainderLargeLambda,   // remainder bound, lambda > 1
  RemainderSmallLambda,   // remainder bound, -1/2 < lambda < 1
  InterpGauss,            // Gauss interpolation, lambda > 0
  InterpGaussNegative,    // Gauss interpolation, -1/2 < lambda < 0
  DiffGauss,              // Gauss node differencing
  InterpLobatto,          // Gauss-Lobatto interpolation
  DiffLobatto,            // Gauss-Lobatto node differencing
  Quadrature,             // h_0 times an interpolation bound
};

std::string_view to_string(BoundKind kind);
BoundKind parse_bound_kind(std::string_view name);

inline constexpr const char* kFlagUnitC = "c set to 1";
inline constexpr const char* kFlagCalibratedD = "uses calibrated D_lambda";

struct BoundParameters {
  double lambda = 0.0;
  int n = 0;
  double rho = 0.0;
  std::optional<int> m;
  std::optional<double> m_rho;
  std::optional<int> ellipse_samples;
};

/// One bound with every factor itemised; total == constant_factor * rate_factor.
struct BoundBreakdown {
  BoundKind kind = BoundKind::InterpGauss;
  double constant_factor = 0.0;
  double rate_factor = 0.0;
  double total = 0.0;
  BoundParameters parameters;
  std::vector<std::pair<std::string, double>> items;
  std::vector<std::string> flags;

  bool has_flag(std::string_view flag) const;
};

/// Itemised remainder bound. With m unset, m minimises the total over admissible
/// m in [1, n]. Throws AdmissibilityError for a supplied m that breaks the
/// large-lambda condition m + 2 >= (lambda - 1)(1/(2 ln rho) - 1).
BoundBreakdown remainder_bound(const GegenbauerParam& param, int n, double rho, std::optional<int> m = std::nullopt);

/// Whether m satisfies the large-lambda admissibility condition (always true for lambda < 1).
bool remainder_m_admissible(const GegenbauerParam& param, double rho, int m);

class AdmissibilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by e_n_metric when the normaliser A(rho, lambda) vanishes (lambda = 1).
class DegenerateNormalization : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A(rho, lambda) = |1 - lambda| |(1 - rho^{-2})^{-lambda} - 1|.
double tightness_normalizer(const GegenbauerParam& param, double rho);

/// E_n(rho; lambda): sampled sup of |(1 - w^{-2})^{-lambda} - C_n(z)/(g_n w^n)| over E_rho,
/// divided by A(rho, lambda).
double e_n_metric(const GegenbauerParam& param, int n, const EllipseSpec& spec);

/// Sampled sup of the same discrepancy, unnormalised.
double max_normalized_discrepancy(const GegenbauerParam& param, int n, const EllipseSpec& spec);

BoundBreakdown interp_bound_gauss(const GegenbauerParam& param, int n, double rho, double m_rho);
BoundBreakdown diff_bound_gauss(const GegenbauerParam& param, int n, double rho, double m_rho);
BoundBreakdown interp_bound_lobatto(const GegenbauerParam& param, int n, double rho, double m_rho);
BoundBreakdown diff_bound_lobatto(const GegenbauerParam& param, int n, double rho, double m_rho);

/// h_0 times an interpolation bound (Gauss or Lobatto).
BoundBreakdown quad_bound(const GegenbauerParam& param, const BoundBreakdown& interp);

/// Evaluates the bound of `kind` (an interpolation or differencing kind) at one rho.
BoundBreakdown evaluate_bound(BoundKind kind, const GegenbauerParam& param, int n, double rho, double m_rho);

/// M_rho tabulated over an open rho grid [min + h, max - h], h = (max - min)/count.
struct RhoScan {
  std::vector<double> rho;
  std::vector<std::optional<double>> m_rho;  // empty where u was not finite on the contour
  int samples = EllipseSpec::kDefaultSamples;

  int skipped() const;
};

RhoScan make_rho_scan(const ComplexFunction& u, double rho_min, double rho_max, int count,
                      int samples = EllipseSpec::kDefaultSamples);

struct BestBound {
  double rho_star = 0.0;
  BoundBreakdown breakdown;
};

/// Minimises the chosen bound over a tabulated rho grid.
BestBound best_bound_over_rho(const GegenbauerParam& param, int n, const RhoScan& scan, BoundKind which);

BestBound best_bound_over_rho(const GegenbauerParam& param, int n, const ComplexFunction& u, double rho_min,
                              double rho_max, int count, BoundKind which,
                              int samples = EllipseSpec::kDefaultSamples);

}  // namespace gegen
