#include "gegen/ellipse_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gegen/gegenbauer_poly.hpp"

namespace gegen {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_rho(double rho, const char* where) {
  if (!(rho > 1.0) || !std::isfinite(rho)) throw std::domain_error(std::string(where) + ": rho must be finite and > 1");
}

void require_n(int n, int min_n, const char* where) {
  if (n < min_n) throw std::domain_error(std::string(where) + ": n must be at least " + std::to_string(min_n));
}

std::string rho_message(double rho, Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << "function is not finite on the ellipse rho=" << rho << " at z=(" << z.real() << ", " << z.imag() << ")";
  return os.str();
}

// (1 - rho^{-2})^{-lambda} - 1, the full generating-function tail sum_{k>=1} g_k rho^{-2k}.
double generating_excess(double lam, double rho) {
  return std::expm1(-lam * std::log1p(-1.0 / (rho * rho)));
}

BoundBreakdown make_breakdown(BoundKind kind, const GegenbauerParam& param, int n, double rho,
                              std::optional<double> m_rho) {
  BoundBreakdown b;
  b.kind = kind;
  b.parameters.lambda = param.lambda();
  b.parameters.n = n;
  b.parameters.rho = rho;
  b.parameters.m_rho = m_rho;
  return b;
}

void finish(BoundBreakdown& b, double constant, double rate) {
  b.constant_factor = constant;
  b.rate_factor = rate;
  b.total = constant * rate;
}

// sqrt(rho^2 + rho^{-2}): perimeter over (2 pi), shared by every interpolation-type bound.
double perimeter_factor(double rho) { return std::sqrt(rho * rho + 1.0 / (rho * rho)); }

// Constant of the Gauss-Lobatto bounds without the Gamma ratio.
double lobatto_prefactor(double lam, double rho, double m_rho) {
  const double ir = 1.0 / rho;
  const double a = (1.0 - ir) * (1.0 - ir);
  const double b = (rho - ir) * (rho - ir);
  return m_rho * perimeter_factor(rho) * std::pow(1.0 + ir * ir, lam + 1.0) / (a * b);
}

// n^p / rho^n through logarithms.
double algebraic_geometric_rate(double p, int n, double rho) {
  return std::exp(p * std::log(static_cast<double>(n)) - n * std::log(rho));
}

bool is_interp(BoundKind kind) {
  return kind == BoundKind::InterpGauss || kind == BoundKind::InterpGaussNegative ||
         kind == BoundKind::InterpLobatto;
}

}  // namespace

EllipseSpec::EllipseSpec(double rho, int samples) : rho_(rho), samples_(samples) {
  require_rho(rho, "EllipseSpec");
  if (samples < 4) throw std::domain_error("EllipseSpec: samples must be at least 4");
}

std::vector<EllipsePoint> ellipse_points(const EllipseSpec& spec) {
  std::vector<EllipsePoint> pts(static_cast<std::size_t>(spec.samples()));
  for (int j = 0; j < spec.samples(); ++j) {
    const double theta = kTwoPi * j / spec.samples();
    const Complex w = std::polar(spec.rho(), theta);
    pts[j] = {w, 0.5 * (w + 1.0 / w)};
  }
  return pts;
}

double ellipse_perimeter(double rho, int samples) {
  require_rho(rho, "ellipse_perimeter");
  if (samples < 4) throw std::domain_error("ellipse_perimeter: samples must be at least 4");
  // |dz/dtheta| = |w - 1/w| / 2 on |w| = rho; the trapezoidal rule is spectrally accurate here.
  CompensatedSum<double> sum;
  for (int j = 0; j < samples; ++j) {
    const Complex w = std::polar(rho, kTwoPi * j / samples);
    sum.add(0.5 * std::abs(w - 1.0 / w));
  }
  return sum.value() * kTwoPi / samples;
}

double perimeter_bound(double rho) {
  require_rho(rho, "perimeter_bound");
  return 0.5 * kTwoPi * perimeter_factor(rho);
}

NonFiniteSample::NonFiniteSample(double rho, Complex z) : std::runtime_error(rho_message(rho, z)), z_(z) {}

double sup_on_ellipse(const ComplexFunction& u, const EllipseSpec& spec) {
  double best = 0.0;
  for (const auto& p : ellipse_points(spec)) {
    const Complex v = u(p.z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NonFiniteSample(spec.rho(), p.z);
    best = std::max(best, std::abs(v));
  }
  return best;
}

double remainder_exact(const GegenbauerParam& param, int n, double rho) {
  require_rho(rho, "remainder_exact");
  require_n(n, 0, "remainder_exact");
  const double lam = param.lambda();
  const double q = 1.0 / (rho * rho);

  CompensatedSum<double> sum;
  double g = 1.0;      // g_k
  double r = 1.0;      // g_{n-k} / g_n
  double power = 1.0;  // rho^{-2k}
  for (int k = 1; k <= n; ++k) {
    r *= (n - k + 1) / (n - k + lam);
    g *= (k - 1 + lam) / k;
    power *= q;
    sum.add(std::abs(1.0 - r) * std::abs(g) * power);
  }
  for (int k = n + 1;; ++k) {
    g *= (k - 1 + lam) / k;
    power *= q;
    const double term = std::abs(g) * power;
    sum.add(term);
    const bool decreasing = (k + lam) / (k + 1) * q < 1.0;
    if (term == 0.0) break;
    if (decreasing && term < 1e-17 * sum.value()) break;
  }
  return sum.value();
}

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::RemainderLargeLambda: return "remainder-large-lambda";
    case BoundKind::RemainderSmallLambda: return "remainder-small-lambda";
    case BoundKind::InterpGauss: return "interp-gauss";
    case BoundKind::InterpGaussNegative: return "interp-gauss-negative";
    case BoundKind::DiffGauss: return "diff-gauss";
    case BoundKind::InterpLobatto: return "interp-lobatto";
    case BoundKind::DiffLobatto: return "diff-lobatto";
    case BoundKind::Quadrature: return "quadrature";
  }
  return "unknown";
}

BoundKind parse_bound_kind(std::string_view name) {
  for (auto k : {BoundKind::RemainderLargeLambda, BoundKind::RemainderSmallLambda, BoundKind::InterpGauss,
                 BoundKind::InterpGaussNegative, BoundKind::DiffGauss, BoundKind::InterpLobatto,
                 BoundKind::DiffLobatto, BoundKind::Quadrature}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown bound kind '" + std::string(name) + "'");
}

bool BoundBreakdown::has_flag(std::string_view flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

bool remainder_m_admissible(const GegenbauerParam& param, double rho, int m) {
  const double lam = param.lambda();
  if (lam < 1.0) return true;
  return m + 2.0 >= (lam - 1.0) * (1.0 / (2.0 * std::log(rho)) - 1.0);
}

namespace {

struct RemainderTerms {
  double d_part;
  double tail_part;
};

// d_{n,m} is passed in so the auto mode can walk m without recomputing products.
RemainderTerms remainder_terms(double lam, int n, double rho, int m, double d_nm) {
  const double excess = generating_excess(lam, rho);
  if (lam > 1.0) {
    const int fl = static_cast<int>(std::floor(lam));
    const double ln_rho = std::log(rho);
    const double ln_a = 1.0 / (12.0 * (m + 1 + lam)) + lam / (2.0 * (m + 1)) - ln_gamma(lam);
    const double ln_tail = ln_a + ln_gamma(fl + 1.0) + fl * std::log(m + lam) - lam * std::log(2.0 * ln_rho) -
                           2.0 * (m - 1) * ln_rho;
    return {d_nm * excess, std::exp(ln_tail)};
  }
  return {std::abs(d_nm) * std::abs(excess),
          std::pow(rho, -2.0 * m) / (rho * rho - 1.0) + 2.0 * std::pow(rho, -2.0 * n)};
}

BoundBreakdown assemble_remainder(const GegenbauerParam& param, int n, double rho, int m, double d_nm) {
  const double lam = param.lambda();
  const auto kind = lam > 1.0 ? BoundKind::RemainderLargeLambda : BoundKind::RemainderSmallLambda;
  BoundBreakdown b = make_breakdown(kind, param, n, rho, std::nullopt);
  b.parameters.m = m;
  const RemainderTerms t = remainder_terms(lam, n, rho, m, d_nm);
  b.items = {{"d_nm", d_nm},
             {"generating_excess", generating_excess(lam, rho)},
             {"head_term", t.d_part},
             {"tail_term", t.tail_part}};
  if (lam > 1.0) {
    b.items.emplace_back("A", std::exp(1.0 / (12.0 * (m + 1 + lam)) + lam / (2.0 * (m + 1)) - ln_gamma(lam)));
  }
  // A sum of two terms has no natural constant/rate split; the whole value is reported as the rate.
  finish(b, 1.0, t.d_part + t.tail_part);
  return b;
}

}  // namespace

BoundBreakdown remainder_bound(const GegenbauerParam& param, int n, double rho, std::optional<int> m) {
  require_rho(rho, "remainder_bound");
  const double lam = param.lambda();
  if (lam == 1.0) {
    throw std::domain_error("remainder_bound: lambda = 1 has R_n given exactly by the geometric tail; no bound applies");
  }
  require_n(n, lam > 1.0 ? 1 : 3, "remainder_bound");

  if (m) {
    if (*m < 1 || *m > n) throw std::domain_error("remainder_bound: m must satisfy 1 <= m <= n");
    if (!remainder_m_admissible(param, rho, *m)) {
      std::ostringstream os;
      os << "remainder_bound: m = " << *m
         << " violates the large-lambda admissibility condition m + 2 >= (lambda - 1)(1/(2 ln rho) - 1)";
      throw AdmissibilityError(os.str());
    }
    return assemble_remainder(param, n, rho, *m, d_coeff(param, n, *m));
  }

  std::optional<BoundBreakdown> best;
  double r = 1.0;
  for (int k = 1; k <= n; ++k) {
    r *= (n - k + 1) / (n - k + lam);
    if (!remainder_m_admissible(param, rho, k)) continue;
    BoundBreakdown candidate = assemble_remainder(param, n, rho, k, 1.0 - r);
    if (!best || candidate.total < best->total) best = std::move(candidate);
  }
  if (!best) {
    throw AdmissibilityError(
        "remainder_bound: no m in [1, n] satisfies m + 2 >= (lambda - 1)(1/(2 ln rho) - 1)");
  }
  return *best;
}

double tightness_normalizer(const GegenbauerParam& param, double rho) {
  require_rho(rho, "tightness_normalizer");
  const double lam = param.lambda();
  return std::abs(1.0 - lam) * std::abs(generating_excess(lam, rho));
}

double max_normalized_discrepancy(const GegenbauerParam& param, int n, const EllipseSpec& spec) {
  require_n(n, 0, "max_normalized_discrepancy");
  const NormalizedEllipseSeries series(param, n);
  const double lam = param.lambda();
  double worst = 0.0;
  for (const auto& p : ellipse_points(spec)) {
    const Complex limit = std::pow(1.0 - 1.0 / (p.w * p.w), -lam);
    worst = std::max(worst, std::abs(limit - series(p.w)));
  }
  return worst;
}

double e_n_metric(const GegenbauerParam& param, int n, const EllipseSpec& spec) {
  if (param.lambda() == 1.0) {
    throw DegenerateNormalization("e_n_metric: lambda = 1 makes the normaliser |1 - lambda|(...) vanish");
  }
  return max_normalized_discrepancy(param, n, spec) / tightness_normalizer(param, spec.rho());
}

BoundBreakdown interp_bound_gauss(const GegenbauerParam& param, int n, double rho, double m_rho) {
  require_rho(rho, "interp_bound_gauss");
  require_n(n, 1, "interp_bound_gauss");
  const double lam = param.lambda();
  const double ir2 = 1.0 / (rho * rho);
  const double base = m_rho * perimeter_factor(rho) / ((rho - 1.0) * (rho - 1.0));
  if (lam > 0) {
    BoundBreakdown b = make_breakdown(BoundKind::InterpGauss, param, n, rho, m_rho);
    const double gamma_ratio = std::exp(ln_gamma(lam) - ln_gamma(2.0 * lam));
    const double window = std::pow(1.0 + ir2, -lam);
    b.items = {{"M_rho", m_rho}, {"gamma_ratio", gamma_ratio}, {"modulus_window", window}};
    finish(b, gamma_ratio * base / window, algebraic_geometric_rate(lam, n, rho));
    b.flags.push_back(kFlagUnitC);
    return b;
  }
  BoundBreakdown b = make_breakdown(BoundKind::InterpGaussNegative, param, n, rho, m_rho);
  const double d = calibrated_d_lambda(param);
  const double abs_gamma = std::exp(ln_abs_gamma(lam));
  const double window = std::pow(1.0 - ir2, -lam);
  b.items = {{"M_rho", m_rho}, {"D_lambda", d}, {"abs_gamma_lambda", abs_gamma}, {"modulus_window", window}};
  finish(b, d * abs_gamma * base / window, std::pow(rho, -static_cast<double>(n)));
  b.flags.push_back(kFlagUnitC);
  b.flags.push_back(kFlagCalibratedD);
  return b;
}

BoundBreakdown diff_bound_gauss(const GegenbauerParam& param, int n, double rho, double m_rho) {
  require_rho(rho, "diff_bound_gauss");
  require_n(n, 1, "diff_bound_gauss");
  const double lam = param.lambda();
  const double ir2 = 1.0 / (rho * rho);
  BoundBreakdown b = make_breakdown(BoundKind::DiffGauss, param, n, rho, m_rho);
  const double gamma_ratio = std::exp(ln_gamma(lam + 1.0) - ln_gamma(2.0 * lam + 2.0));
  const double window = std::pow(lam > 0 ? 1.0 + ir2 : 1.0 - ir2, lam);
  const double big_lambda =
      2.0 * gamma_ratio * m_rho * perimeter_factor(rho) / ((rho - 1.0) * (rho - 1.0)) * window;
  b.items = {{"M_rho", m_rho}, {"gamma_ratio", gamma_ratio}, {"modulus_window", window}, {"Lambda", big_lambda}};
  finish(b, big_lambda, algebraic_geometric_rate(lam + 2.0, n, rho));
  b.flags.push_back(kFlagUnitC);
  return b;
}

BoundBreakdown interp_bound_lobatto(const GegenbauerParam& param, int n, double rho, double m_rho) {
  require_rho(rho, "interp_bound_lobatto");
  require_n(n, 1, "interp_bound_lobatto");
  const double lam = param.lambda();
  BoundBreakdown b = make_breakdown(BoundKind::InterpLobatto, param, n, rho, m_rho);
  const double gamma_ratio = std::exp(ln_gamma(lam + 1.0) - ln_gamma(2.0 * lam + 2.0));
  const double pre = lobatto_prefactor(lam, rho, m_rho);
  b.items = {{"M_rho", m_rho}, {"gamma_ratio", gamma_ratio}, {"contour_factor", pre}};
  finish(b, 4.0 * pre * gamma_ratio, algebraic_geometric_rate(lam + 1.0, n, rho));
  b.flags.push_back(kFlagUnitC);
  return b;
}

BoundBreakdown diff_bound_lobatto(const GegenbauerParam& param, int n, double rho, double m_rho) {
  require_rho(rho, "diff_bound_lobatto");
  require_n(n, 1, "diff_bound_lobatto");
  const double lam = param.lambda();
  BoundBreakdown b = make_breakdown(BoundKind::DiffLobatto, param, n, rho, m_rho);
  const double gamma_ratio = std::exp(ln_gamma(lam + 2.0) - ln_gamma(2.0 * lam + 4.0));
  const double pre = lobatto_prefactor(lam, rho, m_rho);
  b.items = {{"M_rho", m_rho}, {"gamma_ratio", gamma_ratio}, {"contour_factor", pre}};
  finish(b, 8.0 * pre * gamma_ratio, algebraic_geometric_rate(lam + 3.0, n, rho));
  b.flags.push_back(kFlagUnitC);
  return b;
}

BoundBreakdown quad_bound(const GegenbauerParam& param, const BoundBreakdown& interp) {
  if (!is_interp(interp.kind)) {
    throw std::invalid_argument("quad_bound: expects an interpolation bound, got " +
                                std::string(to_string(interp.kind)));
  }
  if (interp.parameters.lambda != param.lambda()) throw std::invalid_argument("quad_bound: lambda mismatch");
  BoundBreakdown b = interp;
  b.kind = BoundKind::Quadrature;
  const double h0 = total_mass<double>(param);
  b.items.emplace_back("h_0", h0);
  b.items.emplace_back("interpolation_total", interp.total);
  b.flags.push_back("from " + std::string(to_string(interp.kind)));
  finish(b, h0 * interp.constant_factor, interp.rate_factor);
  return b;
}

BoundBreakdown evaluate_bound(BoundKind kind, const GegenbauerParam& param, int n, double rho, double m_rho) {
  switch (kind) {
    case BoundKind::InterpGauss:
      if (!param.positive()) throw std::invalid_argument("interp-gauss needs lambda > 0; use interp-gauss-negative");
      return interp_bound_gauss(param, n, rho, m_rho);
    case BoundKind::InterpGaussNegative:
      if (param.positive()) throw std::invalid_argument("interp-gauss-negative needs lambda < 0");
      return interp_bound_gauss(param, n, rho, m_rho);
    case BoundKind::DiffGauss: return diff_bound_gauss(param, n, rho, m_rho);
    case BoundKind::InterpLobatto: return interp_bound_lobatto(param, n, rho, m_rho);
    case BoundKind::DiffLobatto: return diff_bound_lobatto(param, n, rho, m_rho);
    default:
      throw std::invalid_argument("evaluate_bound: " + std::string(to_string(kind)) +
                                  " is not an interpolation or differencing bound");
  }
}

int RhoScan::skipped() const {
  return static_cast<int>(std::count_if(m_rho.begin(), m_rho.end(), [](const auto& v) { return !v.has_value(); }));
}

RhoScan make_rho_scan(const ComplexFunction& u, double rho_min, double rho_max, int count, int samples) {
  // rho_min = 1 is allowed: the scanned points are interior.
  if (!(rho_min >= 1.0)) throw std::domain_error("make_rho_scan: rho_min must be at least 1");
  if (!(rho_max > rho_min)) throw std::domain_error("make_rho_scan: rho_max must exceed rho_min");
  if (count < 2) throw std::domain_error("make_rho_scan: count must be at least 2");
  RhoScan scan;
  scan.samples = samples;
  const double h = (rho_max - rho_min) / count;
  // open ends: [min + h, max - h] in count points
  const double lo = rho_min + h;
  const double hi = rho_max - h;
  for (int i = 0; i < count; ++i) {
    const double rho = lo + (hi - lo) * i / (count - 1);
    scan.rho.push_back(rho);
    try {
      scan.m_rho.emplace_back(sup_on_ellipse(u, EllipseSpec(rho, samples)));
    } catch (const NonFiniteSample&) {
      scan.m_rho.emplace_back(std::nullopt);
    }
  }
  return scan;
}

BestBound best_bound_over_rho(const GegenbauerParam& param, int n, const RhoScan& scan, BoundKind which) {
  std::optional<BestBound> best;
  for (std::size_t i = 0; i < scan.rho.size(); ++i) {
    if (!scan.m_rho[i]) continue;
    BoundBreakdown b = evaluate_bound(which, param, n, scan.rho[i], *scan.m_rho[i]);
    if (!std::isfinite(b.total)) continue;
    if (!best || b.total < best->breakdown.total) best = BestBound{scan.rho[i], std::move(b)};
  }
  if (!best) throw std::runtime_error("best_bound_over_rho: no rho in the scan produced a finite bound");
  best->breakdown.parameters.ellipse_samples = scan.samples;
  if (const int s = scan.skipped(); s > 0) {
    best->breakdown.flags.push_back("skipped " + std::to_string(s) + " rho values with non-finite M_rho");
  }
  return *best;
}

BestBound best_bound_over_rho(const GegenbauerParam& param, int n, const ComplexFunction& u, double rho_min,
                              double rho_max, int count, BoundKind which, int samples) {
  return best_bound_over_rho(param, n, make_rho_scan(u, rho_min, rho_max, count, samples), which);
}

}  // namespace gegen
