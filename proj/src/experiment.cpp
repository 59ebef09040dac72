#include "gegen/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <Eigen/QR>

#include "gegen/approx_operators.hpp"

namespace gegen {

namespace {

constexpr int kReferenceRuleDegree = 256;

template <class E>
E parse_enum_or_config_error(std::string_view what, std::string_view name, E (*parse)(std::string_view)) {
  try {
    return parse(name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

std::vector<int> stepped(int lo, int hi, int step) {
  std::vector<int> v;
  for (int n = lo; n <= hi; n += step) v.push_back(n);
  return v;
}

BoundKind interp_kind(NodeFamily family, const GegenbauerParam& param) {
  if (family == NodeFamily::GaussLobatto) return BoundKind::InterpLobatto;
  return param.positive() ? BoundKind::InterpGauss : BoundKind::InterpGaussNegative;
}

BoundKind diff_kind(NodeFamily family) {
  return family == NodeFamily::Gauss ? BoundKind::DiffGauss : BoundKind::DiffLobatto;
}

ComplexFunction complex_view(const TestFunction& f) {
  return [f](Complex z) { return f.value(z); };
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Nodes: return "nodes";
    case Command::Fig2: return "fig2";
    case Command::Fig3: return "fig3";
    case Command::Bounds: return "bounds";
    case Command::ExpansionDecay: return "expansion-decay";
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  for (auto c : {Command::Nodes, Command::Fig2, Command::Fig3, Command::Bounds, Command::ExpansionDecay}) {
    if (name == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown subcommand '" + std::string(name) + "'");
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv or json)");
}

FamilySelection parse_family_selection(std::string_view name) {
  if (name == "both") return FamilySelection::Both;
  return parse_node_family(name) == NodeFamily::Gauss ? FamilySelection::Gauss : FamilySelection::Lobatto;
}

std::vector<NodeFamily> families_of(FamilySelection s) {
  switch (s) {
    case FamilySelection::Gauss: return {NodeFamily::Gauss};
    case FamilySelection::Lobatto: return {NodeFamily::GaussLobatto};
    case FamilySelection::Both: return {NodeFamily::Gauss, NodeFamily::GaussLobatto};
  }
  return {};
}

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::Diff: return "diff";
    case Quantity::Interp: return "interp";
    case Quantity::Quad: return "quad";
  }
  return "unknown";
}

std::vector<FunctionId> ExperimentConfig::functions() const {
  std::vector<FunctionId> out{function_id};
  for (auto f : extra_functions) {
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  return out;
}

std::vector<int> log_spaced(int lo, int hi, int count) {
  if (lo < 1 || hi < lo || count < 1) throw std::invalid_argument("log_spaced: need 1 <= lo <= hi and count >= 1");
  std::vector<int> out;
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    const int n = static_cast<int>(std::lround(lo * std::pow(static_cast<double>(hi) / lo, t)));
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  return out;
}

ExperimentConfig default_config(Command c) {
  ExperimentConfig cfg;
  switch (c) {
    case Command::Nodes:
      cfg.lambda_list = {0.5};
      cfg.n_list = {4};
      break;
    case Command::Fig2:
      cfg.n_list = log_spaced(1000, 10000, 20);
      cfg.fig2_grid = {{1.5, 1.4}, {0.5, 1.4}, {3.2, 2.0}, {-0.3, 2.0}};
      break;
    case Command::Fig3:
      cfg.lambda_list = {0.5, 1.5};
      cfg.n_list = stepped(8, 64, 4);
      cfg.extra_functions = {FunctionId::Runge2};
      break;
    case Command::Bounds:
      cfg.lambda_list = {0.5};
      cfg.n_list = {10};
      cfg.node_family = FamilySelection::Gauss;
      cfg.format = OutputFormat::Json;
      break;
    case Command::ExpansionDecay:
      cfg.lambda_list = {0.5, 1.5};
      cfg.n_list = stepped(8, 40, 1);
      break;
  }
  return cfg;
}

void apply_json(ExperimentConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "lambda_list") {
        cfg.lambda_list = v.get<std::vector<double>>();
      } else if (key == "n_list") {
        cfg.n_list = v.get<std::vector<int>>();
      } else if (key == "rho_scan") {
        for (const auto& [k2, v2] : v.items()) {
          if (k2 == "min") {
            cfg.rho_scan.min = v2.get<double>();
          } else if (k2 == "max") {
            cfg.rho_scan.max = v2.get<double>();
          } else if (k2 == "count") {
            cfg.rho_scan.count = v2.get<int>();
          } else {
            throw ConfigError("config: unknown rho_scan key '" + k2 + "'");
          }
        }
      } else if (key == "ellipse_samples") {
        cfg.ellipse_samples = v.get<int>();
      } else if (key == "function_id") {
        cfg.function_id = parse_enum_or_config_error("function_id", v.get<std::string>(), parse_function_id);
        cfg.extra_functions.clear();
      } else if (key == "extra_functions") {
        cfg.extra_functions.clear();
        for (const auto& name : v.get<std::vector<std::string>>()) {
          cfg.extra_functions.push_back(parse_enum_or_config_error("extra_functions", name, parse_function_id));
        }
      } else if (key == "rational_pole") {
        cfg.rational_pole = v.get<double>();
      } else if (key == "node_family") {
        cfg.node_family = parse_enum_or_config_error("node_family", v.get<std::string>(), parse_family_selection);
      } else if (key == "output_path") {
        cfg.output_path = v.get<std::string>();
      } else if (key == "format") {
        cfg.format = parse_enum_or_config_error("format", v.get<std::string>(), parse_output_format);
      } else if (key == "grid_size") {
        cfg.grid_size = v.get<int>();
      } else if (key == "fig2_grid") {
        cfg.fig2_grid = v.get<std::vector<std::pair<double, double>>>();
      } else if (key == "dominance_slack") {
        cfg.dominance_slack = v.get<double>();
      } else if (key == "slope_window") {
        cfg.slope_window = v.get<std::pair<int, int>>();
      } else if (key == "slope_tolerance") {
        cfg.slope_tolerance = v.get<double>();
      } else if (key == "rho") {
        cfg.rho = v.get<double>();
      } else if (key == "m_rho") {
        cfg.m_rho = v.get<double>();
      } else if (key == "m") {
        cfg.m = v.get<int>();
      } else if (key == "theorem") {
        cfg.theorem = parse_enum_or_config_error("theorem", v.get<std::string>(), parse_bound_kind);
      } else {
        throw ConfigError("config: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

nlohmann::json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: malformed JSON in '" + path + "': " + e.what());
  }
}

void validate(const ExperimentConfig& cfg, Command c) {
  auto check_lambda = [](double lam) {
    try {
      GegenbauerParam p(lam);
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("lambda_list: ") + e.what());
    }
  };

  if (c != Command::Fig2 && cfg.lambda_list.empty()) throw ConfigError("lambda_list must not be empty");
  for (double lam : cfg.lambda_list) check_lambda(lam);

  if (cfg.n_list.empty()) throw ConfigError("n_list must not be empty");
  if (!std::is_sorted(cfg.n_list.begin(), cfg.n_list.end()) ||
      std::adjacent_find(cfg.n_list.begin(), cfg.n_list.end()) != cfg.n_list.end()) {
    throw ConfigError("n_list must be strictly ascending");
  }
  const bool lobatto = cfg.node_family != FamilySelection::Gauss;
  int min_n = 0;
  if (c == Command::Fig3 || c == Command::Bounds || (c == Command::Nodes && lobatto)) min_n = 1;
  if (c == Command::Fig2) min_n = 1;
  if (cfg.n_list.front() < min_n) throw ConfigError("n_list entries must be at least " + std::to_string(min_n));

  if (!(cfg.rho_scan.min >= 1.0)) throw ConfigError("rho_scan.min must be at least 1 (the scan excludes its endpoints)");
  if (!(cfg.rho_scan.max > cfg.rho_scan.min) || !std::isfinite(cfg.rho_scan.max)) {
    throw ConfigError("rho_scan.max must be finite and exceed rho_scan.min");
  }
  if (cfg.rho_scan.count < 2) throw ConfigError("rho_scan.count must be at least 2");
  if (cfg.ellipse_samples < 4) throw ConfigError("ellipse_samples must be at least 4");
  if (cfg.grid_size < 2) throw ConfigError("grid_size must be at least 2");
  if (!(cfg.dominance_slack > 0)) throw ConfigError("dominance_slack must be positive");
  if (!(cfg.rational_pole > 0)) throw ConfigError("rational_pole must be positive");

  if (c == Command::Fig2) {
    if (cfg.fig2_grid.empty() && cfg.lambda_list.empty()) throw ConfigError("fig2 needs fig2_grid or lambda_list");
    auto check_cell = [&](double lam, double rho) {
      check_lambda(lam);
      if (lam == 1.0) {
        throw ConfigError("fig2: lambda = 1 is rejected (degenerate normalization: A(rho, 1) = 0)");
      }
      if (!(rho > 1.0)) throw ConfigError("fig2: rho must exceed 1");
    };
    if (!cfg.lambda_list.empty()) {
      for (double lam : cfg.lambda_list) check_cell(lam, cfg.rho.value_or(1.4));
    } else {
      for (const auto& [lam, rho] : cfg.fig2_grid) check_cell(lam, rho);
    }
  }
  if (c == Command::Fig3) {
    for (auto f : cfg.functions()) {
      if (!TestFunction(f, cfg.rational_pole).analytic()) {
        throw ConfigError("fig3: function '" + std::string(to_string(f)) + "' is not analytic on [-1, 1]");
      }
    }
    if (cfg.slope_window.first >= cfg.slope_window.second) throw ConfigError("slope_window must be increasing");
  }
  if (c == Command::Bounds) {
    if (!cfg.rho) throw ConfigError("bounds: rho is required");
    if (!(*cfg.rho > 1.0)) throw ConfigError("bounds: rho must exceed 1");
    if (!cfg.theorem) throw ConfigError("bounds: theorem is required");
    if (cfg.m_rho && !(*cfg.m_rho >= 0.0)) throw ConfigError("bounds: m_rho must be nonnegative");
  }
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need at least two matched points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

std::array<double, 3> fit_rate_with_power(const std::vector<double>& n, const std::vector<double>& y) {
  if (n.size() != y.size() || n.size() < 3) {
    throw std::invalid_argument("fit_rate_with_power: need at least three matched points");
  }
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n.size()), 3);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n.size()));
  for (std::size_t i = 0; i < n.size(); ++i) {
    a.row(static_cast<Eigen::Index>(i)) << 1.0, n[i], std::log(n[i]);
    b(static_cast<Eigen::Index>(i)) = y[i];
  }
  const Eigen::Vector3d c = a.colPivHouseholderQr().solve(b);
  return {c(0), c(1), c(2)};
}

std::vector<NodesTable> run_nodes(const ExperimentConfig& cfg) {
  std::vector<NodesTable> out;
  for (double lam : cfg.lambda_list) {
    const GegenbauerParam param(lam);
    for (int n : cfg.n_list) {
      for (NodeFamily fam : families_of(cfg.node_family)) {
        out.push_back({lam, n, fam, make_nodes<double>(fam, param, n)});
      }
    }
  }
  return out;
}

std::vector<Fig2Row> run_fig2(const ExperimentConfig& cfg) {
  std::vector<std::pair<double, double>> cells = cfg.fig2_grid;
  if (!cfg.lambda_list.empty()) {
    cells.clear();
    for (double lam : cfg.lambda_list) cells.emplace_back(lam, cfg.rho.value_or(1.4));
  }
  std::vector<Fig2Row> rows;
  for (const auto& [lam, rho] : cells) {
    const GegenbauerParam param(lam);
    const EllipseSpec spec(rho, cfg.ellipse_samples);
    for (int n : cfg.n_list) {
      const double e = e_n_metric(param, n, spec);
      rows.push_back({lam, rho, n, e, e <= std::pow(n, -0.9), e >= 0.1 / n});
    }
  }
  return rows;
}

Fig3Result run_fig3(const ExperimentConfig& cfg) {
  Fig3Result result;
  const auto families = families_of(cfg.node_family);
  for (FunctionId fid : cfg.functions()) {
    const TestFunction f(fid, cfg.rational_pole);
    const RhoScan scan = make_rho_scan(complex_view(f), cfg.rho_scan.min, cfg.rho_scan.max, cfg.rho_scan.count,
                                       cfg.ellipse_samples);
    auto u = [&f](const quad& x) { return f.value(x); };
    auto du = [&f](const quad& x) { return f.derivative(x); };

    for (double lam : cfg.lambda_list) {
      const GegenbauerParam param(lam);
      const quad reference = quadrature(gauss_nodes<quad>(param, kReferenceRuleDegree), u);

      for (NodeFamily fam : families) {
        for (int n : cfg.n_list) {
          const auto ns = make_nodes<quad>(fam, param, n);
          const double diff_err = to_double(differentiation_error(ns, u, du));
          const double interp_err = to_double(interpolation_error(ns, u, cfg.grid_size));
          const double quad_err = to_double(abs(quadrature(ns, u) - reference));

          BestBound diff_b = best_bound_over_rho(param, n, scan, diff_kind(fam));
          BestBound interp_b = best_bound_over_rho(param, n, scan, interp_kind(fam, param));
          // h_0 scales every rho alike, so the interpolation minimiser carries over.
          BestBound quad_b{interp_b.rho_star, quad_bound(param, interp_b.breakdown)};

          auto push = [&](Quantity q, double measured, BestBound b) {
            const bool ok = measured <= cfg.dominance_slack * b.breakdown.total;
            if (!ok) ++result.dominance_violations;
            result.records.push_back({fid, q, lam, n, fam, measured, std::move(b), ok});
          };
          push(Quantity::Diff, diff_err, std::move(diff_b));
          push(Quantity::Interp, interp_err, std::move(interp_b));
          push(Quantity::Quad, quad_err, std::move(quad_b));
        }

        const double rho_sing = f.singularity_rho();
        std::vector<double> ns_fit;
        std::vector<double> ln_err;
        for (const auto& r : result.records) {
          if (r.function != fid || r.quantity != Quantity::Diff || r.lambda != lam || r.family != fam) continue;
          if (r.n < cfg.slope_window.first || r.n > cfg.slope_window.second || !(r.measured_error > 0)) continue;
          ns_fit.push_back(r.n);
          ln_err.push_back(std::log(r.measured_error));
        }
        if (ns_fit.size() >= 2 && std::isfinite(rho_sing)) {
          SlopeSummary s{};
          s.function = fid;
          s.quantity = Quantity::Diff;
          s.lambda = lam;
          s.family = fam;
          s.fitted_slope = fit_line(ns_fit, ln_err).slope;
          s.target_slope = -std::log(rho_sing);
          s.relative_deviation = (s.fitted_slope - s.target_slope) / std::abs(s.target_slope);
          s.within_tolerance = std::abs(s.relative_deviation) <= cfg.slope_tolerance;
          s.power_corrected = ns_fit.size() >= 3 ? fit_rate_with_power(ns_fit, ln_err)
                                                 : std::array<double, 3>{NAN, NAN, NAN};
          result.slopes.push_back(s);
        }
      }
    }
  }
  return result;
}

std::vector<ExpansionRow> run_expansion_decay(const ExperimentConfig& cfg) {
  std::vector<ExpansionRow> rows;
  for (FunctionId fid : cfg.functions()) {
    const TestFunction f(fid, cfg.rational_pole);
    auto u = [&f](const quad& x) { return f.value(x); };
    for (double lam : cfg.lambda_list) {
      const GegenbauerParam param(lam);
      const std::size_t first = rows.size();
      std::vector<double> xs;
      std::vector<double> ys;
      for (int n : cfg.n_list) {
        const double e = to_double(truncated_expansion_error<quad>(param, u, n, cfg.grid_size));
        rows.push_back({lam, fid, n, e, NAN});
        if (e > 0 && std::isfinite(e)) {
          xs.push_back(n);
          ys.push_back(std::log(e));
        }
      }
      const double ratio = xs.size() >= 2 ? std::exp(fit_line(xs, ys).slope) : NAN;
      for (std::size_t i = first; i < rows.size(); ++i) rows[i].fitted_ratio = ratio;
    }
  }
  return rows;
}

BoundBreakdown run_bounds(const ExperimentConfig& cfg) {
  const GegenbauerParam param(cfg.lambda_list.front());
  const int n = cfg.n_list.front();
  const double rho = *cfg.rho;
  const BoundKind kind = *cfg.theorem;
  const double lam = param.lambda();

  if (kind == BoundKind::RemainderLargeLambda || kind == BoundKind::RemainderSmallLambda) {
    if (kind == BoundKind::RemainderLargeLambda && !(lam > 1.0)) {
      throw ConfigError("bounds: remainder-large-lambda needs lambda > 1; its admissibility condition "
                        "m + 2 >= (lambda - 1)(1/(2 ln rho) - 1) does not apply to lambda = " +
                        std::to_string(lam));
    }
    if (kind == BoundKind::RemainderSmallLambda && !(lam < 1.0)) {
      throw ConfigError("bounds: remainder-small-lambda needs -1/2 < lambda < 1");
    }
    return remainder_bound(param, n, rho, cfg.m);
  }

  double m_rho = 0.0;
  std::optional<int> samples;
  if (cfg.m_rho) {
    m_rho = *cfg.m_rho;
  } else {
    m_rho = sup_on_ellipse(complex_view(TestFunction(cfg.function_id, cfg.rational_pole)),
                           EllipseSpec(rho, cfg.ellipse_samples));
    samples = cfg.ellipse_samples;
  }

  BoundBreakdown b;
  if (kind == BoundKind::Quadrature) {
    const NodeFamily fam =
        cfg.node_family == FamilySelection::Lobatto ? NodeFamily::GaussLobatto : NodeFamily::Gauss;
    b = quad_bound(param, evaluate_bound(interp_kind(fam, param), param, n, rho, m_rho));
  } else {
    b = evaluate_bound(kind, param, n, rho, m_rho);
  }
  b.parameters.ellipse_samples = samples;
  return b;
}

}  // namespace gegen
