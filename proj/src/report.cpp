#include "gegen/report.hpp"

#include <cmath>
#include <cstdio>

namespace gegen {

namespace {

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

// JSON has no NaN or infinity; those become null.
nlohmann::json real_json(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json to_json(const BoundBreakdown& b) {
  nlohmann::json params = {{"lambda", b.parameters.lambda}, {"n", b.parameters.n}, {"rho", b.parameters.rho}};
  params["m"] = b.parameters.m ? nlohmann::json(*b.parameters.m) : nlohmann::json(nullptr);
  params["M_rho"] = b.parameters.m_rho ? real_json(*b.parameters.m_rho) : nlohmann::json(nullptr);
  params["ellipse_samples"] =
      b.parameters.ellipse_samples ? nlohmann::json(*b.parameters.ellipse_samples) : nlohmann::json(nullptr);
  nlohmann::json items = nlohmann::json::object();
  for (const auto& [name, value] : b.items) items[name] = real_json(value);
  return {{"theorem_id", std::string(to_string(b.kind))},
          {"constant_factor", real_json(b.constant_factor)},
          {"rate_factor", real_json(b.rate_factor)},
          {"total", real_json(b.total)},
          {"parameters", params},
          {"items", items},
          {"flags", b.flags}};
}

void write_nodes_csv(std::ostream& os, const std::vector<NodesTable>& tables) {
  os << "j,node,quad_weight,bary_weight\n";
  for (const auto& t : tables) {
    os << "# lambda=" << format_real(t.lambda) << " n=" << t.n << " family=" << to_string(t.family) << '\n';
    for (Eigen::Index j = 0; j < t.nodes.size(); ++j) {
      os << j << ',' << format_real(t.nodes.nodes()(j)) << ',' << format_real(t.nodes.quad_weights()(j)) << ','
         << format_real(t.nodes.bary_weights()(j)) << '\n';
    }
  }
}

void write_fig2_csv(std::ostream& os, const std::vector<Fig2Row>& rows) {
  os << "lambda,rho,n,E_n,n^-0.9,n^-1\n";
  for (const auto& r : rows) {
    os << format_real(r.lambda) << ',' << format_real(r.rho) << ',' << r.n << ',' << format_real(r.e_n) << ','
       << format_real(std::pow(r.n, -0.9)) << ',' << format_real(1.0 / r.n) << '\n';
  }
}

void write_fig3_csv(std::ostream& os, const Fig3Result& result) {
  os << "function,quantity,lambda,n,family,measured_error,bound_total,rho_star,flags\n";
  for (const auto& r : result.records) {
    os << to_string(r.function) << ',' << to_string(r.quantity) << ',' << format_real(r.lambda) << ',' << r.n << ','
       << to_string(r.family) << ',' << format_real(r.measured_error) << ',' << format_real(r.bound.breakdown.total)
       << ',' << format_real(r.bound.rho_star) << ',' << join_flags(r.bound.breakdown.flags) << '\n';
  }
}

void write_expansion_csv(std::ostream& os, const std::vector<ExpansionRow>& rows) {
  os << "lambda,function,n,truncation_error,fitted_ratio\n";
  for (const auto& r : rows) {
    os << format_real(r.lambda) << ',' << to_string(r.function) << ',' << r.n << ',' << format_real(r.truncation_error)
       << ',' << format_real(r.fitted_ratio) << '\n';
  }
}

nlohmann::json nodes_json(const std::vector<NodesTable>& tables) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : tables) {
    auto vec = [](const Vec<double>& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    out.push_back({{"lambda", t.lambda},
                   {"n", t.n},
                   {"family", std::string(to_string(t.family))},
                   {"nodes", vec(t.nodes.nodes())},
                   {"quad_weights", vec(t.nodes.quad_weights())},
                   {"bary_weights", vec(t.nodes.bary_weights())}});
  }
  return out;
}

nlohmann::json fig2_json(const std::vector<Fig2Row>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"lambda", r.lambda},
                   {"rho", r.rho},
                   {"n", r.n},
                   {"E_n", real_json(r.e_n)},
                   {"n^-0.9", std::pow(r.n, -0.9)},
                   {"n^-1", 1.0 / r.n},
                   {"below_upper", r.below_upper},
                   // the 0.1 n^-1 floor is a harness guard, not a derived bound
                   {"above_lower_guard", r.above_lower}});
  }
  return out;
}

nlohmann::json fig3_json(const Fig3Result& result) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : result.records) {
    out.push_back({{"function", std::string(to_string(r.function))},
                   {"quantity", std::string(to_string(r.quantity))},
                   {"lambda", r.lambda},
                   {"n", r.n},
                   {"family", std::string(to_string(r.family))},
                   {"measured_error", real_json(r.measured_error)},
                   {"bound_total", real_json(r.bound.breakdown.total)},
                   {"rho_star", r.bound.rho_star},
                   {"dominated", r.dominated},
                   {"bound", to_json(r.bound.breakdown)}});
  }
  return out;
}

nlohmann::json expansion_json(const std::vector<ExpansionRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"lambda", r.lambda},
                   {"function", std::string(to_string(r.function))},
                   {"n", r.n},
                   {"truncation_error", real_json(r.truncation_error)},
                   {"fitted_ratio", real_json(r.fitted_ratio)}});
  }
  return out;
}

nlohmann::json fig3_summary_json(const Fig3Result& result, double slack) {
  nlohmann::json slopes = nlohmann::json::array();
  for (const auto& s : result.slopes) {
    slopes.push_back({{"function", std::string(to_string(s.function))},
                      {"quantity", std::string(to_string(s.quantity))},
                      {"lambda", s.lambda},
                      {"family", std::string(to_string(s.family))},
                      {"fitted_slope", real_json(s.fitted_slope)},
                      {"target_slope", real_json(s.target_slope)},
                      {"relative_deviation", real_json(s.relative_deviation)},
                      {"within_tolerance", s.within_tolerance},
                      {"diagnostic_fit_a_b_c", {real_json(s.power_corrected[0]), real_json(s.power_corrected[1]),
                                                real_json(s.power_corrected[2])}}});
  }
  return {{"records", result.records.size()},
          {"dominance_slack", slack},
          {"dominance_violations", result.dominance_violations},
          {"slopes", slopes}};
}

}  // namespace gegen
