#include "gegen/nodes_quadrature.hpp"

#include <string>

namespace gegen {

std::string_view to_string(NodeFamily family) {
  return family == NodeFamily::Gauss ? "gauss" : "lobatto";
}

NodeFamily parse_node_family(std::string_view name) {
  if (name == "gauss") return NodeFamily::Gauss;
  if (name == "lobatto" || name == "gauss-lobatto") return NodeFamily::GaussLobatto;
  throw std::invalid_argument("unknown node family '" + std::string(name) + "'");
}

double weighted_abs_moment(const GegenbauerParam& param, int m) {
  if (m < 0) throw std::domain_error("weighted_abs_moment: m must be nonnegative");
  const double lam = param.lambda();
  // Beta((m + 1)/2, lambda + 1/2)
  return std::exp(ln_gamma(0.5 * (m + 1)) + ln_gamma(lam + 0.5) - ln_gamma(0.5 * m + lam + 1.0));
}

double weighted_moment(const GegenbauerParam& param, int m) {
  return m % 2 == 0 ? weighted_abs_moment(param, m) : 0.0;
}

}  // namespace gegen
