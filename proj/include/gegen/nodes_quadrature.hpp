#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <utility>

#include <Eigen/Eigenvalues>

#include "gegen/gegenbauer_poly.hpp"
#include "gegen/precision.hpp"
#include "gegen/special_functions.hpp"

namespace gegen {

enum class NodeFamily { Gauss, GaussLobatto };

std::string_view to_string(NodeFamily family);
NodeFamily parse_node_family(std::string_view name);

/// Nodes, interpolatory quadrature weights and barycentric weights of one rule.
/// Nodes are strictly ascending and mirror-symmetric about 0.
template <class Real = double>
class NodeSet {
 public:
  NodeSet(NodeFamily family, const GegenbauerParam& param, int degree, Vec<Real> nodes, Vec<Real> quad_weights,
          Vec<Real> bary_weights)
      : family_(family),
        param_(param),
        degree_(degree),
        nodes_(std::move(nodes)),
        quad_weights_(std::move(quad_weights)),
        bary_weights_(std::move(bary_weights)) {}

  NodeFamily family() const noexcept { return family_; }
  const GegenbauerParam& param() const noexcept { return param_; }
  /// Polynomial degree n; the rule has n + 1 nodes.
  int degree() const noexcept { return degree_; }
  Eigen::Index size() const noexcept { return nodes_.size(); }

  const Vec<Real>& nodes() const noexcept { return nodes_; }
  const Vec<Real>& quad_weights() const noexcept { return quad_weights_; }
  const Vec<Real>& bary_weights() const noexcept { return bary_weights_; }

 private:
  NodeFamily family_;
  GegenbauerParam param_;
  int degree_;
  Vec<Real> nodes_;
  Vec<Real> quad_weights_;
  Vec<Real> bary_weights_;
};

/// b_j = 1 / prod_{k != j} (x_j - x_k), rescaled so that max |b_j| = 1.
/// Products are accumulated as logarithms, so large node counts do not overflow.
template <class Real>
Vec<Real> barycentric_weights(const Vec<Real>& nodes) {
  if constexpr (!std::is_same_v<wide_t<Real>, Real>) {
    return barycentric_weights<wide_t<Real>>(nodes.template cast<wide_t<Real>>()).template cast<Real>();
  }
  using std::abs;
  using std::exp;
  using std::log;
  const Eigen::Index m = nodes.size();
  if (m == 0) throw std::invalid_argument("barycentric_weights: empty node array");
  Vec<Real> log_mag(m);
  std::vector<int> sign(static_cast<std::size_t>(m), 1);
  for (Eigen::Index j = 0; j < m; ++j) {
    Real acc(0);
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k == j) continue;
      const Real diff = nodes(j) - nodes(k);
      if (diff == 0) throw std::invalid_argument("barycentric_weights: nodes must be distinct");
      if (diff < 0) sign[j] = -sign[j];
      acc -= log(abs(diff));
    }
    log_mag(j) = acc;
  }
  const Real top = log_mag.maxCoeff();
  Vec<Real> b(m);
  for (Eigen::Index j = 0; j < m; ++j) b(j) = Real(sign[j]) * exp(log_mag(j) - top);
  return b;
}

namespace detail {

/// Subdiagonal of the orthonormal Jacobi matrix: x p_{k-1} = a_k p_k + ... with
/// a_k^2 = k (k - 1 + 2 lambda) / (4 (k - 1 + lambda)(k + lambda)).
inline Eigen::VectorXd jacobi_subdiagonal(const GegenbauerParam& param, int count) {
  const double lam = param.lambda();
  Eigen::VectorXd sub(std::max(count - 1, 0));
  for (int k = 1; k < count; ++k) {
    sub(k - 1) = 0.5 * std::sqrt(k * (k - 1 + 2 * lam) / ((k - 1 + lam) * (k + lam)));
  }
  return sub;
}

/// Newton iteration on C_degree^lambda until the step is at rounding level.
template <class Real>
Real polish_root(const GegenbauerParam& param, int degree, Real x) {
  using std::abs;
  using std::max;
  const Real tol = Real(4) * std::numeric_limits<Real>::epsilon();
  for (int it = 0; it < 12; ++it) {
    const Real step = eval_recurrence(param, degree, x) / eval_derivative(param, degree, x);
    x -= step;
    if (abs(step) <= tol * max(Real(1), abs(x))) break;
  }
  return x;
}

/// Zeros of C_count^lambda, ascending and mirror-symmetric.
template <class Real>
Vec<Real> gauss_points(const GegenbauerParam& param, int count) {
  Vec<Real> x(count);
  if (count == 0) return x;
  if (count == 1) {
    x(0) = Real(0);
    return x;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(Eigen::VectorXd::Zero(count), jacobi_subdiagonal(param, count),
                                Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("gauss_points: tridiagonal eigen-solve failed");
  for (int j = 0; j < count; ++j) x(j) = polish_root(param, count, Real(solver.eigenvalues()(j)));
  for (int j = 0; j < count / 2; ++j) {
    const Real half = (x(count - 1 - j) - x(j)) / 2;
    x(j) = -half;
    x(count - 1 - j) = half;
  }
  if (count % 2 == 1) x(count / 2) = Real(0);
  return x;
}

/// Gauss weights from the Christoffel-Darboux form
/// w_j = (k_N / k_{N-1}) h_{N-1} / (C_N'(x_j) C_{N-1}(x_j)), k_N = 2^N g_N the leading coefficient.
template <class Real>
Vec<Real> gauss_weights(const GegenbauerParam& param, const Vec<Real>& x) {
  const int count = static_cast<int>(x.size());
  Vec<Real> w(count);
  if (count == 1) {
    w(0) = total_mass<Real>(param);
    return w;
  }
  const Real lam(param.lambda());
  const Real lead_ratio = Real(2) * (Real(count - 1) + lam) / Real(count);
  const Real h = h_norm<Real>(param, count - 1);
  for (int j = 0; j < count; ++j) {
    w(j) = lead_ratio * h /
           (eval_derivative(param, count, x(j)) * eval_recurrence(param, count - 1, x(j)));
  }
  return w;
}

}  // namespace detail

/// Gegenbauer-Gauss rule with n + 1 nodes (zeros of C_{n+1}^lambda).
template <class Real = double>
NodeSet<Real> gauss_nodes(const GegenbauerParam& param, int n) {
  if (n < 0) throw std::domain_error("gauss_nodes: n must be nonnegative");
  using W = wide_t<Real>;
  const Vec<W> xw = detail::gauss_points<W>(param, n + 1);
  Vec<Real> w = detail::gauss_weights<W>(param, xw).template cast<Real>();
  Vec<Real> x = xw.template cast<Real>();
  Vec<Real> b = barycentric_weights<Real>(x);
  return NodeSet<Real>(NodeFamily::Gauss, param, n, std::move(x), std::move(w), std::move(b));
}

/// w_j = int l_j(x) (1 - x^2)^{lambda - 1/2} dx, integrated exactly by an internal
/// Gauss rule of the same weight with (number of nodes + 1) points.
template <class Real = double>
Vec<Real> quad_weights_interpolatory(const Vec<Real>& nodes, const GegenbauerParam& param) {
  const Eigen::Index m = nodes.size();
  const Vec<Real> bary = barycentric_weights<Real>(nodes);
  const auto rule = gauss_nodes<Real>(param, static_cast<int>(m));
  Vec<Real> w = Vec<Real>::Zero(m);
  Vec<Real> t(m);
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    const Real y = rule.nodes()(i);
    const Real omega = rule.quad_weights()(i);
    Eigen::Index hit = -1;
    Real s(0);
    for (Eigen::Index j = 0; j < m; ++j) {
      if (y == nodes(j)) {
        hit = j;
        break;
      }
      t(j) = bary(j) / (y - nodes(j));
      s += t(j);
    }
    if (hit >= 0) {
      w(hit) += omega;
      continue;
    }
    for (Eigen::Index j = 0; j < m; ++j) w(j) += omega * t(j) / s;
  }
  return w;
}

/// Gegenbauer-Gauss-Lobatto rule with n + 1 nodes: +-1 and the zeros of C_{n-1}^{lambda+1}.
template <class Real = double>
NodeSet<Real> gauss_lobatto_nodes(const GegenbauerParam& param, int n) {
  if (n < 1) throw std::domain_error("gauss_lobatto_nodes: n must be at least 1");
  using W = wide_t<Real>;
  Vec<W> xw(n + 1);
  xw(0) = W(-1);
  xw(n) = W(1);
  if (n >= 2) xw.segment(1, n - 1) = detail::gauss_points<W>(param.shifted(), n - 1);
  Vec<Real> w = quad_weights_interpolatory<W>(xw, param).template cast<Real>();
  Vec<Real> x = xw.template cast<Real>();
  Vec<Real> b = barycentric_weights<Real>(x);
  return NodeSet<Real>(NodeFamily::GaussLobatto, param, n, std::move(x), std::move(w), std::move(b));
}

template <class Real = double>
NodeSet<Real> make_nodes(NodeFamily family, const GegenbauerParam& param, int n) {
  return family == NodeFamily::Gauss ? gauss_nodes<Real>(param, n) : gauss_lobatto_nodes<Real>(param, n);
}

/// Closed-form moment int x^m (1 - x^2)^{lambda - 1/2} dx (zero for odd m).
double weighted_moment(const GegenbauerParam& param, int m);

/// int |x|^m (1 - x^2)^{lambda - 1/2} dx, the natural scale of the m-th moment.
double weighted_abs_moment(const GegenbauerParam& param, int m);

}  // namespace gegen
