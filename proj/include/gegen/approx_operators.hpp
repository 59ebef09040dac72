#pragma once

#include <cmath>
#include <stdexcept>

#include "gegen/gegenbauer_poly.hpp"
#include "gegen/nodes_quadrature.hpp"
#include "gegen/precision.hpp"

namespace gegen {

/// (I_n u)(x) by the second barycentric formula. Returns values[j] exactly when x
/// coincides with node j.
template <class Real>
Real interpolate(const NodeSet<Real>& node_set, const Vec<Real>& values, const Real& x) {
  if (values.size() != node_set.size()) throw std::invalid_argument("interpolate: values/nodes size mismatch");
  const Vec<Real>& xs = node_set.nodes();
  const Vec<Real>& b = node_set.bary_weights();
  Real num(0);
  Real den(0);
  for (Eigen::Index j = 0; j < xs.size(); ++j) {
    if (x == xs(j)) return values(j);
    const Real t = b(j) / (x - xs(j));
    num += t * values(j);
    den += t;
  }
  return num / den;
}

/// Spectral differentiation matrix D(j, k) = l_k'(x_j) of a node set.
template <class Real>
class DiffMatrix {
 public:
  explicit DiffMatrix(const NodeSet<Real>& node_set) : node_set_(node_set), entries_(node_set.size(), node_set.size()) {
    using W = wide_t<Real>;
    const Vec<W> x = node_set.nodes().template cast<W>();
    const Vec<W> b = barycentric_weights<W>(x);
    const Eigen::Index m = x.size();
    for (Eigen::Index j = 0; j < m; ++j) {
      CompensatedSum<W> off_diagonal;
      for (Eigen::Index k = 0; k < m; ++k) {
        if (k == j) continue;
        entries_(j, k) = static_cast<Real>((b(k) / b(j)) / (x(j) - x(k)));
        off_diagonal.add(W(entries_(j, k)));
      }
      // negative-sum trick on the stored entries: rows annihilate constants
      entries_(j, j) = static_cast<Real>(-off_diagonal.value());
    }
  }

  const NodeSet<Real>& node_set() const noexcept { return node_set_; }
  const Mat<Real>& entries() const noexcept { return entries_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }

  /// D v with compensated row sums in fixed column order.
  Vec<Real> apply(const Vec<Real>& values) const {
    if (values.size() != size()) throw std::invalid_argument("DiffMatrix::apply: size mismatch");
    Vec<Real> out(size());
    for (Eigen::Index j = 0; j < size(); ++j) {
      CompensatedSum<Real> row;
      for (Eigen::Index k = 0; k < size(); ++k) row.add(entries_(j, k) * values(k));
      out(j) = row.value();
    }
    return out;
  }

 private:
  NodeSet<Real> node_set_;
  Mat<Real> entries_;
};

template <class Real>
DiffMatrix<Real> diff_matrix(const NodeSet<Real>& node_set) {
  return DiffMatrix<Real>(node_set);
}

/// (I_n u)'(x_j) for all nodes.
template <class Real>
Vec<Real> differentiate_at_nodes(const NodeSet<Real>& node_set, const Vec<Real>& values) {
  return DiffMatrix<Real>(node_set).apply(values);
}

/// u sampled at the nodes of a rule.
template <class Real, class F>
Vec<Real> sample(const NodeSet<Real>& node_set, F&& u) {
  Vec<Real> v(node_set.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = u(node_set.nodes()(j));
  return v;
}

/// Gegenbauer coefficients u_l = (1/h_l) int u C_l (1 - x^2)^{lambda - 1/2} dx, l = 0..n,
/// with an internal Gauss rule of 2(n + 1) points.
template <class Real, class F>
Vec<Real> expansion_coeffs(const GegenbauerParam& param, F&& u, int n) {
  if (n < 0) throw std::domain_error("expansion_coeffs: n must be nonnegative");
  const auto rule = gauss_nodes<Real>(param, 2 * (n + 1) - 1);
  const Real lam(param.lambda());
  Vec<Real> c = Vec<Real>::Zero(n + 1);
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    const Real y = rule.nodes()(i);
    const Real weighted = rule.quad_weights()(i) * u(y);
    Real prev(1);
    Real cur = Real(2) * lam * y;
    c(0) += weighted;
    if (n >= 1) c(1) += weighted * cur;
    for (int l = 2; l <= n; ++l) {
      const Real next = (Real(2) * (Real(l) + lam - 1) * y * cur - (Real(l) + 2 * lam - 2) * prev) / Real(l);
      prev = cur;
      cur = next;
      c(l) += weighted * cur;
    }
  }
  // h_{l+1} / h_l = (l + 2 lambda)(l + lambda) / ((l + 1)(l + 1 + lambda))
  Real h = total_mass<Real>(param);
  for (int l = 0; l <= n; ++l) {
    c(l) /= h;
    h *= (Real(l) + 2 * lam) * (Real(l) + lam) / (Real(l + 1) * (Real(l + 1) + lam));
  }
  return c;
}

/// sum_l coeffs[l] C_l^lambda(x).
template <class Real>
Real expansion_eval(const GegenbauerParam& param, const Vec<Real>& coeffs, const Real& x) {
  const Eigen::Index n = coeffs.size() - 1;
  if (n < 0) return Real(0);
  const Real lam(param.lambda());
  Real prev(1);
  Real cur = Real(2) * lam * x;
  Real sum = coeffs(0);
  if (n >= 1) sum += coeffs(1) * cur;
  for (Eigen::Index l = 2; l <= n; ++l) {
    const Real next = (Real(2) * (Real(l) + lam - 1) * x * cur - (Real(l) + 2 * lam - 2) * prev) / Real(l);
    prev = cur;
    cur = next;
    sum += coeffs(l) * cur;
  }
  return sum;
}

/// Uniform grid of grid_size points on [-1, 1].
template <class Real>
Real grid_point(int i, int grid_size) {
  return Real(-1) + Real(2) * Real(i) / Real(grid_size - 1);
}

/// max over a uniform grid of |pi_n u - u| for the truncated Gegenbauer expansion.
template <class Real, class F>
Real truncated_expansion_error(const GegenbauerParam& param, F&& u, int n, int grid_size) {
  using std::abs;
  if (grid_size < 2) throw std::invalid_argument("truncated_expansion_error: grid_size must be at least 2");
  const Vec<Real> c = expansion_coeffs<Real>(param, u, n);
  Real worst(0);
  for (int i = 0; i < grid_size; ++i) {
    const Real x = grid_point<Real>(i, grid_size);
    const Real e = abs(expansion_eval(param, c, x) - u(x));
    if (e > worst) worst = e;
  }
  return worst;
}

/// max over a uniform grid of |u - I_n u|.
template <class Real, class F>
Real interpolation_error(const NodeSet<Real>& node_set, F&& u, int grid_size) {
  using std::abs;
  if (grid_size < 2) throw std::invalid_argument("interpolation_error: grid_size must be at least 2");
  const Vec<Real> values = sample(node_set, u);
  Real worst(0);
  for (int i = 0; i < grid_size; ++i) {
    const Real x = grid_point<Real>(i, grid_size);
    const Real e = abs(interpolate(node_set, values, x) - u(x));
    if (e > worst) worst = e;
  }
  return worst;
}

/// max_j |(I_n u)'(x_j) - u'(x_j)|.
template <class Real, class F, class DF>
Real differentiation_error(const NodeSet<Real>& node_set, F&& u, DF&& du) {
  using std::abs;
  const Vec<Real> d = differentiate_at_nodes(node_set, sample(node_set, u));
  Real worst(0);
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    const Real e = abs(d(j) - du(node_set.nodes()(j)));
    if (e > worst) worst = e;
  }
  return worst;
}

/// sum_j w_j u(x_j), compensated.
template <class Real, class F>
Real quadrature(const NodeSet<Real>& node_set, F&& u) {
  CompensatedSum<Real> sum;
  for (Eigen::Index j = 0; j < node_set.size(); ++j) sum.add(node_set.quad_weights()(j) * u(node_set.nodes()(j)));
  return sum.value();
}

}  // namespace gegen
