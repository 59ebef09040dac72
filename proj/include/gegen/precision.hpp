#pragma once

#include <complex>
#include <type_traits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>
#include <Eigen/Core>

namespace gegen {

/// IEEE binary128, used where errors must be measured below double rounding.
using quad = boost::multiprecision::float128;

template <class Real>
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <class Real>
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

// Double rules and matrices are built in x87 extended precision and rounded once:
// the endpoint-heavy weights of lambda < 0 keep their sum to a few ulps, and the
// barycentric weights of large lambda stay accurate relative to the smallest one.
template <class Real>
using wide_t = std::conditional_t<std::is_same_v<Real, double>, long double, Real>;

template <class Real>
inline Real pi() {
  return boost::math::constants::pi<Real>();
}

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
template <class T>
inline constexpr bool is_complex_v = is_complex<T>::value;

/// Underlying real type of a real or complex value type.
template <class T>
struct scalar_of {
  using type = T;
};
template <class T>
struct scalar_of<std::complex<T>> {
  using type = T;
};
template <class T>
using scalar_of_t = typename scalar_of<T>::type;

template <class Real>
inline double to_double(const Real& x) {
  return static_cast<double>(x);
}

}  // namespace gegen
