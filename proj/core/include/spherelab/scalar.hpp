#pragma once

#include <cmath>
#include <complex>

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

namespace spherelab {

/// 113-bit significand real, used where exp(eta*S) dressing cancels.
using Quad = boost::multiprecision::float128;

template <class Real>
struct complex_of;

template <>
struct complex_of<double> {
  using type = std::complex<double>;
};

template <>
struct complex_of<Quad> {
  using type = boost::multiprecision::complex128;
};

template <class Real>
using complex_t = typename complex_of<Real>::type;

enum class Precision { standard, extended };

template <class Real>
constexpr Precision precision_of() {
  return std::is_same_v<Real, double> ? Precision::standard : Precision::extended;
}

inline const char* to_string(Precision p) {
  return p == Precision::standard ? "double" : "float128";
}

template <class Real>
double to_double(const Real& x) {
  return static_cast<double>(x);
}

template <class Real>
bool is_finite(const Real& x) {
  using std::isfinite;
  using boost::multiprecision::isfinite;
  return isfinite(x);
}

template <class Complex>
bool is_finite_complex(const Complex& z) {
  using std::imag;
  using std::real;
  return is_finite(real(z)) && is_finite(imag(z));
}

}  // namespace spherelab
