#pragma once

#include <cmath>
#include <numbers>
#include <sstream>

#include "spi/error.hpp"

namespace spi {

namespace detail {

// Ascending series for K1 (x <= 2):
//   K1(x) = 1/x + ln(x/2) I1(x) - (x/4) sum_k (x^2/4)^k / (k!(k+1)!) [psi(k+1) + psi(k+2)]
inline double bessel_k1_series(double x) {
  const double y = 0.25 * x * x;
  double term = 1.0;  // (x^2/4)^k / (k! (k+1)!)
  double psi_k1 = -std::numbers::egamma;        // psi(k+1)
  double psi_k2 = 1.0 - std::numbers::egamma;   // psi(k+2)
  double i1_sum = 0.0;
  double psi_sum = 0.0;
  for (int k = 0; k < 60; ++k) {
    i1_sum += term;
    psi_sum += term * (psi_k1 + psi_k2);
    if (term < 1e-18 * i1_sum) break;
    term *= y / ((k + 1.0) * (k + 2.0));
    psi_k1 += 1.0 / (k + 1.0);
    psi_k2 += 1.0 / (k + 2.0);
  }
  const double i1 = 0.5 * x * i1_sum;
  return 1.0 / x + std::log(0.5 * x) * i1 - 0.25 * x * psi_sum;
}

// Steed's continued fraction (Temme's normalization) for e^x K0 and e^x K1,
// valid for x >= 2.
inline double bessel_k1_scaled_cf(double x) {
  constexpr double eps = 1e-17;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 100000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::fabs(dels / s) < eps) break;
  }
  h *= a1;
  const double k0_scaled = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  return k0_scaled * (x + 0.5 - h) / x;
}

}  // namespace detail

// e^x K1(x), the exponentially scaled modified Bessel function of the
// second kind of order one.
inline double bessel_k1_scaled(double x) {
  if (!(x > 0.0)) {
    std::ostringstream os;
    os << "bessel_k1_scaled: argument must be positive, got " << x;
    throw DomainError(os.str());
  }
  if (x <= 2.0) return std::exp(x) * detail::bessel_k1_series(x);
  return detail::bessel_k1_scaled_cf(x);
}

// log K1(x) without underflow for large x.
inline double log_bessel_k1(double x) { return std::log(bessel_k1_scaled(x)) - x; }

}  // namespace spi
