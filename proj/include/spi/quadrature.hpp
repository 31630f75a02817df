#pragma once

#include <cmath>
#include <sstream>

#include "spi/error.hpp"

namespace spi {

enum class QuadratureRule { kCompositeSimpson };

// Fixed-range rule for integrals over s in [0, upper_limit].
struct QuadratureSpec {
  QuadratureRule rule = QuadratureRule::kCompositeSimpson;
  double upper_limit = 100.0;
  int n_points = 512;

  // Simpson needs an odd number of abscissae (even number of subintervals);
  // the requested count is rounded up to the next valid one.
  int effective_points() const { return simpson_points(n_points); }

  static int simpson_points(int requested) {
    if (requested < 3) return 3;
    return requested % 2 == 0 ? requested + 1 : requested;
  }

  void validate() const {
    if (!(upper_limit > 0.0) || !std::isfinite(upper_limit)) {
      throw ValidationError("quadrature: upper limit must be positive and finite");
    }
    if (n_points < 3) throw ValidationError("quadrature: need at least 3 points");
  }
};

// Composite Simpson over [a, b] using n_points equidistant evaluations
// (rounded up to an odd count). Exact for cubics.
template <class F>
double simpson_integrate(F&& f, double a, double b, int n_points) {
  if (!(a < b)) throw ValidationError("simpson_integrate: need a < b");
  const int n = QuadratureSpec::simpson_points(n_points);
  const int intervals = n - 1;
  const double h = (b - a) / intervals;
  double odd = 0.0;
  double even = 0.0;
  double ends = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = i == intervals ? b : a + i * h;
    const double fx = f(x);
    if (!std::isfinite(fx)) {
      std::ostringstream os;
      os << "simpson_integrate: non-finite integrand at x=" << x;
      throw QuadratureError(os.str(), x);
    }
    if (i == 0 || i == intervals) {
      ends += fx;
    } else if (i % 2 == 1) {
      odd += fx;
    } else {
      even += fx;
    }
  }
  return h / 3.0 * (ends + 4.0 * odd + 2.0 * even);
}

}  // namespace spi
