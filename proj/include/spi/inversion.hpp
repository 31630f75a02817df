#pragma once

#include <cmath>
#include <numbers>
#include <sstream>

#include "spi/cgf.hpp"
#include "spi/error.hpp"
#include "spi/quadrature.hpp"
#include "spi/saddlepoint.hpp"

namespace spi {

// Quadrature settings known to work for the built-in models.
//
// In the tails the tilted NIG and MJD laws keep a narrow component (width
// sqrt(chi), resp. sigma sqrt(dt)) while K''(tau_hat) grows, so the
// standardized characteristic function decays much more slowly there than at
// the centre. The defaults are sized for +-8 sd; the short rules are cheaper
// and accurate only near the centre.
namespace quad_defaults {
inline constexpr QuadratureSpec kNigSpi{QuadratureRule::kCompositeSimpson, 1000.0, 12288};
inline constexpr QuadratureSpec kMjdSpi{QuadratureRule::kCompositeSimpson, 64.0, 512};
inline constexpr QuadratureSpec kNigSpiShort{QuadratureRule::kCompositeSimpson, 100.0, 512};
inline constexpr QuadratureSpec kMjdSpiShort{QuadratureRule::kCompositeSimpson, 16.0, 128};
inline constexpr QuadratureSpec kDirectIft{QuadratureRule::kCompositeSimpson, 150.0, 512};
inline constexpr QuadratureSpec kGeneric{QuadratureRule::kCompositeSimpson, 100.0, 512};
}  // namespace quad_defaults

// Lower clamp applied to direct-inversion density values before the log.
inline constexpr double kDirectIftFloor = 1e-14;

// log p(x0) = tilt_term + jacobian_term + log_p_bar
struct LogDensityResult {
  double log_density = 0.0;
  double tilt_term = 0.0;      // K(tau_hat) - tau_hat x0
  double jacobian_term = 0.0;  // -log(K''(tau_hat)) / 2
  double log_p_bar = 0.0;      // log density of the standardized tilted variable at 0
  SaddlepointSolution saddlepoint;
};

namespace detail {

inline const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// s -> Re phi_{Xbar(tau_hat)}(s) with the s-independent pieces hoisted.
template <CgfModel M>
class StandardizedTiltedIntegrand {
 public:
  StandardizedTiltedIntegrand(const M& model, const SaddlepointSolution& sp, double x0)
      : model_(model), tau_(sp.tau_hat), k_at_(sp.k_at), x0_(x0), scale_(1.0 / std::sqrt(sp.k2_at)) {}

  Complex cf(double s) const {
    const double u = s * scale_;
    const Complex w = model_.k_complex(Complex(tau_, u)) - k_at_ + Complex(0.0, -u * x0_);
    return checked_exp(w, s, "p_bar_zero");
  }
  double operator()(double s) const { return cf(s).real(); }

 private:
  const M& model_;
  double tau_;
  double k_at_;
  double x0_;
  double scale_;
};

}  // namespace detail

// Density at zero of the standardized tilted variable,
//   (1/pi) int_0^upper Re phi_{Xbar(tau_hat)}(s) ds.
template <CgfModel M>
double p_bar_zero(const M& model, const SaddlepointSolution& sp, double x0, const QuadratureSpec& quad) {
  quad.validate();
  const detail::StandardizedTiltedIntegrand<M> integrand(model, sp, x0);
  const double value =
      simpson_integrate(integrand, 0.0, quad.upper_limit, quad.n_points) / std::numbers::pi;
  if (!(value > 0.0)) {
    std::ostringstream os;
    os << "p_bar_zero: non-positive inversion result " << value << " at x0=" << x0
       << " (quadrature upper=" << quad.upper_limit << ", points=" << quad.effective_points() << ")";
    throw InversionError(os.str());
  }
  return value;
}

namespace detail {

inline LogDensityResult assemble(const SaddlepointSolution& sp, double x0, double log_p_bar) {
  LogDensityResult out;
  out.saddlepoint = sp;
  out.tilt_term = sp.k_at - sp.tau_hat * x0;
  out.jacobian_term = -0.5 * std::log(sp.k2_at);
  out.log_p_bar = log_p_bar;
  out.log_density = out.tilt_term + out.jacobian_term + out.log_p_bar;
  return out;
}

}  // namespace detail

// Saddlepoint-adjusted inversion: tilt to the point, standardize, invert at
// the mean of the standardized tilted variable.
template <CgfModel M>
LogDensityResult spi_log_density(const M& model, double x0, const QuadratureSpec& quad,
                                 SaddlepointOptions sp_opt = {}) {
  const SaddlepointSolution sp = solve_saddlepoint(model, x0, sp_opt);
  return detail::assemble(sp, x0, std::log(p_bar_zero(model, sp, x0, quad)));
}

// Classical saddlepoint approximation: p-bar(0) replaced by (2 pi)^{-1/2}.
template <CgfModel M>
LogDensityResult spa_log_density(const M& model, double x0, SaddlepointOptions sp_opt = {}) {
  const SaddlepointSolution sp = solve_saddlepoint(model, x0, sp_opt);
  return detail::assemble(sp, x0, -detail::kLogSqrt2Pi);
}

// Direct Fourier inversion of the untilted density, carried out for the
// standardized variable (X - K'(0)) / sqrt(K''(0)) and mapped back, then
// clamped as log(max(1e-14, p)). Fails in low-density regions by design.
template <CgfModel M>
double direct_ift_log_density(const M& model, double x0, const QuadratureSpec& quad) {
  quad.validate();
  const double mean = model.k1(0.0);
  const double sd = std::sqrt(model.k2(0.0));
  const double centered = (x0 - mean) / sd;
  auto integrand = [&](double s) {
    const double u = s / sd;
    const Complex w = model.k_complex(Complex(0.0, u)) - Complex(0.0, u * mean) -
                      Complex(0.0, s * centered);
    return std::exp(w).real();
  };
  double value = 0.0;
  try {
    value = simpson_integrate(integrand, 0.0, quad.upper_limit, quad.n_points) /
            (std::numbers::pi * sd);
  } catch (const QuadratureError&) {
    value = 0.0;
  }
  if (!(value > kDirectIftFloor)) value = kDirectIftFloor;
  return std::log(value);
}

}  // namespace spi
