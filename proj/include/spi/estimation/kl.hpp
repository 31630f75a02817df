#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "spi/error.hpp"
#include "spi/estimation/params.hpp"
#include "spi/inversion.hpp"
#include "spi/models/gaussian.hpp"
#include "spi/models/nig.hpp"

namespace spi {

// Symmetric NIG family with unit variance indexed by theta = Var(W):
// mu = gamma = 0, chi = psi = 1/theta. theta = 0 is N(0, 1).
inline NigParams kl_family_params(double theta) { return {1.0 / theta, 1.0 / theta, 0.0, 0.0}; }

struct KlSettings {
  double half_width_sd = 6.0;  // integrate over mean +- half_width_sd sd of the truth
  int n_points = 200;          // Simpson abscissae (rounded up to odd)
  double bracket_factor = 4.0; // search theta in [0, bracket_factor * theta0]
  double theta_tol = 1e-6;     // golden-section stopping width, relative to theta0
  std::optional<QuadratureSpec> quad;  // SPI rule; NIG default when empty
};

// -int log p~(x; theta) p(x; theta0) dx, with p the exact density and p~ the
// SPI or SPA approximation.
class KlCrossEntropy {
 public:
  KlCrossEntropy(double theta0, Method method, KlSettings settings = {})
      : method_(method), settings_(settings), quad_(settings.quad.value_or(quad_defaults::kNigSpi)) {
    if (!(theta0 > 0.0) || !std::isfinite(theta0)) throw ValidationError("kl: theta0 must be positive");
    if (method_ != Method::kSpi && method_ != Method::kSpa) throw ValidationError("kl: method must be spi or spa");
    const int n = QuadratureSpec::simpson_points(settings_.n_points);
    const double a = -settings_.half_width_sd;
    const double h = 2.0 * settings_.half_width_sd / (n - 1);
    const NigParams truth = kl_family_params(theta0);
    x_.resize(n);
    w_.resize(n);
    for (int i = 0; i < n; ++i) {
      x_[i] = a + i * h;
      const double simpson = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      w_[i] = simpson * h / 3.0 * std::exp(nig_exact_log_density(truth, x_[i]));
    }
  }

  double operator()(double theta) const {
    if (!(theta >= 0.0)) return std::numeric_limits<double>::infinity();
    double total = 0.0;
    try {
      if (theta == 0.0) {
        for (std::size_t i = 0; i < x_.size(); ++i) total -= w_[i] * normal_log_pdf(x_[i], 0.0, 1.0);
        return total;
      }
      const Nig model(kl_family_params(theta));
      for (std::size_t i = 0; i < x_.size(); ++i) {
        const double lp = method_ == Method::kSpi ? spi_log_density(model, x_[i], quad_).log_density
                                                  : spa_log_density(model, x_[i]).log_density;
        total -= w_[i] * lp;
      }
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
    return total;
  }

 private:
  Method method_;
  KlSettings settings_;
  QuadratureSpec quad_;
  std::vector<double> x_;
  std::vector<double> w_;
};

// Asymptotic limit of the approximate MLE when data come from theta0: the
// minimizer of the cross-entropy over [0, bracket_factor * theta0] by
// golden-section search. Both ends of the bracket are compared with the
// interior minimum, so a boundary optimum is returned exactly.
inline double kl_asymptotic_estimator(double theta0, Method method, const KlSettings& settings = {}) {
  const KlCrossEntropy ce(theta0, method, settings);
  const double lo = 0.0;
  const double hi = settings.bracket_factor * theta0;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = ce(c);
  double fd = ce(d);
  const double tol = settings.theta_tol * theta0;
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = ce(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = ce(d);
    }
  }
  double best = fc <= fd ? c : d;
  double f_best = std::min(fc, fd);
  for (double end : {lo, hi}) {
    const double fe = ce(end);
    if (fe <= f_best) {
      best = end;
      f_best = fe;
    }
  }
  return best;
}

}  // namespace spi
