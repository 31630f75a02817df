#pragma once

#include <cmath>
#include <numbers>

#include "spi/cgf.hpp"
#include "spi/error.hpp"

namespace spi {

struct GaussianParams {
  double mu = 0.0;
  double sigma = 1.0;
};

inline double normal_log_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * variance) + d * d / variance);
}

// N(mu, sigma^2). K(t) = mu t + sigma^2 t^2 / 2.
class Gaussian {
 public:
  explicit Gaussian(GaussianParams p) : p_(p) {
    if (!(p_.sigma > 0.0) || !std::isfinite(p_.sigma) || !std::isfinite(p_.mu)) {
      throw ValidationError("gaussian: sigma must be positive and parameters finite");
    }
  }
  Gaussian(double mu, double sigma) : Gaussian(GaussianParams{mu, sigma}) {}

  double k(double t) const { return t * (p_.mu + 0.5 * var() * t); }
  Complex k_complex(Complex z) const { return z * (p_.mu + 0.5 * var() * z); }
  double k1(double t) const { return p_.mu + var() * t; }
  double k2(double) const { return var(); }
  DomainInterval domain() const { return {}; }

  double log_density(double x) const { return normal_log_pdf(x, p_.mu, var()); }
  const GaussianParams& params() const noexcept { return p_; }

 private:
  double var() const { return p_.sigma * p_.sigma; }
  GaussianParams p_;
};

}  // namespace spi
