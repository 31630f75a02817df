#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "spi/cgf.hpp"
#include "spi/error.hpp"
#include "spi/models/bessel.hpp"

namespace spi {

// Normal inverse Gaussian as a normal variance-mean mixture
//   X = mu + gamma W + sqrt(W) Z,  p_W(w) ~ w^{-3/2} exp(-(chi/w + psi w)/2).
struct NigParams {
  double chi = 1.0;
  double psi = 1.0;
  double mu = 0.0;
  double gamma = 0.0;
};

struct Moments {
  double mean;
  double variance;
};

class Nig {
 public:
  explicit Nig(NigParams p) : p_(p) {
    if (!(p_.chi > 0.0) || !(p_.psi > 0.0) || !std::isfinite(p_.chi) || !std::isfinite(p_.psi) ||
        !std::isfinite(p_.mu) || !std::isfinite(p_.gamma)) {
      throw ValidationError("nig: chi and psi must be positive and all parameters finite");
    }
    sqrt_chi_ = std::sqrt(p_.chi);
    sqrt_psi_ = std::sqrt(p_.psi);
    alpha_ = std::sqrt(p_.psi + p_.gamma * p_.gamma);
  }

  // K(t) = mu t + sqrt(chi) (sqrt(psi) - sqrt(psi - t^2 - 2 t gamma)), with the
  // bracket rewritten as q / (sqrt(psi) + sqrt(psi - q)) so that it stays
  // accurate when psi is large.
  double k(double t) const {
    const double q = t * (t + 2.0 * p_.gamma);
    return t * p_.mu + sqrt_chi_ * q / (sqrt_psi_ + std::sqrt(p_.psi - q));
  }

  // Re(psi - z^2 - 2 z gamma) > 0 across the strip Re z in domain, so the
  // principal square root is continuous there.
  Complex k_complex(Complex z) const {
    const Complex q = z * (z + 2.0 * p_.gamma);
    return z * p_.mu + sqrt_chi_ * q / (sqrt_psi_ + std::sqrt(p_.psi - q));
  }

  double k1(double t) const {
    const double w = t + p_.gamma;
    return p_.mu + sqrt_chi_ * w / std::sqrt(remaining(t));
  }

  double k2(double t) const {
    const double r = remaining(t);
    return sqrt_chi_ * alpha_ * alpha_ / (r * std::sqrt(r));
  }

  // psi - t^2 - 2 t gamma > 0  <=>  |t + gamma| < sqrt(psi + gamma^2)
  DomainInterval domain() const { return {-p_.gamma - alpha_, -p_.gamma + alpha_}; }

  const NigParams& params() const noexcept { return p_; }

 private:
  // psi - t^2 - 2 t gamma = alpha^2 - (t + gamma)^2, factored for accuracy near the edges
  double remaining(double t) const {
    const double w = t + p_.gamma;
    return (alpha_ - w) * (alpha_ + w);
  }

  NigParams p_;
  double sqrt_chi_ = 1.0;
  double sqrt_psi_ = 1.0;
  double alpha_ = 1.0;
};

inline Moments nig_moments(const NigParams& p) {
  const Nig m(p);
  return {m.k1(0.0), m.k2(0.0)};
}

// Log of the closed-form NIG density
//   sqrt(chi (psi + g^2)) K1(sqrt((chi + d^2)(psi + g^2))) / (pi sqrt(chi + d^2))
//     * exp(sqrt(chi psi) + d g),   d = x - mu.
inline double nig_exact_log_density(const NigParams& p, double x) {
  [[maybe_unused]] const Nig validate(p);
  const double d = x - p.mu;
  const double a2 = p.psi + p.gamma * p.gamma;
  const double c = p.chi + d * d;
  const double z = std::sqrt(c * a2);
  // sqrt(chi psi) - z, without cancellation when both are large
  const double diff = -(p.chi * p.gamma * p.gamma + d * d * a2) / (std::sqrt(p.chi * p.psi) + z);
  return 0.5 * std::log(p.chi * a2) + std::log(bessel_k1_scaled(z)) - std::log(std::numbers::pi) -
         0.5 * std::log(c) + diff + d * p.gamma;
}

// Inverse Gaussian draw with mean m and shape lambda (Michael, Schucany and
// Haas transformation with one uniform).
template <class Rng>
double sample_inverse_gaussian(Rng& rng, double mean, double shape) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double n = normal(rng);
  const double y = n * n;
  const double my = mean * y;
  const double x = mean + mean * my / (2.0 * shape) -
                   (mean / (2.0 * shape)) * std::sqrt(4.0 * shape * my + my * my);
  if (uniform(rng) <= mean / (mean + x)) return x;
  return mean * mean / x;
}

// n i.i.d. NIG draws; W ~ IG(mean sqrt(chi/psi), shape chi).
inline std::vector<double> simulate_nig(const NigParams& p, std::size_t n, std::uint64_t seed) {
  [[maybe_unused]] const Nig validate(p);
  if (n == 0) throw ValidationError("simulate_nig: n must be at least 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double ig_mean = std::sqrt(p.chi / p.psi);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = sample_inverse_gaussian(rng, ig_mean, p.chi);
    out.push_back(p.mu + p.gamma * w + std::sqrt(w) * normal(rng));
  }
  return out;
}

}  // namespace spi
