#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "spi/cgf.hpp"
#include "spi/error.hpp"
#include "spi/models/gaussian.hpp"

namespace spi {

// Merton jump diffusion for log-prices,
//   dS/S = (r - lambda k) dt + sigma dW + (Y - 1) dN,  log Y ~ N(mu_j, nu^2).
struct MjdParams {
  double r = 0.0;
  double sigma = 0.2;
  double lambda = 0.0;
  double mu_j = 0.0;
  double nu = 0.1;

  // expected relative jump size
  double k() const { return std::expm1(mu_j + 0.5 * nu * nu); }
};

inline void validate(const MjdParams& p) {
  const bool finite = std::isfinite(p.r) && std::isfinite(p.sigma) && std::isfinite(p.lambda) &&
                      std::isfinite(p.mu_j) && std::isfinite(p.nu);
  if (!finite || !(p.sigma > 0.0) || !(p.lambda >= 0.0) || !(p.nu > 0.0)) {
    throw ValidationError("mjd: need sigma > 0, lambda >= 0, nu > 0 and finite parameters");
  }
}

// Conditional law of X_t given X_0 = x0 after a step dt:
//   K(s) = s x0 + s dt (r - lambda k - sigma^2/2) + s^2 sigma^2 dt / 2
//          + lambda dt (exp(s mu_j + nu^2 s^2 / 2) - 1).
// The CGF is entire.
class MjdTransition {
 public:
  MjdTransition(MjdParams p, double x0, double dt) : p_(p), x0_(x0), dt_(dt) {
    validate(p_);
    if (!(dt_ > 0.0) || !std::isfinite(dt_) || !std::isfinite(x0_)) {
      throw ValidationError("mjd: dt must be positive and x0 finite");
    }
    diffusion_var_ = p_.sigma * p_.sigma * dt_;
    jump_rate_ = p_.lambda * dt_;
    drift_ = dt_ * (p_.r - p_.lambda * p_.k() - 0.5 * p_.sigma * p_.sigma);
  }

  double k(double s) const {
    return s * (x0_ + drift_ + 0.5 * diffusion_var_ * s) + jump_rate_ * std::expm1(jump_exponent(s));
  }

  Complex k_complex(Complex z) const {
    const Complex e = z * (p_.mu_j + 0.5 * p_.nu * p_.nu * z);
    return z * (x0_ + drift_ + 0.5 * diffusion_var_ * z) + jump_rate_ * (std::exp(e) - 1.0);
  }

  double k1(double s) const {
    return x0_ + drift_ + diffusion_var_ * s +
           jump_rate_ * (p_.mu_j + p_.nu * p_.nu * s) * std::exp(jump_exponent(s));
  }

  double k2(double s) const {
    const double m = p_.mu_j + p_.nu * p_.nu * s;
    return diffusion_var_ + jump_rate_ * (p_.nu * p_.nu + m * m) * std::exp(jump_exponent(s));
  }

  DomainInterval domain() const { return {}; }

  const MjdParams& params() const noexcept { return p_; }
  double x0() const noexcept { return x0_; }
  double dt() const noexcept { return dt_; }
  // mean of X_t | X_0 conditional on no jumps
  double diffusion_mean() const noexcept { return x0_ + drift_; }
  double diffusion_variance() const noexcept { return diffusion_var_; }

 private:
  double jump_exponent(double s) const { return s * (p_.mu_j + 0.5 * p_.nu * p_.nu * s); }

  MjdParams p_;
  double x0_;
  double dt_;
  double diffusion_var_ = 0.0;
  double jump_rate_ = 0.0;
  double drift_ = 0.0;
};

struct MixtureTruncation {
  double min_weight = 1e-14;
  int max_jumps = 20;
};

// Poisson-weighted Gaussian mixture over the number of jumps in (0, dt],
// summed in log space. Terms are added from i = 0 up to and including
// max_jumps; past the Poisson mode the sum also stops at the first weight
// below min_weight.
inline double mjd_truncated_log_density(const MjdTransition& m, double x,
                                        MixtureTruncation trunc = {}) {
  const MjdParams& p = m.params();
  const double rate = p.lambda * m.dt();
  if (rate == 0.0) return normal_log_pdf(x, m.diffusion_mean(), m.diffusion_variance());

  const double log_rate = std::log(rate);
  double log_weight = -rate;  // log P(N = 0)
  double acc_max = -std::numeric_limits<double>::infinity();
  double acc_sum = 0.0;  // sum of exp(term - acc_max)
  for (int i = 0; i <= trunc.max_jumps; ++i) {
    if (i > 0) log_weight += log_rate - std::log(static_cast<double>(i));
    if (i >= rate && std::exp(log_weight) < trunc.min_weight) break;
    const double term = log_weight + normal_log_pdf(x, m.diffusion_mean() + i * p.mu_j,
                                                    m.diffusion_variance() + i * p.nu * p.nu);
    if (term > acc_max) {
      acc_sum = acc_sum * std::exp(acc_max - term) + 1.0;
      acc_max = term;
    } else {
      acc_sum += std::exp(term - acc_max);
    }
  }
  if (acc_sum == 0.0) return -std::numeric_limits<double>::infinity();
  return acc_max + std::log(acc_sum);
}

// Log-price path X_0 = x0, X_1, ..., X_n_steps (n_steps + 1 values).
inline std::vector<double> simulate_mjd_path(const MjdParams& p, double x0, double dt,
                                             std::size_t n_steps, std::uint64_t seed) {
  validate(p);
  if (!(dt > 0.0)) throw ValidationError("simulate_mjd_path: dt must be positive");
  if (n_steps == 0) throw ValidationError("simulate_mjd_path: n_steps must be at least 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  // the distribution requires a positive mean; it is only sampled when lambda > 0
  std::poisson_distribution<long long> jumps(p.lambda > 0.0 ? p.lambda * dt : 1.0);
  const double drift = dt * (p.r - p.lambda * p.k() - 0.5 * p.sigma * p.sigma);
  const double vol = p.sigma * std::sqrt(dt);
  std::vector<double> path;
  path.reserve(n_steps + 1);
  double x = x0;
  path.push_back(x);
  for (std::size_t i = 0; i < n_steps; ++i) {
    double step = drift + vol * normal(rng);
    if (p.lambda > 0.0) {
      const long long n = jumps(rng);
      for (long long j = 0; j < n; ++j) step += p.mu_j + p.nu * normal(rng);
    }
    x += step;
    path.push_back(x);
  }
  return path;
}

}  // namespace spi
