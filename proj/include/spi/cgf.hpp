#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <sstream>

#include "spi/error.hpp"

namespace spi {

using Complex = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Open interval (lo, hi) on which the moment generating function is finite.
// Endpoints may be infinite.
struct DomainInterval {
  double lo = -kInf;
  double hi = kInf;

  constexpr bool contains(double t) const noexcept { return t > lo && t < hi; }
  constexpr bool bounded_below() const noexcept { return std::isfinite(lo); }
  constexpr bool bounded_above() const noexcept { return std::isfinite(hi); }
  constexpr DomainInterval shifted(double by) const noexcept { return {lo + by, hi + by}; }
};

// A distribution described by its cumulant generating function. k must be
// evaluable at complex arguments t + iu whenever t lies in the domain; k1
// and k2 are the analytic first and second derivatives on the real line.
template <class M>
concept CgfModel = requires(const M& m, double t, Complex z) {
  { m.k(t) } -> std::convertible_to<double>;
  { m.k_complex(z) } -> std::convertible_to<Complex>;
  { m.k1(t) } -> std::convertible_to<double>;
  { m.k2(t) } -> std::convertible_to<double>;
  { m.domain() } -> std::same_as<DomainInterval>;
};

namespace detail {

inline Complex checked_exp(Complex w, double s, const char* where) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag()) ||
      w.real() > std::log(std::numeric_limits<double>::max())) {
    std::ostringstream os;
    os << where << ": non-finite characteristic function at s=" << s;
    throw NonFiniteCfError(os.str(), s);
  }
  return std::exp(w);
}

inline void require_in_domain(const DomainInterval& dom, double t, const char* where) {
  if (!dom.contains(t)) {
    std::ostringstream os;
    os << where << ": t=" << t << " outside CGF domain (" << dom.lo << ", " << dom.hi << ")";
    throw DomainError(os.str());
  }
}

}  // namespace detail

// phi(s) = exp(K(is)).
template <CgfModel M>
Complex char_fn(const M& model, double s) {
  return detail::checked_exp(model.k_complex(Complex(0.0, s)), s, "char_fn");
}

// Exponentially tilted version of a model: K_tau(t) = K(t + tau) - K(tau).
template <CgfModel M>
class TiltedModel {
 public:
  TiltedModel(M base, double tau) : base_(std::move(base)), tau_(tau) {
    detail::require_in_domain(base_.domain(), tau_, "tilt");
    k_tau_ = base_.k(tau_);
  }

  double k(double t) const { return base_.k(t + tau_) - k_tau_; }
  Complex k_complex(Complex z) const { return base_.k_complex(z + tau_) - k_tau_; }
  double k1(double t) const { return base_.k1(t + tau_); }
  double k2(double t) const { return base_.k2(t + tau_); }
  DomainInterval domain() const { return base_.domain().shifted(-tau_); }

  const M& base() const noexcept { return base_; }
  double tau() const noexcept { return tau_; }

 private:
  M base_;
  double tau_;
  double k_tau_;
};

template <CgfModel M>
TiltedModel<M> tilt(const M& model, double tau) {
  return TiltedModel<M>(model, tau);
}

// Characteristic function of (X(tau_hat) - x0) / sqrt(K''(tau_hat)), the
// standardized tilted variable whose density at zero SPI integrates for.
template <CgfModel M>
Complex standardized_tilted_cf(const M& model, double tau_hat, double x0, double s) {
  detail::require_in_domain(model.domain(), tau_hat, "standardized_tilted_cf");
  const double k2 = model.k2(tau_hat);
  if (!(k2 > 0.0) || !std::isfinite(k2)) {
    std::ostringstream os;
    os << "standardized_tilted_cf: K''(" << tau_hat << ") = " << k2 << " is not positive";
    throw NonFiniteCfError(os.str(), s);
  }
  const double scale = 1.0 / std::sqrt(k2);
  const double u = s * scale;
  const Complex w = -model.k(tau_hat) + Complex(0.0, -u * x0) + model.k_complex(Complex(tau_hat, u));
  return detail::checked_exp(w, s, "standardized_tilted_cf");
}

}  // namespace spi
