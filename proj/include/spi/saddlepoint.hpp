#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spi/cgf.hpp"
#include "spi/error.hpp"

namespace spi {

// Solution of K'(tau_hat) = x0.
struct SaddlepointSolution {
  double tau_hat = 0.0;
  double k_at = 0.0;      // K(tau_hat)
  double k2_at = 0.0;     // K''(tau_hat)
  double residual = 0.0;  // K'(tau_hat) - x0
  int iterations = 0;
};

struct SaddlepointOptions {
  double tol = 1e-10;
  int max_iter = 100;
};

namespace detail {

// First guess (x0 - K'(0)) / K''(0), kept within the middle 98% of the domain.
inline double initial_tilt(const DomainInterval& dom, double guess) {
  if (!std::isfinite(guess)) guess = 0.0;
  if (dom.bounded_below() && dom.bounded_above()) {
    const double margin = 0.01 * (dom.hi - dom.lo);
    return std::clamp(guess, dom.lo + margin, dom.hi - margin);
  }
  if (dom.bounded_above()) guess = std::min(guess, dom.hi - 0.01 * std::fabs(dom.hi));
  if (dom.bounded_below()) guess = std::max(guess, dom.lo + 0.01 * std::fabs(dom.lo));
  return guess;
}

[[noreturn]] inline void throw_unattainable(double x0, double t, double k1) {
  std::ostringstream os;
  os << "solve_saddlepoint: x0=" << x0 << " is outside the range of K' (K' saturates at " << k1
     << " near t=" << t << ")";
  throw UnattainableMeanError(os.str());
}

}  // namespace detail

// Minimizes the convex objective K(t) - x0 t by Newton's method on its
// gradient K'(t) - x0. Steps that would leave the domain are halved until
// interior. A bracket [a, b] around the root is kept from the sign of the
// gradient; Newton proposals falling outside it, and iterations after five
// consecutive non-improving steps, are replaced by bisection when the bracket
// is finite.
template <CgfModel M>
SaddlepointSolution solve_saddlepoint(const M& model, double x0, SaddlepointOptions opt = {}) {
  if (!std::isfinite(x0)) throw DomainError("solve_saddlepoint: x0 must be finite");
  const DomainInterval dom = model.domain();
  const double target = opt.tol * std::max(1.0, std::fabs(x0));

  double t = detail::initial_tilt(dom, (x0 - model.k1(0.0)) / model.k2(0.0));
  double g = model.k1(t) - x0;
  double h = model.k2(t);
  if (!std::isfinite(g) || !std::isfinite(h)) {
    t = 0.0;
    g = model.k1(t) - x0;
    h = model.k2(t);
  }

  double a = dom.lo;
  double b = dom.hi;
  // t = 0 is always in the domain and brackets the root from one side
  if (t != 0.0) {
    const double g0 = model.k1(0.0) - x0;
    if (g0 < 0.0) {
      a = 0.0;
    } else {
      b = 0.0;
    }
  }
  double best_t = t;
  double best_abs = std::fabs(g);
  int stalled = 0;
  double step_before_last = kInf;
  double last_step = kInf;

  for (int iter = 0; iter <= opt.max_iter; ++iter) {
    if (std::fabs(g) <= target) {
      return {t, model.k(t), h, g, iter};
    }
    if (iter == opt.max_iter) break;

    if (g < 0.0) {
      a = std::max(a, t);
    } else {
      b = std::min(b, t);
    }

    double step = -g / h;
    if (!(h > 0.0) || !std::isfinite(step)) {
      // K' has flattened out: x0 is beyond what K' reaches on this side.
      detail::throw_unattainable(x0, t, g + x0);
    }

    const bool finite_bracket = std::isfinite(a) && std::isfinite(b);
    double cand = t + step;
    // bisect when Newton leaves the bracket or is not at least halving its steps
    const bool slow = std::fabs(step) > 0.5 * std::fabs(step_before_last);
    if (finite_bracket && (stalled >= 5 || slow || !(cand > a && cand < b))) {
      cand = 0.5 * (a + b);
      step = cand - t;
    }
    while (!dom.contains(cand) && step != 0.0) {
      step *= 0.5;
      cand = t + step;
    }

    double g_new = model.k1(cand) - x0;
    double h_new = model.k2(cand);
    for (int shrink = 0; shrink < 64 && (!std::isfinite(g_new) || !std::isfinite(h_new)); ++shrink) {
      step *= 0.5;
      cand = t + step;
      g_new = model.k1(cand) - x0;
      h_new = model.k2(cand);
    }

    if (cand == t) {
      // No representable progress. Either we are pinned against a finite
      // endpoint (K' saturates) or at the floating-point floor.
      const bool at_edge = (g < 0.0 && dom.bounded_above() && std::fabs(dom.hi - t) <= 1e-12 * std::max(1.0, std::fabs(dom.hi))) ||
                           (g > 0.0 && dom.bounded_below() && std::fabs(t - dom.lo) <= 1e-12 * std::max(1.0, std::fabs(dom.lo)));
      if (at_edge) detail::throw_unattainable(x0, t, g + x0);
      break;
    }

    step_before_last = last_step;
    last_step = cand - t;
    t = cand;
    g = g_new;
    h = h_new;
    if (std::fabs(g) < best_abs) {
      best_abs = std::fabs(g);
      best_t = t;
      stalled = 0;
    } else {
      ++stalled;
    }
  }

  // Iterates pressed against a finite endpoint without closing the gap mean
  // K' saturates there.
  if (dom.bounded_above() && g < 0.0 && dom.hi - t <= 1e-9 * std::max(1.0, std::fabs(dom.hi))) {
    detail::throw_unattainable(x0, t, g + x0);
  }
  if (dom.bounded_below() && g > 0.0 && t - dom.lo <= 1e-9 * std::max(1.0, std::fabs(dom.lo))) {
    detail::throw_unattainable(x0, t, g + x0);
  }
  std::ostringstream os;
  os << "solve_saddlepoint: no convergence for x0=" << x0 << " (best |K'(t) - x0| = " << best_abs
     << " at t=" << best_t << ")";
  throw ConvergenceError(os.str(), best_t, best_abs);
}

template <CgfModel M>
SaddlepointSolution solve_saddlepoint(const M& model, double x0, double tol, int max_iter = 100) {
  return solve_saddlepoint(model, x0, SaddlepointOptions{tol, max_iter});
}

}  // namespace spi
