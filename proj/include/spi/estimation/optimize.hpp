#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "spi/error.hpp"

namespace spi {

using Objective = std::function<double(const std::vector<double>&)>;

struct NelderMeadOptions {
  double x_tol = 1e-8;   // simplex diameter (max-norm distance to the best vertex)
  double f_tol = 1e-10;  // spread of function values over the simplex
  int max_evals = 20000;
  int restarts = 2;  // rebuild the simplex at the optimum and re-run
  double rel_step = 0.05;     // initial simplex edge relative to |x_i|
  double zero_step = 0.00025; // edge for coordinates equal to zero
  std::vector<double> steps;  // explicit initial edges; overrides the two above
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int n_evals = 0;
  int iterations = 0;
  bool converged = false;
};

// Downhill simplex with the standard coefficients (reflection 1, expansion
// 2, contraction 1/2, shrink 1/2). Non-finite objective values are treated
// as +inf. Stops when both the simplex diameter and the spread of values
// drop below tolerance.
inline NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opt = {}) {
  const std::size_t n = x0.size();
  if (n == 0) throw ValidationError("nelder_mead: empty parameter vector");
  if (!opt.steps.empty() && opt.steps.size() != n) throw ValidationError("nelder_mead: steps size mismatch");

  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.n_evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> pts(n + 1);
  std::vector<double> fv(n + 1);
  std::vector<std::size_t> order(n + 1);

  auto build = [&](const std::vector<double>& base, double f_base) {
    pts[0] = base;
    fv[0] = f_base;
    for (std::size_t i = 0; i < n; ++i) {
      pts[i + 1] = base;
      double step = opt.steps.empty() ? (base[i] != 0.0 ? opt.rel_step * base[i] : opt.zero_step) : opt.steps[i];
      pts[i + 1][i] += step;
      fv[i + 1] = eval(pts[i + 1]);
    }
  };

  auto sort = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> p2(n + 1);
    std::vector<double> f2(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      p2[k] = std::move(pts[order[k]]);
      f2[k] = fv[order[k]];
    }
    pts.swap(p2);
    fv.swap(f2);
  };

  auto converged = [&] {
    double diam = 0.0;
    double spread = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      for (std::size_t i = 0; i < n; ++i) diam = std::max(diam, std::fabs(pts[j][i] - pts[0][i]));
      spread = std::max(spread, std::fabs(fv[j] - fv[0]));
    }
    return diam <= opt.x_tol && spread <= opt.f_tol;
  };

  auto affine = [&](const std::vector<double>& c, const std::vector<double>& toward, double t) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = c[i] + t * (toward[i] - c[i]);
    return p;
  };

  build(x0, eval(x0));
  double last_best = std::numeric_limits<double>::infinity();
  for (int round = 0; round <= opt.restarts; ++round) {
    bool done = false;
    while (res.n_evals < opt.max_evals) {
      sort();
      if (converged()) {
        done = true;
        break;
      }
      ++res.iterations;
      std::vector<double> c(n, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) c[i] += pts[j][i];
      }
      for (double& ci : c) ci /= static_cast<double>(n);

      const std::vector<double> xr = affine(c, pts[n], -1.0);
      const double fr = eval(xr);
      if (fr < fv[0]) {
        const std::vector<double> xe = affine(c, pts[n], -2.0);
        const double fe = eval(xe);
        if (fe < fr) {
          pts[n] = xe;
          fv[n] = fe;
        } else {
          pts[n] = xr;
          fv[n] = fr;
        }
        continue;
      }
      if (fr < fv[n - 1]) {
        pts[n] = xr;
        fv[n] = fr;
        continue;
      }
      const bool outside = fr < fv[n];
      const std::vector<double> xc = outside ? affine(c, xr, 0.5) : affine(c, pts[n], 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fv[n])) {
        pts[n] = xc;
        fv[n] = fc;
        continue;
      }
      for (std::size_t j = 1; j <= n; ++j) {
        pts[j] = affine(pts[0], pts[j], 0.5);
        fv[j] = eval(pts[j]);
      }
    }
    sort();
    res.converged = done;
    if (!done) break;
    // a restart that finds nothing better confirms the optimum
    if (round > 0 && !(fv[0] < last_best - opt.f_tol)) break;
    last_best = fv[0];
    if (round < opt.restarts) build(pts[0], fv[0]);
  }

  res.x = pts[0];
  res.f = fv[0];
  return res;
}

// Central-difference Hessian with step rel_step * max(1, |x_i|) per coordinate.
inline Eigen::MatrixXd central_difference_hessian(const Objective& f, const std::vector<double>& x,
                                                  double rel_step = 1e-4) {
  const std::size_t n = x.size();
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = rel_step * std::max(1.0, std::fabs(x[i]));
  const double f0 = f(x);
  auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
    std::vector<double> y = x;
    y[i] += di;
    y[j] += dj;
    return f(y);
  };
  Eigen::MatrixXd hess(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double fp = at(i, h[i], i, 0.0);
    const double fm = at(i, -h[i], i, 0.0);
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const double v = (at(i, h[i], j, h[j]) - at(i, h[i], j, -h[j]) - at(i, -h[i], j, h[j]) +
                        at(i, -h[i], j, -h[j])) /
                       (4.0 * h[i] * h[j]);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

// sqrt(diag(H^-1)) from the central-difference Hessian at x.
inline std::vector<double> hessian_std_errors(const Objective& f, const std::vector<double>& x,
                                              double rel_step = 1e-4) {
  const Eigen::MatrixXd hess = central_difference_hessian(f, x, rel_step);
  if (!hess.allFinite()) throw HessianError("hessian_std_errors: non-finite Hessian entries", std::nan(""));
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
  const double min_ev = eig.eigenvalues().minCoeff();
  if (!(min_ev > 0.0)) {
    std::ostringstream os;
    os << "hessian_std_errors: Hessian is not positive definite (smallest eigenvalue " << min_ev
       << (min_ev < 0.0 ? " is negative)" : " is zero)");
    throw HessianError(os.str(), min_ev);
  }
  const Eigen::MatrixXd cov =
      eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  std::vector<double> se(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) se[i] = std::sqrt(cov(i, i));
  return se;
}

}  // namespace spi
