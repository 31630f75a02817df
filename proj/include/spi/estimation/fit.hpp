#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spi/error.hpp"
#include "spi/estimation/data.hpp"
#include "spi/estimation/likelihood.hpp"
#include "spi/estimation/optimize.hpp"
#include "spi/estimation/params.hpp"

namespace spi {

struct FitOptions {
  NelderMeadOptions nelder_mead;
  bool log_transform = true;  // false: optimize the model parameters directly
  bool std_errors = true;
  double hessian_step = 1e-4;
};

struct FitResult {
  Family family = Family::kGbm;
  std::vector<std::string> names;  // names of the free parameters
  std::vector<double> params;       // free (optimizer) scale
  std::vector<double> model_params; // natural scale
  double nll = 0.0;
  std::vector<double> std_errors;  // free scale; empty when unavailable
  std::string std_error_message;
  int n_evals = 0;
  int failed_evals = 0;  // evaluations that threw and were scored +inf
  bool converged = false;
};

namespace detail {

// NLL over the free coordinates not pinned in `fixed`.
class FreeObjective {
 public:
  FreeObjective(Family f, const ReturnSeries& data, const LikelihoodOptions& lik, ParamTransform tr,
                std::vector<double> full, std::vector<bool> fixed)
      : family_(f), data_(data), lik_(lik), tr_(std::move(tr)), full_(std::move(full)), fixed_(std::move(fixed)) {}

  std::vector<double> expand(const std::vector<double>& sub) const {
    std::vector<double> x = full_;
    std::size_t k = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!fixed_[i]) x[i] = sub[k++];
    }
    return x;
  }

  std::vector<double> reduce(const std::vector<double>& x) const {
    std::vector<double> sub;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!fixed_[i]) sub.push_back(x[i]);
    }
    return sub;
  }

  double operator()(const std::vector<double>& sub) const {
    try {
      return negative_log_likelihood(family_, tr_.to_model(expand(sub)), data_, lik_);
    } catch (const Error&) {
      ++failed_;
      return std::numeric_limits<double>::infinity();
    }
  }

  int failed() const noexcept { return failed_; }

 private:
  Family family_;
  const ReturnSeries& data_;
  LikelihoodOptions lik_;
  ParamTransform tr_;
  std::vector<double> full_;
  std::vector<bool> fixed_;
  mutable int failed_ = 0;
};

inline FitResult minimize_free(Family f, const ReturnSeries& data, const LikelihoodOptions& lik,
                               const std::vector<double>& init_model, const std::vector<bool>& fixed,
                               const FitOptions& opt) {
  const ParamTransform tr(f, opt.log_transform);
  const std::vector<double> start = tr.to_free(init_model);
  FreeObjective obj(f, data, lik, tr, start, fixed);
  const Objective fn = [&obj](const std::vector<double>& sub) { return obj(sub); };

  NelderMeadOptions nm = opt.nelder_mead;
  if (!nm.steps.empty()) nm.steps = obj.reduce(nm.steps);

  FitResult out;
  out.family = f;
  out.names = tr.free_names();
  if (std::all_of(fixed.begin(), fixed.end(), [](bool b) { return b; })) {
    out.params = start;
    out.nll = fn({});
    out.n_evals = 1;
    out.converged = std::isfinite(out.nll);
  } else {
    const NelderMeadResult r = nelder_mead(fn, obj.reduce(start), nm);
    out.params = obj.expand(r.x);
    out.nll = r.f;
    out.n_evals = r.n_evals;
    out.converged = r.converged && std::isfinite(r.f);
    if (opt.std_errors && out.converged) {
      try {
        const std::vector<double> sub_se = hessian_std_errors(fn, r.x, opt.hessian_step);
        out.std_errors.assign(start.size(), std::numeric_limits<double>::quiet_NaN());
        std::size_t k = 0;
        for (std::size_t i = 0; i < start.size(); ++i) {
          if (!fixed[i]) out.std_errors[i] = sub_se[k++];
        }
      } catch (const HessianError& e) {
        out.std_errors.clear();
        out.std_error_message = e.what();
      }
    }
  }
  out.model_params = tr.to_model(out.params);
  out.failed_evals = obj.failed();
  return out;
}

}  // namespace detail

// Maximum likelihood by Nelder-Mead in the transformed space, started from
// init (natural scale). Standard errors refer to the free scale (log sigma,
// ...). A failed simplex run is reported through `converged`, not thrown.
inline FitResult fit_mle(Family f, const ReturnSeries& data, const LikelihoodOptions& lik,
                         const std::vector<double>& init, const FitOptions& opt = {}) {
  return detail::minimize_free(f, data, lik, init, std::vector<bool>(init.size(), false), opt);
}

struct ProfilePoint {
  double value = 0.0;  // fixed parameter, free scale
  double nll = 0.0;
  bool converged = false;
  std::vector<double> params;  // free scale
  std::string error;
};

// Profile NLL over one free parameter (named on the free scale, e.g.
// "log_lambda"). Each grid point starts from the previous optimum; failures
// are recorded on the point and the next one restarts from init.
inline std::vector<ProfilePoint> profile_nll(Family f, const ReturnSeries& data, const LikelihoodOptions& lik,
                                             const std::string& fixed_param, const std::vector<double>& grid,
                                             const std::vector<double>& init, const FitOptions& opt = {}) {
  if (grid.empty()) throw ValidationError("profile_nll: empty grid");
  const ParamTransform tr(f, opt.log_transform);
  const auto idx = tr.index_of(fixed_param);
  if (!idx) throw ValidationError("profile_nll: unknown parameter '" + fixed_param + "' for " + std::string(to_string(f)));
  std::vector<bool> fixed(tr.size(), false);
  fixed[*idx] = true;

  FitOptions inner = opt;
  inner.std_errors = false;
  std::vector<double> warm = tr.to_free(init);
  std::vector<ProfilePoint> out;
  out.reserve(grid.size());
  for (double v : grid) {
    ProfilePoint pt;
    pt.value = v;
    std::vector<double> start = warm;
    start[*idx] = v;
    try {
      const FitResult r = detail::minimize_free(f, data, lik, tr.to_model(start), fixed, inner);
      pt.nll = r.nll;
      pt.converged = r.converged;
      pt.params = r.params;
      if (std::isfinite(r.nll)) {
        warm = r.params;
      } else {
        pt.error = "no finite likelihood value found";
        warm = tr.to_free(init);
      }
    } catch (const Error& e) {
      pt.nll = std::numeric_limits<double>::quiet_NaN();
      pt.error = e.what();
      warm = tr.to_free(init);
    }
    out.push_back(std::move(pt));
  }
  return out;
}

// Starting values from sample moments.
inline std::vector<double> moment_init(Family f, const ReturnSeries& data) {
  const std::vector<double>& x = data.returns();
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  const double var = std::max(m2, 1e-300);
  const double excess_kurtosis = std::max(m4 / (var * var) - 3.0, 0.1);
  const double dt = data.dt();
  switch (f) {
    case Family::kGbm: {
      const double sigma = std::sqrt(var / dt);
      return {mean / dt + 0.5 * sigma * sigma, sigma};
    }
    case Family::kMjd: {
      // half the variance to diffusion, half to jumps arriving about 50 times a year
      const double sigma = std::sqrt(0.5 * var / dt);
      const double lambda = 50.0;
      const double nu = std::sqrt(0.5 * var / (lambda * dt));
      return {mean / dt + 0.5 * sigma * sigma, sigma, lambda, 0.0, nu};
    }
    case Family::kNig: {
      // symmetric NIG: E(W) = var, excess kurtosis 3 E(W) / chi
      const double chi = 3.0 * var / excess_kurtosis;
      const double psi = chi / (var * var);
      return {chi, psi, mean, 0.0};
    }
  }
  return {};
}

}  // namespace spi
