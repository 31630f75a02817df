#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "spi/error.hpp"
#include "spi/estimation/data.hpp"
#include "spi/estimation/params.hpp"
#include "spi/inversion.hpp"
#include "spi/models/gaussian.hpp"
#include "spi/models/mjd.hpp"
#include "spi/models/nig.hpp"

namespace spi {

struct LikelihoodOptions {
  Method method = Method::kSpi;
  std::optional<QuadratureSpec> quad;  // per-family default when empty
  SaddlepointOptions saddlepoint;
  MixtureTruncation truncation;
  unsigned threads = 1;  // 0: one per hardware thread
};

inline QuadratureSpec default_quadrature(Family f, Method m) {
  if (m == Method::kDirect) return quad_defaults::kDirectIft;
  switch (f) {
    case Family::kNig: return quad_defaults::kNigSpi;
    case Family::kMjd: return quad_defaults::kMjdSpi;
    case Family::kGbm: return quad_defaults::kGeneric;
  }
  return quad_defaults::kGeneric;
}

namespace detail {

template <CgfModel M>
double log_density_by(const M& model, double x, Method m, const QuadratureSpec& quad,
                      const SaddlepointOptions& sp) {
  switch (m) {
    case Method::kSpi: return spi_log_density(model, x, quad, sp).log_density;
    case Method::kSpa: return spa_log_density(model, x, sp).log_density;
    case Method::kDirect: return direct_ift_log_density(model, x, quad);
    case Method::kOracle: break;
  }
  throw ValidationError("log_density_by: oracle has no generic form");
}

// Evaluates one family at fixed parameters for any observation.
class ObservationDensity {
 public:
  ObservationDensity(Family f, const std::vector<double>& params, double dt, const LikelihoodOptions& opt)
      : family_(f), opt_(opt), quad_(opt.quad.value_or(default_quadrature(f, opt.method))) {
    if (opt_.method != Method::kSpa) quad_.validate();
    switch (f) {
      case Family::kGbm: {
        if (params.size() != 2) throw ValidationError("gbm: expected 2 parameters");
        const double r = params[0];
        const double sigma = params[1];
        if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(r)) {
          throw ValidationError("gbm: sigma must be positive and parameters finite");
        }
        gbm_mean_ = dt * (r - 0.5 * sigma * sigma);
        gbm_var_ = sigma * sigma * dt;
        break;
      }
      case Family::kMjd:
        mjd_.emplace(mjd_params(params), 0.0, dt);
        break;
      case Family::kNig:
        nig_params_ = nig_params(params);
        nig_.emplace(nig_params_);
        break;
    }
  }

  double operator()(double x) const {
    switch (family_) {
      case Family::kGbm: return normal_log_pdf(x, gbm_mean_, gbm_var_);
      case Family::kMjd:
        if (opt_.method == Method::kOracle) return mjd_truncated_log_density(*mjd_, x, opt_.truncation);
        return log_density_by(*mjd_, x, opt_.method, quad_, opt_.saddlepoint);
      case Family::kNig:
        if (opt_.method == Method::kOracle) return nig_exact_log_density(nig_params_, x);
        return log_density_by(*nig_, x, opt_.method, quad_, opt_.saddlepoint);
    }
    return 0.0;
  }

 private:
  Family family_;
  LikelihoodOptions opt_;
  QuadratureSpec quad_;
  double gbm_mean_ = 0.0;
  double gbm_var_ = 1.0;
  std::optional<MjdTransition> mjd_;
  NigParams nig_params_;
  std::optional<Nig> nig_;
};

}  // namespace detail

// log p(x_i) for every observation, in order. gbm is always the exact
// Gaussian increment law; mjd increments are evaluated from x0 = 0.
// The first failing observation (lowest index) is rethrown as an
// ObservationError.
inline std::vector<double> observation_log_densities(Family f, const std::vector<double>& params,
                                                     const ReturnSeries& data, const LikelihoodOptions& opt = {}) {
  const detail::ObservationDensity density(f, params, data.dt(), opt);
  const std::vector<double>& x = data.returns();
  const std::size_t n = x.size();
  std::vector<double> out(n);
  std::vector<std::exception_ptr> errors(n);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        out[i] = density(x[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  unsigned threads = opt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t begin = 0; begin < n; begin += chunk) {
      pool.emplace_back(work, begin, std::min(n, begin + chunk));
    }
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    std::string msg = "observation " + std::to_string(i) + " (x=" + std::to_string(x[i]) + "): ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      msg += e.what();
    } catch (...) {
      msg += "unknown error";
    }
    throw ObservationError(msg, i, errors[i]);
  }
  return out;
}

// -sum_i log p(x_i), summed in observation order.
inline double negative_log_likelihood(Family f, const std::vector<double>& params, const ReturnSeries& data,
                                      const LikelihoodOptions& opt = {}) {
  const std::vector<double> logs = observation_log_densities(f, params, data, opt);
  double total = 0.0;
  for (double v : logs) total -= v;
  return total;
}

}  // namespace spi
