#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "spi/error.hpp"

namespace spi {

// Log-returns observed at spacing dt (in years).
class ReturnSeries {
 public:
  ReturnSeries(double dt, std::vector<double> returns) : dt_(dt), returns_(std::move(returns)) {
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ValidationError("ReturnSeries: dt must be positive");
    if (returns_.empty()) throw ValidationError("ReturnSeries: no observations");
    for (std::size_t i = 0; i < returns_.size(); ++i) {
      if (!std::isfinite(returns_[i])) {
        throw ValidationError("ReturnSeries: return " + std::to_string(i) + " is not finite");
      }
    }
  }

  // successive differences of log-levels
  static ReturnSeries from_log_levels(const std::vector<double>& levels, double dt) {
    if (levels.size() < 2) throw ValidationError("ReturnSeries: need at least two levels");
    std::vector<double> r(levels.size() - 1);
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) r[i] = levels[i + 1] - levels[i];
    return ReturnSeries(dt, std::move(r));
  }

  // log(p_{i+1} / p_i)
  static ReturnSeries from_prices(const std::vector<double>& prices, double dt) {
    if (prices.size() < 2) throw ValidationError("ReturnSeries: need at least two prices");
    std::vector<double> r(prices.size() - 1);
    for (std::size_t i = 0; i < prices.size(); ++i) {
      if (!(prices[i] > 0.0) || !std::isfinite(prices[i])) {
        throw ValidationError("ReturnSeries: price " + std::to_string(i) + " is not positive");
      }
    }
    for (std::size_t i = 0; i + 1 < prices.size(); ++i) r[i] = std::log(prices[i + 1] / prices[i]);
    return ReturnSeries(dt, std::move(r));
  }

  double dt() const noexcept { return dt_; }
  const std::vector<double>& returns() const noexcept { return returns_; }
  std::size_t size() const noexcept { return returns_.size(); }

 private:
  double dt_;
  std::vector<double> returns_;
};

}  // namespace spi
