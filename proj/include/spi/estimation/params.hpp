#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spi/error.hpp"
#include "spi/models/mjd.hpp"
#include "spi/models/nig.hpp"

namespace spi {

enum class Family { kGbm, kMjd, kNig };
enum class Method { kSpi, kSpa, kDirect, kOracle };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::kGbm: return "gbm";
    case Family::kMjd: return "mjd";
    case Family::kNig: return "nig";
  }
  return "?";
}

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::kSpi: return "spi";
    case Method::kSpa: return "spa";
    case Method::kDirect: return "direct";
    case Method::kOracle: return "oracle";
  }
  return "?";
}

inline std::optional<Family> parse_family(std::string_view s) {
  if (s == "gbm") return Family::kGbm;
  if (s == "mjd") return Family::kMjd;
  if (s == "nig") return Family::kNig;
  return std::nullopt;
}

inline std::optional<Method> parse_method(std::string_view s) {
  if (s == "spi") return Method::kSpi;
  if (s == "spa") return Method::kSpa;
  if (s == "direct") return Method::kDirect;
  if (s == "oracle") return Method::kOracle;
  return std::nullopt;
}

// Model parameters in their natural order:
//   gbm [r, sigma], mjd [r, sigma, lambda, mu, nu], nig [chi, psi, mu, gamma].
inline const std::vector<std::string>& parameter_names(Family f) {
  static const std::vector<std::string> gbm{"r", "sigma"};
  static const std::vector<std::string> mjd{"r", "sigma", "lambda", "mu", "nu"};
  static const std::vector<std::string> nig{"chi", "psi", "mu", "gamma"};
  switch (f) {
    case Family::kGbm: return gbm;
    case Family::kMjd: return mjd;
    case Family::kNig: return nig;
  }
  return gbm;
}

inline std::vector<bool> positive_parameters(Family f) {
  switch (f) {
    case Family::kGbm: return {false, true};
    case Family::kMjd: return {false, true, true, false, true};
    case Family::kNig: return {true, true, false, false};
  }
  return {};
}

// Map between model parameters and the unconstrained vector the optimizer
// sees. Positive parameters are log-transformed unless the transform was
// built as identity.
class ParamTransform {
 public:
  explicit ParamTransform(Family f, bool log_positive = true) : family_(f) {
    log_ = positive_parameters(f);
    if (!log_positive) log_.assign(log_.size(), false);
  }

  static ParamTransform identity(Family f) { return ParamTransform(f, false); }

  Family family() const noexcept { return family_; }
  std::size_t size() const noexcept { return log_.size(); }
  bool is_log(std::size_t i) const { return log_.at(i); }

  std::vector<std::string> free_names() const {
    std::vector<std::string> out = parameter_names(family_);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (log_[i]) out[i] = "log_" + out[i];
    }
    return out;
  }

  std::vector<double> to_free(const std::vector<double>& model) const {
    check_size(model);
    std::vector<double> out(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
      if (log_[i]) {
        if (!(model[i] > 0.0)) {
          throw ValidationError("ParamTransform: " + parameter_names(family_)[i] + " must be positive");
        }
        out[i] = std::log(model[i]);
      } else {
        out[i] = model[i];
      }
    }
    return out;
  }

  std::vector<double> to_model(const std::vector<double>& free) const {
    check_size(free);
    std::vector<double> out(free.size());
    for (std::size_t i = 0; i < free.size(); ++i) out[i] = log_[i] ? std::exp(free[i]) : free[i];
    return out;
  }

  // index in the free vector of a parameter named either way ("lambda" or
  // "log_lambda"); the name must match the transform's scale
  std::optional<std::size_t> index_of(std::string_view name) const {
    const auto names = free_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return i;
    }
    return std::nullopt;
  }

 private:
  void check_size(const std::vector<double>& v) const {
    if (v.size() != log_.size()) {
      throw ValidationError("ParamTransform: expected " + std::to_string(log_.size()) + " parameters for " +
                            std::string(to_string(family_)) + ", got " + std::to_string(v.size()));
    }
  }

  Family family_;
  std::vector<bool> log_;
};

inline MjdParams mjd_params(const std::vector<double>& v) {
  if (v.size() != 5) throw ValidationError("mjd: expected 5 parameters");
  return {v[0], v[1], v[2], v[3], v[4]};
}

inline NigParams nig_params(const std::vector<double>& v) {
  if (v.size() != 4) throw ValidationError("nig: expected 4 parameters");
  return {v[0], v[1], v[2], v[3]};
}

inline std::vector<double> to_vector(const MjdParams& p) { return {p.r, p.sigma, p.lambda, p.mu_j, p.nu}; }
inline std::vector<double> to_vector(const NigParams& p) { return {p.chi, p.psi, p.mu, p.gamma}; }

}  // namespace spi
