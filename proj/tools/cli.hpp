#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spi/estimation/fit.hpp"
#include "spi/inversion.hpp"
#include "spi/io/price_csv.hpp"
#include "spi/models/gaussian.hpp"
#include "spi/models/mjd.hpp"
#include "spi/models/nig.hpp"

namespace spi::cli {

enum ExitCode : int {
  kOk = 0,
  kOther = 1,
  kParseFailure = 2,
  kUsage = 3,
  kNoConvergence = 4,
  kInversionFailure = 5,
};

// Bad flags or parameter sets.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string command;
  std::string family;
  std::string method = "spi";
  std::vector<std::string> params;
  std::string input;
  std::string input_kind = "prices";
  std::string output;
  std::string format;  // command default when empty
  double dt = 1.0 / 252.0;
  std::uint64_t seed = 1;
  std::optional<double> quad_upper;
  std::optional<int> quad_points;
  std::string grid;
  std::size_t n = 1000;
  std::string param;
  double x0 = 0.0;
};

inline int exit_code_for(const std::exception& e) {
  if (const auto* obs = dynamic_cast<const ObservationError*>(&e)) {
    try {
      std::rethrow_exception(obs->cause());
    } catch (const std::exception& inner) {
      return exit_code_for(inner);
    } catch (...) {
      return kOther;
    }
  }
  if (dynamic_cast<const ParseError*>(&e)) return kParseFailure;
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const ValidationError*>(&e) ||
      dynamic_cast<const DomainError*>(&e)) {
    return kUsage;
  }
  if (dynamic_cast<const ConvergenceError*>(&e) || dynamic_cast<const UnattainableMeanError*>(&e)) {
    return kNoConvergence;
  }
  if (dynamic_cast<const InversionError*>(&e) || dynamic_cast<const QuadratureError*>(&e) ||
      dynamic_cast<const NonFiniteCfError*>(&e)) {
    return kInversionFailure;
  }
  return kOther;
}

namespace detail {

inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;  // no "-0"
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// messages go into a CSV cell
inline std::string csv_cell(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;

  std::vector<double> points() const {
    const double span = (hi - lo) / step;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
    return out;
  }
};

inline Grid parse_grid(const std::string& spec) {
  const auto a = spec.find(':');
  const auto b = a == std::string::npos ? std::string::npos : spec.find(':', a + 1);
  if (b == std::string::npos) throw UsageError("--grid must be lo:hi:step, got '" + spec + "'");
  const auto lo = spi::detail::parse_double(std::string_view(spec).substr(0, a));
  const auto hi = spi::detail::parse_double(std::string_view(spec).substr(a + 1, b - a - 1));
  const auto step = spi::detail::parse_double(std::string_view(spec).substr(b + 1));
  if (!lo || !hi || !step || !std::isfinite(*lo) || !std::isfinite(*hi) || !(*step > 0.0) || *hi < *lo) {
    throw UsageError("--grid must be lo:hi:step with lo <= hi and step > 0, got '" + spec + "'");
  }
  if ((*hi - *lo) / *step > 1e6) throw UsageError("--grid has more than a million points");
  return {*lo, *hi, *step};
}

inline std::map<std::string, double> parse_params(const std::vector<std::string>& tokens) {
  std::map<std::string, double> out;
  for (const std::string& token : tokens) {
    std::string_view rest(token);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view() : rest.substr(comma + 1);
      if (spi::detail::trim(item).empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw UsageError("--params entries must be name=value, got '" + std::string(item) + "'");
      const std::string name(spi::detail::trim(item.substr(0, eq)));
      const auto value = spi::detail::parse_double(item.substr(eq + 1));
      if (!value || !std::isfinite(*value)) throw UsageError("--params: bad value for '" + name + "'");
      if (!out.emplace(name, *value).second) throw UsageError("--params: '" + name + "' given twice");
    }
  }
  return out;
}

struct FamilySpec {
  std::string name;
  std::vector<std::string> names;
  std::vector<bool> positive;
};

inline FamilySpec family_spec(const std::string& family) {
  if (family == "gaussian") return {family, {"mu", "sigma"}, {false, true}};
  const auto f = parse_family(family);
  if (!f) throw UsageError("unknown family '" + family + "' (gaussian, nig, mjd, gbm)");
  return {family, parameter_names(*f), positive_parameters(*f)};
}

// Values in the family's natural order. Positive parameters may be given
// as log_<name>; mjd accepts mu_j for mu. Missing names take the matching
// entry of `fallback`, or are an error without one.
inline std::vector<double> resolve_params(const FamilySpec& spec, const std::map<std::string, double>& given,
                                          const std::optional<std::vector<double>>& fallback = std::nullopt) {
  std::map<std::string, bool> used;
  for (const auto& [k, v] : given) used[k] = false;
  std::vector<double> out(spec.names.size());
  for (std::size_t i = 0; i < spec.names.size(); ++i) {
    const std::string& name = spec.names[i];
    std::vector<std::string> plain{name};
    if (spec.name == "mjd" && name == "mu") plain.push_back("mu_j");
    std::optional<double> value;
    auto take = [&](const std::string& key, bool log_scale) {
      const auto it = given.find(key);
      if (it == given.end()) return;
      if (value) throw UsageError("--params: '" + name + "' given more than once");
      value = log_scale ? std::exp(it->second) : it->second;
      used[key] = true;
    };
    for (const auto& key : plain) take(key, false);
    if (spec.positive[i]) take("log_" + name, true);
    if (!value) {
      if (!fallback) throw UsageError("--params: missing '" + name + "' for family " + spec.name);
      value = (*fallback)[i];
    }
    out[i] = *value;
  }
  for (const auto& [k, u] : used) {
    if (!u) throw UsageError("--params: unknown parameter '" + k + "' for family " + spec.name);
  }
  return out;
}

inline Method method_of(const RunConfig& cfg) {
  const auto m = parse_method(cfg.method);
  if (!m) throw UsageError("unknown method '" + cfg.method + "' (spi, spa, direct, oracle)");
  return *m;
}

inline Family estimation_family(const RunConfig& cfg) {
  const auto f = parse_family(cfg.family);
  if (!f) throw UsageError("family must be one of nig, mjd, gbm for " + cfg.command);
  return *f;
}

inline QuadratureSpec quadrature_for(const RunConfig& cfg, QuadratureSpec base) {
  if (cfg.quad_upper) base.upper_limit = *cfg.quad_upper;
  if (cfg.quad_points) base.n_points = *cfg.quad_points;
  base.validate();
  return base;
}

inline std::optional<QuadratureSpec> quadrature_override(const RunConfig& cfg, Family f, Method m) {
  if (!cfg.quad_upper && !cfg.quad_points) return std::nullopt;
  return quadrature_for(cfg, default_quadrature(f, m));
}

inline ReturnSeries load_series(const RunConfig& cfg) {
  if (cfg.input.empty()) throw UsageError(cfg.command + " needs --input");
  if (cfg.input_kind == "prices") {
    return ReturnSeries::from_prices(read_series_csv_file(cfg.input), cfg.dt);
  }
  if (cfg.input_kind == "logprices") {
    return ReturnSeries::from_log_levels(read_series_csv_file(cfg.input, {false, 2}), cfg.dt);
  }
  if (cfg.input_kind == "returns") return ReturnSeries(cfg.dt, read_series_csv_file(cfg.input, {false, 1}));
  throw UsageError("unknown --input-kind '" + cfg.input_kind + "' (prices, logprices, returns)");
}

// Writes to --output when given, else to the command's stream.
class Sink {
 public:
  Sink(const RunConfig& cfg, std::ostream& fallback) : out_(&fallback) {
    if (!cfg.output.empty()) {
      file_.open(cfg.output);
      if (!file_) throw UsageError("cannot write '" + cfg.output + "'");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

inline std::string format_of(const RunConfig& cfg, const std::string& fallback) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  if (f != "csv" && f != "json") throw UsageError("unknown --format '" + f + "' (csv, json)");
  return f;
}

struct DensityRow {
  double x = 0.0;
  double log_density = std::numeric_limits<double>::quiet_NaN();
  std::optional<LogDensityResult> parts;
  std::string error;
  int code = kOk;
};

template <CgfModel M, class Oracle>
std::vector<DensityRow> density_rows(const M& model, Oracle&& oracle, Method method, const QuadratureSpec& quad,
                                     const std::vector<double>& xs) {
  std::vector<DensityRow> rows;
  rows.reserve(xs.size());
  for (double x : xs) {
    DensityRow row;
    row.x = x;
    try {
      switch (method) {
        case Method::kSpi:
          row.parts = spi_log_density(model, x, quad);
          row.log_density = row.parts->log_density;
          break;
        case Method::kSpa:
          row.parts = spa_log_density(model, x);
          row.log_density = row.parts->log_density;
          break;
        case Method::kDirect: row.log_density = direct_ift_log_density(model, x, quad); break;
        case Method::kOracle: row.log_density = oracle(x); break;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      row.code = exit_code_for(e);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

inline int cmd_density(const RunConfig& cfg, std::ostream& out) {
  const auto spec = detail::family_spec(cfg.family);
  const Method method = detail::method_of(cfg);
  const std::vector<double> p = detail::resolve_params(spec, detail::parse_params(cfg.params));
  if (cfg.grid.empty()) throw UsageError("density needs --grid lo:hi:step");
  const std::vector<double> xs = detail::parse_grid(cfg.grid).points();
  if (!(cfg.dt > 0.0)) throw UsageError("--dt must be positive");

  std::vector<detail::DensityRow> rows;
  const QuadratureSpec direct = detail::quadrature_for(cfg, quad_defaults::kDirectIft);
  if (cfg.family == "gaussian" || cfg.family == "gbm") {
    double mean = p[0];
    double sd = p[1];
    if (cfg.family == "gbm") {
      mean = cfg.dt * (p[0] - 0.5 * p[1] * p[1]);
      sd = p[1] * std::sqrt(cfg.dt);
    }
    const Gaussian g(mean, sd);
    const QuadratureSpec q = method == Method::kDirect ? direct : detail::quadrature_for(cfg, quad_defaults::kGeneric);
    rows = detail::density_rows(g, [&](double x) { return g.log_density(x); }, method, q, xs);
  } else if (cfg.family == "nig") {
    const NigParams np = nig_params(p);
    const Nig nig(np);
    const QuadratureSpec q = method == Method::kDirect ? direct : detail::quadrature_for(cfg, quad_defaults::kNigSpi);
    rows = detail::density_rows(nig, [&](double x) { return nig_exact_log_density(np, x); }, method, q, xs);
  } else {
    const MjdTransition mjd(mjd_params(p), cfg.x0, cfg.dt);
    const QuadratureSpec q = method == Method::kDirect ? direct : detail::quadrature_for(cfg, quad_defaults::kMjdSpi);
    rows = detail::density_rows(mjd, [&](double x) { return mjd_truncated_log_density(mjd, x); }, method, q, xs);
  }

  int code = kOk;
  for (const auto& r : rows) {
    if (r.code != kOk) {
      code = r.code;
      break;
    }
  }

  detail::Sink sink(cfg, out);
  std::ostream& os = sink.stream();
  if (detail::format_of(cfg, "csv") == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json o;
      o["x"] = r.x;
      o["log_density"] = r.error.empty() ? nlohmann::json(r.log_density) : nlohmann::json(nullptr);
      if (r.parts) {
        o["tilt_term"] = r.parts->tilt_term;
        o["jacobian_term"] = r.parts->jacobian_term;
        o["log_p_bar"] = r.parts->log_p_bar;
      }
      if (!r.error.empty()) o["error"] = r.error;
      arr.push_back(std::move(o));
    }
    os << arr.dump(2) << '\n';
  } else {
    os << "x,log_density,tilt_term,jacobian_term,log_p_bar,error\n";
    for (const auto& r : rows) {
      os << detail::fmt(r.x) << ',';
      if (r.error.empty()) os << detail::fmt(r.log_density);
      os << ',';
      if (r.parts) {
        os << detail::fmt(r.parts->tilt_term) << ',' << detail::fmt(r.parts->jacobian_term) << ','
           << detail::fmt(r.parts->log_p_bar);
      } else {
        os << ",,";
      }
      os << ',' << detail::csv_cell(r.error) << '\n';
    }
  }
  return code;
}

namespace detail {

inline nlohmann::ordered_json fit_json(const RunConfig& cfg, Family f, const ReturnSeries& data, const FitResult& r) {
  nlohmann::ordered_json o;
  o["family"] = std::string(to_string(f));
  o["method"] = cfg.method;
  o["n_obs"] = data.size();
  o["dt"] = data.dt();
  const ParamTransform tr(f);
  const auto& names = parameter_names(f);
  const bool have_se = r.std_errors.size() == names.size();
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr); };
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double se = have_se ? r.std_errors[i] : std::numeric_limits<double>::quiet_NaN();
    o[names[i]] = r.model_params[i];
    if (tr.is_log(i)) {
      o["log_" + names[i]] = r.params[i];
      o["log_" + names[i] + "_se"] = num(se);
      o[names[i] + "_se"] = num(r.model_params[i] * se);  // delta method
    } else {
      o[names[i] + "_se"] = num(se);
    }
  }
  o["nll"] = num(r.nll);
  o["n_evals"] = r.n_evals;
  o["failed_evals"] = r.failed_evals;
  o["converged"] = r.converged;
  if (!r.std_error_message.empty()) o["std_error_message"] = r.std_error_message;
  return o;
}

inline void write_flat(std::ostream& os, const std::string& format, const nlohmann::ordered_json& o) {
  if (format == "json") {
    os << o.dump(2) << '\n';
    return;
  }
  os << "key,value\n";
  for (const auto& [k, v] : o.items()) {
    os << k << ',';
    if (v.is_number_float()) {
      os << fmt(v.get<double>());
    } else if (v.is_string()) {
      os << csv_cell(v.get<std::string>());
    } else if (!v.is_null()) {
      os << v.dump();
    }
    os << '\n';
  }
}

inline std::vector<double> initial_values(const RunConfig& cfg, Family f, const ReturnSeries& data) {
  const auto spec = family_spec(std::string(to_string(f)));
  return resolve_params(spec, parse_params(cfg.params), moment_init(f, data));
}

}  // namespace detail

inline int cmd_fit(const RunConfig& cfg, std::ostream& out) {
  const Family f = detail::estimation_family(cfg);
  const Method method = detail::method_of(cfg);
  const std::string format = detail::format_of(cfg, "json");
  const ReturnSeries data = detail::load_series(cfg);
  LikelihoodOptions lik;
  lik.method = method;
  lik.quad = detail::quadrature_override(cfg, f, method);
  const FitResult r = fit_mle(f, data, lik, detail::initial_values(cfg, f, data));
  detail::Sink sink(cfg, out);
  detail::write_flat(sink.stream(), format, detail::fit_json(cfg, f, data, r));
  return r.converged ? kOk : kNoConvergence;
}

inline int cmd_profile(const RunConfig& cfg, std::ostream& out) {
  const Family f = detail::estimation_family(cfg);
  const Method method = detail::method_of(cfg);
  const std::string format = detail::format_of(cfg, "csv");
  if (cfg.param.empty()) throw UsageError("profile needs --param (e.g. log_lambda)");
  if (cfg.grid.empty()) throw UsageError("profile needs --grid lo:hi:step");
  const std::vector<double> grid = detail::parse_grid(cfg.grid).points();
  if (!ParamTransform(f).index_of(cfg.param)) {
    throw UsageError("unknown profile parameter '" + cfg.param + "'; one of the free names of " +
                     std::string(to_string(f)) + " (log_lambda, log_sigma, ...)");
  }
  const ReturnSeries data = detail::load_series(cfg);
  LikelihoodOptions lik;
  lik.method = method;
  lik.quad = detail::quadrature_override(cfg, f, method);
  const auto points = profile_nll(f, data, lik, cfg.param, grid, detail::initial_values(cfg, f, data));
  std::optional<double> gbm_nll;
  if (f == Family::kMjd) {
    const FitResult g = fit_mle(Family::kGbm, data, {}, moment_init(Family::kGbm, data));
    gbm_nll = g.nll;
  }

  detail::Sink sink(cfg, out);
  std::ostream& os = sink.stream();
  if (format == "json") {
    nlohmann::ordered_json o;
    o["param"] = cfg.param;
    o["method"] = cfg.method;
    nlohmann::ordered_json values = nlohmann::ordered_json::array();
    nlohmann::ordered_json nll = nlohmann::ordered_json::array();
    nlohmann::ordered_json conv = nlohmann::ordered_json::array();
    for (const auto& p : points) {
      values.push_back(p.value);
      nll.push_back(std::isfinite(p.nll) ? nlohmann::ordered_json(p.nll) : nlohmann::ordered_json(nullptr));
      conv.push_back(p.converged);
    }
    o["param_value"] = values;
    o["nll"] = nll;
    o["converged"] = conv;
    if (gbm_nll) o["gbm_nll"] = *gbm_nll;
    os << o.dump(2) << '\n';
  } else {
    os << "param_value,nll,converged\n";
    for (const auto& p : points) {
      os << detail::fmt(p.value) << ',' << detail::fmt(p.nll) << ',' << (p.converged ? 1 : 0) << '\n';
    }
    if (gbm_nll) os << "gbm," << detail::fmt(*gbm_nll) << ",1\n";
  }
  for (const auto& p : points) {
    if (!p.converged) return kNoConvergence;
  }
  return kOk;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const auto spec = detail::family_spec(cfg.family);
  if (cfg.n < 1) throw UsageError("simulate needs --n >= 1");
  if (!(cfg.dt > 0.0)) throw UsageError("--dt must be positive");
  if (!cfg.format.empty() && cfg.format != "csv") throw UsageError("simulate writes csv only");
  std::vector<double> p = detail::resolve_params(spec, detail::parse_params(cfg.params));
  std::vector<double> values;
  if (cfg.family == "nig") {
    values = simulate_nig(nig_params(p), cfg.n, cfg.seed);
  } else if (cfg.family == "gaussian") {
    [[maybe_unused]] const Gaussian check(p[0], p[1]);
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(p[0], p[1]);
    values.resize(cfg.n);
    for (double& v : values) v = normal(rng);
  } else {
    const MjdParams mp = cfg.family == "gbm" ? MjdParams{p[0], p[1], 0.0, 0.0, 1.0} : mjd_params(p);
    values = simulate_mjd_path(mp, cfg.x0, cfg.dt, cfg.n, cfg.seed);
  }
  // built fully before writing so a failure leaves no partial output
  std::ostringstream body;
  for (double v : values) body << detail::fmt(v) << '\n';
  detail::Sink sink(cfg, out);
  sink.stream() << body.str();
  return kOk;
}

inline int cmd_loglik(const RunConfig& cfg, std::ostream& out) {
  const Family f = detail::estimation_family(cfg);
  const Method method = detail::method_of(cfg);
  const std::string format = detail::format_of(cfg, "csv");
  const auto spec = detail::family_spec(cfg.family);
  const std::vector<double> p = detail::resolve_params(spec, detail::parse_params(cfg.params));
  const ReturnSeries data = detail::load_series(cfg);
  LikelihoodOptions lik;
  lik.method = method;
  lik.quad = detail::quadrature_override(cfg, f, method);
  const double nll = negative_log_likelihood(f, p, data, lik);
  nlohmann::ordered_json o;
  o["family"] = cfg.family;
  o["method"] = cfg.method;
  o["n_obs"] = data.size();
  o["nll"] = nll;
  detail::Sink sink(cfg, out);
  if (format == "json") {
    sink.stream() << o.dump(2) << '\n';
  } else {
    sink.stream() << "family,method,n_obs,nll\n"
                  << cfg.family << ',' << cfg.method << ',' << data.size() << ',' << detail::fmt(nll) << '\n';
  }
  return kOk;
}

inline int run(const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == "density") return cmd_density(cfg, out);
  if (cfg.command == "fit") return cmd_fit(cfg, out);
  if (cfg.command == "profile") return cmd_profile(cfg, out);
  if (cfg.command == "simulate") return cmd_simulate(cfg, out);
  if (cfg.command == "loglik") return cmd_loglik(cfg, out);
  throw UsageError("unknown command '" + cfg.command + "'");
}

// Parses argv and runs one subcommand. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Saddlepoint-adjusted inversion: densities, likelihoods and fits", "spi_cli"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"density", "log-density on a grid"},
      {"fit", "maximum likelihood fit to a price file"},
      {"profile", "profile negative log-likelihood over one parameter"},
      {"simulate", "draw a sample or a log-price path"},
      {"loglik", "negative log-likelihood of a price file"},
  };
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->callback([&cfg, name = std::string(s.name)] { cfg.command = name; });
    sub->add_option("--family", cfg.family, "gaussian, nig, mjd or gbm")->required();
    sub->add_option("--method", cfg.method, "spi, spa, direct or oracle")->capture_default_str();
    sub->add_option("--params", cfg.params, "name=value ... (log_<name> for positive parameters)");
    sub->add_option("--input", cfg.input, "CSV with one value per row, optionally after a date column");
    sub->add_option("--input-kind", cfg.input_kind, "prices, logprices or returns")->capture_default_str();
    sub->add_option("--output", cfg.output, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json");
    sub->add_option("--dt", cfg.dt, "time between observations in years")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--quad-upper", cfg.quad_upper, "upper limit of the inversion integral");
    sub->add_option("--quad-points", cfg.quad_points, "number of quadrature points");
    sub->add_option("--grid", cfg.grid, "lo:hi:step");
    sub->add_option("--n", cfg.n, "sample size / path steps")->capture_default_str();
    sub->add_option("--param", cfg.param, "profiled parameter, e.g. log_lambda");
    sub->add_option("--x0", cfg.x0, "starting log-level for mjd paths and transitions")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "spi_cli: " << e.what() << '\n';
    if (e.get_exit_code() == 0) return kOk;
    err << "run 'spi_cli --help' for usage\n";
    return kUsage;
  }

  try {
    return run(cfg, out);
  } catch (const std::exception& e) {
    err << "spi_cli " << cfg.command << ": " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace spi::cli
