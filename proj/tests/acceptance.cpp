// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spi/estimation/fit.hpp"
#include "spi/estimation/kl.hpp"
#include "spi/estimation/likelihood.hpp"
#include "spi/inversion.hpp"
#include "spi/models/gaussian.hpp"
#include "spi/models/mjd.hpp"
#include "spi/models/nig.hpp"
#include "spi/quadrature.hpp"
#include "spi/saddlepoint.hpp"

namespace {

using namespace spi;
using namespace spi::quad_defaults;
using Clock = std::chrono::steady_clock;

constexpr double kDaily = 1.0 / 252.0;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

NigParams nig_truth() { return {0.0003, 1000.0, -0.0003, 2.0}; }
MjdParams mjd_truth() { return {0.0445, std::exp(-2.41), std::exp(4.96), -0.00114, std::exp(-4.32)}; }

LikelihoodOptions with(Method m) {
  LikelihoodOptions o;
  o.method = m;
  return o;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(int id, const char* name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  o.detail.precision(6);
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s criterion %d (%s):%s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.str().c_str(), secs);
  std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void gaussian_exactness(Outcome& o) {
  const auto t0 = Clock::now();
  const Gaussian g(GaussianParams{0.0, 1.0});
  double worst = 0.0;
  for (int x = -10; x <= 10; x += 2) {
    const double got = spi_log_density(g, x, kGeneric).log_density;
    worst = std::max(worst, std::fabs(got - g.log_density(x)));
  }
  const double secs = seconds_since(t0);
  o.detail << " max |spi - exact| = " << worst << ", " << secs << " s";
  o.check(worst < 1e-5, "error >= 1e-5");
  o.check(secs < 1.0, "runtime >= 1 s");
}

void tail_failure(Outcome& o) {
  const Gaussian g(GaussianParams{0.0, 1.0});
  const double truth = g.log_density(8.0);
  const double direct = direct_ift_log_density(g, 8.0, kDirectIft);
  const double spi = spi_log_density(g, 8.0, kGeneric).log_density;
  o.detail << " truth " << truth << ", direct " << direct << " (floor " << std::log(kDirectIftFloor) << "), spi " << spi;
  o.check(std::fabs(direct - truth) > 0.5, "direct IFT within 0.5");
  o.check(std::fabs(spi - truth) < 1e-5, "spi error >= 1e-5");
}

void nig_oracle_agreement(Outcome& o) {
  const auto t0 = Clock::now();
  const NigParams base = nig_truth();
  const ReturnSeries data(kDaily, simulate_nig(base, 100, 2024));
  const Moments m = nig_moments(base);
  const double sd = std::sqrt(m.variance);
  std::vector<NigParams> sweep;
  for (int i = 0; i < 50; ++i) {
    NigParams p = base;
    p.gamma = 2.0 + 148.0 * i / 49.0;
    sweep.push_back(p);
  }
  for (int i = 0; i < 50; ++i) {
    NigParams p = base;
    p.mu = base.mu - 4.0 * sd + 8.0 * sd * i / 49.0;
    sweep.push_back(p);
  }
  double worst = 0.0;
  double lo = 1e300, hi = -1e300;
  for (const NigParams& p : sweep) {
    const auto v = to_vector(p);
    const double oracle = negative_log_likelihood(Family::kNig, v, data, with(Method::kOracle));
    const double spi = negative_log_likelihood(Family::kNig, v, data, with(Method::kSpi));
    const double spa = negative_log_likelihood(Family::kNig, v, data, with(Method::kSpa));
    worst = std::max(worst, std::fabs(spi - oracle));
    lo = std::min(lo, spa - oracle);
    hi = std::max(hi, spa - oracle);
  }
  const double secs = seconds_since(t0);
  o.detail << " max |spi - oracle| = " << worst << ", spa offset range " << hi - lo << ", " << secs << " s";
  o.check(worst < 1e-3, "spi - oracle >= 1e-3");
  o.check(hi - lo > 0.1, "spa offset range <= 0.1");
  o.check(secs < 30.0, "runtime >= 30 s");
}

double p_bar_at(const Nig& nig, double x0) {
  return p_bar_zero(nig, solve_saddlepoint(nig, x0), x0, kNigSpi);
}

void p_bar_asymptote(Outcome& o) {
  const Nig nig(nig_truth());
  const Moments m = nig_moments(nig_truth());
  const double sd = std::sqrt(m.variance);
  const double lo = p_bar_at(nig, m.mean - 8 * sd);
  const double hi = p_bar_at(nig, m.mean + 8 * sd);
  const double mid = p_bar_at(nig, m.mean);
  o.detail << " p_bar(-8 sd) " << lo << ", p_bar(+8 sd) " << hi << ", p_bar(mean) " << mid << ", target "
           << kInvSqrt2Pi;
  o.check(std::fabs(lo - kInvSqrt2Pi) < 1e-3, "-8 sd not within 1e-3");
  o.check(std::fabs(hi - kInvSqrt2Pi) < 1e-3, "+8 sd not within 1e-3");
  o.check(mid > kInvSqrt2Pi, "p_bar(mean) <= (2 pi)^-1/2");
}

void kl_bias(Outcome& o) {
  const auto t0 = Clock::now();
  for (double theta0 : {0.5, 1.0, 2.0}) {
    const double spa = kl_asymptotic_estimator(theta0, Method::kSpa);
    const double spi = kl_asymptotic_estimator(theta0, Method::kSpi);
    o.detail << " theta0=" << theta0 << ": spa " << spa << ", spi " << spi << ";";
    o.check(std::fabs(spa) < 1e-3, "spa theta0=" + std::to_string(theta0) + " not at 0");
    o.check(std::fabs(spi - theta0) < 0.02 * theta0, "spi theta0=" + std::to_string(theta0) + " off by >= 2%");
  }
  const double secs = seconds_since(t0);
  o.detail << " " << secs << " s";
  o.check(secs < 120.0, "runtime >= 2 min");
}

void mjd_equivalence(Outcome& o) {
  const MjdParams truth = mjd_truth();
  const ReturnSeries data = ReturnSeries::from_log_levels(simulate_mjd_path(truth, 0.0, kDaily, 4500, 2024), kDaily);
  const MjdTransition t(truth, 0.0, kDaily);
  double worst = 0.0;
  for (double x : data.returns()) {
    worst = std::max(worst, std::fabs(spi_log_density(t, x, kMjdSpi).log_density - mjd_truncated_log_density(t, x)));
  }
  o.detail << " max per-observation |spi - mixture| = " << worst << ";";
  o.check(worst < 1e-6, "per-observation difference >= 1e-6");

  FitOptions fo;
  fo.std_errors = false;
  const FitResult a = fit_mle(Family::kMjd, data, with(Method::kSpi), to_vector(truth), fo);
  const FitResult b = fit_mle(Family::kMjd, data, with(Method::kOracle), to_vector(truth), fo);
  o.check(a.converged && b.converged, "fit did not converge");
  double worst_rel = 0.0;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    const double rel = std::fabs(a.params[i] - b.params[i]) / std::fabs(b.params[i]);
    worst_rel = std::max(worst_rel, rel);
    o.detail << ' ' << a.names[i] << ' ' << a.params[i] << '/' << b.params[i];
  }
  o.detail << "; max relative difference " << worst_rel;
  // agreement to 3 significant digits
  o.check(worst_rel < 5e-4, "fits differ in the 3rd significant digit");
}

void normalization(Outcome& o) {
  const Nig nig(nig_truth());
  const Moments m = nig_moments(nig_truth());
  const double sd = std::sqrt(m.variance);
  const double mass = simpson_integrate(
      [&](double x) { return std::exp(spi_log_density(nig, x, kNigSpi).log_density); }, m.mean - 12 * sd,
      m.mean + 12 * sd, 2048);
  o.detail << " integral " << std::setprecision(10) << mass;
  o.check(mass >= 0.9999 && mass <= 1.0001, "outside [0.9999, 1.0001]");
}

template <class M>
void saddlepoint_cases(const M& model, std::mt19937_64& rng, int n, Outcome& o, int& pairs, double& worst) {
  std::uniform_real_distribution<double> z(-10.0, 10.0);
  const double mean = model.k1(0.0);
  const double sd = std::sqrt(model.k2(0.0));
  std::vector<double> x0(n);
  for (double& x : x0) x = mean + z(rng) * sd;
  std::sort(x0.begin(), x0.end());
  double prev = -1e300;
  for (double x : x0) {
    const SaddlepointSolution s = solve_saddlepoint(model, x);
    const double scaled = std::fabs(model.k1(s.tau_hat) - x) / std::max(1.0, std::fabs(x));
    worst = std::max(worst, scaled);
    if (!(s.tau_hat >= prev)) o.check(false, "tau_hat not monotone");
    prev = s.tau_hat;
    ++pairs;
  }
  const SaddlepointSolution at_mean = solve_saddlepoint(model, mean);
  if (!(std::fabs(at_mean.tau_hat) <= 1e-8)) o.check(false, "tau_hat(mean) != 0");
}

void saddlepoint_suite(Outcome& o) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int pairs = 0;
  double worst = 0.0;
  // 100 models x 10 points
  for (int i = 0; i < 100; ++i) {
    switch (i % 3) {
      case 0: {
        const Gaussian g(GaussianParams{-1 + 2 * u(rng), std::exp(-6 + 7 * u(rng))});
        saddlepoint_cases(g, rng, 10, o, pairs, worst);
        break;
      }
      case 1: {
        const Nig nig({std::exp(-9 + 6 * u(rng)), std::exp(1 + 7 * u(rng)), -0.01 + 0.02 * u(rng), -5 + 10 * u(rng)});
        saddlepoint_cases(nig, rng, 10, o, pairs, worst);
        break;
      }
      default: {
        const MjdParams p{-0.1 + 0.2 * u(rng), std::exp(-4 + 3 * u(rng)), std::exp(6 * u(rng)), -0.02 + 0.04 * u(rng),
                          std::exp(-6 + 4 * u(rng))};
        const MjdTransition t(p, -0.5 + u(rng), kDaily);
        saddlepoint_cases(t, rng, 10, o, pairs, worst);
        break;
      }
    }
  }
  o.detail << ' ' << pairs << " pairs, max |K'(tau) - x0| / max(1, |x0|) = " << worst;
  o.check(pairs == 1000, "pair count");
  o.check(worst <= 1e-10, "residual above 1e-10");
}

void round_trip(Outcome& o) {
  const auto t0 = Clock::now();
  // GBM: sigma is identified by the data, r only weakly
  {
    const MjdParams truth{0.05, 0.2, 0.0, 0.0, 1.0};
    const ReturnSeries data =
        ReturnSeries::from_log_levels(simulate_mjd_path(truth, 0.0, kDaily, 4500, 3), kDaily);
    const FitResult r = fit_mle(Family::kGbm, data, with(Method::kSpi), moment_init(Family::kGbm, data));
    const std::vector<double> free_truth{truth.r, std::log(truth.sigma)};
    o.check(r.converged && r.std_errors.size() == 2, "gbm fit");
    for (std::size_t i = 0; i < free_truth.size() && i < r.std_errors.size(); ++i) {
      const double zval = (r.params[i] - free_truth[i]) / r.std_errors[i];
      o.detail << " gbm " << r.names[i] << " z=" << zval << ';';
      o.check(std::fabs(zval) < 3.0, "gbm " + r.names[i] + " outside 3 SE");
    }
  }
  // NIG: Bessel density (see README on cost)
  {
    const NigParams truth = nig_truth();
    const ReturnSeries data(kDaily, simulate_nig(truth, 4500, 21));
    const FitResult r = fit_mle(Family::kNig, data, with(Method::kOracle), moment_init(Family::kNig, data));
    const std::vector<double> free_truth{std::log(truth.chi), std::log(truth.psi), truth.mu, truth.gamma};
    o.check(r.converged && r.std_errors.size() == 4, "nig fit");
    for (std::size_t i = 0; i < free_truth.size() && i < r.std_errors.size(); ++i) {
      const double zval = (r.params[i] - free_truth[i]) / r.std_errors[i];
      o.detail << " nig " << r.names[i] << " z=" << zval << ';';
      o.check(std::fabs(zval) < 3.0, "nig " + r.names[i] + " outside 3 SE");
    }
  }
  const double secs = seconds_since(t0);
  o.detail << ' ' << secs << " s";
  o.check(secs < 300.0, "runtime >= 5 min");
}

}  // namespace

int main() {
  report(1, "Gaussian exactness", gaussian_exactness);
  report(2, "direct inversion tail failure", tail_failure);
  report(3, "NIG oracle agreement", nig_oracle_agreement);
  report(4, "p_bar(0) asymptote", p_bar_asymptote);
  report(5, "KL bias", kl_bias);
  report(6, "MJD equivalence", mjd_equivalence);
  report(7, "normalization", normalization);
  report(8, "saddlepoint solver properties", saddlepoint_suite);
  report(9, "round-trip estimation", round_trip);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
