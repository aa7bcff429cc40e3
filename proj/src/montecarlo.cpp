#include "cavmet/montecarlo.hpp"

#include <cmath>
#include <vector>

#include "cavmet/errors.hpp"
#include "cavmet/parallel.hpp"

namespace cavmet {

namespace {

double model_pg(const ProtocolParams& p, double eps, double beta) {
  ProtocolParams q = p;
  q.beta = beta;
  return apply_detection_error(pg_analytic(q), eps);
}

void require_midfringe(const ProtocolParams& p) {
  ProtocolParams q = p;
  q.beta = 0.0;
  const double c = std::cos(fringe_phase_analytic(q));
  if (std::abs(c) > 0.15) {
    throw ConfigError("estimate_beta_mle: operating point is not mid-fringe "
                      "(|cos gamma(0)| > 0.15)");
  }
}

}  // namespace

long sample_outcomes(double p, long nu, RngStream& rng) {
  if (p < 0.0 || p > 1.0) throw ConfigError("sample_outcomes: p outside [0, 1]");
  if (nu < 0) throw ConfigError("sample_outcomes: nu must be >= 0");
  long count = 0;
  for (long i = 0; i < nu; ++i) {
    if (rng.uniform() < p) ++count;
  }
  return count;
}

double mle_window_halfwidth(const ProtocolParams& p) {
  ProtocolParams q = p;
  q.beta = 0.0;
  const double slope = std::abs(fringe_phase_slope(q));
  if (slope <= 0.0) throw ConfigError("mle_window_halfwidth: fringe has no beta sensitivity");
  return std::numbers::pi / (4.0 * slope);
}

MleResult estimate_beta_mle(long count, long nu, const ProtocolParams& p, double detection_error) {
  if (nu < 1) throw ConfigError("estimate_beta_mle: nu must be >= 1");
  if (count < 0 || count > nu) throw ConfigError("estimate_beta_mle: count outside [0, nu]");
  require_midfringe(p);

  const double w = mle_window_halfwidth(p);
  const double p_hat = static_cast<double>(count) / static_cast<double>(nu);

  // P_g(beta) is strictly monotone on [-w, w] around a mid-fringe point
  double p_lo = model_pg(p, detection_error, -w);
  double p_hi = model_pg(p, detection_error, w);
  double beta_lo = -w;
  double beta_hi = w;
  if (p_lo > p_hi) {
    std::swap(p_lo, p_hi);
    std::swap(beta_lo, beta_hi);
  }
  if (p_hat <= p_lo) return {beta_lo, true};
  if (p_hat >= p_hi) return {beta_hi, true};

  for (int i = 0; i < 100; ++i) {
    const double beta_mid = 0.5 * (beta_lo + beta_hi);
    if (model_pg(p, detection_error, beta_mid) < p_hat) {
      beta_lo = beta_mid;
    } else {
      beta_hi = beta_mid;
    }
  }
  return {0.5 * (beta_lo + beta_hi), false};
}

CramerRaoResult cramer_rao_trial(const TrialConfig& config) {
  if (config.nu < 1) throw ConfigError("cramer_rao_trial: nu must be >= 1");
  if (config.replicas < 1) throw ConfigError("cramer_rao_trial: replicas must be >= 1");
  const double eps = config.imperfections.detection_error;
  require_midfringe(config.params);

  const double w = mle_window_halfwidth(config.params);
  if (std::abs(config.beta_true) >= w) {
    throw ConfigError("cramer_rao_trial: beta_true outside the quarter-fringe window");
  }
  const double p_true = model_pg(config.params, eps, config.beta_true);

  const std::size_t r = static_cast<std::size_t>(config.replicas);
  std::vector<double> estimates(r);
  std::vector<char> clamped(r);
  parallel_for(r, [&](std::size_t i) {
    RngStream rng(config.seed, i);
    const long count = sample_outcomes(p_true, config.nu, rng);
    const MleResult m = estimate_beta_mle(count, config.nu, config.params, eps);
    estimates[i] = m.beta_hat;
    clamped[i] = m.clamped ? 1 : 0;
  });

  double mean = 0.0;
  for (double v : estimates) mean += v;
  mean /= static_cast<double>(r);
  double ss = 0.0;
  for (double v : estimates) ss += (v - mean) * (v - mean);
  const double empirical = r > 1 ? std::sqrt(ss / static_cast<double>(r - 1)) : 0.0;

  const double f = fi_analytic_detection(config.beta_true, config.params, eps);
  const double predicted = 1.0 / std::sqrt(static_cast<double>(config.nu) * f);

  long n_clamped = 0;
  for (char c : clamped) n_clamped += c;
  return {empirical, predicted, empirical / predicted, mean, n_clamped};
}

}  // namespace cavmet
