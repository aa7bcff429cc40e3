#pragma once

#include <cstdint>

#include "cavmet/fisher.hpp"
#include "cavmet/rng.hpp"

namespace cavmet {

/// One Monte Carlo estimation campaign: `replicas` independent estimates of
/// beta_true, each built from nu detections. Sampling, estimation and the
/// predicted precision all use the analytic fringe model composed with the
/// detection-error channel (position spread does not enter the estimator
/// model; it is an averaging effect handled by pg_with_imperfections).
struct TrialConfig {
  ProtocolParams params{};
  ImperfectionModel imperfections{};
  double beta_true = 0.0;
  long nu = 10000;
  int replicas = 400;
  std::uint64_t seed = 1;
};

/// Count of g detections among nu Bernoulli(p) trials.
long sample_outcomes(double p, long nu, RngStream& rng);

/// Half-width of the invertible quarter-fringe window around beta = 0,
/// pi / (4 |dgamma/dbeta|).
double mle_window_halfwidth(const ProtocolParams& p);

struct MleResult {
  double beta_hat;
  bool clamped;  // estimate pinned to the window edge
};

/// Maximum-likelihood estimate of beta from a detection record: inverts the
/// (detection-error adjusted) fringe model on the quarter-fringe window by
/// bracketed bisection. Counts outside the attainable range clamp to the
/// window edge. Requires a mid-fringe operating point, |cos gamma(0)| <= 0.15.
MleResult estimate_beta_mle(long count, long nu, const ProtocolParams& p,
                            double detection_error = 0.0);

struct CramerRaoResult {
  double empirical_std;     // sample std of the replica estimates
  double predicted_std;     // 1 / sqrt(nu F) at the operating point
  double ratio;             // empirical / predicted
  double mean_estimate;
  long clamped_estimates;
};

/// Empirical check of Cramer-Rao saturation. Replicas draw from streams
/// split off config.seed by replica index and are reduced in index order,
/// so parallel and serial runs agree bit for bit.
CramerRaoResult cramer_rao_trial(const TrialConfig& config);

}  // namespace cavmet
