#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "cavmet/dynamics.hpp"

namespace cavmet {

/// Full parameter set of one measurement sequence
/// (prepare -> flip + inject beta -> reverse -> detect).
/// t1_us and t2_us are effective interaction times.
struct ProtocolParams {
  double alpha = std::sqrt(12.7);  // initial coherent amplitude
  double t1_us = 13.4;             // preparation time
  double t2_us = 13.4;             // measurement time
  double beta = 0.0;               // displacement to be measured
  CavityMode mode{};
  int n_max = 64;
  AtomLevel initial_atom = AtomLevel::g;
  bool flip_enabled = true;

  double omega0() const { return mode.omega0; }
};

enum class SpreadRule { gauss_hermite, monte_carlo };

/// Detection and atomic-sample imperfections.
struct ImperfectionModel {
  double detection_error = 0.0;    // wrong-state attribution probability
  double position_sigma_mm = 0.0;  // longitudinal sample spread (std dev)
  int n_spread_samples = 15;
  SpreadRule spread_rule = SpreadRule::gauss_hermite;
};

/// Revival contrast C = exp{-omega0^2 (t1 - t2)^2 / 8}.
double contrast(double t1_us, double t2_us, double omega0);

/// Phase-space rotation of each coherent component, Phi = omega0 t1 / (4 alpha).
double component_rotation(const ProtocolParams& p);

/// Resource size D = 2 alpha sin(Phi), the phase-space separation of the
/// two coherent components at the end of the preparation.
double resource_separation(const ProtocolParams& p);

/// Interference phase gamma(beta) of the analytic fringe model:
/// 2 D beta at t2 == t1 (exact form), otherwise
/// omega0 t2 beta + omega0 alpha (t2 - t1) (valid for D notably above 1).
double fringe_phase_analytic(const ProtocolParams& p);

/// d gamma / d beta: 2 D at t2 == t1, omega0 t2 otherwise.
double fringe_phase_slope(const ProtocolParams& p);

/// Closed-form detection probability P_g = (1 + C cos gamma) / 2.
double pg_analytic(const ProtocolParams& p);

struct ProtocolResult {
  double p_g;
  AtomFieldState final_state;
};

/// State after the preparation stage only: |alpha> (x) atom, evolved for t1.
AtomFieldState prepare_resource_state(const ProtocolParams& p);

/// Full numeric sequence: coherent_state(alpha) (x) atom -> jc_propagate(t1)
/// -> phase flip (if enabled) -> displacement by beta -> jc_propagate(t2).
ProtocolResult run_protocol_numeric(const ProtocolParams& p);

/// Symmetric binary channel: eps + (1 - 2 eps) p.
double apply_detection_error(double p, double eps);

/// Detection probability averaged over the longitudinal position offset of
/// the atomic sample (delta ~ Normal(0, sigma^2)). The offset shifts the
/// coupling profile center by delta / v in time while the lab-frame
/// switching instants stay fixed, so t1 and t2 are recomputed per sample.
/// The detection-error channel is applied to the averaged probability.
/// mc_seed is used by the monte_carlo spread rule only.
double pg_with_imperfections(const ProtocolParams& p, const ImperfectionModel& model,
                             std::uint64_t mc_seed = 0);

/// Lab-frame switching instants (t_a < 0, t_b > 0) realizing the requested
/// effective times with the flip at the mode center crossing.
std::pair<double, double> lab_switching_times(const ProtocolParams& p);

/// Interference phase of the numeric fringe accumulated between beta = 0
/// and beta_to, measured by unwrapping P_g(beta) along a sweep.
double measure_fringe_phase(const ProtocolParams& p, double beta_to, int n_steps = 21);

}  // namespace cavmet
