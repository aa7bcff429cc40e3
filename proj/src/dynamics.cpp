#include "cavmet/dynamics.hpp"

#include <cmath>

#include "cavmet/errors.hpp"

namespace cavmet {

AtomFieldState make_atom_field(AtomLevel level, FieldVector field) {
  const int dim = static_cast<int>(field.amps.size());
  FieldVector empty{Eigen::VectorXcd::Zero(dim)};
  if (level == AtomLevel::g) return {std::move(field), std::move(empty)};
  return {std::move(empty), std::move(field)};
}

double effective_time(double t_start_us, double t_end_us, const CavityMode& mode) {
  if (!(t_start_us <= t_end_us)) {
    throw ConfigError("effective_time: t_start must not exceed t_end");
  }
  const double k = mode.velocity_mm_us / mode.waist_mm;  // 1/us
  const double scale = 0.5 * std::sqrt(std::numbers::pi) / k;
  return scale * (std::erf(k * t_end_us) - std::erf(k * t_start_us));
}

double invert_half_profile(double t_eff_us, const CavityMode& mode) {
  if (t_eff_us < 0.0) throw ConfigError("invert_half_profile: t_eff must be >= 0");
  const double half_max = 0.5 * mode.max_effective_time_us();
  if (t_eff_us >= half_max) {
    throw ConfigError("invert_half_profile: t_eff does not fit in half the mode profile");
  }
  if (t_eff_us == 0.0) return 0.0;
  // effective_time(0, t) is strictly increasing; bisect on [0, 10 w/v]
  // where the profile has saturated far beyond double precision.
  double lo = 0.0;
  double hi = 10.0 * mode.waist_mm / mode.velocity_mm_us;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (effective_time(0.0, mid, mode) < t_eff_us) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

AtomFieldState jc_propagate(const AtomFieldState& state, double t_eff_us, double omega0) {
  if (t_eff_us < 0.0) throw ConfigError("jc_propagate: t_eff must be >= 0");
  if (!state.is_normalized()) throw GuardError("jc_propagate: state is not normalized");

  AtomFieldState out = state;
  const int n_max = state.n_max();
  const Complex mi(0.0, -1.0);
  for (int n = 0; n < n_max; ++n) {
    const double theta = 0.5 * omega0 * std::sqrt(n + 1.0) * t_eff_us;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex e_old = state.e_amps.amps[n];
    const Complex g_old = state.g_amps.amps[n + 1];
    out.e_amps.amps[n] = c * e_old + mi * s * g_old;
    out.g_amps.amps[n + 1] = mi * s * e_old + c * g_old;
  }
  return out;
}

AtomFieldState atomic_phase_flip(const AtomFieldState& state) {
  AtomFieldState out = state;
  out.g_amps.amps = -out.g_amps.amps;
  return out;
}

double phase_flip_pulse_phase(double detuning_mhz, double duration_us) {
  return 2.0 * std::numbers::pi * detuning_mhz * duration_us;
}

Moments expectation_and_variance(const OperatorMatrix& field_op, const AtomFieldState& state) {
  const double herm = (field_op - field_op.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw GuardError("expectation_and_variance: operator is not Hermitian");
  if (!state.is_normalized()) {
    throw GuardError("expectation_and_variance: joint state is not normalized");
  }
  const Eigen::VectorXcd g_applied = field_op * state.g_amps.amps;
  const Eigen::VectorXcd e_applied = field_op * state.e_amps.amps;
  const Complex mean_c = state.g_amps.amps.dot(g_applied) + state.e_amps.amps.dot(e_applied);
  if (std::abs(mean_c.imag()) > 1e-10) {
    throw GuardError("expectation_and_variance: expectation has imaginary part");
  }
  const double mean = mean_c.real();
  double variance = g_applied.squaredNorm() + e_applied.squaredNorm() - mean * mean;
  if (variance < -1e-10) {
    throw GuardError("expectation_and_variance: variance below round-off floor");
  }
  if (variance < 0.0) variance = 0.0;
  return {mean, variance};
}

}  // namespace cavmet
