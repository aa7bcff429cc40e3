#pragma once

#include <numbers>

#include "cavmet/fockspace.hpp"

namespace cavmet {

enum class AtomLevel { g, e };

/// Joint atom-field state: field amplitudes conditioned on the atomic level.
struct AtomFieldState {
  FieldVector g_amps;
  FieldVector e_amps;

  int n_max() const { return g_amps.n_max(); }
  double norm_sq() const { return g_amps.norm_sq() + e_amps.norm_sq(); }
  bool is_normalized(double tol = 1e-9) const {
    return std::abs(norm_sq() - 1.0) <= tol;
  }
  /// Probability of detecting the atom in |g>.
  double p_g() const { return g_amps.norm_sq(); }
};

/// Gaussian cavity mode crossed by the atomic beam at constant velocity.
/// The coupling seen by the atom is Omega(t) = omega0 exp[-(v t / w)^2],
/// with t = 0 at the mode center crossing.
struct CavityMode {
  double omega0 = 2.0 * std::numbers::pi * 0.046;  // vacuum Rabi, rad/us
  double waist_mm = 5.96;
  double velocity_mm_us = 0.25;

  /// sqrt(pi) w / v, the effective time of a full mode crossing.
  double max_effective_time_us() const {
    return std::sqrt(std::numbers::pi) * waist_mm / velocity_mm_us;
  }
};

AtomFieldState make_atom_field(AtomLevel level, FieldVector field);

/// Effective interaction time between lab times t_start and t_end:
/// the integral of exp{-(v tau / w)^2}, evaluated via the error function.
/// Accepts infinite bounds; monotone in t_end and bounded by sqrt(pi) w/v.
double effective_time(double t_start_us, double t_end_us, const CavityMode& mode);

/// Lab time t > 0 at which effective_time(0, t) reaches t_eff.
/// Requires t_eff < max_effective_time / 2.
double invert_half_profile(double t_eff_us, const CavityMode& mode);

/// Resonant Jaynes-Cummings evolution for an effective time t_eff.
/// Within each invariant pair {|e,n>, |g,n+1>} the rotation with mixing
/// angle theta_n = omega0 sqrt(n+1) t_eff / 2 is applied:
///   e,n   ->  cos(theta_n) e,n - i sin(theta_n) g,n+1
///   g,n+1 -> -i sin(theta_n) e,n + cos(theta_n) g,n+1
/// |g,0> is invariant; |e,n_max> has no partner inside the truncation and
/// is left unchanged (states respecting the tail guard carry negligible
/// amplitude there).
AtomFieldState jc_propagate(const AtomFieldState& state, double t_eff_us, double omega0);

/// pi phase shift between the atomic levels: g amplitudes are negated,
/// e amplitudes unchanged. Any assignment of the relative pi phase is
/// equivalent up to a global phase.
AtomFieldState atomic_phase_flip(const AtomFieldState& state);

/// Relative phase accumulated between |g> and |e> by a Stark detuning
/// pulse: 2 pi * detuning * duration. (1.25 MHz over 0.4 us gives pi.)
double phase_flip_pulse_phase(double detuning_mhz, double duration_us);

/// Field-operator moments in a joint state; op acts on the field factor of
/// both atomic branches.
Moments expectation_and_variance(const OperatorMatrix& field_op, const AtomFieldState& state);

}  // namespace cavmet
