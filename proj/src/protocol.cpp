#include "cavmet/protocol.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cavmet/errors.hpp"
#include "cavmet/rng.hpp"

namespace cavmet {

namespace {

// t1 and t2 are treated as equal when they agree to relative 1e-12; the
// analytic fringe then takes its exact 2 D beta form.
bool symmetric_times(const ProtocolParams& p) {
  const double scale = std::max({1.0, std::abs(p.t1_us), std::abs(p.t2_us)});
  return std::abs(p.t1_us - p.t2_us) <= 1e-12 * scale;
}

void validate(const ProtocolParams& p) {
  if (p.alpha < 0.0) throw ConfigError("protocol: alpha must be >= 0");
  if (p.t1_us < 0.0 || p.t2_us < 0.0) throw ConfigError("protocol: times must be >= 0");
  if (p.n_max < 1) throw ConfigError("protocol: n_max must be >= 1");

  // tail guard for the displaced amplitude alpha + |beta|: population of a
  // Poisson(mu) photon distribution above n_max - 5 must stay below 1e-8
  const double a = p.alpha + std::abs(p.beta);
  const double mu = a * a;
  double w = std::exp(-mu);
  double tail = 0.0;
  for (int n = 1; n <= p.n_max + 200; ++n) {
    w *= mu / n;
    if (n > p.n_max - 5) tail += w;
  }
  if (tail > 1e-8) {
    throw GuardError("protocol: truncation tail above 1e-8 for displaced amplitude " +
                     std::to_string(a));
  }
}

// Nodes and weights of n-point Gauss-Hermite quadrature for the weight
// e^{-x^2}, from the symmetric tridiagonal Jacobi matrix (off-diagonal
// sqrt(k/2)); weights are sqrt(pi) times the squared first eigenvector
// components.
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(0.5 * k);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = solver.eigenvalues()[i];
    const double v0 = solver.eigenvectors()(0, i);
    weights[i] = std::sqrt(std::numbers::pi) * v0 * v0;
  }
}

}  // namespace

double contrast(double t1_us, double t2_us, double omega0) {
  const double d = omega0 * (t1_us - t2_us);
  return std::exp(-d * d / 8.0);
}

double component_rotation(const ProtocolParams& p) {
  if (p.alpha <= 0.0) throw ConfigError("component_rotation: alpha must be > 0");
  return p.omega0() * p.t1_us / (4.0 * p.alpha);
}

double resource_separation(const ProtocolParams& p) {
  return 2.0 * p.alpha * std::sin(component_rotation(p));
}

double fringe_phase_analytic(const ProtocolParams& p) {
  if (symmetric_times(p)) {
    return 2.0 * resource_separation(p) * p.beta;
  }
  return p.omega0() * p.t2_us * p.beta + p.omega0() * p.alpha * (p.t2_us - p.t1_us);
}

double fringe_phase_slope(const ProtocolParams& p) {
  if (symmetric_times(p)) return 2.0 * resource_separation(p);
  return p.omega0() * p.t2_us;
}

double pg_analytic(const ProtocolParams& p) {
  const double c = contrast(p.t1_us, p.t2_us, p.omega0());
  return 0.5 * (1.0 + c * std::cos(fringe_phase_analytic(p)));
}

AtomFieldState prepare_resource_state(const ProtocolParams& p) {
  validate(p);
  auto state = make_atom_field(p.initial_atom, coherent_state(p.alpha, p.n_max));
  return jc_propagate(state, p.t1_us, p.omega0());
}

ProtocolResult run_protocol_numeric(const ProtocolParams& p) {
  AtomFieldState state = prepare_resource_state(p);
  if (p.flip_enabled) state = atomic_phase_flip(state);
  if (p.beta != 0.0) {
    const OperatorMatrix d = displacement_operator(p.beta, p.n_max);
    state.g_amps = apply_operator(d, state.g_amps);
    state.e_amps = apply_operator(d, state.e_amps);
  }
  state = jc_propagate(state, p.t2_us, p.omega0());
  if (std::abs(state.norm_sq() - 1.0) > 1e-9) {
    throw GuardError("run_protocol_numeric: norm drifted beyond 1e-9");
  }
  return {state.p_g(), std::move(state)};
}

double apply_detection_error(double p, double eps) {
  if (p < 0.0 || p > 1.0) throw ConfigError("apply_detection_error: p outside [0, 1]");
  if (eps < 0.0 || eps >= 0.5) throw ConfigError("apply_detection_error: eps outside [0, 0.5)");
  return eps + (1.0 - 2.0 * eps) * p;
}

std::pair<double, double> lab_switching_times(const ProtocolParams& p) {
  const double t_a = -invert_half_profile(p.t1_us, p.mode);
  const double t_b = invert_half_profile(p.t2_us, p.mode);
  return {t_a, t_b};
}

double pg_with_imperfections(const ProtocolParams& p, const ImperfectionModel& model,
                             std::uint64_t mc_seed) {
  if (model.detection_error < 0.0 || model.detection_error >= 0.5) {
    throw ConfigError("imperfections: detection_error outside [0, 0.5)");
  }
  if (model.position_sigma_mm < 0.0) {
    throw ConfigError("imperfections: position_sigma must be >= 0");
  }

  double p_avg;
  if (model.position_sigma_mm == 0.0) {
    p_avg = run_protocol_numeric(p).p_g;
  } else {
    if (model.n_spread_samples < 1) {
      throw ConfigError("imperfections: n_spread_samples must be >= 1");
    }
    const auto [t_a, t_b] = lab_switching_times(p);

    // precompute the displacement once; the offset changes only the times
    OperatorMatrix disp;
    if (p.beta != 0.0) disp = displacement_operator(p.beta, p.n_max);
    const FieldVector initial_field = coherent_state(p.alpha, p.n_max);

    auto run_at_offset = [&](double delta_mm) {
      const double t_shift = delta_mm / p.mode.velocity_mm_us;
      const double t1 = effective_time(t_a - t_shift, -t_shift, p.mode);
      const double t2 = effective_time(-t_shift, t_b - t_shift, p.mode);
      auto state = make_atom_field(p.initial_atom, initial_field);
      state = jc_propagate(state, t1, p.omega0());
      if (p.flip_enabled) state = atomic_phase_flip(state);
      if (p.beta != 0.0) {
        state.g_amps = apply_operator(disp, state.g_amps);
        state.e_amps = apply_operator(disp, state.e_amps);
      }
      state = jc_propagate(state, t2, p.omega0());
      return state.p_g();
    };

    if (model.spread_rule == SpreadRule::gauss_hermite) {
      std::vector<double> nodes, weights;
      gauss_hermite(model.n_spread_samples, nodes, weights);
      double acc = 0.0;
      for (int i = 0; i < model.n_spread_samples; ++i) {
        const double delta = std::numbers::sqrt2 * model.position_sigma_mm * nodes[i];
        acc += weights[i] * run_at_offset(delta);
      }
      p_avg = acc / std::sqrt(std::numbers::pi);
    } else {
      RngStream rng(mc_seed, 0);
      double acc = 0.0;
      for (int i = 0; i < model.n_spread_samples; ++i) {
        acc += run_at_offset(model.position_sigma_mm * rng.normal());
      }
      p_avg = acc / model.n_spread_samples;
    }
  }
  return apply_detection_error(p_avg, model.detection_error);
}

double measure_fringe_phase(const ProtocolParams& p, double beta_to, int n_steps) {
  if (n_steps < 3) throw ConfigError("measure_fringe_phase: need at least 3 steps");

  std::vector<double> pg(n_steps);
  for (int k = 0; k < n_steps; ++k) {
    ProtocolParams q = p;
    q.beta = beta_to * k / (n_steps - 1.0);
    pg[k] = run_protocol_numeric(q).p_g;
  }

  // P_g(beta) = mid + c cos(phi(beta)). Estimate mid and contrast from the
  // sweep, then unwrap phi: arccos fixes |phi| mod 2 pi, the branch is
  // chosen by linear trend prediction, which carries the unwrapping through
  // the fringe extrema.
  const double hi = *std::max_element(pg.begin(), pg.end());
  const double lo = *std::min_element(pg.begin(), pg.end());
  const double mid = 0.5 * (hi + lo);
  const double c = std::max({0.5 * (hi - lo), hi - 0.5, 0.5 - lo, 1e-6});

  auto wrapped = [&](int k) {
    const double u = std::clamp((pg[k] - mid) / c, -1.0, 1.0);
    return std::acos(u);  // in [0, pi]
  };

  double phi_prev2 = 0.0;  // phase at beta = 0 by construction
  double phi_prev = wrapped(1);
  for (int k = 2; k < n_steps; ++k) {
    const double theta = wrapped(k);
    const double predicted = 2.0 * phi_prev - phi_prev2;
    double best = theta;
    double best_dist = std::abs(theta - predicted);
    for (int sign = -1; sign <= 1; sign += 2) {
      for (int m = -1; m <= 2; ++m) {
        const double cand = sign * theta + 2.0 * std::numbers::pi * m;
        const double dist = std::abs(cand - predicted);
        if (dist < best_dist) {
          best = cand;
          best_dist = dist;
        }
      }
    }
    phi_prev2 = phi_prev;
    phi_prev = best;
  }
  return phi_prev;
}

}  // namespace cavmet
