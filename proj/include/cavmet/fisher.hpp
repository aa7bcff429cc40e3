#pragma once

#include <vector>

#include "cavmet/protocol.hpp"

namespace cavmet {

/// QFI of any coherent resource state; the standard quantum limit.
inline constexpr double f_sql = 4.0;

struct FisherReport {
  double f;           // per-realization Fisher information
  double f_q;         // quantum Fisher information of the resource (NaN if unset)
  double f_sql;       // 4
  double delta_beta;  // 1 / sqrt(F)
  double db_gain;     // 10 log10 sqrt(F / F_SQL)
};

/// Two-outcome Fisher information (dp/dbeta)^2 / (p (1-p)). Requires 0 < p < 1.
double fi_binary(double p, double dp_dbeta);

/// Fisher information of the analytic fringe,
/// F = C^2 s^2 sin^2(gamma) / (1 - C^2 cos^2(gamma)) with s = dgamma/dbeta.
/// At C = 1 with sin(gamma) = 0 the limit value s^2 is returned.
double fi_analytic(double beta, const ProtocolParams& p);

/// Same, with the detection-error channel composed into the signal.
double fi_analytic_detection(double beta, const ProtocolParams& p, double eps);

/// Mid-fringe maximum C^2 omega0^2 t2^2 (the cos(gamma) = 0 value).
double fi_midfringe(double t1_us, double t2_us, double omega0);

struct OptimalT2 {
  double t2_us;
  double f_star;
};

/// Measurement time maximizing the mid-fringe information at fixed t1:
/// with a = omega0 t1, omega0 t2* = (a + sqrt(a^2 + 16)) / 2, the unique
/// positive root of x^2 - a x - 4 = 0.
OptimalT2 optimal_t2(double t1_us, double omega0);

/// Quantum Fisher information of a pure state for real displacements:
/// 4 x variance of the generator h = -i (a^dag - a).
double qfi_numeric(const FieldVector& state);
double qfi_numeric(const AtomFieldState& state);

struct QfiAnalytic {
  double f_q;            // 4 (1 + D^2), D = 2 alpha sin(Phi)
  double f_q_small_phi;  // 4 + omega0^2 t1^2
  double heisenberg;     // 16 alpha^2, the Phi = pi/2 ceiling
  double separation;     // D
};
QfiAnalytic qfi_analytic(const ProtocolParams& p);

/// Sampled interference signal P_g(beta).
struct FringeDataset {
  std::vector<double> beta_grid;  // strictly increasing
  std::vector<double> p_hat;      // estimates in [0, 1]
  std::vector<long> trials;       // repetitions behind each estimate
};

struct FringeFit {
  std::vector<double> f_curve;       // FI at each grid point
  double f_at_zero;                  // FI of the fit at beta = 0
  int clipped_points;                // p_hat values clipped into [1e-4, 1-1e-4]
  std::vector<double> coefficients;  // fit polynomial on the scaled domain
};

/// Least-squares polynomial interpolation of the fringe and the Fisher
/// information of the fitted signal. Needs at least fit_degree + 3 points;
/// a condition estimate above 1e8 raises an error advising a lower degree.
FringeFit fi_from_fringes(const FringeDataset& data, int fit_degree = 6);

/// Precision summary for a per-realization Fisher information F.
FisherReport precision_report(double f);
FisherReport precision_report(double f, double f_q);

}  // namespace cavmet
