#include "cavmet/fisher.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cavmet/errors.hpp"

namespace cavmet {

namespace {

constexpr double kProbClip = 1e-4;

double fringe_f(double c, double slope, double gamma) {
  const double s2 = std::sin(gamma) * std::sin(gamma);
  const double denom = 1.0 - c * c * std::cos(gamma) * std::cos(gamma);
  if (denom <= 0.0) {
    // c = 1 with sin(gamma) = 0: the 0/0 limit of the fringe information
    return slope * slope;
  }
  return c * c * slope * slope * s2 / denom;
}

}  // namespace

double fi_binary(double p, double dp_dbeta) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("fi_binary: p must lie strictly inside (0, 1)");
  }
  return dp_dbeta * dp_dbeta / (p * (1.0 - p));
}

double fi_analytic(double beta, const ProtocolParams& p) {
  ProtocolParams q = p;
  q.beta = beta;
  const double c = contrast(q.t1_us, q.t2_us, q.omega0());
  return fringe_f(c, fringe_phase_slope(q), fringe_phase_analytic(q));
}

double fi_analytic_detection(double beta, const ProtocolParams& p, double eps) {
  ProtocolParams q = p;
  q.beta = beta;
  const double c = contrast(q.t1_us, q.t2_us, q.omega0());
  const double gamma = fringe_phase_analytic(q);
  const double slope = fringe_phase_slope(q);
  const double pg = apply_detection_error(0.5 * (1.0 + c * std::cos(gamma)), eps);
  const double dp = -(1.0 - 2.0 * eps) * 0.5 * c * slope * std::sin(gamma);
  if (pg <= 0.0 || pg >= 1.0) {
    // eps = 0 at a fringe extremum: fall back to the limit of the clean model
    return fringe_f(c, slope, gamma);
  }
  return dp * dp / (pg * (1.0 - pg));
}

double fi_midfringe(double t1_us, double t2_us, double omega0) {
  const double c = contrast(t1_us, t2_us, omega0);
  const double s = omega0 * t2_us;
  return c * c * s * s;
}

OptimalT2 optimal_t2(double t1_us, double omega0) {
  if (t1_us < 0.0) throw ConfigError("optimal_t2: t1 must be >= 0");
  if (omega0 <= 0.0) throw ConfigError("optimal_t2: omega0 must be > 0");
  const double a = omega0 * t1_us;
  const double x = 0.5 * (a + std::sqrt(a * a + 16.0));
  const double t2 = x / omega0;
  return {t2, fi_midfringe(t1_us, t2, omega0)};
}

double qfi_numeric(const FieldVector& state) {
  const auto m = expectation_and_variance(quadrature_generator(state.n_max()), state);
  return 4.0 * m.variance;
}

double qfi_numeric(const AtomFieldState& state) {
  const auto m = expectation_and_variance(quadrature_generator(state.n_max()), state);
  return 4.0 * m.variance;
}

QfiAnalytic qfi_analytic(const ProtocolParams& p) {
  if (p.alpha <= 0.0) throw ConfigError("qfi_analytic: alpha must be > 0");
  const double d = resource_separation(p);
  const double a = p.omega0() * p.t1_us;
  return {4.0 * (1.0 + d * d), 4.0 + a * a, 16.0 * p.alpha * p.alpha, d};
}

FringeFit fi_from_fringes(const FringeDataset& data, int fit_degree) {
  const int n = static_cast<int>(data.beta_grid.size());
  if (n != static_cast<int>(data.p_hat.size()) ||
      (!data.trials.empty() && n != static_cast<int>(data.trials.size()))) {
    throw ConfigError("fi_from_fringes: array lengths differ");
  }
  if (fit_degree < 1) throw ConfigError("fi_from_fringes: fit_degree must be >= 1");
  if (n < fit_degree + 3) {
    throw ConfigError("fi_from_fringes: need at least fit_degree + 3 points");
  }
  for (int i = 1; i < n; ++i) {
    if (!(data.beta_grid[i] > data.beta_grid[i - 1])) {
      throw ConfigError("fi_from_fringes: beta grid must be strictly increasing");
    }
  }
  const double lo = data.beta_grid.front();
  const double hi = data.beta_grid.back();
  if (lo > 0.0 || hi < 0.0) {
    throw ConfigError("fi_from_fringes: beta grid must bracket beta = 0");
  }

  int clipped = 0;
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double p = data.p_hat[i];
    if (p < 0.0 || p > 1.0) throw ConfigError("fi_from_fringes: p_hat outside [0, 1]");
    const double pc = std::clamp(p, kProbClip, 1.0 - kProbClip);
    if (pc != p) ++clipped;
    y[i] = pc;
  }

  // fit on the scaled domain u in [-1, 1] to keep the Vandermonde tame
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  Eigen::MatrixXd vander(n, fit_degree + 1);
  for (int i = 0; i < n; ++i) {
    const double u = (data.beta_grid[i] - mid) / half;
    double pw = 1.0;
    for (int j = 0; j <= fit_degree; ++j) {
      vander(i, j) = pw;
      pw *= u;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(vander, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cond =
      svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
  if (!(cond < 1e8)) {
    throw ConfigError("fi_from_fringes: fit is ill-conditioned (condition ~" +
                      std::to_string(cond) + "); reduce fit_degree");
  }
  const Eigen::VectorXd coef = svd.solve(y);

  auto eval = [&](double u, bool derivative) {
    double acc = 0.0;
    double pw = 1.0;
    for (int j = derivative ? 1 : 0; j <= fit_degree; ++j) {
      acc += (derivative ? j * coef[j] : coef[j]) * pw;
      pw *= u;
    }
    return acc;
  };
  auto fi_at = [&](double beta) {
    const double u = (beta - mid) / half;
    const double p = std::clamp(eval(u, false), kProbClip, 1.0 - kProbClip);
    const double dp = eval(u, true) / half;
    return fi_binary(p, dp);
  };

  FringeFit fit;
  fit.f_curve.reserve(n);
  for (int i = 0; i < n; ++i) fit.f_curve.push_back(fi_at(data.beta_grid[i]));
  fit.f_at_zero = fi_at(0.0);
  fit.clipped_points = clipped;
  fit.coefficients.assign(coef.data(), coef.data() + coef.size());
  return fit;
}

FisherReport precision_report(double f) {
  return precision_report(f, std::numeric_limits<double>::quiet_NaN());
}

FisherReport precision_report(double f, double f_q) {
  if (!(f > 0.0)) throw ConfigError("precision_report: F must be > 0");
  return {f, f_q, f_sql, 1.0 / std::sqrt(f), 5.0 * std::log10(f / f_sql)};
}

}  // namespace cavmet
