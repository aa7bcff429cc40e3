#include "cavmet/fockspace.hpp"

#include <cmath>
#include <string>

#include "cavmet/errors.hpp"

namespace cavmet {

namespace {

constexpr double kHermTol = 1e-10;

void require_hermitian(const OperatorMatrix& op) {
  const double dev = (op - op.adjoint()).cwiseAbs().maxCoeff();
  if (dev > kHermTol) {
    throw GuardError("operator is not Hermitian (max |op - op^H| = " + std::to_string(dev) + ")");
  }
}

}  // namespace

FieldVector coherent_state(double alpha, int n_max) {
  if (alpha < 0.0) throw ConfigError("coherent_state: alpha must be >= 0");
  if (n_max < 0) throw ConfigError("coherent_state: n_max must be >= 0");
  if (static_cast<double>(n_max) < alpha * alpha + 6.0 * alpha + 10.0) {
    throw GuardError("coherent_state: truncation too small for alpha = " + std::to_string(alpha) +
                     " (need n_max >= alpha^2 + 6 alpha + 10)");
  }

  FieldVector psi{Eigen::VectorXcd::Zero(n_max + 1)};
  double c = std::exp(-0.5 * alpha * alpha);
  psi.amps[0] = c;
  for (int n = 0; n < n_max; ++n) {
    c *= alpha / std::sqrt(n + 1.0);
    psi.amps[n + 1] = c;
  }

  // truncation adequacy: the top 5 levels plus everything beyond must be
  // negligible
  double tail = 1.0 - psi.norm_sq();
  for (int n = n_max - 4; n <= n_max; ++n) tail += std::norm(psi.amps[n]);
  if (tail > 1e-8) {
    throw GuardError("coherent_state: truncation tail above 1e-8");
  }
  return psi;
}

int displacement_interior_dim(double beta, int n_max) {
  const int guard = static_cast<int>(std::ceil(6.0 * std::abs(beta) * std::sqrt(double(n_max))));
  const int dim = n_max + 1 - guard;
  return dim > 0 ? dim : 0;
}

OperatorMatrix displacement_operator(double beta, int n_max) {
  if (n_max < 0) throw ConfigError("displacement_operator: n_max must be >= 0");
  if (std::abs(beta) > 0.25 * std::sqrt(double(n_max))) {
    throw GuardError("displacement_operator: |beta| exceeds 0.25 sqrt(n_max)");
  }

  // <n+d|D(beta)|n> = e^{-beta^2/2} beta^d sqrt(n!/(n+d)!) L_n^{(d)}(beta^2),
  // marched along each offset diagonal with the Laguerre three-term
  // recurrence and an incrementally updated prefactor. For real beta the
  // lower triangle follows from D(beta)^T = D(-beta).
  const int dim = n_max + 1;
  OperatorMatrix u = OperatorMatrix::Zero(dim, dim);
  const double x = beta * beta;
  const double gauss = std::exp(-0.5 * x);

  for (int d = 0; d < dim; ++d) {
    double pref = 1.0;  // beta^d sqrt(n!/(n+d)!) at n = 0
    for (int k = 1; k <= d; ++k) pref *= beta / std::sqrt(double(k));
    const double parity = (d % 2 == 0) ? 1.0 : -1.0;
    double l_prev = 0.0;  // L_{n-1}^{(d)}(x)
    double l_cur = 1.0;   // L_n^{(d)}(x)
    for (int n = 0; n + d < dim; ++n) {
      const double val = gauss * pref * l_cur;
      u(n + d, n) = val;
      u(n, n + d) = parity * val;
      const double l_next = ((2.0 * n + 1.0 + d - x) * l_cur - (n + d) * l_prev) / (n + 1.0);
      l_prev = l_cur;
      l_cur = l_next;
      pref *= std::sqrt((n + 1.0) / (n + 1.0 + d));
    }
  }
  return u;
}

OperatorMatrix quadrature_generator(int n_max) {
  if (n_max < 1) throw ConfigError("quadrature_generator: n_max must be >= 1");
  const int dim = n_max + 1;
  OperatorMatrix h = OperatorMatrix::Zero(dim, dim);
  for (int n = 0; n < n_max; ++n) {
    const double r = std::sqrt(n + 1.0);
    h(n + 1, n) = Complex(0.0, -r);
    h(n, n + 1) = Complex(0.0, r);
  }
  return h;
}

OperatorMatrix number_operator(int n_max) {
  if (n_max < 0) throw ConfigError("number_operator: n_max must be >= 0");
  const int dim = n_max + 1;
  OperatorMatrix n = OperatorMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = double(k);
  return n;
}

Moments expectation_and_variance(const OperatorMatrix& op, const FieldVector& state) {
  require_hermitian(op);
  if (!state.is_normalized()) {
    throw GuardError("expectation_and_variance: state is not normalized");
  }
  const Eigen::VectorXcd applied = op * state.amps;
  const Complex mean_c = state.amps.dot(applied);
  if (std::abs(mean_c.imag()) > 1e-10) {
    throw GuardError("expectation_and_variance: expectation has imaginary part");
  }
  const double mean = mean_c.real();
  // <op^2> = |op psi|^2 for Hermitian op
  double variance = applied.squaredNorm() - mean * mean;
  if (variance < -1e-10) {
    throw GuardError("expectation_and_variance: variance below round-off floor");
  }
  if (variance < 0.0) variance = 0.0;
  return {mean, variance};
}

FieldVector apply_operator(const OperatorMatrix& op, const FieldVector& state) {
  if (op.cols() != state.amps.size()) {
    throw ConfigError("apply: operator and state dimensions differ");
  }
  return FieldVector{op * state.amps};
}

}  // namespace cavmet
