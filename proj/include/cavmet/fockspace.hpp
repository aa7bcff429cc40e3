#pragma once

#include <Eigen/Dense>
#include <complex>

namespace cavmet {

using Complex = std::complex<double>;

/// Dense operator on the truncated Fock space, shape (n_max+1) x (n_max+1).
using OperatorMatrix = Eigen::MatrixXcd;

/// Cavity field state over the truncated Fock basis {|0>, ..., |n_max>}.
/// amps[n] is the amplitude of |n>. Branch vectors of an entangled state
/// may carry squared norm below one; standalone states are normalized.
struct FieldVector {
  Eigen::VectorXcd amps;

  int n_max() const { return static_cast<int>(amps.size()) - 1; }
  double norm_sq() const { return amps.squaredNorm(); }
  bool is_normalized(double tol = 1e-9) const {
    return std::abs(norm_sq() - 1.0) <= tol;
  }
};

struct Moments {
  double mean;
  double variance;
};

/// |alpha> = e^{-alpha^2/2} sum_n alpha^n / sqrt(n!) |n>, alpha >= 0.
/// Requires n_max >= alpha^2 + 6 alpha + 10 so that the truncated tail
/// carries less than 1e-8 of the population.
FieldVector coherent_state(double alpha, int n_max);

/// Matrix of D(beta) = exp{beta (a^dag - a)} for real beta, built from the
/// associated-Laguerre closed form. Unitary to 1e-8 on the interior
/// subspace n <= displacement_interior_dim(beta, n_max) - 1.
/// Requires |beta| <= 0.25 sqrt(n_max).
OperatorMatrix displacement_operator(double beta, int n_max);

/// Dimension of the trusted interior subspace of displacement_operator,
/// n_max + 1 - ceil(6 |beta| sqrt(n_max)), clamped at zero.
int displacement_interior_dim(double beta, int n_max);

/// h = -i (a^dag - a), the Hermitian generator of real displacements:
/// <m|h|n> = -i sqrt(n+1) delta_{m,n+1} + i sqrt(n) delta_{m,n-1}.
OperatorMatrix quadrature_generator(int n_max);

/// diag(0, 1, ..., n_max).
OperatorMatrix number_operator(int n_max);

/// Mean and variance of a Hermitian operator in a normalized pure state.
/// Variance round-off down to -1e-10 is clamped to zero.
Moments expectation_and_variance(const OperatorMatrix& op, const FieldVector& state);

FieldVector apply_operator(const OperatorMatrix& op, const FieldVector& state);

}  // namespace cavmet
