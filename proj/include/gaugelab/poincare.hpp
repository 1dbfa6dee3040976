#pragma once

#include "gaugelab/holonomy.hpp"
#include "gaugelab/lie_algebra.hpp"

#include <vector>

namespace gaugelab {

/// Sharp Poincare constant C(A) = min_j min_k (k + a_j)^2, with the value 1
/// for integer angles and for the trivial (no block) case.
struct PoincareConstant {
  double value = 1.0;
  bool trivial = true;  // no non-integer block angle
  int block = -1;       // attaining block index, -1 when trivial
  int k = 0;            // attaining integer shift; the smaller one on ties
};

PoincareConstant poincare_constant(const StandardForm& sf);
// From the holonomy class alone: block angle a_j and the rotation angle
// phi_j = 2*pi*a_j (mod 2*pi, folded into [0, pi]) give the same min_k.
PoincareConstant poincare_constant(const ConjugacyInvariant& holonomy_class);

struct SpectrumReport {
  std::vector<double> eigenvalues;  // ascending
  int kernel_dim = 0;               // eigenvalues below kKernelThreshold
  double first_positive = 0.0;
};

inline constexpr double kKernelThreshold = 1e-8;

// Number of grid points used for `n_modes`: the odd count 2*floor(n_modes/2)+1,
// carrying Fourier modes -n_modes/2 .. n_modes/2.
int spectral_grid_size(int n_modes);

/**
 * Covariant derivative d/dtheta + a(theta) on a uniform periodic grid of odd
 * size N, using the Fourier differentiation matrix for d/dtheta.
 *
 * The assembled NK x NK matrix is exactly antisymmetric, so the discrete
 * operator L_a = D_a^T D_a is symmetric positive semidefinite and
 * <D_a u, D_a v> = <u, L_a v> holds exactly. Sections are stored as K x N
 * matrices, one column per grid node.
 */
class CovariantDerivative {
 public:
  CovariantDerivative(const CircleConnection& c, int grid_size);

  int dim() const { return dim_; }
  int grid_size() const { return n_; }
  double spacing() const;
  std::vector<double> thetas() const;

  const Matrix& matrix() const { return d_; }
  Matrix operator_matrix() const;  // D_a^T D_a

  Matrix apply(const Matrix& section) const;
  // Discrete L^2 inner product and norm, sum over nodes times spacing.
  double inner(const Matrix& u, const Matrix& v) const;

 private:
  int dim_;
  int n_;
  Matrix d_;
};

SpectrumReport covariant_spectrum(const CircleConnection& c, int n_modes);

struct Eigenpairs {
  Vector values;  // ascending
  Matrix vectors; // columns, stacked as K x N sections column-major
};
Eigenpairs covariant_eigenpairs(const CircleConnection& c, int n_modes);

// Parallel periodic sections v(theta) = g(theta) v0, v0 in the fixed space of
// the holonomy g(2*pi); orthonormal in the discrete L^2 product on the grid.
std::vector<Matrix> kernel_basis(const CircleConnection& c, int grid_size);

struct PoincareReport {
  double ratio = 0.0;
  double constant = 0.0;  // C(A)
  double slack = 0.0;     // C(A) * c0 * h^2
  double threshold = 0.0; // C(A)(1 - 1e-6) - slack
  bool violated = false;
  int kernel_dim = 0;
};

inline constexpr double kPoincareSlackFactor = 10.0;

// Caches the operator, kernel and C(A) for repeated checks on one grid.
class PoincareVerifier {
 public:
  PoincareVerifier(const CircleConnection& c, int grid_size);

  // R = |D_a u|^2 / |u|^2 after removing the kernel_basis component of u.
  PoincareReport first_order(const Matrix& u) const;
  // R2 = |D_a^2 u|^2 / |D_a u|^2; no projection needed since D_a u is already
  // orthogonal to the kernel.
  PoincareReport second_order(const Matrix& u) const;

  double constant() const { return constant_; }
  int kernel_dim() const { return static_cast<int>(kernel_.size()); }

 private:
  PoincareReport report(double ratio, int kernel_dim) const;
  void check_shape(const Matrix& u) const;

  CovariantDerivative d_;
  std::vector<Matrix> kernel_;
  double constant_;
};

PoincareReport verify_poincare(const CircleConnection& c, const Matrix& u);
PoincareReport verify_poincare_second_order(const CircleConnection& c, const Matrix& u);

}  // namespace gaugelab
