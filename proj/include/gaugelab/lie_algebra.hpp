#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace gaugelab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/**
 * Element of so(K): a real K x K matrix with x^T = -x.
 *
 * Construction from raw data checks skew-symmetry to 1e-12 (relative to the
 * largest entry) and stores the exact skew part, so every built value is
 * exactly antisymmetric.
 */
class SkewMatrix {
 public:
  SkewMatrix() = default;
  explicit SkewMatrix(const Matrix& entries, double tol = 1e-12);

  static SkewMatrix zero(int dim);
  // Generator of rotation in the (i, j) plane: entry (j, i) = 1, (i, j) = -1.
  static SkewMatrix generator(int dim, int i, int j);
  // Block-diagonal [[0,-a],[a,0]] blocks on the planes (0,1), (2,3), ...
  static SkewMatrix from_block_angles(int dim, std::span<const double> angles);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double norm() const { return m_.norm(); }
  // Largest |eigenvalue|, i.e. the largest block angle.
  double spectral_norm() const;

  SkewMatrix operator+(const SkewMatrix& o) const;
  SkewMatrix operator-(const SkewMatrix& o) const;
  SkewMatrix operator-() const;
  SkewMatrix operator*(double s) const;
  friend SkewMatrix operator*(double s, const SkewMatrix& x) { return x * s; }

 private:
  Matrix m_;
};

/// Block normal form of a skew matrix.
///
/// `frame^T * x * frame` is block-diagonal with blocks [[0,-r_j],[r_j,0]]
/// (r_j = raw_angles[j] > 0) followed by a zero block. `angles` holds r_j
/// reduced mod 1 into [0, 1); the integer part is a winding gauge.
struct StandardForm {
  int dim = 0;
  std::vector<double> angles;
  std::vector<double> raw_angles;
  Matrix frame;

  int blocks() const { return static_cast<int>(angles.size()); }
  // Block matrix built from raw_angles; frame * block_matrix() * frame^T == x.
  Matrix block_matrix() const;
};

/// Numerical representative of an SO(K) conjugacy class: floor(K/2) rotation
/// angles in [0, pi], sorted ascending.
struct ConjugacyInvariant {
  int dim = 0;
  std::vector<double> rotation_angles;
};

// Max abs difference of the sorted angle lists; dimensions must match.
double invariant_distance(const ConjugacyInvariant& a, const ConjugacyInvariant& b);

StandardForm standard_form(const SkewMatrix& x);

// exp(x) via the block normal form; exact up to rounding for skew input.
Matrix exp_skew(const SkewMatrix& x);

// General-purpose scaling-and-squaring Taylor exponential. Independent of the
// block route and used to cross-check it.
Matrix exp_scaling_squaring(const Matrix& x);

ConjugacyInvariant conjugacy_invariants(const Matrix& g);

Matrix rotation2(double angle);

// Closest orthogonal matrix in Frobenius norm (polar factor).
Matrix nearest_orthogonal(const Matrix& m);

double orthogonality_defect(const Matrix& m);

}  // namespace gaugelab
