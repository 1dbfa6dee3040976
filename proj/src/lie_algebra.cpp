#include "gaugelab/lie_algebra.hpp"

#include "gaugelab/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gaugelab {

namespace {

constexpr double kPi = std::numbers::pi;

// Gram-Schmidt `v` against the first `count` columns of `basis` (twice, for
// stability). Returns the norm of what is left.
double orthogonalize(Vector& v, const Matrix& basis, int count) {
  for (int pass = 0; pass < 2; ++pass) {
    for (int c = 0; c < count; ++c) {
      v -= basis.col(c).dot(v) * basis.col(c);
    }
  }
  return v.norm();
}

}  // namespace

SkewMatrix::SkewMatrix(const Matrix& entries, double tol) {
  if (entries.rows() != entries.cols()) {
    throw ValidationError("SkewMatrix: matrix must be square");
  }
  if (entries.rows() < 1) {
    throw ValidationError("SkewMatrix: dimension must be >= 1");
  }
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  const double defect = (entries + entries.transpose()).cwiseAbs().maxCoeff();
  if (defect > tol * scale) {
    throw ValidationError("SkewMatrix: input is not skew-symmetric (defect " +
                          std::to_string(defect) + ")");
  }
  m_ = 0.5 * (entries - entries.transpose());
}

SkewMatrix SkewMatrix::zero(int dim) {
  if (dim < 1) throw ValidationError("SkewMatrix: dimension must be >= 1");
  SkewMatrix x;
  x.m_ = Matrix::Zero(dim, dim);
  return x;
}

SkewMatrix SkewMatrix::generator(int dim, int i, int j) {
  if (i < 0 || j < 0 || i >= dim || j >= dim || i == j) {
    throw ValidationError("SkewMatrix::generator: bad plane indices");
  }
  SkewMatrix x = zero(dim);
  x.m_(j, i) = 1.0;
  x.m_(i, j) = -1.0;
  return x;
}

SkewMatrix SkewMatrix::from_block_angles(int dim, std::span<const double> angles) {
  if (2 * static_cast<int>(angles.size()) > dim) {
    throw ValidationError("SkewMatrix::from_block_angles: too many blocks for dimension");
  }
  SkewMatrix x = zero(dim);
  for (std::size_t j = 0; j < angles.size(); ++j) {
    const int p = 2 * static_cast<int>(j);
    x.m_(p, p + 1) = -angles[j];
    x.m_(p + 1, p) = angles[j];
  }
  return x;
}

double SkewMatrix::spectral_norm() const {
  if (m_.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m_);
  return svd.singularValues()(0);
}

SkewMatrix SkewMatrix::operator+(const SkewMatrix& o) const {
  SkewMatrix r;
  r.m_ = m_ + o.m_;
  return r;
}

SkewMatrix SkewMatrix::operator-(const SkewMatrix& o) const {
  SkewMatrix r;
  r.m_ = m_ - o.m_;
  return r;
}

SkewMatrix SkewMatrix::operator-() const {
  SkewMatrix r;
  r.m_ = -m_;
  return r;
}

SkewMatrix SkewMatrix::operator*(double s) const {
  SkewMatrix r;
  r.m_ = s * m_;
  return r;
}

Matrix StandardForm::block_matrix() const {
  Matrix b = Matrix::Zero(dim, dim);
  for (std::size_t j = 0; j < raw_angles.size(); ++j) {
    const int p = 2 * static_cast<int>(j);
    b(p, p + 1) = -raw_angles[j];
    b(p + 1, p) = raw_angles[j];
  }
  return b;
}

StandardForm standard_form(const SkewMatrix& x) {
  const int k = x.dim();
  const Matrix& m = x.matrix();
  StandardForm sf;
  sf.dim = k;
  sf.frame = Matrix::Zero(k, k);

  // -x^2 = x^T x is symmetric PSD with eigenvalues a_j^2 in pairs.
  const Matrix s = m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("standard_form: eigensolver failed");
  }
  const Matrix& vecs = eig.eigenvectors();
  const double zero_thr = 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff());

  int used = 0;
  // Largest eigenvalues first so the nonzero blocks lead.
  for (int c = k - 1; c >= 0 && used + 1 < k; --c) {
    Vector v = vecs.col(c);
    if (orthogonalize(v, sf.frame, used) < 0.5) continue;
    v.normalize();
    Vector w = m * v;
    if (w.norm() <= zero_thr) continue;
    if (orthogonalize(w, sf.frame, used) <= zero_thr) continue;
    w -= v.dot(w) * v;
    w.normalize();
    sf.frame.col(used) = v;
    sf.frame.col(used + 1) = w;
    sf.raw_angles.push_back(w.dot(m * v));
    used += 2;
  }
  // Complete with the kernel directions.
  for (int c = 0; c < k && used < k; ++c) {
    Vector v = vecs.col(c);
    if (orthogonalize(v, sf.frame, used) < 0.5) continue;
    sf.frame.col(used++) = v.normalized();
  }
  for (int c = 0; c < k && used < k; ++c) {
    Vector v = Vector::Unit(k, c);
    if (orthogonalize(v, sf.frame, used) < 0.5) continue;
    sf.frame.col(used++) = v.normalized();
  }
  if (used != k) throw NumericalError("standard_form: could not complete frame");

  sf.angles.reserve(sf.raw_angles.size());
  for (double a : sf.raw_angles) {
    double r = a - std::floor(a);
    if (r >= 1.0) r = 0.0;
    sf.angles.push_back(r);
  }
  return sf;
}

Matrix rotation2(double angle) {
  Matrix r(2, 2);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  r << c, -s, s, c;
  return r;
}

Matrix exp_skew(const SkewMatrix& x) {
  const StandardForm sf = standard_form(x);
  Matrix blocks = Matrix::Identity(sf.dim, sf.dim);
  for (std::size_t j = 0; j < sf.raw_angles.size(); ++j) {
    const int p = 2 * static_cast<int>(j);
    blocks.block(p, p, 2, 2) = rotation2(sf.raw_angles[j]);
  }
  return sf.frame * blocks * sf.frame.transpose();
}

Matrix exp_scaling_squaring(const Matrix& x) {
  const double norm = x.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  const Matrix y = x / std::ldexp(1.0, squarings);
  const auto n = x.rows();
  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int p = 1; p <= 20; ++p) {
    term = term * y / static_cast<double>(p);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

double orthogonality_defect(const Matrix& m) {
  const auto n = m.rows();
  return (m.transpose() * m - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

Matrix nearest_orthogonal(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

ConjugacyInvariant conjugacy_invariants(const Matrix& g) {
  if (g.rows() != g.cols() || g.rows() < 1) {
    throw ValidationError("conjugacy_invariants: matrix must be square");
  }
  if (orthogonality_defect(g) > 1e-8) {
    throw ValidationError("conjugacy_invariants: matrix is not orthogonal");
  }
  if (g.determinant() < 0) {
    throw ValidationError("conjugacy_invariants: matrix is not in SO(K)");
  }
  const int k = static_cast<int>(g.rows());
  ConjugacyInvariant inv;
  inv.dim = k;

  Eigen::RealSchur<Matrix> schur(g, /*computeU=*/false);
  const Matrix& t = schur.matrixT();
  int zeros = 0;
  int pis = 0;
  for (int i = 0; i < k;) {
    if (i + 1 < k && t(i + 1, i) != 0.0) {
      const double p = t(i, i), q = t(i, i + 1), r = t(i + 1, i), s = t(i + 1, i + 1);
      const double half_diff = 0.5 * (p - s);
      const double disc = -(half_diff * half_diff + q * r);
      const double re = 0.5 * (p + s);
      if (disc > 0) {
        inv.rotation_angles.push_back(std::atan2(std::sqrt(disc), re));
      } else {
        // Real pair that was not split off; classify each eigenvalue.
        const double root = std::sqrt(-disc);
        (re + root > 0 ? zeros : pis) += 1;
        (re - root > 0 ? zeros : pis) += 1;
      }
      i += 2;
    } else {
      (t(i, i) > 0 ? zeros : pis) += 1;
      i += 1;
    }
  }
  if (k % 2 == 1) zeros -= 1;  // the fixed axis of an odd rotation
  for (int i = 0; i < pis / 2; ++i) inv.rotation_angles.push_back(kPi);
  for (int i = 0; i < zeros / 2; ++i) inv.rotation_angles.push_back(0.0);
  std::sort(inv.rotation_angles.begin(), inv.rotation_angles.end());
  if (static_cast<int>(inv.rotation_angles.size()) != k / 2) {
    throw NumericalError("conjugacy_invariants: inconsistent eigenvalue pairing");
  }
  return inv;
}

double invariant_distance(const ConjugacyInvariant& a, const ConjugacyInvariant& b) {
  if (a.dim != b.dim || a.rotation_angles.size() != b.rotation_angles.size()) {
    throw ValidationError("invariant_distance: dimension mismatch");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.rotation_angles.size(); ++i) {
    d = std::max(d, std::abs(a.rotation_angles[i] - b.rotation_angles[i]));
  }
  return d;
}

}  // namespace gaugelab
