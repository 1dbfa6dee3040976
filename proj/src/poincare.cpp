#include "gaugelab/poincare.hpp"

#include "gaugelab/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gaugelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// Rotation angles below this count as identity blocks.
constexpr double kTrivialAngle = 1e-8;

void consider_block(PoincareConstant& pc, int block, double a) {
  if (a == 0.0) return;  // integer angle: lambda_j = 1
  const bool upper = (1.0 - a) * (1.0 - a) <= a * a;
  const double lambda = upper ? (1.0 - a) * (1.0 - a) : a * a;
  const int k = upper ? -1 : 0;
  if (pc.trivial || lambda < pc.value) {
    pc.value = lambda;
    pc.block = block;
    pc.k = k;
    pc.trivial = false;
  }
}

void check_section(const CovariantDerivative& d, const Matrix& u) {
  if (u.rows() != d.dim() || u.cols() != d.grid_size()) {
    throw ValidationError("section shape does not match the connection grid");
  }
}

}  // namespace

PoincareConstant poincare_constant(const StandardForm& sf) {
  PoincareConstant pc;
  for (int j = 0; j < sf.blocks(); ++j) consider_block(pc, j, sf.angles[j]);
  return pc;
}

PoincareConstant poincare_constant(const ConjugacyInvariant& holonomy_class) {
  PoincareConstant pc;
  const auto& phis = holonomy_class.rotation_angles;
  for (std::size_t j = 0; j < phis.size(); ++j) {
    if (phis[j] < kTrivialAngle) continue;
    consider_block(pc, static_cast<int>(j), phis[j] / kTwoPi);
  }
  return pc;
}

int spectral_grid_size(int n_modes) { return 2 * (n_modes / 2) + 1; }

CovariantDerivative::CovariantDerivative(const CircleConnection& c, int grid_size)
    : dim_(c.dim()), n_(grid_size) {
  if (n_ < 3 || n_ % 2 == 0) {
    throw ValidationError("CovariantDerivative: grid size must be odd and >= 3");
  }
  const double h = spacing();
  const int nk = n_ * dim_;
  d_ = Matrix::Zero(nk, nk);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (i == j) continue;
      const int diff = i - j;
      const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
      const double entry = 0.5 * sign / std::sin(0.5 * diff * h);
      for (int k = 0; k < dim_; ++k) d_(i * dim_ + k, j * dim_ + k) = entry;
    }
  }
  for (int i = 0; i < n_; ++i) {
    const Matrix a = c(i * h);
    // Keep the assembled operator exactly antisymmetric.
    d_.block(i * dim_, i * dim_, dim_, dim_) += 0.5 * (a - a.transpose());
  }
}

double CovariantDerivative::spacing() const { return kTwoPi / n_; }

std::vector<double> CovariantDerivative::thetas() const {
  std::vector<double> t(n_);
  for (int i = 0; i < n_; ++i) t[i] = i * spacing();
  return t;
}

Matrix CovariantDerivative::operator_matrix() const { return d_.transpose() * d_; }

Matrix CovariantDerivative::apply(const Matrix& section) const {
  Eigen::Map<const Vector> flat(section.data(), section.size());
  Vector out = d_ * flat;
  return Eigen::Map<Matrix>(out.data(), dim_, n_);
}

double CovariantDerivative::inner(const Matrix& u, const Matrix& v) const {
  return u.cwiseProduct(v).sum() * spacing();
}

SpectrumReport covariant_spectrum(const CircleConnection& c, int n_modes) {
  if (n_modes < 16) throw ValidationError("covariant_spectrum: n_modes must be >= 16");
  const CovariantDerivative d(c, spectral_grid_size(n_modes));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(d.operator_matrix(), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("covariant_spectrum: eigensolver did not converge");
  }
  SpectrumReport rep;
  const Vector& vals = eig.eigenvalues();
  rep.eigenvalues.assign(vals.data(), vals.data() + vals.size());
  for (double& v : rep.eigenvalues) v = std::max(v, 0.0);
  rep.kernel_dim = static_cast<int>(
      std::count_if(rep.eigenvalues.begin(), rep.eigenvalues.end(),
                    [](double v) { return v < kKernelThreshold; }));
  if (rep.kernel_dim >= static_cast<int>(rep.eigenvalues.size())) {
    throw NumericalError("covariant_spectrum: no positive eigenvalue resolved");
  }
  rep.first_positive = rep.eigenvalues[rep.kernel_dim];
  return rep;
}

Eigenpairs covariant_eigenpairs(const CircleConnection& c, int n_modes) {
  if (n_modes < 16) throw ValidationError("covariant_eigenpairs: n_modes must be >= 16");
  const CovariantDerivative d(c, spectral_grid_size(n_modes));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(d.operator_matrix());
  if (eig.info() != Eigen::Success) {
    throw NumericalError("covariant_eigenpairs: eigensolver did not converge");
  }
  return {eig.eigenvalues(), eig.eigenvectors()};
}

std::vector<Matrix> kernel_basis(const CircleConnection& c, int grid_size) {
  if (grid_size < 3) throw ValidationError("kernel_basis: grid too small");
  const int k = c.dim();
  const int substeps = std::max(1, 4096 / grid_size);
  const std::vector<Matrix> g = transport_along_grid(c, grid_size, substeps);
  const Matrix& hol = g.back();

  Eigen::JacobiSVD<Matrix> svd(hol - Matrix::Identity(k, k), Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  std::vector<Matrix> basis;
  const double h = kTwoPi / grid_size;
  const double norm = 1.0 / std::sqrt(grid_size * h);
  for (int col = 0; col < k; ++col) {
    if (sv(col) >= kKernelThreshold) continue;
    const Vector v0 = svd.matrixV().col(col);
    Matrix section(k, grid_size);
    for (int i = 0; i < grid_size; ++i) section.col(i) = norm * (g[i] * v0);
    basis.push_back(std::move(section));
  }
  return basis;
}

PoincareVerifier::PoincareVerifier(const CircleConnection& c, int grid_size)
    : d_(c, grid_size),
      kernel_(kernel_basis(c, grid_size)),
      constant_(poincare_constant(holonomy(c)).value) {}

void PoincareVerifier::check_shape(const Matrix& u) const { check_section(d_, u); }

PoincareReport PoincareVerifier::report(double ratio, int kernel_dim) const {
  PoincareReport rep;
  rep.ratio = ratio;
  rep.constant = constant_;
  const double h = d_.spacing();
  rep.slack = constant_ * kPoincareSlackFactor * h * h;
  rep.threshold = constant_ * (1.0 - 1e-6) - rep.slack;
  rep.violated = ratio < rep.threshold;
  rep.kernel_dim = kernel_dim;
  return rep;
}

PoincareReport PoincareVerifier::first_order(const Matrix& u) const {
  check_shape(u);
  Matrix proj = u;
  for (const auto& kv : kernel_) proj -= d_.inner(kv, proj) * kv;
  const double unorm = d_.inner(u, u);
  const double pnorm = d_.inner(proj, proj);
  if (!(pnorm > 1e-24 * std::max(unorm, 1e-300)) || pnorm == 0.0) {
    throw DegenerateInputError("verify_poincare: section lies in the kernel");
  }
  const Matrix du = d_.apply(proj);
  return report(d_.inner(du, du) / pnorm, kernel_dim());
}

PoincareReport PoincareVerifier::second_order(const Matrix& u) const {
  check_shape(u);
  const Matrix du = d_.apply(u);
  const double denom = d_.inner(du, du);
  if (!(denom > 1e-24 * std::max(d_.inner(u, u), 1e-300)) || denom == 0.0) {
    throw DegenerateInputError("verify_poincare_second_order: section is parallel");
  }
  const Matrix ddu = d_.apply(du);
  return report(d_.inner(ddu, ddu) / denom, 0);
}

PoincareReport verify_poincare(const CircleConnection& c, const Matrix& u) {
  if (u.rows() != c.dim()) throw ValidationError("section shape does not match the connection grid");
  return PoincareVerifier(c, static_cast<int>(u.cols())).first_order(u);
}

PoincareReport verify_poincare_second_order(const CircleConnection& c, const Matrix& u) {
  if (u.rows() != c.dim()) throw ValidationError("section shape does not match the connection grid");
  return PoincareVerifier(c, static_cast<int>(u.cols())).second_order(u);
}

}  // namespace gaugelab
