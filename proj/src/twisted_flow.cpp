#include "gaugelab/twisted_flow.hpp"

#include "gaugelab/errors.hpp"
#include "gaugelab/poincare.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gaugelab {

namespace {

// Column j of the result is column (j + s) mod n of row.
Matrix shifted(const Matrix& row, int s) {
  const int n = static_cast<int>(row.cols());
  Matrix out(row.rows(), n);
  for (int j = 0; j < n; ++j) out.col(j) = row.col(((j + s) % n + n) % n);
  return out;
}

void normalize_columns(Matrix& m) {
  for (int j = 0; j < m.cols(); ++j) m.col(j) /= m.col(j).norm();
}

// Removes the component along u from each column of v.
Matrix tangent_part(const Matrix& u, const Matrix& v) {
  const Eigen::RowVectorXd dots = (u.array() * v.array()).colwise().sum();
  return v - u * dots.asDiagonal();
}

/**
 * Discrete Laplacian with parallel-transport links in theta:
 *   (u_{i+1} - 2u_i + u_{i-1}) / h_t^2 + (U u_{j+1} - 2u_j + U^T u_{j-1}) / h_th^2
 * with U = exp(h_th alpha).
 */
class Stencil {
 public:
  explicit Stencil(const FlowProblem& p)
      : n_t_(p.grid.n_t),
        n_th_(p.grid.n_theta),
        dim_(p.dim()),
        ht_(p.grid.h_t()),
        hth_(p.grid.h_theta()),
        neumann_(!p.bc_high.has_value()),
        link_(exp_skew(p.grid.h_theta() * p.alpha)) {}

  int first() const { return 1; }
  int last() const { return neumann_ ? n_t_ - 1 : n_t_ - 2; }
  bool neumann() const { return neumann_; }
  double h_t() const { return ht_; }
  double h_theta() const { return hth_; }
  const Matrix& link() const { return link_; }

  Matrix theta_part(const Matrix& row) const {
    return (link_ * shifted(row, 1) - 2.0 * row + link_.transpose() * shifted(row, -1)) /
           (hth_ * hth_);
  }

  Matrix apply(const std::vector<Matrix>& u, int i) const {
    const Matrix& up = (i + 1 < n_t_) ? u[i + 1] : u[i];
    return (up - 2.0 * u[i] + u[i - 1]) / (ht_ * ht_) + theta_part(u[i]);
  }

  // Half the discrete Dirichlet energy plus the forcing pairing.
  double functional(const std::vector<Matrix>& u, const std::vector<Matrix>& forcing) const {
    double e = 0.0;
    for (int i = 0; i + 1 < n_t_; ++i) e += (u[i + 1] - u[i]).squaredNorm() / (ht_ * ht_);
    for (int i = 0; i < n_t_; ++i) {
      e += (link_ * shifted(u[i], 1) - u[i]).squaredNorm() / (hth_ * hth_);
    }
    double pairing = 0.0;
    if (!forcing.empty()) {
      for (int i = first(); i <= last(); ++i) pairing += (forcing[i].array() * u[i].array()).sum();
    }
    return ht_ * hth_ * (0.5 * e + pairing);
  }

 private:
  int n_t_;
  int n_th_;
  int dim_;
  double ht_;
  double hth_;
  bool neumann_;
  Matrix link_;
};

/// Inverse of the negated linear operator on the unknown rows, with zero
/// data on fixed rows: eigenmodes of the theta part, tridiagonal in t.
class FlatInverse {
 public:
  explicit FlatInverse(const Stencil& s, int dim, int n_theta) : s_(s), dim_(dim), n_th_(n_theta) {
    const int n = dim * n_theta;
    Matrix m = Matrix::Zero(n, n);
    const double w = 1.0 / (s.h_theta() * s.h_theta());
    for (int j = 0; j < n_theta; ++j) {
      m.block(dim * j, dim * ((j + 1) % n_theta), dim, dim) += w * s.link();
      m.block(dim * j, dim * ((j + n_theta - 1) % n_theta), dim, dim) += w * s.link().transpose();
      m.block(dim * j, dim * j, dim, dim) -= 2.0 * w * Matrix::Identity(dim, dim);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
    modes_ = es.eigenvectors();
    lambda_ = es.eigenvalues();
  }

  // rows[i] for i in [first, last] is replaced by M^{-1} rows[i].
  void solve(std::vector<Matrix>& rows) const {
    const int lo = s_.first();
    const int hi = s_.last();
    const int m = hi - lo + 1;
    const int n = dim_ * n_th_;
    Matrix coeffs(n, m);
    for (int i = lo; i <= hi; ++i) {
      coeffs.col(i - lo) = modes_.transpose() * Eigen::Map<const Vector>(rows[i].data(), n);
    }
    const double w = 1.0 / (s_.h_t() * s_.h_t());
    std::vector<double> c(m), d(m);
    for (int k = 0; k < n; ++k) {
      // (-x_{i+1} + 2 x_i - x_{i-1}) w - lambda x_i = b_i
      const double diag = 2.0 * w - lambda_(k);
      for (int r = 0; r < m; ++r) {
        double b = diag;
        if (r == m - 1 && s_.neumann()) b = w - lambda_(k);
        const double rhs = coeffs(k, r);
        if (r == 0) {
          c[r] = -w / b;
          d[r] = rhs / b;
        } else {
          const double den = b + w * c[r - 1];
          c[r] = -w / den;
          d[r] = (rhs + w * d[r - 1]) / den;
        }
      }
      coeffs(k, m - 1) = d[m - 1];
      for (int r = m - 2; r >= 0; --r) coeffs(k, r) = d[r] - c[r] * coeffs(k, r + 1);
    }
    for (int i = lo; i <= hi; ++i) {
      const Vector x = modes_ * coeffs.col(i - lo);
      rows[i] = Eigen::Map<const Matrix>(x.data(), dim_, n_th_);
    }
  }

 private:
  const Stencil& s_;
  int dim_;
  int n_th_;
  Matrix modes_;
  Vector lambda_;
};

std::vector<Matrix> sample_forcing(const FlowProblem& p) {
  std::vector<Matrix> out;
  if (!p.forcing) return out;
  for (int i = 0; i < p.grid.n_t; ++i) {
    Matrix row(p.dim(), p.grid.n_theta);
    for (int j = 0; j < p.grid.n_theta; ++j) {
      const Vector v = p.forcing->field(p.grid.t(i), p.grid.theta(j));
      if (v.size() != p.dim()) throw ValidationError("forcing: wrong target dimension");
      row.col(j) = v;
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<Matrix> residual_rows(const Stencil& s, const std::vector<Matrix>& u,
                                  const std::vector<Matrix>& forcing) {
  std::vector<Matrix> r(u.size());
  for (int i = s.first(); i <= s.last(); ++i) {
    Matrix lap = s.apply(u, i);
    if (!forcing.empty()) lap -= forcing[i];
    r[i] = tangent_part(u[i], lap);
  }
  return r;
}

double sup_norm(const Stencil& s, const std::vector<Matrix>& r) {
  double worst = 0.0;
  for (int i = s.first(); i <= s.last(); ++i) {
    worst = std::max(worst, r[i].colwise().norm().maxCoeff());
  }
  return worst;
}

void check_loop(const Matrix& loop, const FlowProblem& p, const char* name) {
  if (loop.rows() != p.dim() || loop.cols() != p.grid.n_theta) {
    throw ValidationError(std::string(name) + ": loop must be K x n_theta");
  }
  for (int j = 0; j < loop.cols(); ++j) {
    if (std::abs(loop.col(j).norm() - 1.0) > 1e-10) {
      throw ValidationError(std::string(name) + ": loop values must be unit vectors");
    }
  }
}

std::vector<Matrix> initial_rows(const FlowProblem& p) {
  const int n = p.grid.n_t;
  std::vector<Matrix> u(n, p.bc_low);
  const Matrix* target = p.bc_high ? &*p.bc_high : (p.init_high ? &*p.init_high : nullptr);
  if (p.bc_high) u[n - 1] = *p.bc_high;
  if (!target) return u;
  for (int i = 1; i < n; ++i) {
    if (i == n - 1 && p.bc_high) break;
    const double s = static_cast<double>(i) / (n - 1);
    Matrix row = (1.0 - s) * p.bc_low + s * (*target);
    for (int j = 0; j < row.cols(); ++j) {
      const double nrm = row.col(j).norm();
      if (nrm < 1e-8) {
        row.col(j) = s < 0.5 ? p.bc_low.col(j) : target->col(j);
      } else {
        row.col(j) /= nrm;
      }
    }
    u[i] = std::move(row);
  }
  return u;
}

double h_squared(const CylinderGrid& g) {
  const double h = std::max(g.h_t(), g.h_theta());
  return h * h;
}

}  // namespace

std::vector<std::string> FlowProblem::validate() const {
  grid.validate();
  std::vector<std::string> warnings;
  if (dim() < 1) throw ValidationError("FlowProblem: alpha must be set");
  check_loop(bc_low, *this, "bc_low");
  if (bc_high) check_loop(*bc_high, *this, "bc_high");
  if (init_high) check_loop(*init_high, *this, "init_high");
  if (!(grid.h_theta() * alpha.spectral_norm() < 0.5)) {
    throw ValidationError("FlowProblem: theta grid too coarse for alpha (need h_theta |alpha| < 0.5)");
  }
  if (!(tol > 0.0)) throw ValidationError("FlowProblem: tol must be positive");
  if (max_iters < 0) throw ValidationError("FlowProblem: max_iters must be non-negative");
  if (!(eps0 > 0.0)) throw ValidationError("FlowProblem: eps0 must be positive");
  if (forcing) {
    if (!forcing->field) throw ValidationError("FlowProblem: forcing field missing");
    if (forcing->kappa < 4.0 / 3.0) {
      warnings.push_back("forcing exponent kappa below 4/3; the decay estimate does not apply");
    }
  }
  return warnings;
}

Matrix latitude_loop(int dim, int n_theta, double f) {
  if (dim < 3) throw ValidationError("latitude_loop: needs K >= 3");
  Matrix loop = Matrix::Zero(dim, n_theta);
  for (int j = 0; j < n_theta; ++j) {
    const double th = 2.0 * std::numbers::pi * j / n_theta;
    loop(0, j) = std::cos(th) * std::sin(f);
    loop(1, j) = std::sin(th) * std::sin(f);
    loop(2, j) = std::cos(f);
  }
  return loop;
}

Matrix constant_loop(int dim, int n_theta, int axis) {
  if (axis < 0 || axis >= dim) throw ValidationError("constant_loop: axis out of range");
  Matrix loop = Matrix::Zero(dim, n_theta);
  loop.row(axis).setOnes();
  return loop;
}

double tangential_residual(const FlowProblem& p, const std::vector<Matrix>& u) {
  const Stencil s(p);
  return sup_norm(s, residual_rows(s, u, sample_forcing(p)));
}

FlowSolution relax(const FlowProblem& p) {
  FlowSolution sol;
  sol.warnings = p.validate();
  const Stencil stencil(p);
  const auto forcing = sample_forcing(p);
  std::vector<Matrix> u = initial_rows(p);
  std::optional<FlatInverse> inverse;
  if (p.method == RelaxMethod::Preconditioned) inverse.emplace(stencil, p.dim(), p.grid.n_theta);
  const double tau = 0.8 / (2.0 / (stencil.h_t() * stencil.h_t()) +
                            2.0 / (stencil.h_theta() * stencil.h_theta()));

  double energy = stencil.functional(u, forcing);
  int it = 0;
  for (;; ++it) {
    std::vector<Matrix> r = residual_rows(stencil, u, forcing);
    const double res = sup_norm(stencil, r);
    if (!std::isfinite(res)) throw NumericalError("relax: residual is not finite");
    if (res <= p.tol) {
      sol.residual_sup = res;
      break;
    }
    if (it >= p.max_iters) {
      throw ConvergenceError("relax: no convergence within max_iters", res, it);
    }
    if (inverse) {
      inverse->solve(r);
      for (int i = stencil.first(); i <= stencil.last(); ++i) r[i] = tangent_part(u[i], r[i]);
    } else {
      for (int i = stencil.first(); i <= stencil.last(); ++i) r[i] *= tau;
    }
    double step = 1.0;
    for (;;) {
      std::vector<Matrix> trial = u;
      for (int i = stencil.first(); i <= stencil.last(); ++i) {
        trial[i] += step * r[i];
        normalize_columns(trial[i]);
      }
      const double e = stencil.functional(trial, forcing);
      if (e <= energy + 1e-13 * std::max(1.0, std::abs(energy))) {
        u = std::move(trial);
        energy = e;
        break;
      }
      if (!inverse) throw NumericalError("relax: energy increased during a sweep");
      step *= 0.5;
      if (step < 1e-10) throw NumericalError("relax: no energy-decreasing step found");
    }
  }
  sol.iterations = it;
  sol.u = CylinderField{p.grid, p.alpha, std::move(u), std::nullopt};
  sol.energy = total_energy(sol.u);
  sol.profile = energy_profile(sol.u);
  sol.forcing_values = forcing;
  sol.kappa = p.forcing ? p.forcing->kappa : 0.0;
  return sol;
}

FitWindow default_decay_window(const CylinderGrid& g) {
  const double len = g.t_max - g.t_min;
  return {g.t_min + std::min(10.0, 0.5 * len), g.t_max - std::max(2.0, 0.25 * len)};
}

DecayReport decay_profile(const FlowSolution& s, double eps0) {
  return decay_profile(s, default_decay_window(s.u.grid), eps0);
}

DecayReport decay_profile(const FlowSolution& s, FitWindow window, double eps0) {
  const CylinderGrid& g = s.u.grid;
  if (g.t_max - g.t_min < 12.0) throw ValidationError("decay_profile: strip shorter than 12");
  if (!(window.lo < window.hi) || window.lo < g.t_min || window.hi > g.t_max) {
    throw ValidationError("decay_profile: window outside the strip");
  }
  DecayReport rep;
  rep.profile = s.profile;
  rep.window = window;
  rep.expected_rate = std::sqrt(poincare_constant(standard_form(s.u.alpha)).value);
  try {
    rep.fit = fit_exponential(rep.profile.t, rep.profile.gamma, window);
    rep.relative_error = std::abs(rep.fit.rate - rep.expected_rate) / rep.expected_rate;
  } catch (const ValidationError&) {
    rep.degenerate = true;
  }
  double tail = 0.0;
  const double from = window.lo - 1.0;
  for (int i = 0; i + 1 < g.n_t; ++i) {
    if (g.t(i) + 1e-12 < from) continue;
    tail += 0.5 * (row_energy(s.u, i) + row_energy(s.u, i + 1)) * g.h_t();
  }
  rep.tail_energy = tail;
  rep.small_energy = tail <= eps0 * eps0;
  return rep;
}

std::vector<double> sup_grad_squared(const CylinderField& fld) {
  const CylinderGrid& g = fld.grid;
  std::vector<double> out(g.n_t);
  for (int i = 0; i < g.n_t; ++i) {
    Matrix ut;
    if (i == 0) {
      ut = (-3.0 * fld.u[0] + 4.0 * fld.u[1] - fld.u[2]) / (2.0 * g.h_t());
    } else if (i == g.n_t - 1) {
      ut = (3.0 * fld.u[i] - 4.0 * fld.u[i - 1] + fld.u[i - 2]) / (2.0 * g.h_t());
    } else {
      ut = (fld.u[i + 1] - fld.u[i - 1]) / (2.0 * g.h_t());
    }
    const Matrix ud = covariant_theta_derivative(fld.u[i], fld.alpha.matrix(), g.h_theta());
    out[i] = (ut.colwise().squaredNorm() + ud.colwise().squaredNorm()).maxCoeff();
  }
  return out;
}

OdiReport verify_odi_series(std::span<const double> gamma, std::span<const double> sup_grad2,
                            std::span<const double> forcing_term, double h_t, double h2,
                            double c_alpha, double c_sup, int boundary_layer) {
  const int n = static_cast<int>(gamma.size());
  if (n < 5) throw ValidationError("verify_odi: needs at least 5 rows");
  if (static_cast<int>(sup_grad2.size()) != n ||
      (!forcing_term.empty() && static_cast<int>(forcing_term.size()) != n)) {
    throw ValidationError("verify_odi: series lengths differ");
  }
  OdiReport rep;
  rep.c_alpha = c_alpha;
  rep.c_sup = c_sup;
  rep.h2 = h2;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  const int lo = std::max(1, boundary_layer);
  const int hi = std::min(n - 2, n - 1 - boundary_layer);
  for (int i = lo; i <= hi; ++i) {
    const double gpp = (gamma[i + 1] - 2.0 * gamma[i] + gamma[i - 1]) / (h_t * h_t);
    const double force = forcing_term.empty() ? 0.0 : forcing_term[i];
    const double rhs = (c_alpha - c_sup * sup_grad2[i]) * gamma[i] - c_sup * force;
    const double slack = 10.0 * h2 * gamma[i];
    const double margin = gpp - rhs + slack;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < 0.0) rep.violations.push_back(i);
    const double num = c_alpha * gamma[i] - gpp;
    const double den = sup_grad2[i] * gamma[i] + force;
    if (num > 0.0 && den > 0.0) rep.min_constant = std::max(rep.min_constant, num / den);
    ++rep.rows_checked;
  }
  return rep;
}

OdiReport verify_odi(const FlowSolution& s, double c_sup, int boundary_layer) {
  const CylinderGrid& g = s.u.grid;
  const double c_alpha = poincare_constant(standard_form(s.u.alpha)).value;
  std::vector<double> force;
  if (!s.forcing_values.empty()) {
    for (const Matrix& row : s.forcing_values) {
      const Matrix df = covariant_theta_derivative(row, s.u.alpha.matrix(), g.h_theta());
      force.push_back(std::sqrt(2.0 * std::numbers::pi) * df.colwise().norm().maxCoeff());
    }
  }
  return verify_odi_series(s.profile.gamma, sup_grad_squared(s.u), force, g.h_t(), h_squared(g),
                           c_alpha, c_sup, boundary_layer);
}

HReport verify_H(const FlowSolution& s, int boundary_layer) {
  return verify_H(s, default_decay_window(s.u.grid), boundary_layer);
}

HReport verify_H(const FlowSolution& s, FitWindow window, int boundary_layer) {
  const CylinderGrid& g = s.u.grid;
  HReport rep;
  const int lo = std::max(1, boundary_layer);
  const int hi = std::min(g.n_t - 2, g.n_t - 1 - boundary_layer);
  if (hi < lo) throw ValidationError("verify_H: grid too short for the boundary layer");
  double hmin = std::numeric_limits<double>::infinity();
  double hmax = -hmin;
  double sum = 0.0;
  for (int i = lo; i <= hi; ++i) {
    const double h = radial_balance(s.u, i);
    rep.t.push_back(g.t(i));
    rep.h.push_back(h);
    hmin = std::min(hmin, h);
    hmax = std::max(hmax, h);
    sum += h;
  }
  rep.drift = hmax - hmin;
  rep.slack = 10.0 * h_squared(g);
  rep.constant = rep.drift <= rep.slack;
  rep.mean = sum / rep.h.size();
  rep.forced = !s.forcing_values.empty();
  if (rep.forced) {
    std::vector<double> abs_h(rep.h.size());
    std::transform(rep.h.begin(), rep.h.end(), abs_h.begin(), [](double x) { return std::abs(x); });
    try {
      rep.abs_h_fit = fit_exponential(rep.t, abs_h, window);
      rep.rate_fitted = true;
    } catch (const ValidationError&) {
      rep.rate_fitted = false;
    }
  }
  return rep;
}

}  // namespace gaugelab
