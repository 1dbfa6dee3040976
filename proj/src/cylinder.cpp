#include "gaugelab/cylinder.hpp"

#include "gaugelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

namespace gaugelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Matrix central_theta(const Matrix& row, double h) {
  const int n = static_cast<int>(row.cols());
  Matrix d(row.rows(), n);
  for (int j = 0; j < n; ++j) {
    d.col(j) = (row.col((j + 1) % n) - row.col((j + n - 1) % n)) / (2.0 * h);
  }
  return d;
}

// d/dt of the rows at i: central inside, one-sided second order at the ends.
Matrix t_derivative(const std::vector<Matrix>& rows, int i, double h) {
  const int n = static_cast<int>(rows.size());
  if (i > 0 && i < n - 1) return (rows[i + 1] - rows[i - 1]) / (2.0 * h);
  if (n < 3) throw ValidationError("t-derivative needs at least 3 rows");
  if (i == 0) return (-3.0 * rows[0] + 4.0 * rows[1] - rows[2]) / (2.0 * h);
  return (3.0 * rows[n - 1] - 4.0 * rows[n - 2] + rows[n - 3]) / (2.0 * h);
}

void check_row(const CylinderField& fld, int i_t) {
  if (i_t < 0 || i_t >= fld.grid.n_t) throw ValidationError("row index out of range");
}

}  // namespace

double disk_to_cylinder(double r) {
  if (!(r > 0.0)) throw ValidationError("disk_to_cylinder: radius must be positive");
  return -std::log(r);
}

double cylinder_to_disk(double t) { return std::exp(-t); }

CylinderGrid::CylinderGrid(double t_min_, double t_max_, int n_t_, int n_theta_)
    : t_min(t_min_), t_max(t_max_), n_t(n_t_), n_theta(n_theta_) {
  validate();
}

double CylinderGrid::h_theta() const { return kTwoPi / n_theta; }

void CylinderGrid::validate() const {
  if (!(t_min < t_max)) throw ValidationError("CylinderGrid: need t_min < t_max");
  if (n_t < 8 || n_theta < 8) throw ValidationError("CylinderGrid: n_t and n_theta must be >= 8");
}

void CylinderField::validate(double tol) const {
  grid.validate();
  if (static_cast<int>(u.size()) != grid.n_t) throw ValidationError("CylinderField: row count");
  for (const auto& row : u) {
    if (row.rows() != dim() || row.cols() != grid.n_theta) {
      throw ValidationError("CylinderField: row shape");
    }
    for (int j = 0; j < row.cols(); ++j) {
      if (std::abs(row.col(j).norm() - 1.0) > tol) {
        throw ValidationError("CylinderField: values must be unit vectors");
      }
    }
  }
  if (a_offset) {
    if (static_cast<int>(a_offset->size()) != grid.n_t) {
      throw ValidationError("CylinderField: connection row count");
    }
    for (const auto& row : *a_offset) {
      if (static_cast<int>(row.size()) != grid.n_theta) {
        throw ValidationError("CylinderField: connection row length");
      }
    }
  }
}

CylinderField sample_field(const CylinderGrid& grid, const SkewMatrix& alpha, const MapFunction& u) {
  grid.validate();
  CylinderField fld{grid, alpha, {}, std::nullopt};
  fld.u.reserve(grid.n_t);
  for (int i = 0; i < grid.n_t; ++i) {
    Matrix row(alpha.dim(), grid.n_theta);
    for (int j = 0; j < grid.n_theta; ++j) {
      const Vector v = u(grid.t(i), grid.theta(j));
      if (v.size() != alpha.dim()) throw ValidationError("sample_field: wrong target dimension");
      row.col(j) = v / v.norm();
    }
    fld.u.push_back(std::move(row));
  }
  return fld;
}

SkewMatrix rotation_generator_z() { return SkewMatrix::generator(3, 0, 1); }

CylinderField rotational_field(const CylinderGrid& grid, double alpha_scalar,
                               std::span<const double> f_rows) {
  if (static_cast<int>(f_rows.size()) != grid.n_t) {
    throw ValidationError("rotational_field: one latitude per row required");
  }
  grid.validate();
  CylinderField fld{grid, alpha_scalar * rotation_generator_z(), {}, std::nullopt};
  for (int i = 0; i < grid.n_t; ++i) {
    const double sf = std::sin(f_rows[i]);
    const double cf = std::cos(f_rows[i]);
    Matrix row(3, grid.n_theta);
    for (int j = 0; j < grid.n_theta; ++j) {
      const double th = grid.theta(j);
      row.col(j) << std::cos(th) * sf, std::sin(th) * sf, cf;
    }
    fld.u.push_back(std::move(row));
  }
  return fld;
}

Matrix covariant_theta_derivative(const Matrix& row, const Matrix& alpha, double h_theta) {
  return central_theta(row, h_theta) + alpha * row;
}

double angular_energy(const CylinderField& fld, int i_t) {
  check_row(fld, i_t);
  const double h = fld.grid.h_theta();
  return covariant_theta_derivative(fld.u[i_t], fld.alpha.matrix(), h).squaredNorm() * h;
}

double radial_balance(const CylinderField& fld, int i_t) {
  check_row(fld, i_t);
  if (i_t == 0 || i_t == fld.grid.n_t - 1) {
    throw ValidationError("radial_balance: needs an interior row");
  }
  const double h = fld.grid.h_theta();
  const Matrix ut = (fld.u[i_t + 1] - fld.u[i_t - 1]) / (2.0 * fld.grid.h_t());
  const Matrix ud = covariant_theta_derivative(fld.u[i_t], fld.alpha.matrix(), h);
  return 0.5 * (ut.squaredNorm() - ud.squaredNorm()) * h;
}

double row_energy(const CylinderField& fld, int i_t, bool weight_curvature) {
  check_row(fld, i_t);
  const double h = fld.grid.h_theta();
  const Matrix ut = t_derivative(fld.u, i_t, fld.grid.h_t());
  const Matrix ud = covariant_theta_derivative(fld.u[i_t], fld.alpha.matrix(), h);
  double e = (ut.squaredNorm() + ud.squaredNorm()) * h;
  if (weight_curvature && fld.a_offset) {
    // |F|^2 dvol in disk coordinates is e^{2t} |d_t a|^2 dt dtheta.
    const auto& rows = *fld.a_offset;
    const int n = fld.grid.n_t;
    const double ht = fld.grid.h_t();
    double curv = 0.0;
    for (int j = 0; j < fld.grid.n_theta; ++j) {
      Matrix dt;
      if (i_t > 0 && i_t < n - 1) {
        dt = (rows[i_t + 1][j] - rows[i_t - 1][j]) / (2.0 * ht);
      } else if (i_t == 0) {
        dt = (-3.0 * rows[0][j] + 4.0 * rows[1][j] - rows[2][j]) / (2.0 * ht);
      } else {
        dt = (3.0 * rows[n - 1][j] - 4.0 * rows[n - 2][j] + rows[n - 3][j]) / (2.0 * ht);
      }
      curv += dt.squaredNorm();
    }
    e += std::exp(2.0 * fld.grid.t(i_t)) * curv * h;
  }
  return e;
}

double band_energy(const CylinderField& fld, double t_center, bool weight_curvature,
                   double half_width) {
  const CylinderGrid& g = fld.grid;
  const double lo = t_center - half_width;
  const double hi = t_center + half_width;
  const double eps = 1e-12 * std::max(1.0, std::abs(g.t_max));
  if (!(half_width > 0.0) || lo < g.t_min - eps || hi > g.t_max + eps) {
    throw ValidationError("band_energy: band outside the grid");
  }
  const double ht = g.h_t();
  // Exact integral of the piecewise-linear interpolant of the row energies.
  const int i0 = std::clamp(static_cast<int>(std::floor((lo - g.t_min) / ht)), 0, g.n_t - 2);
  const int i1 = std::clamp(static_cast<int>(std::ceil((hi - g.t_min) / ht)), 1, g.n_t - 1);
  double total = 0.0;
  double e_left = row_energy(fld, i0, weight_curvature);
  for (int i = i0; i < i1; ++i) {
    const double e_right = row_energy(fld, i + 1, weight_curvature);
    const double ta = g.t(i);
    const double a = std::max(lo, ta);
    const double b = std::min(hi, g.t(i + 1));
    if (b > a) {
      const double ea = e_left + (e_right - e_left) * (a - ta) / ht;
      const double eb = e_left + (e_right - e_left) * (b - ta) / ht;
      total += 0.5 * (ea + eb) * (b - a);
    }
    e_left = e_right;
  }
  return total;
}

double total_energy(const CylinderField& fld) {
  const CylinderGrid& g = fld.grid;
  double total = 0.0;
  for (int i = 0; i < g.n_t; ++i) {
    const double w = (i == 0 || i == g.n_t - 1) ? 0.5 : 1.0;
    total += w * row_energy(fld, i) * g.h_t();
  }
  return total;
}

ForcingNorms reduced_forcing(const CylinderField& fld, int i_t) {
  check_row(fld, i_t);
  if (!fld.a_offset) throw ValidationError("reduced_forcing: connection data required");
  const auto& b_row = (*fld.a_offset)[i_t];
  const Matrix& alpha = fld.alpha.matrix();
  const double h = fld.grid.h_theta();
  const int n = fld.grid.n_theta;
  const Matrix& u = fld.u[i_t];
  const Matrix du = covariant_theta_derivative(u, alpha, h);
  Matrix f(u.rows(), n);
  for (int j = 0; j < n; ++j) {
    const Matrix& b = b_row[j];
    // D a = d_theta a + [alpha, a]; alpha is constant, so only the offset
    // contributes to either term.
    const Matrix da = (b_row[(j + 1) % n] - b_row[(j + n - 1) % n]) / (2.0 * h) +
                      alpha * b - b * alpha;
    f.col(j) = b * (b * u.col(j)) + 2.0 * b * du.col(j) + da * u.col(j);
  }
  const Matrix df = covariant_theta_derivative(f, alpha, h);
  ForcingNorms out;
  out.sup_f = f.colwise().norm().maxCoeff();
  out.sup_df = df.colwise().norm().maxCoeff();
  return out;
}

EnergyProfile energy_profile(const CylinderField& fld) {
  const CylinderGrid& g = fld.grid;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EnergyProfile p;
  for (int i = 0; i < g.n_t; ++i) {
    const double t = g.t(i);
    const double th = angular_energy(fld, i);
    p.t.push_back(t);
    p.theta.push_back(th);
    p.gamma.push_back(std::sqrt(th));
    p.h.push_back(i == 0 || i == g.n_t - 1 ? nan : radial_balance(fld, i));
    const bool fits = t - 1.0 >= g.t_min - 1e-12 && t + 1.0 <= g.t_max + 1e-12;
    p.band.push_back(fits ? band_energy(fld, t) : nan);
  }
  return p;
}

void write_profile_csv(std::ostream& out, const EnergyProfile& p) {
  out << "t,Theta,H,gamma,band_energy\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    out << p.t[i] << ',' << p.theta[i] << ',' << p.h[i] << ',' << p.gamma[i] << ',' << p.band[i]
        << '\n';
  }
}

}  // namespace gaugelab
