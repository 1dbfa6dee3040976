#pragma once

#include "gaugelab/lie_algebra.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace gaugelab {

// t = -log r. Throws ValidationError for r <= 0.
double disk_to_cylinder(double r);
double cylinder_to_disk(double t);

/// Uniform grid on [t_min, t_max] x U(1): rows t_i = t_min + i h_t
/// (i = 0..n_t-1, both ends included), columns theta_j = j h_theta.
struct CylinderGrid {
  double t_min = 0.0;
  double t_max = 1.0;
  int n_t = 8;
  int n_theta = 8;

  CylinderGrid() = default;
  CylinderGrid(double t_min, double t_max, int n_t, int n_theta);

  double h_t() const { return (t_max - t_min) / (n_t - 1); }
  double h_theta() const;
  double t(int i) const { return t_min + i * h_t(); }
  double theta(int j) const { return j * h_theta(); }
  void validate() const;
};

/**
 * Unit-vector field on the cylinder grid. Row i is a K x n_theta matrix.
 *
 * Non-flat data is stored as the offset a - alpha per node, so that
 * exponentially small offsets keep full relative precision.
 */
struct CylinderField {
  CylinderGrid grid;
  SkewMatrix alpha;
  std::vector<Matrix> u;
  std::optional<std::vector<std::vector<Matrix>>> a_offset;

  int dim() const { return alpha.dim(); }
  void validate(double tol = 1e-10) const;
};

using MapFunction = std::function<Vector(double t, double theta)>;

CylinderField sample_field(const CylinderGrid& grid, const SkewMatrix& alpha, const MapFunction& u);

// Rotational ansatz u = (cos th sin f, sin th sin f, cos f) in R^3 with
// alpha = alpha_scalar * J_z. f is sampled at the grid rows.
CylinderField rotational_field(const CylinderGrid& grid, double alpha_scalar,
                               std::span<const double> f_rows);

// J_z: rotation generator about the third axis in R^3.
SkewMatrix rotation_generator_z();

// Covariant central difference (u_{j+1} - u_{j-1}) / (2h) + alpha u_j.
Matrix covariant_theta_derivative(const Matrix& row, const Matrix& alpha, double h_theta);

double angular_energy(const CylinderField& fld, int i_t);
// Interior rows only.
double radial_balance(const CylinderField& fld, int i_t);
// Sum over the row of |u_t|^2 + |d_theta,alpha u|^2 (times h_theta), with
// one-sided second-order t-differences on the boundary rows.
double row_energy(const CylinderField& fld, int i_t, bool weight_curvature = false);
double band_energy(const CylinderField& fld, double t_center, bool weight_curvature = false,
                   double half_width = 1.0);
double total_energy(const CylinderField& fld);

struct ForcingNorms {
  double sup_f = 0.0;
  double sup_df = 0.0;
};

// f = b^2 u + 2 b D u + (D a) u with b = a - alpha, D the alpha-covariant
// theta derivative and D a = d_theta a + [alpha, a].
ForcingNorms reduced_forcing(const CylinderField& fld, int i_t);

struct EnergyProfile {
  std::vector<double> t;
  std::vector<double> theta;
  std::vector<double> h;
  std::vector<double> gamma;
  std::vector<double> band;
};

// Theta and gamma on all rows; H on interior rows (NaN on the two boundary
// rows); band energy where [t-1, t+1] fits in the grid (NaN elsewhere).
EnergyProfile energy_profile(const CylinderField& fld);

void write_profile_csv(std::ostream& out, const EnergyProfile& p);

}  // namespace gaugelab
