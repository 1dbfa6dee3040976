#pragma once

#include "gaugelab/lie_algebra.hpp"

#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace gaugelab {

/**
 * Connection a(theta) d(theta) on the trivial R^K bundle over the circle.
 *
 * Either closed form (any callable returning a skew K x K matrix) or sampled
 * on sorted nodes in [0, 2*pi), interpolated linearly with periodic wrap.
 */
class CircleConnection {
 public:
  using Field = std::function<Matrix(double theta)>;

  static CircleConnection flat(const SkewMatrix& alpha);
  static CircleConnection closed_form(int dim, Field a);
  static CircleConnection sampled(std::vector<double> thetas, std::vector<SkewMatrix> values);
  // CSV rows: theta, then K^2 entries row-major. A header line is optional.
  static CircleConnection from_csv(std::istream& in);

  int dim() const { return dim_; }
  bool is_sampled() const { return !nodes_.empty(); }
  std::size_t sample_count() const { return nodes_.size(); }

  // a(theta), with theta taken mod 2*pi.
  Matrix operator()(double theta) const;

 private:
  int dim_ = 0;
  Field field_;
  std::vector<double> nodes_;
  std::vector<Matrix> values_;
};

/// Connection A = a_r dr + a_theta d(theta) on the punctured unit disk.
class DiskConnection {
 public:
  using Field = std::function<Matrix(double r, double theta)>;

  DiskConnection(int dim, Field a_r, Field a_theta);
  static DiskConnection angular(int dim, Field a_theta);

  int dim() const { return dim_; }
  Matrix a_r(double r, double theta) const { return a_r_(r, theta); }
  Matrix a_theta(double r, double theta) const { return a_theta_(r, theta); }

  // theta -> A_theta(r, theta) on the circle of radius r.
  CircleConnection restrict_to_circle(double r) const;

 private:
  int dim_;
  Field a_r_;
  Field a_theta_;
};

// Solves dg/dtheta + a(theta) g = 0, g(theta0) = id, with fixed-step RK4 and
// projects the result back onto O(K).
Matrix parallel_transport(const CircleConnection& c, double theta0, double theta1, int steps);

// g(theta_i) at theta_i = 2*pi*i/n for i = 0..n (inclusive of 2*pi), each
// subinterval integrated with `substeps` RK4 steps.
std::vector<Matrix> transport_along_grid(const CircleConnection& c, int n, int substeps);

// Conjugacy invariant of the full-circle transport g(2*pi).
ConjugacyInvariant holonomy(const CircleConnection& c, int steps = 4096);

ConjugacyInvariant holonomy_at_radius(const DiskConnection& d, double r, int steps = 4096);

struct CauchyReport {
  std::vector<double> radii;
  std::vector<ConjugacyInvariant> invariants;
  std::vector<double> successive_distances;
  double tolerance = 0.0;
  // max of the last two successive distances is within tolerance
  bool cauchy = false;
};

struct LimitHolonomy {
  ConjugacyInvariant invariant;  // at the smallest radius
  CauchyReport report;
};

LimitHolonomy limit_holonomy(const DiskConnection& d, std::span<const double> radii,
                             int steps = 4096, double tolerance = 1e-6);

/**
 * Smooth periodic gauge transformation s(theta) = prod_i exp(phi_i(theta) E_i)
 * with fixed generators E_i and trigonometric profiles phi_i.
 *
 * Acts on connections by s*a = s^{-1} s' + s^{-1} a s.
 */
class GaugeTransform {
 public:
  struct Factor {
    SkewMatrix generator;
    std::vector<double> cos_coeffs;  // harmonic k = 1, 2, ...
    std::vector<double> sin_coeffs;
  };

  explicit GaugeTransform(std::vector<Factor> factors);

  static GaugeTransform random(int dim, std::mt19937_64& rng, int n_factors = 3,
                               int harmonics = 2, double amplitude = 0.8);

  int dim() const;
  Matrix value(double theta) const;
  // s^{-1} ds/dtheta
  Matrix left_derivative(double theta) const;

  CircleConnection apply(const CircleConnection& c) const;
  // v(theta) -> s(theta)^{-1} v(theta), sampled on columns at the given nodes.
  Matrix pull_back_section(const Matrix& section, std::span<const double> thetas) const;

 private:
  double profile(const Factor& f, double theta) const;
  double profile_derivative(const Factor& f, double theta) const;

  std::vector<Factor> factors_;
};

}  // namespace gaugelab
