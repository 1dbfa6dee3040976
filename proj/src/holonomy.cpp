#include "gaugelab/holonomy.hpp"

#include "gaugelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>

namespace gaugelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

// One RK4 step for g' = -a(theta) g.
Matrix rk4_step(const CircleConnection& c, double theta, double h, const Matrix& g) {
  const Matrix a0 = c(theta);
  const Matrix am = c(theta + 0.5 * h);
  const Matrix a1 = c(theta + h);
  const Matrix k1 = -a0 * g;
  const Matrix k2 = -am * (g + 0.5 * h * k1);
  const Matrix k3 = -am * (g + 0.5 * h * k2);
  const Matrix k4 = -a1 * (g + h * k3);
  return g + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

CircleConnection CircleConnection::flat(const SkewMatrix& alpha) {
  const Matrix m = alpha.matrix();
  return closed_form(alpha.dim(), [m](double) { return m; });
}

CircleConnection CircleConnection::closed_form(int dim, Field a) {
  if (dim < 1) throw ValidationError("CircleConnection: dimension must be >= 1");
  if (!a) throw ValidationError("CircleConnection: empty field");
  CircleConnection c;
  c.dim_ = dim;
  c.field_ = std::move(a);
  return c;
}

CircleConnection CircleConnection::sampled(std::vector<double> thetas,
                                           std::vector<SkewMatrix> values) {
  if (thetas.empty() || thetas.size() != values.size()) {
    throw ValidationError("CircleConnection::sampled: need matching nonempty samples");
  }
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (thetas[i] < 0 || thetas[i] >= kTwoPi) {
      throw ValidationError("CircleConnection::sampled: theta outside [0, 2pi)");
    }
    if (i > 0 && thetas[i] <= thetas[i - 1]) {
      throw ValidationError("CircleConnection::sampled: thetas must be strictly increasing");
    }
    if (values[i].dim() != values[0].dim()) {
      throw ValidationError("CircleConnection::sampled: inconsistent dimensions");
    }
  }
  CircleConnection c;
  c.dim_ = values[0].dim();
  c.nodes_ = std::move(thetas);
  c.values_.reserve(values.size());
  for (const auto& v : values) c.values_.push_back(v.matrix());
  return c;
}

CircleConnection CircleConnection::from_csv(std::istream& in) {
  std::vector<double> thetas;
  std::vector<SkewMatrix> values;
  std::string line;
  int width = -1;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    std::vector<double> nums;
    bool numeric = true;
    for (const auto& cell : cells) {
      double v;
      if (!parse_double(cell, v)) {
        numeric = false;
        break;
      }
      nums.push_back(v);
    }
    if (!numeric) {
      if (thetas.empty() && width < 0) continue;  // header
      throw ValidationError("connection CSV: non-numeric data on line " + std::to_string(lineno));
    }
    const int entries = static_cast<int>(nums.size()) - 1;
    const int k = static_cast<int>(std::lround(std::sqrt(std::max(entries, 0))));
    if (entries < 1 || k * k != entries) {
      throw ValidationError("connection CSV: expected theta plus K^2 entries on line " +
                            std::to_string(lineno));
    }
    if (width >= 0 && width != k) {
      throw ValidationError("connection CSV: inconsistent K on line " + std::to_string(lineno));
    }
    width = k;
    Matrix m(k, k);
    for (int r = 0; r < k; ++r)
      for (int col = 0; col < k; ++col) m(r, col) = nums[1 + r * k + col];
    thetas.push_back(nums[0]);
    values.emplace_back(m);
  }
  return sampled(std::move(thetas), std::move(values));
}

Matrix CircleConnection::operator()(double theta) const {
  if (nodes_.empty()) return field_(theta);
  const double w = wrap_angle(theta);
  const std::size_t n = nodes_.size();
  if (n == 1) return values_[0];
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), w);
  std::size_t hi = static_cast<std::size_t>(it - nodes_.begin());
  double t_lo, t_hi;
  std::size_t lo;
  if (hi == 0 || hi == n) {
    lo = n - 1;
    hi = 0;
    t_lo = nodes_[lo];
    t_hi = nodes_[0] + kTwoPi;
  } else {
    lo = hi - 1;
    t_lo = nodes_[lo];
    t_hi = nodes_[hi];
  }
  double x = w;
  if (x < t_lo) x += kTwoPi;
  const double s = (x - t_lo) / (t_hi - t_lo);
  return (1.0 - s) * values_[lo] + s * values_[hi];
}

DiskConnection::DiskConnection(int dim, Field a_r, Field a_theta)
    : dim_(dim), a_r_(std::move(a_r)), a_theta_(std::move(a_theta)) {
  if (dim < 1) throw ValidationError("DiskConnection: dimension must be >= 1");
  if (!a_r_ || !a_theta_) throw ValidationError("DiskConnection: empty field");
}

DiskConnection DiskConnection::angular(int dim, Field a_theta) {
  return DiskConnection(
      dim, [dim](double, double) { return Matrix::Zero(dim, dim).eval(); }, std::move(a_theta));
}

CircleConnection DiskConnection::restrict_to_circle(double r) const {
  if (!(r > 0.0 && r <= 1.0)) {
    throw ValidationError("DiskConnection: radius must lie in (0, 1]");
  }
  auto field = a_theta_;
  return CircleConnection::closed_form(dim_, [field, r](double theta) { return field(r, theta); });
}

Matrix parallel_transport(const CircleConnection& c, double theta0, double theta1, int steps) {
  if (steps < 8) throw ValidationError("parallel_transport: steps must be >= 8");
  if (!(theta0 < theta1)) throw ValidationError("parallel_transport: need theta0 < theta1");
  const double h = (theta1 - theta0) / steps;
  Matrix g = Matrix::Identity(c.dim(), c.dim());
  for (int i = 0; i < steps; ++i) g = rk4_step(c, theta0 + i * h, h, g);
  return nearest_orthogonal(g);
}

std::vector<Matrix> transport_along_grid(const CircleConnection& c, int n, int substeps) {
  if (n < 1 || substeps < 1) throw ValidationError("transport_along_grid: bad grid");
  const double cell = kTwoPi / n;
  const double h = cell / substeps;
  std::vector<Matrix> out;
  out.reserve(n + 1);
  Matrix g = Matrix::Identity(c.dim(), c.dim());
  out.push_back(g);
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < substeps; ++s) g = rk4_step(c, i * cell + s * h, h, g);
    out.push_back(nearest_orthogonal(g));
  }
  return out;
}

ConjugacyInvariant holonomy(const CircleConnection& c, int steps) {
  return conjugacy_invariants(parallel_transport(c, 0.0, kTwoPi, steps));
}

ConjugacyInvariant holonomy_at_radius(const DiskConnection& d, double r, int steps) {
  return holonomy(d.restrict_to_circle(r), steps);
}

LimitHolonomy limit_holonomy(const DiskConnection& d, std::span<const double> radii, int steps,
                             double tolerance) {
  if (radii.size() < 3) throw ValidationError("limit_holonomy: need at least 3 radii");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] < radii[i - 1])) {
      throw ValidationError("limit_holonomy: radii must be strictly decreasing");
    }
  }
  LimitHolonomy out;
  out.report.tolerance = tolerance;
  out.report.radii.assign(radii.begin(), radii.end());
  for (double r : radii) out.report.invariants.push_back(holonomy_at_radius(d, r, steps));
  const auto& inv = out.report.invariants;
  for (std::size_t i = 1; i < inv.size(); ++i) {
    out.report.successive_distances.push_back(invariant_distance(inv[i - 1], inv[i]));
  }
  const auto& dist = out.report.successive_distances;
  const double tail = std::max(dist[dist.size() - 1], dist[dist.size() - 2]);
  out.report.cauchy = tail <= tolerance;
  out.invariant = inv.back();
  return out;
}

GaugeTransform::GaugeTransform(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw ValidationError("GaugeTransform: need at least one factor");
  for (const auto& f : factors_) {
    if (f.generator.dim() != factors_[0].generator.dim()) {
      throw ValidationError("GaugeTransform: inconsistent generator dimensions");
    }
  }
}

GaugeTransform GaugeTransform::random(int dim, std::mt19937_64& rng, int n_factors, int harmonics,
                                      double amplitude) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> coeff(-amplitude, amplitude);
  std::vector<Factor> factors;
  for (int i = 0; i < n_factors; ++i) {
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) m(r, c) = normal(rng);
    Matrix skew = 0.5 * (m - m.transpose());
    if (dim > 1) skew /= skew.norm() / std::sqrt(2.0);
    Factor f{SkewMatrix(skew), {}, {}};
    for (int k = 1; k <= harmonics; ++k) {
      f.cos_coeffs.push_back(coeff(rng) / k);
      f.sin_coeffs.push_back(coeff(rng) / k);
    }
    factors.push_back(std::move(f));
  }
  return GaugeTransform(std::move(factors));
}

int GaugeTransform::dim() const { return factors_[0].generator.dim(); }

double GaugeTransform::profile(const Factor& f, double theta) const {
  double v = 0.0;
  for (std::size_t k = 0; k < f.cos_coeffs.size(); ++k) {
    const double kk = static_cast<double>(k + 1);
    v += f.cos_coeffs[k] * std::cos(kk * theta) + f.sin_coeffs[k] * std::sin(kk * theta);
  }
  return v;
}

double GaugeTransform::profile_derivative(const Factor& f, double theta) const {
  double v = 0.0;
  for (std::size_t k = 0; k < f.cos_coeffs.size(); ++k) {
    const double kk = static_cast<double>(k + 1);
    v += kk * (-f.cos_coeffs[k] * std::sin(kk * theta) + f.sin_coeffs[k] * std::cos(kk * theta));
  }
  return v;
}

Matrix GaugeTransform::value(double theta) const {
  Matrix s = Matrix::Identity(dim(), dim());
  for (const auto& f : factors_) s = s * exp_skew(f.generator * profile(f, theta));
  return s;
}

Matrix GaugeTransform::left_derivative(double theta) const {
  // s = P_1 ... P_n  =>  s^{-1}s' = sum_i Q_i^{-1} (phi_i' E_i) Q_i, Q_i = P_{i+1}...P_n
  const int n = static_cast<int>(factors_.size());
  Matrix q = Matrix::Identity(dim(), dim());
  Matrix result = Matrix::Zero(dim(), dim());
  for (int i = n - 1; i >= 0; --i) {
    const auto& f = factors_[i];
    result += q.transpose() * (profile_derivative(f, theta) * f.generator.matrix()) * q;
    q = exp_skew(f.generator * profile(f, theta)) * q;
  }
  return result;
}

CircleConnection GaugeTransform::apply(const CircleConnection& c) const {
  if (c.dim() != dim()) throw ValidationError("GaugeTransform::apply: dimension mismatch");
  GaugeTransform self = *this;
  return CircleConnection::closed_form(c.dim(), [self, c](double theta) {
    const Matrix s = self.value(theta);
    Matrix a = self.left_derivative(theta) + s.transpose() * c(theta) * s;
    return Matrix(0.5 * (a - a.transpose()));
  });
}

Matrix GaugeTransform::pull_back_section(const Matrix& section,
                                         std::span<const double> thetas) const {
  if (section.cols() != static_cast<Eigen::Index>(thetas.size()) || section.rows() != dim()) {
    throw ValidationError("GaugeTransform::pull_back_section: shape mismatch");
  }
  Matrix out(section.rows(), section.cols());
  for (Eigen::Index i = 0; i < section.cols(); ++i) {
    out.col(i) = value(thetas[i]).transpose() * section.col(i);
  }
  return out;
}

}  // namespace gaugelab
