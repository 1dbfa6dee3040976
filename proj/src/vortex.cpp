#include "gaugelab/vortex.hpp"

#include "gaugelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <memory>
#include <numbers>
#include <ostream>

namespace gaugelab {

namespace {

struct State {
  double f;
  double a;
};

State rhs(double t, const State& s) {
  return {-(1.0 + s.a) * std::sin(s.f), std::exp(-2.0 * t) * std::cos(s.f)};
}

// Fourth-order check of f' = -(1 + a) sin f on interior samples.
double first_equation_residual(const VortexTrajectory& tr) {
  const std::size_t n = tr.size();
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double fp = (-tr.f[i + 2] + 8.0 * tr.f[i + 1] - 8.0 * tr.f[i - 1] + tr.f[i - 2]) /
                      (12.0 * tr.dt);
    worst = std::max(worst, std::abs(fp + (1.0 + tr.a[i]) * std::sin(tr.f[i])));
  }
  return worst;
}

std::size_t step_count(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw ValidationError("vortex: T and dt must be positive");
  return static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
}

}  // namespace

VortexTrajectory integrate_vortex(double a0, double f0, double T, double dt) {
  if (!(f0 > 0.0 && f0 < std::numbers::pi)) {
    throw ValidationError("integrate_vortex: f0 must lie in (0, pi)");
  }
  const std::size_t n = step_count(T, dt);
  const double h = T / static_cast<double>(n);
  VortexTrajectory tr;
  tr.a0 = a0;
  tr.f0 = f0;
  tr.dt = h;
  tr.t.reserve(n + 1);
  tr.f.reserve(n + 1);
  tr.a.reserve(n + 1);
  tr.da.reserve(n + 1);
  tr.a_step.reserve(n);
  State s{f0, a0};
  for (std::size_t i = 0;; ++i) {
    const double t = h * static_cast<double>(i);
    const State k1 = rhs(t, s);
    tr.t.push_back(t);
    tr.f.push_back(s.f);
    tr.a.push_back(s.a);
    tr.da.push_back(k1.a);
    if (i == n) break;
    const State k2 = rhs(t + 0.5 * h, {s.f + 0.5 * h * k1.f, s.a + 0.5 * h * k1.a});
    const State k3 = rhs(t + 0.5 * h, {s.f + 0.5 * h * k2.f, s.a + 0.5 * h * k2.a});
    const State k4 = rhs(t + h, {s.f + h * k3.f, s.a + h * k3.a});
    const double df = h / 6.0 * (k1.f + 2.0 * k2.f + 2.0 * k3.f + k4.f);
    const double da = h / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
    s.f += df;
    s.a += da;
    tr.a_step.push_back(da);
  }
  const double res = first_equation_residual(tr);
  if (!std::isfinite(res) || res > 1e-8) {
    throw NumericalError("integrate_vortex: step too large, first-equation residual " +
                         std::to_string(res));
  }
  return tr;
}

VortexTrajectory flat_trajectory(double alpha, double T, double dt) {
  const std::size_t n = step_count(T, dt);
  const double h = T / static_cast<double>(n);
  VortexTrajectory tr;
  tr.a0 = alpha;
  tr.f0 = std::numbers::pi / 2.0;
  tr.dt = h;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = h * static_cast<double>(i);
    tr.t.push_back(t);
    tr.f.push_back(2.0 * std::atan(std::exp(-(1.0 + alpha) * t)));
    tr.a.push_back(alpha);
    tr.da.push_back(0.0);
    if (i < n) tr.a_step.push_back(0.0);
  }
  return tr;
}

std::vector<double> closed_form_f(const VortexTrajectory& traj, double l) {
  if (!(l > 0.0)) throw ValidationError("closed_form_f: l must be positive");
  std::vector<double> out(traj.size());
  double integral = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (i > 0) {
      integral += 0.5 * (traj.t[i] - traj.t[i - 1]) * ((1.0 + traj.a[i]) + (1.0 + traj.a[i - 1]));
    }
    out[i] = 2.0 * std::atan(l * std::exp(-integral));
  }
  return out;
}

LimitAlpha limit_alpha(const VortexTrajectory& traj) {
  const double T = traj.t_end();
  if (T < kMinLimitTime) {
    throw NumericalError("limit_alpha: trajectory must reach t >= 15 for a certified limit");
  }
  const double aT = traj.a.back();
  const double half = 0.5 * std::exp(-2.0 * T);
  return {aT + 0.5 * traj.da.back(), aT - half, aT + half};
}

std::vector<double> alpha_gap(const VortexTrajectory& traj) {
  const std::size_t n = traj.size();
  std::vector<double> gap(n);
  gap[n - 1] = 0.5 * traj.da.back();
  for (std::size_t i = n - 1; i-- > 0;) gap[i] = gap[i + 1] + traj.a_step[i];
  return gap;
}

std::vector<double> grad_norm(const VortexTrajectory& traj) {
  std::vector<double> out(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out[i] = std::numbers::sqrt2 * std::abs(1.0 + traj.a[i]) * std::sin(traj.f[i]);
  }
  return out;
}

std::vector<double> curvature_norm(const VortexTrajectory& traj) {
  std::vector<double> out(traj.size());
  std::transform(traj.da.begin(), traj.da.end(), out.begin(), [](double x) { return std::abs(x); });
  return out;
}

std::vector<double> renorm_curv(const VortexTrajectory& traj) {
  std::vector<double> out(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) out[i] = std::exp(2.0 * traj.t[i]) * traj.da[i];
  return out;
}

std::vector<double> renorm_curv_deviation(const VortexTrajectory& traj) {
  std::vector<double> out(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double s = std::sin(0.5 * traj.f[i]);
    out[i] = 2.0 * s * s;
  }
  return out;
}

double extrapolate_alpha1(const VortexTrajectory& traj, double span) {
  const auto rc = renorm_curv(traj);
  const auto stride = static_cast<std::size_t>(std::llround(span / traj.dt));
  if (stride == 0 || 2 * stride >= traj.size()) {
    throw ValidationError("extrapolate_alpha1: trajectory shorter than two spans");
  }
  const std::size_t n = traj.size() - 1;
  const double x0 = rc[n - 2 * stride];
  const double x1 = rc[n - stride];
  const double x2 = rc[n];
  const double d1 = x1 - x0;
  const double d2 = x2 - x1;
  const double denom = d2 - d1;
  // Geometric convergence needs both steps of one sign and shrinking.
  if (denom == 0.0 || d1 * d2 <= 0.0 || std::abs(d2) >= std::abs(d1)) return x2;
  return x2 - d2 * d2 / denom;
}

VortexSummary summarize(const VortexTrajectory& traj, const VortexWindows& windows) {
  VortexSummary s;
  s.a0 = traj.a0;
  s.f0 = traj.f0;
  s.dt = traj.dt;
  s.t_end = traj.t_end();
  s.alpha = limit_alpha(traj);
  s.alpha1_raw = renorm_curv(traj).back();
  s.alpha1 = extrapolate_alpha1(traj);
  s.stationary = std::abs(1.0 + traj.a0) == 0.0 && std::abs(std::cos(traj.f0)) < 1e-15;
  auto try_fit = [&](const std::vector<double>& y, FitWindow w, DecayFit& out) {
    try {
      out = fit_exponential(traj.t, y, w);
      return true;
    } catch (const ValidationError&) {
      return false;
    }
  };
  s.grad_fitted = try_fit(grad_norm(traj), windows.grad, s.grad_fit);
  s.curv_fitted = try_fit(curvature_norm(traj), windows.curv, s.curv_fit);
  s.renorm_fitted = try_fit(renorm_curv_deviation(traj), windows.renorm, s.renorm_fit);
  return s;
}

void write_trajectory_csv(std::ostream& out, const VortexTrajectory& traj) {
  const auto g = grad_norm(traj);
  const auto c = curvature_norm(traj);
  const auto r = renorm_curv(traj);
  out << "t,f,a,grad_norm,curv_norm,renorm_curv\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << traj.t[i] << ',' << traj.f[i] << ',' << traj.a[i] << ',' << g[i] << ',' << c[i] << ','
        << r[i] << '\n';
  }
}

CylinderField vortex_field(const VortexTrajectory& traj, const CylinderGrid& grid) {
  grid.validate();
  const double alpha_hat = limit_alpha(traj).value;
  const auto gap = alpha_gap(traj);
  const SkewMatrix jz = rotation_generator_z();
  std::vector<double> f_rows(grid.n_t);
  std::vector<std::vector<Matrix>> offset(grid.n_t);
  for (int i = 0; i < grid.n_t; ++i) {
    const double t = grid.t(i);
    const double k = std::round((t - traj.t.front()) / traj.dt);
    if (k < 0 || k >= static_cast<double>(traj.size())) {
      throw ValidationError("vortex_field: grid extends beyond the trajectory");
    }
    const auto idx = static_cast<std::size_t>(k);
    if (std::abs(traj.t[idx] - t) > 1e-9 * std::max(1.0, std::abs(t))) {
      throw ValidationError("vortex_field: grid rows must coincide with trajectory samples");
    }
    f_rows[i] = traj.f[idx];
    offset[i].assign(grid.n_theta, Matrix(-gap[idx] * jz.matrix()));
  }
  CylinderField fld = rotational_field(grid, alpha_hat, f_rows);
  fld.a_offset = std::move(offset);
  return fld;
}

DiskConnection vortex_connection(const VortexTrajectory& traj) {
  auto data = std::make_shared<const VortexTrajectory>(traj);
  const double alpha_hat = limit_alpha(traj).value;
  const Matrix jz = rotation_generator_z().matrix();
  auto a_of_t = [data, alpha_hat](double t) {
    const VortexTrajectory& tr = *data;
    if (t >= tr.t_end()) return alpha_hat;
    if (t <= 0.0) return tr.a.front();
    const auto k = std::min(static_cast<std::size_t>(t / tr.dt), tr.size() - 2);
    const double h = tr.t[k + 1] - tr.t[k];
    const double s = (t - tr.t[k]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * tr.a[k] + h10 * h * tr.da[k] + h01 * tr.a[k + 1] + h11 * h * tr.da[k + 1];
  };
  return DiskConnection::angular(3, [a_of_t, jz](double r, double) -> Matrix {
    return a_of_t(disk_to_cylinder(r)) * jz;
  });
}

}  // namespace gaugelab
