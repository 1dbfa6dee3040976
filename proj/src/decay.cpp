#include "gaugelab/decay.hpp"

#include "gaugelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gaugelab {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  if (syy > 0 && sxx > 0) {
    f.r_squared = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  }
  return f;
}

void check_grid(double t1, double t2, int grid_points) {
  if (!(t1 < t2)) throw ValidationError("comparison check: need T1 < T2");
  if (grid_points < 2) throw ValidationError("comparison check: grid needs >= 2 points");
}

}  // namespace

DecayFit fit_exponential(std::span<const double> t, std::span<const double> y, FitWindow window,
                         int bootstrap_samples, std::uint64_t seed) {
  if (t.size() != y.size()) throw ValidationError("fit_exponential: t and y differ in length");
  if (!(window.lo < window.hi)) throw ValidationError("fit_exponential: empty window");
  std::vector<double> xs, ls;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window.lo || t[i] > window.hi) continue;
    if (!(y[i] > kFitFloor) || !std::isfinite(y[i])) continue;
    xs.push_back(t[i]);
    ls.push_back(std::log(y[i]));
  }
  if (static_cast<int>(xs.size()) < kMinFitPoints) {
    throw ValidationError("fit_exponential: fewer than 5 usable points in window");
  }
  const LineFit lf = least_squares(xs, ls);
  DecayFit fit;
  fit.rate = -lf.slope;
  fit.log_amplitude = lf.intercept;
  fit.r_squared = lf.r_squared;
  fit.window = window;
  fit.n_points = static_cast<int>(xs.size());

  if (bootstrap_samples > 1) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
    std::vector<double> bx(xs.size()), bl(xs.size()), rates;
    rates.reserve(bootstrap_samples);
    for (int b = 0; b < bootstrap_samples; ++b) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const std::size_t j = pick(rng);
        bx[i] = xs[j];
        bl[i] = ls[j];
      }
      rates.push_back(-least_squares(bx, bl).slope);
    }
    double mean = 0.0;
    for (double r : rates) mean += r;
    mean /= rates.size();
    double var = 0.0;
    for (double r : rates) var += (r - mean) * (r - mean);
    fit.rate_spread = std::sqrt(var / (rates.size() - 1));
  }
  return fit;
}

ComparisonReport comparison_check_g0(double a_val, double b_val, double delta, double eps,
                                     double c, double t1, double t2, int grid_points) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("comparison_check_g0: delta must lie in (0, 1)");
  }
  check_grid(t1, t2, grid_points);
  const double c0 = 1.0 / (1.0 - delta * delta);
  const double ce = c * eps;
  auto g0 = [&](double t) {
    return ce * (2.0 * (std::exp(-delta * (t - t1)) + std::exp(-delta * (t2 - t))) -
                 c0 * std::exp(-t));
  };
  auto g0_dd = [&](double t) {
    return ce * (2.0 * delta * delta * (std::exp(-delta * (t - t1)) + std::exp(-delta * (t2 - t))) -
                 c0 * std::exp(-t));
  };
  ComparisonReport rep;
  rep.points = grid_points;
  rep.max_residual = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    const double t = t1 + (t2 - t1) * i / (grid_points - 1);
    const double lhs = g0_dd(t) - delta * delta * g0(t) + ce * std::exp(-t);
    rep.max_residual = std::max(rep.max_residual, lhs);
  }
  rep.inequality_holds = rep.max_residual <= rep.slack;
  rep.value_at_t1 = g0(t1);
  rep.value_at_t2 = g0(t2);
  rep.boundary_dominates = rep.value_at_t1 >= a_val && rep.value_at_t2 >= b_val;
  return rep;
}

ComparisonReport comparison_check_g1(double delta, double c_alpha, double kappa, double eps,
                                     double c, double t1, double t2, int grid_points) {
  if (!(kappa * kappa > c_alpha)) {
    throw ValidationError("comparison_check_g1: need kappa^2 > C(alpha)");
  }
  if (!(c_alpha > 0.0)) throw ValidationError("comparison_check_g1: C(alpha) must be positive");
  check_grid(t1, t2, grid_points);
  const double s = std::sqrt(c_alpha);
  const double c1 = 1.0 / (kappa * kappa - c_alpha);
  const double ce = c * eps;
  auto pair = [&](double x, double t) { return std::exp(-x * (t - t1)) + std::exp(-x * (t2 - t)); };
  auto g1 = [&](double t) {
    return ce * (2.0 * pair(s, t) - pair(2 * delta, t) - c1 * std::exp(-kappa * t));
  };
  auto g1_dd = [&](double t) {
    return ce * (2.0 * s * s * pair(s, t) - 4.0 * delta * delta * pair(2 * delta, t) -
                 c1 * kappa * kappa * std::exp(-kappa * t));
  };
  ComparisonReport rep;
  rep.points = grid_points;
  rep.max_residual = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    const double t = t1 + (t2 - t1) * i / (grid_points - 1);
    const double lhs = g1_dd(t) - c_alpha * g1(t);
    const double rhs = -c * eps * eps * pair(2 * delta, t) - ce * std::exp(-kappa * t);
    rep.max_residual = std::max(rep.max_residual, lhs - rhs);
    const double hom = 2.0 * s * s * pair(s, t) - c_alpha * 2.0 * pair(s, t);
    rep.homogeneous_residual = std::max(rep.homogeneous_residual, std::abs(hom));
  }
  rep.inequality_holds = rep.max_residual <= rep.slack;
  rep.value_at_t1 = g1(t1);
  rep.value_at_t2 = g1(t2);
  return rep;
}

}  // namespace gaugelab
