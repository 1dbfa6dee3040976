#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gaugelab {

struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// Least-squares fit of log y = log_amplitude - rate * t over a window.
struct DecayFit {
  double rate = 0.0;
  double log_amplitude = 0.0;
  double r_squared = 0.0;
  FitWindow window;
  int n_points = 0;
  // Standard deviation of the rate over bootstrap resamples of the rows.
  double rate_spread = 0.0;
};

inline constexpr double kFitFloor = 1e-13;
inline constexpr int kMinFitPoints = 5;

// Points outside the window or with y <= kFitFloor are dropped. Throws
// ValidationError if fewer than kMinFitPoints remain.
DecayFit fit_exponential(std::span<const double> t, std::span<const double> y, FitWindow window,
                         int bootstrap_samples = 200, std::uint64_t seed = 20240601);

struct ComparisonReport {
  int points = 0;
  // max over the grid of the left side minus the right side of the
  // differential inequality; <= slack means it holds everywhere
  double max_residual = 0.0;
  double slack = 1e-9;
  bool inequality_holds = false;
  double value_at_t1 = 0.0;
  double value_at_t2 = 0.0;
  bool boundary_dominates = true;
  // max |h'' - C(alpha) h| for the homogeneous part h (g1 only)
  double homogeneous_residual = 0.0;
};

/// g0 = C eps (2(e^{-d(t-T1)} + e^{-d(T2-t)}) - c0 e^{-t}), c0 = 1/(1-d^2).
/// Checks g0'' - d^2 g0 + C eps e^{-t} <= 0 on the grid and the boundary
/// values against a_val, b_val.
ComparisonReport comparison_check_g0(double a_val, double b_val, double delta, double eps,
                                     double c, double t1, double t2, int grid_points);

/// g1 = C eps (2 E_s - E_{2d} - c1 e^{-kappa t}), s = sqrt(C(alpha)),
/// E_x(t) = e^{-x(t-T1)} + e^{-x(T2-t)}, c1 = 1/(kappa^2 - C(alpha)).
/// Checks g1'' - C(alpha) g1 <= -C eps^2 E_{2d} - C eps e^{-kappa t}.
ComparisonReport comparison_check_g1(double delta, double c_alpha, double kappa, double eps,
                                     double c, double t1, double t2, int grid_points);

}  // namespace gaugelab
