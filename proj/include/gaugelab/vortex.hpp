#pragma once

#include "gaugelab/cylinder.hpp"
#include "gaugelab/decay.hpp"
#include "gaugelab/holonomy.hpp"

#include <iosfwd>
#include <vector>

namespace gaugelab {

/**
 * Rotationally symmetric abelian vortex on the half-cylinder, reduced to
 *
 *   f' = -(1 + a) sin f,   a' = e^{-2t} cos f,
 *
 * with u = (cos th sin f, sin th sin f, cos f) and A = a J_z d(theta).
 */
struct VortexTrajectory {
  double a0 = 0.0;
  double f0 = 0.0;
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> f;
  std::vector<double> a;
  std::vector<double> da;  // a'(t) from the right-hand side
  // a[i+1] - a[i] as produced by the integrator, kept separately so that
  // differences of nearby a values do not cancel.
  std::vector<double> a_step;

  double t_end() const { return t.back(); }
  std::size_t size() const { return t.size(); }
};

// Classical RK4 with step T/ceil(T/dt). After integration the first equation
// is checked with a fourth-order difference of f; a residual above 1e-8 throws
// NumericalError.
VortexTrajectory integrate_vortex(double a0, double f0, double T, double dt);

// a = alpha constant, f = 2 arctan(e^{-(1+alpha) t}).
VortexTrajectory flat_trajectory(double alpha, double T, double dt);

// 2 arctan(l exp(-int_0^t (1 + a))), the integral by cumulative trapezoid.
std::vector<double> closed_form_f(const VortexTrajectory& traj, double l = 1.0);

struct LimitAlpha {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr double kMinLimitTime = 15.0;

// a(T) + a'(T)/2, bracketed by a(T) -+ e^{-2T}/2. Throws NumericalError if
// T < 15.
LimitAlpha limit_alpha(const VortexTrajectory& traj);

// alpha_hat - a(t_i) for every sample, summed backwards from the tail.
std::vector<double> alpha_gap(const VortexTrajectory& traj);

// |grad_A u| = sqrt(2) |1 + a| sin f
std::vector<double> grad_norm(const VortexTrajectory& traj);
// |F_A| = |a'|
std::vector<double> curvature_norm(const VortexTrajectory& traj);
// e^{2t} a'
std::vector<double> renorm_curv(const VortexTrajectory& traj);
// |e^{2t} a' - alpha1| with alpha1 = 1, evaluated as 2 sin^2(f/2)
std::vector<double> renorm_curv_deviation(const VortexTrajectory& traj);

// Limit of e^{2t} a' by Aitken extrapolation of the samples at T - 2 span,
// T - span and T. Falls back to the last sample when the sequence is already
// stationary.
double extrapolate_alpha1(const VortexTrajectory& traj, double span = 2.0);

struct VortexWindows {
  FitWindow grad{15.0, 25.0};
  FitWindow curv{10.0, 20.0};
  FitWindow renorm{10.0, 20.0};
};

struct VortexSummary {
  double a0 = 0.0;
  double f0 = 0.0;
  double dt = 0.0;
  double t_end = 0.0;
  LimitAlpha alpha;
  double alpha1 = 0.0;      // extrapolated limit of e^{2t} a'
  double alpha1_raw = 0.0;  // e^{2T} a'(T)
  bool stationary = false;
  DecayFit grad_fit;
  DecayFit curv_fit;
  DecayFit renorm_fit;
  bool grad_fitted = false;
  bool curv_fitted = false;
  bool renorm_fitted = false;
};

// Fits that have too few usable points are left unfitted rather than thrown.
VortexSummary summarize(const VortexTrajectory& traj, const VortexWindows& windows = {});

void write_trajectory_csv(std::ostream& out, const VortexTrajectory& traj);

// 3D field on a grid whose rows coincide with trajectory samples. The flat
// reference is alpha_hat J_z and the connection offset (a - alpha_hat) J_z.
CylinderField vortex_field(const VortexTrajectory& traj, const CylinderGrid& grid);

// A_theta(r) = a(-log r) J_z, cubic Hermite in t; alpha_hat beyond the end.
DiskConnection vortex_connection(const VortexTrajectory& traj);

}  // namespace gaugelab
