#pragma once

#include "gaugelab/cylinder.hpp"
#include "gaugelab/decay.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gaugelab {

struct Forcing {
  MapFunction field;  // (t, theta) -> R^K
  double kappa = 2.0;
};

enum class RelaxMethod {
  // u <- normalize(u + w P_u M^{-1} r), M the flat linear operator,
  // w backtracked so the energy never increases
  Preconditioned,
  // u <- normalize(u + tau P_u r), tau = 0.8 of the explicit stability limit
  Jacobi,
};

/**
 * Twisted harmonic map problem on [t_min, t_max] x U(1) with a sphere target
 * and flat connection alpha d(theta).
 *
 * Row 0 is fixed to bc_low. The last row is either fixed to bc_high or free
 * with the discrete Neumann condition u_{n_t} = u_{n_t - 1}.
 */
struct FlowProblem {
  CylinderGrid grid;
  SkewMatrix alpha;
  Matrix bc_low;
  std::optional<Matrix> bc_high;  // empty: Neumann
  // Neumann initialization target: rows interpolate from bc_low toward it.
  std::optional<Matrix> init_high;
  std::optional<Forcing> forcing;
  double tol = 1e-10;
  int max_iters = 20000;
  RelaxMethod method = RelaxMethod::Preconditioned;
  double eps0 = 0.5;

  int dim() const { return alpha.dim(); }
  // Throws ValidationError; returns warnings (e.g. kappa < 4/3).
  std::vector<std::string> validate() const;
};

// The loop (cos th sin f, sin th sin f, cos f, 0, ...) in R^K, K >= 3.
Matrix latitude_loop(int dim, int n_theta, double f);
// Constant loop at the k-th unit vector.
Matrix constant_loop(int dim, int n_theta, int axis);

struct FlowSolution {
  CylinderField u;
  double residual_sup = 0.0;
  int iterations = 0;
  double energy = 0.0;  // discrete Dirichlet energy of the final field
  EnergyProfile profile;
  std::vector<Matrix> forcing_values;  // per row; empty without forcing
  double kappa = 0.0;
  std::vector<std::string> warnings;
};

// Throws ConvergenceError when max_iters is reached above tol and
// NumericalError when the energy increases.
FlowSolution relax(const FlowProblem& p);

// sup over unknown rows of |P_u(L u - f)|.
double tangential_residual(const FlowProblem& p, const std::vector<Matrix>& u);

struct DecayReport {
  EnergyProfile profile;
  FitWindow window;
  bool degenerate = false;  // gamma too small to fit
  DecayFit fit;
  double expected_rate = 0.0;  // sqrt(C(alpha))
  double relative_error = 0.0;
  // E_A(u) on [window.lo - 1, t_max] against eps0^2
  double tail_energy = 0.0;
  bool small_energy = false;
};

// Default window: [t_min + min(10, L/2), t_max - max(2, L/4)].
FitWindow default_decay_window(const CylinderGrid& g);

// Throws ValidationError for strips shorter than 12.
DecayReport decay_profile(const FlowSolution& s, double eps0 = 0.5);
DecayReport decay_profile(const FlowSolution& s, FitWindow window, double eps0 = 0.5);

struct OdiReport {
  int rows_checked = 0;
  std::vector<int> violations;
  double c_alpha = 0.0;
  double c_sup = 1.0;
  double h2 = 0.0;
  // smallest C making every checked row hold without slack
  double min_constant = 0.0;
  double worst_margin = 0.0;  // min over rows of lhs - rhs + slack
};

// Rowwise check of gamma'' >= (C(alpha) - c_sup G_i) gamma_i - c_sup F_i,
// with G_i = sup_row |grad u|^2, F_i the forcing term and slack 10 h^2 gamma_i.
OdiReport verify_odi_series(std::span<const double> gamma, std::span<const double> sup_grad2,
                            std::span<const double> forcing_term, double h_t, double h2,
                            double c_alpha, double c_sup, int boundary_layer = 2);

OdiReport verify_odi(const FlowSolution& s, double c_sup = 1.0, int boundary_layer = 2);

// Per-row sup of |u_t|^2 + |d_theta,alpha u|^2.
std::vector<double> sup_grad_squared(const CylinderField& fld);

struct HReport {
  std::vector<double> t;
  std::vector<double> h;
  double drift = 0.0;  // max H - min H outside the boundary layer
  double slack = 0.0;  // 10 h^2
  bool constant = false;
  double mean = 0.0;
  bool forced = false;
  bool rate_fitted = false;
  DecayFit abs_h_fit;
};

HReport verify_H(const FlowSolution& s, int boundary_layer = 2);
HReport verify_H(const FlowSolution& s, FitWindow window, int boundary_layer = 2);

}  // namespace gaugelab
