#include "gaugelab/commands.hpp"

#include "gaugelab/decay.hpp"
#include "gaugelab/errors.hpp"
#include "gaugelab/holonomy.hpp"
#include "gaugelab/poincare.hpp"
#include "gaugelab/twisted_flow.hpp"
#include "gaugelab/vortex.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

namespace gaugelab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

struct Artifacts {
  json summary;
  std::map<std::string, std::string> files;  // file name -> contents
  int exit_code = kExitOk;
};

json fit_json(const DecayFit& f) {
  return {{"rate", f.rate},
          {"log_amplitude", f.log_amplitude},
          {"r_squared", f.r_squared},
          {"window", {f.window.lo, f.window.hi}},
          {"n_points", f.n_points},
          {"rate_spread", f.rate_spread}};
}

FitWindow window_of(const Config& cfg, const std::string& key, FitWindow fallback) {
  const auto w = cfg.get_list(key, {fallback.lo, fallback.hi});
  if (w.size() != 2 || !(w[0] < w[1])) {
    throw ValidationError("key '" + key + "': expected lo, hi with lo < hi");
  }
  return {w[0], w[1]};
}

SkewMatrix alpha_of(const Config& cfg, int default_dim) {
  const auto angles = cfg.get_list("angles", {});
  const int dim = cfg.get_int("dim", std::max(default_dim, 2 * static_cast<int>(angles.size())));
  if (dim < 1 || 2 * static_cast<int>(angles.size()) > dim) {
    throw ValidationError("need dim >= 2 * (number of angles)");
  }
  return SkewMatrix::from_block_angles(dim, angles);
}

std::vector<double> rotation_list(const ConjugacyInvariant& inv) { return inv.rotation_angles; }

// ---------------------------------------------------------------- poincare

Artifacts cmd_poincare(const Config& cfg) {
  cfg.require_known({"dim", "angles", "n_modes", "tol"});
  const SkewMatrix alpha = alpha_of(cfg, 2);
  const int n_modes = cfg.get_int("n_modes", 256);
  const double tol = cfg.get_double("tol", 1e-6);
  const auto closed = poincare_constant(standard_form(alpha));
  const auto spec = covariant_spectrum(CircleConnection::flat(alpha), n_modes);
  const double diff = std::abs(spec.first_positive - closed.value);

  Artifacts a;
  a.summary = {{"command", "poincare"},
               {"dim", alpha.dim()},
               {"angles", cfg.get_list("angles", {})},
               {"n_modes", n_modes},
               {"closed_form", closed.value},
               {"spectral", spec.first_positive},
               {"kernel_dim", spec.kernel_dim},
               {"trivial", closed.trivial},
               {"attaining_block", closed.block},
               {"attaining_k", closed.k},
               {"difference", diff},
               {"tolerance", tol},
               {"match", diff <= tol}};
  std::ostringstream csv;
  csv << "index,eigenvalue\n" << std::setprecision(17);
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    csv << i << ',' << spec.eigenvalues[i] << '\n';
  }
  a.files["spectrum.csv"] = csv.str();
  a.exit_code = diff <= tol ? kExitOk : kExitMismatch;
  return a;
}

// ------------------------------------------------------------------ vortex

Artifacts cmd_vortex(const Config& cfg) {
  cfg.require_known({"a0", "f0", "T", "dt", "grad_window", "curv_window", "renorm_window",
                     "check_rates", "rate_tolerance"});
  const double a0 = cfg.get_double("a0", -0.9);
  const double f0 = cfg.get_double("f0", kPi / 2);
  const double T = cfg.get_double("T", 25.0);
  const double dt = cfg.get_double("dt", 1e-3);
  VortexWindows w;
  w.grad = window_of(cfg, "grad_window", w.grad);
  w.curv = window_of(cfg, "curv_window", w.curv);
  w.renorm = window_of(cfg, "renorm_window", w.renorm);
  const bool check = cfg.get_bool("check_rates", false);
  const double rtol = cfg.get_double("rate_tolerance", 0.01);

  const auto tr = integrate_vortex(a0, f0, T, dt);
  const auto s = summarize(tr, w);
  const auto gap = alpha_gap(tr);
  bool bound_holds = true;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (!(std::abs(gap[i]) < 0.5 * std::exp(-2.0 * tr.t[i]))) bound_holds = false;
  }

  Artifacts a;
  json j = {{"command", "vortex"},
            {"a0", a0},
            {"f0", f0},
            {"T", s.t_end},
            {"dt", s.dt},
            {"samples", tr.size()},
            {"stationary", s.stationary},
            {"alpha_hat", s.alpha.value},
            {"alpha_bracket", {s.alpha.lo, s.alpha.hi}},
            {"alpha_gap_bound_holds", bound_holds},
            {"alpha1", s.alpha1},
            {"alpha1_raw", s.alpha1_raw},
            {"expected_grad_rate", 1.0 + s.alpha.value}};
  j["grad_rate"] = s.grad_fitted ? json(s.grad_fit.rate) : json(nullptr);
  j["curv_rate"] = s.curv_fitted ? json(s.curv_fit.rate) : json(nullptr);
  j["renorm_rate"] = s.renorm_fitted ? json(s.renorm_fit.rate) : json(nullptr);
  if (s.grad_fitted) j["grad_fit"] = fit_json(s.grad_fit);
  if (s.curv_fitted) j["curv_fit"] = fit_json(s.curv_fit);
  if (s.renorm_fitted) j["renorm_fit"] = fit_json(s.renorm_fit);

  if (check) {
    const double expected = 1.0 + s.alpha.value;
    const bool grad_ok = s.grad_fitted && std::abs(s.grad_fit.rate - expected) <= rtol * expected;
    const bool curv_ok = s.curv_fitted && std::abs(s.curv_fit.rate - 2.0) <= rtol * 2.0;
    j["check"] = {{"rate_tolerance", rtol}, {"grad_ok", grad_ok}, {"curv_ok", curv_ok}};
    if (!(grad_ok && curv_ok)) a.exit_code = kExitMismatch;
  }
  a.summary = std::move(j);
  std::ostringstream csv;
  write_trajectory_csv(csv, tr);
  a.files["trajectory.csv"] = csv.str();
  return a;
}

// -------------------------------------------------------------------- flow

Matrix loop_of(const std::string& spec, int dim, int n_theta, double c, double t, const char* key) {
  if (spec == "closed_form") {
    if (!(c > 0.0)) throw ValidationError(std::string(key) + ": closed_form needs 0 < 1 + angle");
    return latitude_loop(dim, n_theta, 2.0 * std::atan(std::exp(-c * t)));
  }
  if (spec == "pole") return constant_loop(dim, n_theta, 2);
  if (spec.rfind("latitude:", 0) == 0) {
    return latitude_loop(dim, n_theta, parse_number(spec.substr(9)));
  }
  throw ValidationError(std::string(key) + ": unknown loop '" + spec + "'");
}

Artifacts cmd_flow(const Config& cfg) {
  cfg.require_known({"dim", "angles", "t_min", "t_max", "n_t", "n_theta", "bc_low", "bc_high",
                     "init_high", "tol", "max_iters", "method", "eps0", "forcing_amplitude",
                     "forcing_kappa", "forcing_direction", "fit_window", "c_sup", "check",
                     "rate_tolerance"});
  FlowProblem p;
  p.alpha = alpha_of(cfg, 3);
  const int dim = p.alpha.dim();
  if (dim < 3) throw ValidationError("flow: dim must be >= 3");
  const auto angles = cfg.get_list("angles", {});
  if (angles.size() > 1) throw ValidationError("flow: at most one rotation angle (about the z-axis)");
  const double c = 1.0 + (angles.empty() ? 0.0 : angles[0]);
  p.grid = CylinderGrid(cfg.get_double("t_min", 0.0), cfg.get_double("t_max", 20.0),
                        cfg.get_int("n_t", 81), cfg.get_int("n_theta", 16));
  const int nth = p.grid.n_theta;
  p.bc_low = loop_of(cfg.get_string("bc_low", "closed_form"), dim, nth, c, p.grid.t_min, "bc_low");
  const std::string high = cfg.get_string("bc_high", "neumann");
  if (high != "neumann") p.bc_high = loop_of(high, dim, nth, c, p.grid.t_max, "bc_high");
  const std::string init = cfg.get_string("init_high", high == "neumann" ? "pole" : "none");
  if (init != "none") p.init_high = loop_of(init, dim, nth, c, p.grid.t_max, "init_high");
  p.tol = cfg.get_double("tol", 1e-10);
  p.max_iters = cfg.get_int("max_iters", 20000);
  const std::string method = cfg.get_string("method", "preconditioned");
  if (method == "preconditioned") {
    p.method = RelaxMethod::Preconditioned;
  } else if (method == "jacobi") {
    p.method = RelaxMethod::Jacobi;
  } else {
    throw ValidationError("method: expected preconditioned or jacobi");
  }
  p.eps0 = cfg.get_double("eps0", 0.5);
  const double amp = cfg.get_double("forcing_amplitude", 0.0);
  if (amp != 0.0) {
    const double kappa = cfg.get_double("forcing_kappa", 2.0);
    const std::string dir = cfg.get_string("forcing_direction", "azimuthal");
    if (dir != "azimuthal" && dir != "meridional") {
      throw ValidationError("forcing_direction: expected azimuthal or meridional");
    }
    const bool az = dir == "azimuthal";
    p.forcing = Forcing{[=](double t, double th) {
                          Vector v = Vector::Zero(dim);
                          v(0) = az ? -std::sin(th) : std::cos(th);
                          v(1) = az ? std::cos(th) : std::sin(th);
                          return Vector(amp * std::exp(-kappa * t) * v);
                        },
                        kappa};
  }
  const FitWindow window = window_of(cfg, "fit_window", default_decay_window(p.grid));
  const double c_sup = cfg.get_double("c_sup", 1.0);
  const bool check = cfg.get_bool("check", false);
  const double rtol = cfg.get_double("rate_tolerance", 0.01);

  const FlowSolution s = relax(p);
  const DecayReport d = decay_profile(s, window, p.eps0);
  const OdiReport odi = verify_odi(s, c_sup);
  const HReport h = verify_H(s, window);

  Artifacts a;
  json j = {{"command", "flow"},
            {"residual", s.residual_sup},
            {"iterations", s.iterations},
            {"energy", s.energy},
            {"expected_rate", d.expected_rate},
            {"degenerate", d.degenerate},
            {"fit_window", {window.lo, window.hi}},
            {"tail_energy", d.tail_energy},
            {"small_energy", d.small_energy},
            {"odi_violations", odi.violations.size()},
            {"odi_rows", odi.rows_checked},
            {"odi_min_constant", odi.min_constant},
            {"c_sup", c_sup},
            {"H_drift", h.drift},
            {"H_slack", h.slack},
            {"H_constant", h.constant},
            {"H_mean", h.mean},
            {"warnings", s.warnings}};
  j["gamma_rate"] = d.degenerate ? json(nullptr) : json(d.fit.rate);
  j["relative_error"] = d.degenerate ? json(nullptr) : json(d.relative_error);
  if (!d.degenerate) j["gamma_fit"] = fit_json(d.fit);
  if (h.forced && h.rate_fitted) j["H_rate"] = h.abs_h_fit.rate;
  if (check) {
    const bool ok = !d.degenerate && d.relative_error <= rtol && odi.violations.empty();
    j["check"] = {{"rate_tolerance", rtol}, {"ok", ok}};
    if (!ok) a.exit_code = kExitMismatch;
  }
  a.summary = std::move(j);

  std::ostringstream prof;
  write_profile_csv(prof, s.profile);
  a.files["profile.csv"] = prof.str();
  std::ostringstream sol;
  sol << "i,j,t,theta";
  for (int k = 0; k < dim; ++k) sol << ",u" << k;
  sol << '\n' << std::setprecision(17);
  for (int i = 0; i < p.grid.n_t; ++i) {
    for (int jj = 0; jj < nth; ++jj) {
      sol << i << ',' << jj << ',' << p.grid.t(i) << ',' << p.grid.theta(jj);
      for (int k = 0; k < dim; ++k) sol << ',' << s.u.u[i](k, jj);
      sol << '\n';
    }
  }
  a.files["solution.csv"] = sol.str();
  return a;
}

// ---------------------------------------------------------------- holonomy

Artifacts cmd_holonomy(const Config& cfg) {
  cfg.require_known({"connection", "dim", "angles", "radii", "steps", "tol", "a0", "f0", "T", "dt",
                     "beta", "csv"});
  const std::string kind = cfg.get_string("connection", "flat");
  const int steps = cfg.get_int("steps", 4096);
  double tol = cfg.get_double("tol", 1e-6);
  Artifacts a;
  json j = {{"command", "holonomy"}, {"connection", kind}, {"steps", steps}};

  if (kind == "sampled") {
    const std::string path = cfg.get_string("csv", "");
    std::ifstream in(path);
    if (!in) throw ValidationError("csv: cannot read '" + path + "'");
    const auto c = CircleConnection::from_csv(in);
    const auto inv = holonomy(c, steps);
    j["dim"] = c.dim();
    j["samples"] = c.sample_count();
    j["invariant"] = rotation_list(inv);
    a.summary = std::move(j);
    return a;
  }

  std::optional<DiskConnection> disk;
  std::optional<ConjugacyInvariant> expected;
  double expected_tol = 1e-8;
  auto radii = cfg.get_list("radii", {0.5, 0.25, 0.125});
  if (kind == "flat" || kind == "perturbed") {
    const SkewMatrix alpha = alpha_of(cfg, 2);
    const int dim = alpha.dim();
    const Matrix am = alpha.matrix();
    if (kind == "flat") {
      disk.emplace(DiskConnection::angular(dim, [am](double, double) { return am; }));
    } else {
      if (dim < 2) throw ValidationError("perturbed: dim must be >= 2");
      const double beta = cfg.get_double("beta", 1.0);
      const Matrix gen = SkewMatrix::generator(dim, 0, 1).matrix();
      disk.emplace(DiskConnection::angular(dim, [am, gen, beta](double r, double th) -> Matrix {
        return am + r * r * beta * std::sin(th) * gen;
      }));
      expected_tol = std::numeric_limits<double>::infinity();
    }
    expected = conjugacy_invariants(exp_skew(-2.0 * kPi * alpha));
  } else if (kind == "vortex") {
    const auto tr = integrate_vortex(cfg.get_double("a0", -0.9), cfg.get_double("f0", kPi / 2),
                                     cfg.get_double("T", 25.0), cfg.get_double("dt", 1e-3));
    const double alpha = limit_alpha(tr).value;
    disk.emplace(vortex_connection(tr));
    const double frac = -alpha - std::floor(-alpha);
    expected = ConjugacyInvariant{3, {2.0 * kPi * std::min(frac, 1.0 - frac)}};
    if (!cfg.has("radii")) radii = {std::exp(-5.0), std::exp(-6.0), std::exp(-7.0), std::exp(-8.0)};
    expected_tol = kPi * std::exp(-2.0 * disk_to_cylinder(radii.back())) + 1e-9;
    // successive limits differ by at most pi (e^{-2t_k} + e^{-2t_{k+1}})
    if (!cfg.has("tol")) {
      const double t0 = disk_to_cylinder(radii.front());
      const double t1 = radii.size() > 1 ? disk_to_cylinder(radii[1]) : t0;
      tol = kPi * (std::exp(-2.0 * t0) + std::exp(-2.0 * t1)) + 1e-9;
    }
    j["alpha_hat"] = alpha;
  } else if (kind == "log") {
    const int dim = cfg.get_int("dim", 2);
    if (dim < 2) throw ValidationError("log: dim must be >= 2");
    const Matrix gen = SkewMatrix::generator(dim, 0, 1).matrix();
    disk.emplace(DiskConnection::angular(dim, [gen](double r, double) -> Matrix {
      return gen / disk_to_cylinder(r);
    }));
    for (double r : radii) {
      if (!(r < 1.0)) throw ValidationError("log: radii must be below 1");
    }
  } else {
    throw ValidationError("connection: expected flat, perturbed, vortex, log or sampled");
  }

  const auto lim = limit_holonomy(*disk, radii, steps, tol);
  json invs = json::array();
  for (const auto& inv : lim.report.invariants) invs.push_back(rotation_list(inv));
  j["dim"] = disk->dim();
  j["radii"] = lim.report.radii;
  j["invariants"] = invs;
  j["successive_distances"] = lim.report.successive_distances;
  j["tolerance"] = lim.report.tolerance;
  j["cauchy"] = lim.report.cauchy;
  j["limit"] = rotation_list(lim.invariant);
  if (expected) {
    const double dist = invariant_distance(lim.invariant, *expected);
    j["expected"] = rotation_list(*expected);
    j["distance_to_expected"] = dist;
    if (std::isfinite(expected_tol)) {
      j["expected_tolerance"] = expected_tol;
      j["match"] = dist <= expected_tol;
      if (dist > expected_tol) a.exit_code = kExitMismatch;
    }
  }
  a.summary = std::move(j);
  return a;
}

// --------------------------------------------------------------------- fit

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Artifacts cmd_fit(const Config& cfg) {
  const std::string mode = cfg.get_string("mode", "exponential");
  Artifacts a;
  if (mode == "g0" || mode == "g1") {
    cfg.require_known({"mode", "a_val", "b_val", "delta", "eps", "c", "c_alpha", "kappa", "t1",
                       "t2", "grid"});
    const double eps = cfg.get_double("eps", 0.1);
    const double c = cfg.get_double("c", 1.0);
    const double t1 = cfg.get_double("t1", 0.0);
    const double t2 = cfg.get_double("t2", 20.0);
    const int grid = cfg.get_int("grid", 2000);
    ComparisonReport rep;
    json j = {{"command", "fit"}, {"mode", mode}};
    if (mode == "g0") {
      rep = comparison_check_g0(cfg.get_double("a_val", 0.0), cfg.get_double("b_val", 0.0),
                                cfg.get_double("delta", 0.3), eps, c, t1, t2, grid);
      j["boundary_dominates"] = rep.boundary_dominates;
    } else {
      rep = comparison_check_g1(cfg.get_double("delta", 0.28), cfg.get_double("c_alpha", 0.09),
                                cfg.get_double("kappa", 4.0 / 3.0), eps, c, t1, t2, grid);
      j["homogeneous_residual"] = rep.homogeneous_residual;
    }
    j["points"] = rep.points;
    j["max_residual"] = rep.max_residual;
    j["slack"] = rep.slack;
    j["inequality_holds"] = rep.inequality_holds;
    j["value_at_t1"] = rep.value_at_t1;
    j["value_at_t2"] = rep.value_at_t2;
    a.summary = std::move(j);
    const bool ok = rep.inequality_holds && (mode == "g1" || rep.boundary_dominates);
    a.exit_code = ok ? kExitOk : kExitMismatch;
    return a;
  }
  if (mode != "exponential") throw ValidationError("mode: expected exponential, g0 or g1");
  cfg.require_known({"mode", "input", "t_column", "column", "window", "bootstrap", "seed",
                     "expected_rate", "rate_tolerance"});
  const std::string path = cfg.get_string("input", "");
  std::ifstream in(path);
  if (!in) throw ValidationError("input: cannot read '" + path + "'");
  const std::string t_name = cfg.get_string("t_column", "t");
  const std::string y_name = cfg.get_string("column", "");
  if (y_name.empty()) throw ValidationError("column: required");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("input: empty file");
  const auto header = split_csv_line(line);
  int ti = -1, yi = -1;
  for (int k = 0; k < static_cast<int>(header.size()); ++k) {
    if (header[k] == t_name) ti = k;
    if (header[k] == y_name) yi = k;
  }
  if (ti < 0 || yi < 0) throw ValidationError("input: missing column '" + (ti < 0 ? t_name : y_name) + "'");
  std::vector<double> t, y;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) <= std::max(ti, yi)) throw ValidationError("input: short row");
    double tv = 0.0, yv = 0.0;
    try {
      tv = std::stod(cells[ti]);
      yv = std::stod(cells[yi]);
    } catch (const std::exception&) {
      throw ValidationError("input: malformed number in row '" + line + "'");
    }
    if (!std::isfinite(tv) || !std::isfinite(yv)) continue;
    t.push_back(tv);
    y.push_back(std::abs(yv));
  }
  if (t.empty()) throw ValidationError("input: no data rows");
  const FitWindow w = window_of(cfg, "window", {t.front(), t.back()});
  const int boot = cfg.get_int("bootstrap", 200);
  const int seed = cfg.get_int("seed", 20240601);
  const auto fit = fit_exponential(t, y, w, boot, static_cast<std::uint64_t>(seed));
  json j = {{"command", "fit"}, {"mode", mode}, {"column", y_name}, {"fit", fit_json(fit)}};
  if (cfg.has("expected_rate")) {
    const double expected = cfg.get_double("expected_rate", 0.0);
    const double rtol = cfg.get_double("rate_tolerance", 0.01);
    const bool ok = std::abs(fit.rate - expected) <= rtol * std::abs(expected);
    j["expected_rate"] = expected;
    j["match"] = ok;
    if (!ok) a.exit_code = kExitMismatch;
  }
  a.summary = std::move(j);
  return a;
}

void write_artifacts(const std::string& name, const Artifacts& a, const std::string& out_dir) {
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory '" + out_dir + "'");
  auto write = [&](const std::string& file, const std::string& text) {
    std::ofstream f(dir / file, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + (dir / file).string() + "'");
    f << text;
  };
  write(name + ".json", a.summary.dump(2) + "\n");
  for (const auto& [file, text] : a.files) write(file, text);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"poincare", "vortex", "flow", "holonomy", "fit"};
  return names;
}

int run_command(const std::string& name, const Config& cfg, const std::string& out_dir,
                std::ostream& out, std::ostream& err) {
  try {
    Artifacts a;
    if (name == "poincare") {
      a = cmd_poincare(cfg);
    } else if (name == "vortex") {
      a = cmd_vortex(cfg);
    } else if (name == "flow") {
      a = cmd_flow(cfg);
    } else if (name == "holonomy") {
      a = cmd_holonomy(cfg);
    } else if (name == "fit") {
      a = cmd_fit(cfg);
    } else {
      err << "unknown command '" << name << "'\n";
      return kExitInvalidConfig;
    }
    a.summary["exit_code"] = a.exit_code;
    if (!out_dir.empty()) write_artifacts(name, a, out_dir);
    out << a.summary.dump(2) << '\n';
    return a.exit_code;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << " (residual " << e.residual() << " after " << e.iterations()
        << " iterations)\n";
    return kExitNonConvergence;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const ValidationError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const DegenerateInputError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
}

std::string command_schema(const std::string& name) {
  static const std::map<std::string, std::string> schemas{
      {"poincare", R"(poincare
  config: dim (2*#angles), angles (list, empty), n_modes (256), tol (1e-6)
  files:  poincare.json, spectrum.csv
  spectrum.csv: index, eigenvalue   (ascending spectrum of the discrete operator)
  json:   closed_form, spectral, kernel_dim, difference, tolerance, match,
          trivial, attaining_block, attaining_k
  exit:   4 when |spectral - closed_form| > tol
)"},
      {"vortex", R"(vortex
  config: a0 (-0.9), f0 (pi/2), T (25), dt (1e-3), grad_window (15,25),
          curv_window (10,20), renorm_window (10,20), check_rates (false),
          rate_tolerance (0.01)
  files:  vortex.json, trajectory.csv
  trajectory.csv: t, f, a, grad_norm, curv_norm, renorm_curv
          grad_norm = sqrt(2)|1+a| sin f, curv_norm = |a'|, renorm_curv = e^{2t} a'
  json:   alpha_hat, alpha_bracket, alpha_gap_bound_holds, alpha1 (extrapolated),
          alpha1_raw, grad_rate, curv_rate, renorm_rate (null when not fitted),
          expected_grad_rate, *_fit {rate, log_amplitude, r_squared, window,
          n_points, rate_spread}
  exit:   4 with check_rates when a fitted rate misses its target
)"},
      {"flow", R"(flow
  config: dim (3), angles (one z-rotation angle), t_min (0), t_max (20), n_t (81),
          n_theta (16), bc_low (closed_form | pole | latitude:<f>),
          bc_high (neumann | closed_form | pole | latitude:<f>),
          init_high (pole for neumann, else none), tol (1e-10), max_iters (20000),
          method (preconditioned | jacobi), eps0 (0.5), forcing_amplitude (0),
          forcing_kappa (2), forcing_direction (azimuthal | meridional),
          fit_window (default window), c_sup (1), check (false), rate_tolerance (0.01)
  files:  flow.json, profile.csv, solution.csv
  profile.csv:  t, Theta, H, gamma, band_energy   (nan where undefined)
  solution.csv: i, j, t, theta, u0 .. u{K-1}
  json:   residual, iterations, energy, gamma_rate, expected_rate, relative_error,
          gamma_fit, degenerate, tail_energy, small_energy, odi_violations, odi_rows,
          odi_min_constant, H_drift, H_slack, H_constant, H_mean, H_rate (forced), warnings
  exit:   3 on non-convergence; 4 with check when the rate or the ODI check fails
)"},
      {"holonomy", R"(holonomy
  config: connection (flat | perturbed | vortex | log | sampled), dim, angles,
          radii (0.5,0.25,0.125), steps (4096), tol (1e-6; vortex: pi(e^{-2t_0}+e^{-2t_1})),
          beta (perturbed),
          a0, f0, T, dt (vortex), csv (sampled: theta then K^2 entries row-major)
  files:  holonomy.json
  json:   radii, invariants, successive_distances, tolerance, cauchy, limit,
          expected, distance_to_expected, expected_tolerance, match
  exit:   4 when the limit misses the expected class (flat, vortex)
)"},
      {"fit", R"(fit
  config: mode (exponential | g0 | g1)
          exponential: input, column, t_column (t), window, bootstrap (200),
                       seed, expected_rate, rate_tolerance (0.01)
          g0: a_val, b_val, delta, eps, c, t1, t2, grid (2000)
          g1: delta, c_alpha, kappa, eps, c, t1, t2, grid (2000)
  files:  fit.json
  json:   fit {rate, log_amplitude, r_squared, window, n_points, rate_spread}, match;
          or points, max_residual, slack, inequality_holds, value_at_t1, value_at_t2
  exit:   4 on rate mismatch or a failed inequality
)"}};
  if (name.empty()) {
    std::string all = "exit codes: 0 ok, 2 invalid config, 3 non-convergence, 4 mismatch\n\n";
    for (const auto& n : command_names()) all += schemas.at(n) + "\n";
    return all;
  }
  const auto it = schemas.find(name);
  if (it == schemas.end()) throw ValidationError("unknown command '" + name + "'");
  return it->second;
}

}  // namespace gaugelab
