#include <doctest.h>

#include "gaugelab/errors.hpp"
#include "gaugelab/vortex.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace gaugelab;

namespace {

constexpr double kPi = std::numbers::pi;

const VortexTrajectory& reference() {
  static const VortexTrajectory tr = integrate_vortex(-0.9, kPi / 2, 25.0, 1e-3);
  return tr;
}

}  // namespace

TEST_CASE("vortex trajectory invariants") {
  const auto& tr = reference();
  REQUIRE(tr.size() == 25001u);
  CHECK(tr.t.back() == doctest::Approx(25.0));
  const auto gap = alpha_gap(tr);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(tr.f[i] > 0.0);
    CHECK(tr.f[i] < kPi);
    CHECK(std::abs(tr.da[i]) <= std::exp(-2 * tr.t[i]));
    CHECK(std::abs(gap[i]) < 0.5 * std::exp(-2 * tr.t[i]));
    CHECK(tr.a[i] > -1.0);
    if (i > 0) {
      CHECK(tr.a_step[i - 1] > 0.0);
      CHECK(tr.a[i] >= tr.a[i - 1]);
    }
  }
}

TEST_CASE("stationary data stays put") {
  const auto tr = integrate_vortex(-1.0, kPi / 2, 1.0, 1e-3);
  CHECK(tr.f[1] == kPi / 2);
  CHECK(std::abs(tr.a[1] + 1.0) < 1e-18);
  for (double f : tr.f) CHECK(f == kPi / 2);
}

TEST_CASE("vortex integrator is fourth order") {
  const auto oracle = integrate_vortex(-0.9, kPi / 2, 2.0, 1e-5);
  auto err = [&](double dt) {
    const auto tr = integrate_vortex(-0.9, kPi / 2, 2.0, dt);
    return std::hypot(tr.f.back() - oracle.f.back(), tr.a.back() - oracle.a.back());
  };
  const double ratio = err(0.02) / err(0.01);
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("vortex integrator rejects bad input") {
  CHECK_THROWS_AS(integrate_vortex(-0.9, 0.0, 5.0, 1e-3), ValidationError);
  CHECK_THROWS_AS(integrate_vortex(-0.9, kPi, 5.0, 1e-3), ValidationError);
  CHECK_THROWS_AS(integrate_vortex(-0.9, 1.0, 5.0, 0.0), ValidationError);
  CHECK_THROWS_AS(integrate_vortex(-0.9, 1.0, -1.0, 1e-3), ValidationError);
  CHECK_THROWS_AS(integrate_vortex(-0.9, 1.0, 5.0, 0.5), NumericalError);
}

TEST_CASE("closed form latitude") {
  const auto flat = flat_trajectory(-0.7, 10.0, 1e-2);
  const auto fh = closed_form_f(flat);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    CHECK(fh[i] == doctest::Approx(2 * std::atan(std::exp(-0.3 * flat.t[i]))).epsilon(1e-13));
  }
  CHECK(fh[0] == doctest::Approx(kPi / 2).epsilon(1e-15));

  const auto& tr = reference();
  const auto f = closed_form_f(tr);
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) worst = std::max(worst, std::abs(f[i] - tr.f[i]));
  CHECK(worst <= 1e-5);
  CHECK_THROWS_AS(closed_form_f(tr, 0.0), ValidationError);
}

TEST_CASE("limit alpha") {
  const auto& tr = reference();
  const auto lim = limit_alpha(tr);
  CHECK(lim.value > -0.9);
  CHECK(lim.value < -0.5);
  CHECK(lim.lo <= lim.value);
  CHECK(lim.value <= lim.hi);
  CHECK(lim.hi - lim.lo == doctest::Approx(std::exp(-50.0)));

  const auto closer = limit_alpha(integrate_vortex(-0.99, kPi / 2, 25.0, 1e-3));
  CHECK(closer.value < lim.value);
  CHECK(closer.value > -1.0);

  CHECK(limit_alpha(flat_trajectory(-0.7, 20.0, 1e-2)).value == -0.7);
  CHECK_THROWS_AS(limit_alpha(integrate_vortex(-0.9, kPi / 2, 10.0, 1e-3)), NumericalError);
}

TEST_CASE("gradient and curvature norms") {
  const auto& tr = reference();
  const auto g = grad_norm(tr);
  CHECK(g[0] == doctest::Approx(std::sqrt(2.0) * 0.1).epsilon(1e-14));
  for (double x : g) CHECK(x > 0.0);

  const auto flat = flat_trajectory(-0.7, 25.0, 1e-2);
  const auto gf = grad_norm(flat);
  const double s = 0.3;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double t = flat.t[i];
    const double expected = 2 * std::sqrt(2.0) * s * std::exp(-s * t) / (1 + std::exp(-2 * s * t));
    CHECK(gf[i] == doctest::Approx(expected).epsilon(1e-12));
  }
  for (double c : curvature_norm(flat)) CHECK(c == 0.0);

  const auto rc = renorm_curv(tr);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(rc[i] == doctest::Approx(std::cos(tr.f[i])).epsilon(1e-13));
  }
}

TEST_CASE("sharp rates where the window sees the asymptotics") {
  // a0 = -0.8 gives 1 + alpha ~ 0.25: f is small on the fit windows.
  const auto tr = integrate_vortex(-0.8, kPi / 2, 25.0, 1e-3);
  const auto sum = summarize(tr);
  const double rate = 1.0 + sum.alpha.value;
  REQUIRE(sum.grad_fitted);
  REQUIRE(sum.curv_fitted);
  REQUIRE(sum.renorm_fitted);
  CHECK(sum.alpha.value < -0.5);
  CHECK(std::abs(sum.grad_fit.rate - rate) <= 0.01 * rate);
  CHECK(std::abs(sum.curv_fit.rate - 2.0) <= 0.02);
  CHECK(std::abs(sum.alpha1_raw - 1.0) <= 1e-3);
  CHECK(std::abs(sum.alpha1 - 1.0) <= 1e-5);
  CHECK(sum.renorm_fit.rate >= rate - 0.05);
}

TEST_CASE("fitted rates are averages of local rates") {
  // Least-squares slopes are positively weighted averages of the local
  // log-derivative, so each fit lies in the range of the local rate over
  // its window. Local rates: curvature 2 - (1+a) sin f tan f, gradient
  // (1+a) cos f - a'/(1+a).
  const auto& tr = reference();
  const auto sum = summarize(tr);
  REQUIRE(sum.curv_fitted);
  REQUIRE(sum.grad_fitted);
  double c_lo = 1e9, c_hi = -1e9, g_lo = 1e9, g_hi = -1e9;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double t = tr.t[i];
    const double b = 1.0 + tr.a[i];
    if (t >= 10.0 && t <= 15.5) {
      const double c = 2.0 - b * std::sin(tr.f[i]) * std::tan(tr.f[i]);
      c_lo = std::min(c_lo, c);
      c_hi = std::max(c_hi, c);
    }
    if (t >= 15.0 && t <= 25.0) {
      const double g = b * std::cos(tr.f[i]) - tr.da[i] / b;
      g_lo = std::min(g_lo, g);
      g_hi = std::max(g_hi, g);
    }
  }
  CHECK(sum.curv_fit.rate >= c_lo);
  CHECK(sum.curv_fit.rate <= c_hi);
  CHECK(sum.grad_fit.rate >= g_lo);
  CHECK(sum.grad_fit.rate <= g_hi);
  // The limit of e^{2t} a' is still recoverable from the slow tail.
  CHECK(std::abs(sum.alpha1 - 1.0) <= 1e-3);
  CHECK(sum.alpha1_raw < sum.alpha1);
  CHECK(sum.renorm_fit.rate >= 1.0 + sum.alpha.value - 0.05);
}

TEST_CASE("flat first-order solutions are twisted harmonic") {
  const double c = 0.3;
  const double h = 1e-3;
  auto f = [&](double t) { return 2 * std::atan(std::exp(-c * t)); };
  for (double t = 0.5; t < 20.0; t += 0.37) {
    const double fpp =
        (-f(t + 2 * h) + 16 * f(t + h) - 30 * f(t) + 16 * f(t - h) - f(t - 2 * h)) / (12 * h * h);
    CHECK(std::abs(fpp - c * c * std::sin(f(t)) * std::cos(f(t))) <= 1e-8);
  }
}

TEST_CASE("vortex field reduced forcing decays like e^{-2t}") {
  const auto& tr = reference();
  const CylinderGrid g(0.0, 20.0, 401, 32);
  const auto fld = vortex_field(tr, g);
  fld.validate();
  std::vector<double> t, sup;
  for (int i = 0; i < g.n_t; ++i) {
    const auto nf = reduced_forcing(fld, i);
    t.push_back(g.t(i));
    sup.push_back(nf.sup_f + nf.sup_df);
  }
  const auto fit = fit_exponential(t, sup, {5.0, 12.0});
  CHECK(fit.rate >= 1.95);
  CHECK_THROWS_AS(vortex_field(tr, CylinderGrid(0.0, 20.0, 401 * 3, 32)), ValidationError);
  CHECK_THROWS_AS(vortex_field(tr, CylinderGrid(0.0, 30.0, 301, 32)), ValidationError);
}

TEST_CASE("vortex connection holonomy converges to the limit class") {
  const auto& tr = reference();
  const double alpha = limit_alpha(tr).value;
  const auto conn = vortex_connection(tr);
  std::vector<double> ts{5.0, 6.0, 7.0, 8.0, 9.0};
  std::vector<double> radii;
  for (double t : ts) radii.push_back(std::exp(-t));
  const auto lim = limit_holonomy(conn, radii, 4096, 1e-5);
  double frac = -alpha - std::floor(-alpha);
  const double expected = 2 * kPi * std::min(frac, 1 - frac);
  REQUIRE(lim.invariant.rotation_angles.size() == 1u);
  CHECK(std::abs(lim.invariant.rotation_angles[0] - expected) < 2 * kPi * std::exp(-2 * ts.back()));
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double bound = 0.5 * (std::exp(-2 * ts[k]) + std::exp(-2 * ts[k + 1]));
    CHECK(lim.report.successive_distances[k] <= 2 * kPi * bound);
  }
  CHECK(lim.report.cauchy);
}

TEST_CASE("trajectory CSV") {
  const auto tr = integrate_vortex(-0.9, kPi / 2, 0.01, 1e-3);
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  const std::string s = os.str();
  CHECK(s.rfind("t,f,a,grad_norm,curv_norm,renorm_curv\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 12);
}
