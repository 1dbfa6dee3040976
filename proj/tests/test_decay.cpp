#include <doctest.h>

#include "gaugelab/decay.hpp"
#include "gaugelab/errors.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace gaugelab;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("fit recovers exact exponential") {
  const auto t = linspace(0.0, 10.0, 101);
  std::vector<double> y;
  for (double s : t) y.push_back(3.0 * std::exp(-2.0 * s));
  const auto fit = fit_exponential(t, y, {0.0, 10.0});
  CHECK(fit.rate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.log_amplitude == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.n_points == 101);
  CHECK(fit.rate_spread < 1e-10);
}

TEST_CASE("fit drops points below the floor and rejects thin windows") {
  const auto t = linspace(0.0, 40.0, 41);
  std::vector<double> y;
  for (double s : t) y.push_back(std::exp(-s));
  // e^{-30} ~ 9e-14 is below the floor, so [28, 40] keeps only 28, 29.
  CHECK_THROWS_AS(fit_exponential(t, y, {28.0, 40.0}), ValidationError);
  const auto fit = fit_exponential(t, y, {20.0, 40.0});
  CHECK(fit.n_points == 10);
  CHECK(fit.rate == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(fit_exponential(t, y, {5.0, 8.0}), ValidationError);
  CHECK_THROWS_AS(fit_exponential(t, y, {8.0, 5.0}), ValidationError);
  std::vector<double> short_y(y.begin(), y.end() - 1);
  CHECK_THROWS_AS(fit_exponential(t, short_y, {0.0, 10.0}), ValidationError);
}

TEST_CASE("fit is deterministic and r^2 stays in [0, 1]") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 0.05);
  const auto t = linspace(0.0, 10.0, 60);
  std::vector<double> y;
  for (double s : t) y.push_back(std::exp(-0.7 * s + noise(rng)));
  const auto f1 = fit_exponential(t, y, {0.0, 10.0}, 100, 11);
  const auto f2 = fit_exponential(t, y, {0.0, 10.0}, 100, 11);
  CHECK(f1.rate == f2.rate);
  CHECK(f1.rate_spread == f2.rate_spread);
  CHECK(f1.rate_spread > 0.0);
  CHECK(f1.r_squared >= 0.0);
  CHECK(f1.r_squared <= 1.0);
  CHECK(std::abs(f1.rate - 0.7) < 5 * f1.rate_spread + 0.01);
}

TEST_CASE("fit on perturbed exponentials is limited by the window") {
  // c e^{-rho t}(1 + e^{-eta t}): local slope error is about eta e^{-eta t}.
  const double rho = 0.4;
  const double eta = 1.0;
  const auto t = linspace(0.0, 25.0, 501);
  std::vector<double> y;
  for (double s : t) y.push_back(2.0 * std::exp(-rho * s) * (1.0 + std::exp(-eta * s)));
  const auto early = fit_exponential(t, y, {0.0, 5.0});
  const auto late = fit_exponential(t, y, {10.0, 20.0});
  CHECK(std::abs(early.rate - rho) > 1e-2);
  CHECK(std::abs(late.rate - rho) < eta * std::exp(-eta * 10.0));
}

TEST_CASE("flat twisted map gradient decays at |1 + alpha|") {
  const double c = 0.3;
  const auto t = linspace(0.0, 25.0, 2501);
  std::vector<double> g;
  for (double s : t) {
    g.push_back(2.0 * std::sqrt(2.0) * c * std::exp(-c * s) / (1.0 + std::exp(-2.0 * c * s)));
  }
  const auto fit = fit_exponential(t, g, {15.0, 25.0});
  CHECK(std::abs(fit.rate - 0.3) < 0.003);
}

TEST_CASE("g0 comparison function") {
  const auto rep = comparison_check_g0(0.0, 0.0, 0.3, 0.1, 1.0, 0.0, 20.0, 2000);
  CHECK(rep.points == 2000);
  CHECK(rep.inequality_holds);
  CHECK(rep.max_residual <= 1e-9);
  CHECK(rep.boundary_dominates);
  CHECK(rep.value_at_t1 > 0.0);

  const auto stiff = comparison_check_g0(0.0, 0.0, 0.99, 0.1, 1.0, 0.0, 20.0, 2000);
  CHECK(1.0 / (1.0 - 0.99 * 0.99) == doctest::Approx(50.2513).epsilon(1e-5));
  CHECK(stiff.inequality_holds);

  const auto high = comparison_check_g0(10.0, 0.0, 0.3, 0.1, 1.0, 0.0, 20.0, 2000);
  CHECK_FALSE(high.boundary_dominates);

  CHECK_THROWS_AS(comparison_check_g0(0, 0, 1.0, 0.1, 1.0, 0.0, 20.0, 100), ValidationError);
  CHECK_THROWS_AS(comparison_check_g0(0, 0, 0.0, 0.1, 1.0, 0.0, 20.0, 100), ValidationError);
  CHECK_THROWS_AS(comparison_check_g0(0, 0, 0.5, 0.1, 1.0, 5.0, 5.0, 100), ValidationError);
}

TEST_CASE("g1 comparison function") {
  const double ca = 0.09;
  const auto rep = comparison_check_g1(std::sqrt(ca - 0.01), ca, 4.0 / 3.0, 0.1, 1.0, 0.0, 30.0, 2000);
  CHECK(rep.inequality_holds);
  CHECK(rep.max_residual <= 1e-9);

  const auto trivial = comparison_check_g1(std::sqrt(0.99), 1.0, 4.0 / 3.0, 0.1, 1.0, 0.0, 30.0, 2000);
  CHECK(1.0 / (16.0 / 9.0 - 1.0) == doctest::Approx(9.0 / 7.0));
  CHECK(trivial.inequality_holds);

  const auto homog = comparison_check_g1(0.28, ca, 4.0 / 3.0, 0.0, 1.0, 0.0, 30.0, 2000);
  CHECK(std::abs(homog.max_residual) <= 1e-12);
  CHECK(homog.homogeneous_residual <= 1e-12);

  CHECK_THROWS_AS(comparison_check_g1(0.28, 0.09, 0.3, 0.1, 1.0, 0.0, 30.0, 100), ValidationError);
}

TEST_CASE("g1 holds exactly when 4 delta^2 - C(alpha) >= eps") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double ca = 0.01 + 0.24 * u01(rng);
    const double delta = std::sqrt(ca) * (0.55 + 0.45 * u01(rng));
    const double margin = 4.0 * delta * delta - ca;
    const double kappa = 4.0 / 3.0 + u01(rng);
    if (margin < 1e-3) continue;
    const double eps_ok = margin * u01(rng);
    const auto ok = comparison_check_g1(delta, ca, kappa, eps_ok, 1.0, 0.0, 30.0, 400);
    CHECK(ok.inequality_holds);
    const auto bad = comparison_check_g1(delta, ca, kappa, 1.5 * margin + 1e-3, 1.0, 0.0, 30.0, 400);
    CHECK_FALSE(bad.inequality_holds);
  }
}
