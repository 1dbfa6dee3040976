#include <doctest.h>

#include "gaugelab/errors.hpp"
#include "gaugelab/holonomy.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace gaugelab;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix J2() { return SkewMatrix::generator(2, 0, 1).matrix(); }

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

CircleConnection non_abelian_k3() {
  const Matrix x = SkewMatrix::generator(3, 0, 1).matrix();
  const Matrix y = SkewMatrix::generator(3, 1, 2).matrix();
  const Matrix z = SkewMatrix::generator(3, 0, 2).matrix();
  return CircleConnection::closed_form(3, [=](double th) {
    return Matrix(0.4 * x + 0.7 * std::sin(th) * y + 0.3 * std::cos(2 * th) * z);
  });
}

}  // namespace

TEST_CASE("parallel_transport examples") {
  SUBCASE("zero connection") {
    const auto c = CircleConnection::flat(SkewMatrix::zero(3));
    CHECK(max_abs(parallel_transport(c, 0, 2 * kPi, 64) - Matrix::Identity(3, 3)) < 1e-15);
  }
  SUBCASE("flat connection gives exp(-2 pi alpha)") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0, 1);
    for (int k = 2; k <= 5; ++k) {
      Matrix m(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = n(rng);
      const SkewMatrix alpha(0.5 * (m - m.transpose()));
      const Matrix g = parallel_transport(CircleConnection::flat(alpha), 0, 2 * kPi, 4096);
      CHECK(max_abs(g - exp_skew(-2 * kPi * alpha)) < 1e-8);
    }
  }
  SUBCASE("abelian non-constant connection") {
    const auto c = CircleConnection::closed_form(
        2, [](double th) { return Matrix((0.3 + 0.5 * std::sin(th)) * J2()); });
    const Matrix g = parallel_transport(c, 0, 2 * kPi, 4096);
    CHECK(max_abs(g - exp_skew(SkewMatrix(-0.6 * kPi * J2()))) < 1e-10);
  }
  SUBCASE("preconditions") {
    const auto c = CircleConnection::flat(SkewMatrix::zero(2));
    CHECK_THROWS_AS(parallel_transport(c, 0, 1, 4), ValidationError);
    CHECK_THROWS_AS(parallel_transport(c, 1, 0, 64), ValidationError);
  }
}

TEST_CASE("transport composes over subintervals") {
  const auto c = non_abelian_k3();
  const Matrix first = parallel_transport(c, 0, kPi, 2048);
  const Matrix second = parallel_transport(c, kPi, 2 * kPi, 2048);
  const Matrix full = parallel_transport(c, 0, 2 * kPi, 4096);
  CHECK(max_abs(second * first - full) < 1e-9);
  CHECK(orthogonality_defect(full) < 1e-13);
}

TEST_CASE("RK4 transport converges at fourth order") {
  const auto c = non_abelian_k3();
  const Matrix oracle = parallel_transport(c, 0, 2 * kPi, 1000000);
  const double e1 = max_abs(parallel_transport(c, 0, 2 * kPi, 32) - oracle);
  const double e2 = max_abs(parallel_transport(c, 0, 2 * kPi, 64) - oracle);
  const double e3 = max_abs(parallel_transport(c, 0, 2 * kPi, 128) - oracle);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
  CHECK(e2 / e3 > 12.0);
  CHECK(e2 / e3 < 20.0);
}

TEST_CASE("sampled connections interpolate and load from CSV") {
  const SkewMatrix alpha(0.3 * J2());
  std::vector<double> th;
  std::vector<SkewMatrix> vals;
  for (int i = 0; i < 16; ++i) {
    th.push_back(2 * kPi * i / 16);
    vals.push_back(alpha * (1.0 + 0.5 * std::sin(th.back())));
  }
  const auto c = CircleConnection::sampled(th, vals);
  CHECK(max_abs(c(th[3]) - vals[3].matrix()) < 1e-15);
  // midpoint between the last node and the wrapped first node
  const double mid = 0.5 * (th.back() + 2 * kPi);
  CHECK(max_abs(c(mid) - 0.5 * (vals.back().matrix() + vals[0].matrix())) < 1e-15);
  CHECK(max_abs(c(mid + 2 * kPi) - c(mid)) < 1e-15);

  std::ostringstream csv;
  csv.precision(17);
  csv << "theta,a00,a01,a10,a11\n";
  for (std::size_t i = 0; i < th.size(); ++i) {
    const Matrix& m = vals[i].matrix();
    csv << th[i] << ',' << m(0, 0) << ',' << m(0, 1) << ',' << m(1, 0) << ',' << m(1, 1) << '\n';
  }
  std::istringstream in(csv.str());
  const auto loaded = CircleConnection::from_csv(in);
  CHECK(loaded.sample_count() == 16);
  CHECK(max_abs(loaded(1.234) - c(1.234)) < 1e-15);
  // The sine perturbation averages to zero, so the holonomy matches the flat one.
  const auto inv = holonomy(loaded);
  const auto flat = holonomy(CircleConnection::flat(alpha));
  CHECK(invariant_distance(inv, flat) < 1e-12);

  std::istringstream bad("0,0,1,1\n");
  CHECK_THROWS_AS(CircleConnection::from_csv(bad), ValidationError);
  std::istringstream nonskew("0,0,1,1,0\n");
  CHECK_THROWS_AS(CircleConnection::from_csv(nonskew), ValidationError);
}

TEST_CASE("gauge transform derivative matches finite differences") {
  std::mt19937_64 rng(17);
  const auto s = GaugeTransform::random(4, rng);
  for (double th : {0.0, 0.7, 2.5, 5.9}) {
    const double h = 1e-5;
    const Matrix fd = (s.value(th + h) - s.value(th - h)) / (2 * h);
    const Matrix left = s.value(th).transpose() * fd;
    CHECK(max_abs(left - s.left_derivative(th)) < 1e-8);
    CHECK(orthogonality_defect(s.value(th)) < 1e-12);
  }
  CHECK(max_abs(s.value(0.0) - s.value(2 * kPi)) < 1e-12);
}

TEST_CASE("holonomy_at_radius") {
  const SkewMatrix alpha = SkewMatrix::from_block_angles(3, std::vector<double>{0.3});
  SUBCASE("flat connection is independent of r") {
    const auto d = DiskConnection::angular(3, [&](double, double) { return alpha.matrix(); });
    const auto want = conjugacy_invariants(exp_skew(-2 * kPi * alpha));
    for (double r : {1.0, 0.5, 0.01}) CHECK(invariant_distance(holonomy_at_radius(d, r), want) < 1e-9);
    CHECK_THROWS_AS(holonomy_at_radius(d, 0.0), ValidationError);
    CHECK_THROWS_AS(holonomy_at_radius(d, 1.5), ValidationError);
  }
  SUBCASE("perturbation r^2 beta converges to the flat class") {
    const Matrix j = SkewMatrix::generator(3, 0, 1).matrix();
    const double b = 0.2;
    const auto d = DiskConnection::angular(3, [&](double r, double th) {
      return Matrix(alpha.matrix() + r * r * (b + std::cos(th)) * j);
    });
    const auto limit = conjugacy_invariants(exp_skew(-2 * kPi * alpha));
    double prev = 1e9;
    for (double r : {0.5, 0.25, 0.125}) {
      const auto inv = holonomy_at_radius(d, r);
      // abelian closed form: rotation by 2 pi (0.3 + b r^2)
      const double want = 2 * kPi * (0.3 + b * r * r);
      CHECK(std::abs(inv.rotation_angles[0] - want) < 1e-9);
      const double dist = invariant_distance(inv, limit);
      CHECK(dist < prev);
      prev = dist;
    }
  }
  SUBCASE("gauge invariance") {
    std::mt19937_64 rng(23);
    const Matrix x = SkewMatrix::generator(3, 0, 1).matrix();
    const Matrix y = SkewMatrix::generator(3, 1, 2).matrix();
    const auto d = DiskConnection::angular(3, [&](double r, double th) {
      return Matrix(0.4 * x + r * std::sin(th) * y);
    });
    for (int trial = 0; trial < 10; ++trial) {
      const auto s = GaugeTransform::random(3, rng);
      for (double r : {1.0, 0.3}) {
        const auto base = holonomy(d.restrict_to_circle(r));
        const auto moved = holonomy(s.apply(d.restrict_to_circle(r)));
        CHECK(invariant_distance(base, moved) < 1e-8);
      }
    }
  }
}

TEST_CASE("limit_holonomy") {
  const std::vector<double> radii{0.5, 0.25, 0.125};
  SUBCASE("flat connection has zero successive distances") {
    const SkewMatrix alpha = SkewMatrix::from_block_angles(2, std::vector<double>{0.3});
    const auto d = DiskConnection::angular(2, [&](double, double) { return alpha.matrix(); });
    const auto lim = limit_holonomy(d, radii);
    CHECK(lim.report.cauchy);
    for (double s : lim.report.successive_distances) CHECK(s < 1e-12);
    CHECK(invariant_distance(lim.invariant, conjugacy_invariants(exp_skew(-2 * kPi * alpha))) < 1e-9);
  }
  SUBCASE("barely integrable curvature converges slowly") {
    const auto d = DiskConnection::angular(
        2, [](double r, double) { return Matrix(J2() / (-std::log(r))); });
    const std::vector<double> rs{0.5, 0.1, 0.01, 1e-4, 1e-8};
    const auto lim = limit_holonomy(d, rs);
    CHECK_FALSE(lim.report.cauchy);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const double phi = std::fmod(2 * kPi / -std::log(rs[i]), 2 * kPi);
      const double folded = phi > kPi ? 2 * kPi - phi : phi;
      CHECK(std::abs(lim.report.invariants[i].rotation_angles[0] - folded) < 1e-9);
    }
  }
  SUBCASE("preconditions") {
    const auto d = DiskConnection::angular(2, [](double, double) { return Matrix::Zero(2, 2).eval(); });
    CHECK_THROWS_AS(limit_holonomy(d, std::vector<double>{0.5, 0.25}), ValidationError);
    CHECK_THROWS_AS(limit_holonomy(d, std::vector<double>{0.5, 0.6, 0.1}), ValidationError);
  }
}
