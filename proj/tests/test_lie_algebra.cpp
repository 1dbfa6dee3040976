#include <doctest.h>

#include "gaugelab/errors.hpp"
#include "gaugelab/lie_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace gaugelab;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix random_skew(int k, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m(i, j) = n(rng);
  Matrix s = 0.5 * (m - m.transpose());
  return s * (scale / s.norm());
}

Matrix random_orthogonal(int k, std::mt19937_64& rng) {
  return exp_scaling_squaring(random_skew(k, rng, 3.0));
}

Matrix J() { return SkewMatrix::generator(2, 0, 1).matrix(); }

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("SkewMatrix validates antisymmetry") {
  Matrix m(2, 2);
  m << 0, -1, 1, 0;
  CHECK_NOTHROW(SkewMatrix{m});
  m(0, 0) = 1e-3;
  CHECK_THROWS_AS(SkewMatrix{m}, ValidationError);
  CHECK_THROWS_AS(SkewMatrix{Matrix::Zero(2, 3)}, ValidationError);
  // generator convention matches the [[0,-1],[1,0]] block
  m(0, 0) = 0.0;
  CHECK(SkewMatrix::generator(2, 0, 1).matrix() == m);
}

TEST_CASE("exp_skew closed forms") {
  SUBCASE("zero gives identity") {
    CHECK((exp_skew(SkewMatrix::zero(3)) - Matrix::Identity(3, 3)).norm() < 1e-15);
  }
  SUBCASE("2x2 rotation") {
    const Matrix e = exp_skew(SkewMatrix(J() * (kPi / 2)));
    Matrix expect(2, 2);
    expect << 0, -1, 1, 0;
    CHECK((e - expect).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("blockwise for K=4") {
    const std::vector<double> angles{kPi / 3, kPi / 4};
    const Matrix e = exp_skew(SkewMatrix::from_block_angles(4, angles));
    Matrix expect = Matrix::Zero(4, 4);
    expect.block(0, 0, 2, 2) = rotation2(kPi / 3);
    expect.block(2, 2, 2, 2) = rotation2(kPi / 4);
    CHECK((e - expect).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("exp_skew agrees with scaling-and-squaring and is a group element") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + trial % 5;
    const SkewMatrix x(random_skew(k, rng, 10.0 * (trial + 1) / 50.0));
    const Matrix e = exp_skew(x);
    CHECK(orthogonality_defect(e) < 1e-10);
    CHECK(std::abs(e.determinant() - 1.0) < 1e-10);
    CHECK((e - exp_scaling_squaring(x.matrix())).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((e * exp_skew(-x) - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("standard_form examples") {
  SUBCASE("zero has no blocks") {
    const auto sf = standard_form(SkewMatrix::zero(3));
    CHECK(sf.blocks() == 0);
    CHECK(orthogonality_defect(sf.frame) < 1e-12);
  }
  SUBCASE("0.3 J") {
    const auto sf = standard_form(SkewMatrix(0.3 * J()));
    REQUIRE(sf.blocks() == 1);
    CHECK(sf.angles[0] == doctest::Approx(0.3).epsilon(1e-14));
  }
  SUBCASE("1.3 J reduces mod 1") {
    const auto sf = standard_form(SkewMatrix(1.3 * J()));
    REQUIRE(sf.blocks() == 1);
    CHECK(std::abs(sf.angles[0] - 0.3) < 1e-12);
    CHECK(sf.raw_angles[0] == doctest::Approx(1.3));
  }
  SUBCASE("negative orientation is flipped to a positive block") {
    const auto sf = standard_form(SkewMatrix(-0.7 * J()));
    REQUIRE(sf.blocks() == 1);
    CHECK(sf.angles[0] == doctest::Approx(0.7));
  }
}

TEST_CASE("standard_form reconstructs random conjugates") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0.05, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + trial % 6;
    std::vector<double> angles;
    for (int j = 0; j < k / 2 - (trial % 3 == 0 && k >= 4 ? 1 : 0); ++j) angles.push_back(ang(rng));
    if (trial % 4 == 1 && angles.size() >= 2) angles[1] = angles[0];  // repeated block
    const Matrix b = SkewMatrix::from_block_angles(k, angles).matrix();
    const Matrix h = random_orthogonal(k, rng);
    const SkewMatrix x(h * b * h.transpose(), 1e-10);
    const auto sf = standard_form(x);
    CHECK(orthogonality_defect(sf.frame) < 1e-10);
    CHECK((sf.frame.transpose() * x.matrix() * sf.frame - sf.block_matrix()).cwiseAbs().maxCoeff() <
          1e-10);
    REQUIRE(sf.raw_angles.size() == angles.size());
    const auto got = sorted(sf.raw_angles);
    const auto want = sorted(angles);
    for (std::size_t j = 0; j < got.size(); ++j) CHECK(std::abs(got[j] - want[j]) < 1e-9);
    for (double a : sf.angles) {
      CHECK(a >= 0.0);
      CHECK(a < 1.0);
    }
  }
}

TEST_CASE("conjugacy_invariants") {
  CHECK(conjugacy_invariants(Matrix::Identity(3, 3)).rotation_angles == std::vector<double>{0.0});
  Matrix g = Matrix::Identity(3, 3);
  g.block(0, 0, 2, 2) = rotation2(kPi / 2);
  const auto inv = conjugacy_invariants(g);
  REQUIRE(inv.rotation_angles.size() == 1);
  CHECK(inv.rotation_angles[0] == doctest::Approx(kPi / 2).epsilon(1e-14));

  Matrix bad = g;
  bad(0, 0) += 1e-6;
  CHECK_THROWS_AS(conjugacy_invariants(bad), ValidationError);

  // rotation by pi pairs the -1 eigenvalues
  Matrix flip = Matrix::Identity(4, 4);
  flip.block(0, 0, 2, 2) = rotation2(kPi);
  const auto fi = conjugacy_invariants(flip);
  CHECK(fi.rotation_angles.size() == 2);
  CHECK(fi.rotation_angles[0] == doctest::Approx(0.0));
  CHECK(fi.rotation_angles[1] == doctest::Approx(kPi));
}

TEST_CASE("conjugacy_invariants are conjugation invariant") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + trial % 6;
    const Matrix g = random_orthogonal(k, rng);
    const Matrix h = random_orthogonal(k, rng);
    const auto a = conjugacy_invariants(g);
    const auto b = conjugacy_invariants(h * g * h.transpose());
    CHECK(a.rotation_angles.size() == static_cast<std::size_t>(k / 2));
    CHECK(invariant_distance(a, b) < 1e-8);
  }
}

TEST_CASE("holonomy class depends only on fractional block angles") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> a{frac(rng), frac(rng)};
    const std::vector<double> shifted{a[0] + 2.0, a[1] - 1.0};
    const auto x = SkewMatrix::from_block_angles(5, a);
    const auto y = SkewMatrix::from_block_angles(5, shifted);
    const auto ia = conjugacy_invariants(exp_skew(-2.0 * kPi * x));
    const auto ib = conjugacy_invariants(exp_skew(-2.0 * kPi * y));
    CHECK(invariant_distance(ia, ib) < 1e-8);
  }
}
