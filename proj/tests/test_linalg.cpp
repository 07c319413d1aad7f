#include <doctest.h>

#include <cmath>
#include <random>

#include "cobandit/linalg.hpp"
#include "oracles.hpp"

using namespace cobandit;

namespace {

double max_abs_diff(const Matrix& m, const oracles::Mat& o) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - o[i][j]));
  return worst;
}

}  // namespace

TEST_CASE("sm_update: zero update leaves the inverse unchanged") {
  InverseState s(2);
  s.sm_update({0, 0}, {0, 0});
  CHECK(s.inv()(0, 0) == 1.0);
  CHECK(s.inv()(0, 1) == 0.0);
  CHECK(s.inv()(1, 1) == 1.0);
}

TEST_CASE("sm_update: (I + e1 e1^T)^-1 = diag(0.5, 1)") {
  InverseState s(2);
  s.sm_update({1, 0}, {1, 0});
  CHECK(s.inv()(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.inv()(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(s.inv()(0, 1)) < 1e-15);
}

TEST_CASE("sm_update: 10 random self-outer updates match direct inversion") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  InverseState s(5);
  oracles::Mat a = oracles::identity(5);
  for (int t = 0; t < 10; ++t) {
    Vec x(5);
    for (double& v : x) v = u(rng);
    s.sm_update(x, x);
    oracles::add_outer(a, x);
  }
  CHECK(max_abs_diff(s.inv(), oracles::invert(a)) < 1e-10);
}

TEST_CASE("sm_update: degenerate denominator is rejected") {
  // u = -v with v^T v = 1 makes 1 + v^T I u exactly 0
  InverseState s(2);
  CHECK_THROWS_AS(s.sm_update({1, 0}, {-1, 0}), DegenerateUpdate);
}

TEST_CASE("sm_update: symmetry preserved over many updates") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  InverseState s(4);
  for (int t = 0; t < 10000; ++t) {
    Vec x(4);
    for (double& v : x) v = u(rng);
    s.sm_update(x, x);
  }
  double asym = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      asym = std::max(asym, std::abs(s.inv()(i, j) - s.inv()(j, i)));
  CHECK(asym < 1e-12);
}

TEST_CASE("self_outer examples") {
  const Matrix z = self_outer({0, 0});
  CHECK(z(0, 0) == 0.0);
  CHECK(z(1, 1) == 0.0);

  const Matrix e1 = self_outer({1, 0});
  CHECK(e1(0, 0) == 1.0);
  CHECK(e1(0, 1) == 0.0);
  CHECK(e1(1, 1) == 0.0);

  const Matrix m = self_outer({2, 3});
  CHECK(m(0, 0) == 4.0);
  CHECK(m(0, 1) == 6.0);
  CHECK(m(1, 0) == 6.0);
  CHECK(m(1, 1) == 9.0);
}

TEST_CASE("kron_vec examples and properties") {
  const Vec x{2, 4};
  CHECK(kron_vec({1}, x) == x);

  const Vec k = kron_vec({0.25, 0.75}, x);
  CHECK(k == Vec{0.5, 1.0, 1.5, 3.0});

  // e_i weight reproduces zero-padding exactly
  for (std::size_t i = 0; i < 3; ++i) {
    Vec e(3, 0.0);
    e[i] = 1.0;
    CHECK(kron_vec(e, x) == pad_vector(x, i, 3));
  }

  // norm multiplicativity
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 50; ++t) {
    Vec w(4), v(3);
    for (double& a : w) a = u(rng);
    for (double& a : v) a = u(rng);
    CHECK(norm2(kron_vec(w, v)) == doctest::Approx(norm2(w) * norm2(v)).epsilon(1e-12));
  }
}

TEST_CASE("pad_vector examples") {
  CHECK(pad_vector({1, 2}, 0, 2) == Vec{1, 2, 0, 0});
  CHECK(pad_vector({1, 2}, 1, 2) == Vec{0, 0, 1, 2});
  CHECK(pad_vector({3, 4, 5}, 0, 1) == Vec{3, 4, 5});
  CHECK_THROWS_AS(pad_vector({1}, 2, 2), DimensionMismatch);
}

TEST_CASE("reshape_mat is column-major and round-trips") {
  const Matrix m = reshape_mat({1, 2, 3, 4}, 2, 2);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(1, 0) == 2.0);
  CHECK(m(0, 1) == 3.0);
  CHECK(m(1, 1) == 4.0);

  const Vec x{9, 8, 7, 6, 5, 4};
  const Matrix single = reshape_mat(x, 6, 1);
  CHECK(single.col(0) == x);

  CHECK_THROWS_AS(reshape_mat({1, 2, 3}, 2, 2), DimensionMismatch);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    Vec v(12);
    for (double& a : v) a = u(rng);
    CHECK(flatten_mat(reshape_mat(v, 3, 4)) == v);
    CHECK(flatten_mat(reshape_mat(v, 4, 3)) == v);
  }
}

TEST_CASE("quad_form examples") {
  InverseState s(2);
  CHECK(s.quad_form({3, 4}) == doctest::Approx(25.0));
  CHECK(s.quad_form({0, 0}) == 0.0);

  s.sm_update({1, 0}, {1, 0});  // inv = diag(0.5, 1)
  CHECK(s.quad_form({1, 1}) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("inverse discipline: inv * accumulated A stays near identity") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  InverseState s(6);
  oracles::Mat a = oracles::identity(6);
  for (int t = 0; t < 200; ++t) {
    Vec x(6);
    for (double& v : x) v = u(rng);
    s.sm_update(x, x);
    oracles::add_outer(a, x);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 6; ++k) acc += s.inv()(i, k) * a[k][j];
      worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-8);
}

TEST_CASE("quad_form stays nonnegative and shrinks monotonically under updates") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  InverseState s(4);
  const Vec z{0.3, -0.7, 0.2, 0.9};
  double prev = s.quad_form(z);
  for (int t = 0; t < 300; ++t) {
    Vec x(4);
    for (double& v : x) v = u(rng);
    s.sm_update(x, x);
    const double q = s.quad_form(z);
    CHECK(q >= 0.0);
    CHECK(q <= prev + 1e-12);
    prev = q;
  }
}
