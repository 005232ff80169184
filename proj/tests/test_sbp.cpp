#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sbpsat/sbp.hpp"

using namespace sbpsat;
using std::numbers::pi;

namespace {

std::vector<double> on_grid(const Grid& g, double (*f)(double)) {
  std::vector<double> v(g.points());
  for (int i = 0; i < g.points(); ++i) v[i] = f(g.x[i]);
  return v;
}

}  // namespace

TEST_CASE("grid spacing and end points") {
  const auto g = Grid::uniform(10, 2.0);
  CHECK(g.x.front() == 0.0);
  CHECK(g.x.back() == 2.0);
  CHECK(g.h == doctest::Approx(0.2));
  for (int i = 1; i <= g.N; ++i) CHECK(g.x[i] - g.x[i - 1] == doctest::Approx(g.h).epsilon(1e-14));
  CHECK_THROWS_AS(Grid::uniform(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid::uniform(4, -1.0), std::invalid_argument);
}

TEST_CASE("D annihilates constants for every order") {
  for (int p = 2; p <= 5; ++p) {
    const auto op = SbpOperator::build(p, Grid::uniform(40, 2.0));
    const auto Dv = op.apply(std::vector<double>(op.points(), 3.5));
    for (double v : Dv) CHECK(std::abs(v) < 1e-12);
  }
}

TEST_CASE("second order operator is exact on linears, N=8, L=1") {
  const auto op = SbpOperator::build(2, Grid::uniform(8, 1.0));
  const auto Dx = op.apply(op.grid().x);
  for (double v : Dx) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("norm weights integrate constants exactly and stay positive") {
  for (int p = 2; p <= 5; ++p)
    for (int N : {15, 16, 33, 200}) {
      if (N < SbpOperator::min_intervals(p)) continue;
      const auto op = SbpOperator::build(p, Grid::uniform(N, 2.0));
      double sum = 0.0, mn = INFINITY;
      for (double w : op.weights()) {
        sum += w;
        mn = std::min(mn, w);
      }
      CHECK(sum == doctest::Approx(2.0).epsilon(1e-13));
      CHECK(mn > 0.0);
    }
}

TEST_CASE("p=4 differentiates x^2 exactly, N=64") {
  const auto op = SbpOperator::build(4, Grid::uniform(64, 1.0));
  const auto v = on_grid(op.grid(), [](double x) { return x * x; });
  const auto Dv = op.apply(v);
  for (int i = 0; i < op.points(); ++i) CHECK(Dv[i] == doctest::Approx(2.0 * op.grid().x[i]).epsilon(1e-11).scale(1.0));
}

TEST_CASE("p=2 interior error on sin(pi x) drops by about four per doubling") {
  double prev = 0.0;
  for (int N : {32, 64, 128, 256}) {
    const auto op = SbpOperator::build(2, Grid::uniform(N, 1.0));
    const auto Dv = op.apply(on_grid(op.grid(), [](double x) { return std::sin(pi * x); }));
    double err = 0.0;
    for (int i = 1; i < N; ++i) err = std::max(err, std::abs(Dv[i] - pi * std::cos(pi * op.grid().x[i])));
    if (prev > 0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("SBP identity through the dense Q on random pairs") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int p = 2; p <= 5; ++p)
    for (int N : {32, 128}) {
      const auto op = SbpOperator::build(p, Grid::uniform(N, 2.0));
      const Matrix Q = op.dense_Q();
      const int n = op.points();
      // Q + Q^T must be diag(-1, 0, ..., 0, 1).
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double expect = 0.0;
          if (i == j && i == 0) expect = -1.0;
          if (i == j && i == n - 1) expect = 1.0;
          REQUIRE(std::abs(Q(i, j) + Q(j, i) - expect) < 1e-12);
        }
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> u(n), v(n);
        for (auto& x : u) x = nd(rng);
        for (auto& x : v) x = nd(rng);
        double nu = 0, nv = 0, quv = 0, qvu = 0;
        for (int i = 0; i < n; ++i) {
          nu += u[i] * u[i];
          nv += v[i] * v[i];
          for (int j = 0; j < n; ++j) {
            quv += u[i] * Q(i, j) * v[j];
            qvu += v[i] * Q(i, j) * u[j];
          }
        }
        const double bound = 1e-12 * std::sqrt(nu * nv);
        CHECK(std::abs(quv + qvu - (u[n - 1] * v[n - 1] - u[0] * v[0])) <= bound);
        CHECK(sbp_identity_residual(op, u, v) <= bound);
      }
    }
}

TEST_CASE("polynomial exactness at the declared orders, and not beyond at the boundary") {
  for (int p = 2; p <= 5; ++p) {
    const auto op = SbpOperator::build(p, Grid::uniform(48, 1.0));
    CAPTURE(p);
    for (int k = 0; k <= p - 1; ++k) CHECK(monomial_error(op, k, true) < 1e-10);
    for (int k = 0; k <= 2 * (p - 1); ++k) CHECK(monomial_error(op, k, false) < 1e-9);
  }
  for (int p = 2; p <= 5; ++p) {
    const auto op = SbpOperator::build(p, Grid::uniform(20, 1.0));
    CAPTURE(p);
    CHECK(monomial_error(op, p, true) > 1e-10);
    CHECK(monomial_error(op, 2 * p - 1, false) > 1e-10);
  }
}

TEST_CASE("closures are mirror images with a sign flip") {
  for (int p = 2; p <= 5; ++p) {
    const auto op = SbpOperator::build(p, Grid::uniform(30, 1.0));
    const int n = op.points();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) REQUIRE(op.entry(n - 1 - i, n - 1 - j) == -op.entry(i, j));
    CHECK(op.weights()[0] == op.weights()[n - 1]);
  }
}

TEST_CASE("banded apply matches the dense matrix") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ud(-1, 1);
  for (int p = 2; p <= 5; ++p) {
    const auto op = SbpOperator::build(p, Grid::uniform(37, 1.5));
    std::vector<double> v(op.points());
    for (auto& x : v) x = ud(rng);
    const auto a = op.apply(v);
    const auto b = multiply(op.dense(), v);
    for (int i = 0; i < op.points(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("build rejects unsupported orders and small grids") {
  CHECK_THROWS_AS(SbpOperator::build(1, Grid::uniform(20, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(SbpOperator::build(6, Grid::uniform(20, 1.0)), std::invalid_argument);
  for (int p = 2; p <= 5; ++p) {
    const int m = SbpOperator::min_intervals(p);
    CHECK_NOTHROW(SbpOperator::build(p, Grid::uniform(m, 1.0)));
    if (m > 1) CHECK_THROWS_AS(SbpOperator::build(p, Grid::uniform(m - 1, 1.0)), std::invalid_argument);
  }
}

TEST_CASE("apply rejects a length mismatch") {
  const auto op = SbpOperator::build(3, Grid::uniform(20, 1.0));
  CHECK_THROWS_AS(op.apply(std::vector<double>(20, 0.0)), std::invalid_argument);
}

TEST_CASE("H inner product of stacked grid functions") {
  const auto op = SbpOperator::build(2, Grid::uniform(20, 2.0));
  StateVector ones(op.points());
  std::fill(ones.values.begin(), ones.values.end(), 1.0);
  CHECK(inner_product_H(op, ones, ones) == doctest::Approx(4.0).epsilon(1e-14));

  StateVector u(op.points());
  for (int i = 0; i < op.points(); ++i) u.w1()[i] = op.grid().x[i];
  CHECK(inner_product_H(op, u, ones) == doctest::Approx(inner_product_H(op, u.w1(), ones.w1())).epsilon(1e-15));

  const auto op3 = SbpOperator::build(3, Grid::uniform(256, 2.0));
  StateVector s(op3.points());
  for (int i = 0; i < op3.points(); ++i) s.w1()[i] = s.w2()[i] = std::sin(pi * op3.grid().x[i]);
  CHECK(std::abs(inner_product_H(op3, s, s) - 2.0) < 1e-6);
  CHECK(norm_H(op3, s) == doctest::Approx(std::sqrt(inner_product_H(op3, s, s))));

  CHECK_THROWS_AS(inner_product_H(op3, s, ones), std::invalid_argument);
}
