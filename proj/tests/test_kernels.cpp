#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "sbpsat/integrate.hpp"
#include "sbpsat/semidisc.hpp"
#include "sbpsat/spectra.hpp"

using namespace sbpsat;

// Parallel variants split output entries only, so results must match bit for bit.

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  for (auto& x : v) x = nd(rng);
  return v;
}

Matrix random_matrix(std::size_t r, std::size_t c, unsigned seed) {
  const auto v = random_vector(r * c, seed);
  Matrix M(r, c);
  std::copy(v.begin(), v.end(), M.data());
  return M;
}

bool same(const Matrix& A, const Matrix& B) {
  return std::equal(A.data(), A.data() + A.rows() * A.cols(), B.data());
}

}  // namespace

TEST_CASE("banded derivative: serial and parallel agree exactly") {
  for (int p = 2; p <= 5; ++p) {
    const auto op = SbpOperator::build(p, Grid::uniform(517, 2.0));
    const auto v = random_vector(op.points(), p);
    std::vector<double> a(op.points()), b(op.points());
    op.apply(v, a, Exec::serial);
    op.apply(v, b, Exec::parallel);
    CHECK(a == b);
  }
}

TEST_CASE("matvec: serial and parallel agree exactly") {
  const Matrix A = random_matrix(301, 257, 3);
  const auto x = random_vector(257, 4);
  std::vector<double> a(301), b(301);
  kernels::matvec(A, x.data(), a.data(), Exec::serial);
  kernels::matvec(A, x.data(), b.data(), Exec::parallel);
  CHECK(a == b);
  CHECK(a == multiply(A, x));
}

TEST_CASE("Householder updates: serial and parallel agree exactly") {
  const Matrix A0 = random_matrix(64, 64, 7);
  auto u = random_vector(40, 8);
  const double tau = 2.0 / std::inner_product(u.begin(), u.end(), u.begin(), 0.0);
  Matrix A = A0, B = A0;
  kernels::householder_left(A, u.data(), tau, 10, 50, 3, 64, Exec::serial);
  kernels::householder_left(B, u.data(), tau, 10, 50, 3, 64, Exec::parallel);
  CHECK(same(A, B));
  kernels::householder_right(A, u.data(), tau, 0, 64, 20, 60, Exec::serial);
  kernels::householder_right(B, u.data(), tau, 0, 64, 20, 60, Exec::parallel);
  CHECK(same(A, B));
  // untouched rows survive the left update
  Matrix C = A0;
  kernels::householder_left(C, u.data(), tau, 10, 50, 3, 64, Exec::serial);
  for (std::size_t j = 0; j < 64; ++j) CHECK(C(5, j) == A0(5, j));
}

TEST_CASE("semidiscrete right-hand side: serial and parallel agree exactly") {
  for (CaseId id : all_cases()) {
    const auto spec = with_manufactured_data(make_case(id));
    const auto semi = Semidiscretization::assemble(spec, SbpOperator::build(4, Grid::uniform(300, spec.L)));
    const auto W = random_vector(semi.size(), 11);
    std::vector<double> a(semi.size()), b(semi.size());
    semi.rhs(W, 0.37, a, Exec::serial);
    semi.rhs(W, 0.37, b, Exec::parallel);
    CAPTURE(to_string(id));
    CHECK(a == b);
  }
}

TEST_CASE("Hessenberg reduction and eigenvalues: serial and parallel agree exactly") {
  const auto sc = oracle::similarity_case(90, 12);
  Matrix A(90, 90);
  for (int i = 0; i < 90; ++i)
    for (int j = 0; j < 90; ++j) A(i, j) = sc.A(i, j);
  Matrix H1 = A, H2 = A;
  hessenberg_reduce(H1, Exec::serial);
  hessenberg_reduce(H2, Exec::parallel);
  CHECK(same(H1, H2));
  EigenOptions s, p;
  p.exec = Exec::parallel;
  CHECK(eigenvalues_dense(A, s) == eigenvalues_dense(A, p));
}

TEST_CASE("time integration: serial and parallel agree exactly") {
  const auto spec = with_manufactured_data(make_case(CaseId::c4b));
  const auto semi = Semidiscretization::assemble(spec, SbpOperator::build(3, Grid::uniform(128, spec.L)));
  StateVector W0(semi.points());
  const auto g = semi.op().grid();
  for (int i = 0; i < semi.points(); ++i) {
    const auto w = spec.data.initial(g.x[i]);
    W0.w1()[i] = w[0];
    W0.w2()[i] = w[1];
  }
  IntegratorConfig cs, cp;
  cp.exec = Exec::parallel;
  IntegrationStats ss, sp;
  const auto a = integrate(semi, W0, 0.2, cs, &ss);
  const auto b = integrate(semi, W0, 0.2, cp, &sp);
  CHECK(a.values == b.values);
  CHECK(ss.accepted == sp.accepted);
  CHECK(ss.rejected == sp.rejected);
}
