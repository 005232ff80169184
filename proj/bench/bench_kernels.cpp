#include <benchmark/benchmark.h>

#include <random>

#include "sbpsat/semidisc.hpp"
#include "sbpsat/spectra.hpp"

using namespace sbpsat;

namespace {

std::vector<double> random_vector(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  for (auto& x : v) x = nd(rng);
  return v;
}

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::parallel : Exec::serial; }

void BM_apply(benchmark::State& st) {
  const auto op = SbpOperator::build(4, Grid::uniform(static_cast<int>(st.range(0)), 2.0));
  const auto v = random_vector(op.points());
  std::vector<double> out(op.points());
  for (auto _ : st) {
    op.apply(v, out, exec_of(st));
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * op.points());
}

void BM_rhs(benchmark::State& st) {
  const auto spec = with_manufactured_data(make_case(CaseId::c4b));
  const auto semi = Semidiscretization::assemble(spec, SbpOperator::build(4, Grid::uniform(static_cast<int>(st.range(0)), 2.0)));
  const auto W = random_vector(semi.size());
  std::vector<double> dW(semi.size());
  for (auto _ : st) {
    semi.rhs(W, 0.1, dW, exec_of(st));
    benchmark::DoNotOptimize(dW.data());
  }
  st.SetItemsProcessed(st.iterations() * semi.size());
}

void BM_hessenberg(benchmark::State& st) {
  const auto semi = Semidiscretization::assemble(make_case(CaseId::c4b),
                                                 SbpOperator::build(3, Grid::uniform(static_cast<int>(st.range(0)), 2.0)));
  const Matrix A = semi.system_matrix();
  for (auto _ : st) {
    Matrix H = A;
    hessenberg_reduce(H, exec_of(st));
    benchmark::DoNotOptimize(H.data());
  }
}

void BM_eigenvalues(benchmark::State& st) {
  const auto semi = Semidiscretization::assemble(make_case(CaseId::c4b),
                                                 SbpOperator::build(3, Grid::uniform(static_cast<int>(st.range(0)), 2.0)));
  const Matrix A = semi.system_matrix();
  EigenOptions opt;
  opt.exec = exec_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(eigenvalues_dense(A, opt));
}

}  // namespace

BENCHMARK(BM_apply)->ArgsProduct({{1024, 16384, 262144}, {0, 1}});
BENCHMARK(BM_rhs)->ArgsProduct({{1024, 16384, 262144}, {0, 1}});
BENCHMARK(BM_hessenberg)->ArgsProduct({{128, 256}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_eigenvalues)->ArgsProduct({{128, 256}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
