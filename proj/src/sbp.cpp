#include "sbpsat/sbp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sbpsat/sbp_coefficients.hpp"

namespace sbpsat {

namespace {

detail::ClosureTable table_for(int p) {
  using namespace detail;
  switch (p) {
    case 2: return {1, 1, 2, kInterior2, kWeights2, kRows2};
    case 3: return {2, 4, 6, kInterior3, kWeights3, kRows3};
    case 4: return {3, 6, 9, kInterior4, kWeights4, kRows4};
    case 5: return {4, 8, 12, kInterior5, kWeights5, kRows5};
    default: throw std::invalid_argument("unsupported SBP order p=" + std::to_string(p) + " (expected 2..5)");
  }
}

}  // namespace

Grid Grid::uniform(int N, double L) {
  if (N < 1) throw std::invalid_argument("grid needs at least one interval");
  if (!(L > 0.0)) throw std::invalid_argument("grid length must be positive");
  Grid g;
  g.N = N;
  g.L = L;
  g.h = L / N;
  g.x.resize(N + 1);
  for (int i = 0; i <= N; ++i) g.x[i] = i * g.h;
  g.x[N] = L;
  return g;
}

int SbpOperator::min_intervals(int p) { return 2 * table_for(p).block - 1; }

SbpOperator SbpOperator::build(int p, const Grid& grid) {
  const auto t = table_for(p);
  if (grid.points() < 2 * t.block)
    throw std::invalid_argument("grid too small for order " + std::to_string(p) + " closure: need N >= " +
                                std::to_string(2 * t.block - 1));
  SbpOperator op;
  op.p_ = p;
  op.grid_ = grid;
  const int n = grid.points();
  op.weights_.assign(n, grid.h);
  for (int i = 0; i < t.block; ++i) {
    op.weights_[i] = t.weights[i] * grid.h;
    op.weights_[n - 1 - i] = t.weights[i] * grid.h;
  }
  op.view_ = {n, t.block, t.block_cols, t.interior_half_width, t.rows.data(), t.interior.data(), 1.0 / grid.h};
  return op;
}

void SbpOperator::apply(std::span<const double> v, std::span<double> out, Exec exec) const {
  if (v.size() != static_cast<std::size_t>(points()) || out.size() != v.size())
    throw std::invalid_argument("apply_D: length mismatch");
  kernels::apply_banded(view_, v.data(), out.data(), exec);
}

std::vector<double> SbpOperator::apply(std::span<const double> v, Exec exec) const {
  std::vector<double> out(v.size());
  apply(v, out, exec);
  return out;
}

double SbpOperator::entry(int i, int j) const {
  const int n = view_.n;
  const int b = view_.block;
  const int bc = view_.block_cols;
  if (i < b) return j < bc ? view_.rows[i * bc + j] * view_.inv_h : 0.0;
  if (i >= n - b) {
    const int ii = n - 1 - i;
    const int jj = n - 1 - j;
    return jj < bc ? -view_.rows[ii * bc + jj] * view_.inv_h : 0.0;
  }
  const int k = j - i;
  if (k == 0 || std::abs(k) > view_.half_width) return 0.0;
  const double c = view_.interior[std::abs(k) - 1] * view_.inv_h;
  return k > 0 ? c : -c;
}

Matrix SbpOperator::dense() const {
  const int n = points();
  Matrix D(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - view_.block_cols); j < std::min(n, i + view_.block_cols + 1); ++j)
      D(i, j) = entry(i, j);
  return D;
}

Matrix SbpOperator::dense_Q() const {
  Matrix Q = dense();
  for (std::size_t i = 0; i < Q.rows(); ++i)
    for (std::size_t j = 0; j < Q.cols(); ++j) Q(i, j) *= weights_[i];
  return Q;
}

double inner_product_H(const SbpOperator& op, std::span<const double> u, std::span<const double> v) {
  const auto w = op.weights();
  if (u.size() != w.size() || v.size() != w.size()) throw std::invalid_argument("inner product: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * u[i] * v[i];
  return s;
}

double inner_product_H(const SbpOperator& op, const StateVector& U, const StateVector& W) {
  const auto n = static_cast<std::size_t>(op.points());
  U.check(n);
  W.check(n);
  return inner_product_H(op, U.w1(), W.w1()) + inner_product_H(op, U.w2(), W.w2());
}

double norm_H(const SbpOperator& op, const StateVector& U) { return std::sqrt(inner_product_H(op, U, U)); }

double sbp_identity_residual(const SbpOperator& op, std::span<const double> u, std::span<const double> v) {
  const auto Du = op.apply(u);
  const auto Dv = op.apply(v);
  const auto n = u.size();
  // u'Qv + v'Qu with Q = H D.
  const double lhs = inner_product_H(op, u, Dv) + inner_product_H(op, v, Du);
  return std::abs(lhs - (u[n - 1] * v[n - 1] - u[0] * v[0]));
}

double monomial_error(const SbpOperator& op, int k, bool boundary) {
  if (k < 0) throw std::invalid_argument("monomial_error: negative degree");
  const auto& x = op.grid().x;
  const int n = op.points();
  std::vector<double> v(n), dv(n);
  for (int i = 0; i < n; ++i) {
    v[i] = std::pow(x[i], k);
    dv[i] = k == 0 ? 0.0 : k * std::pow(x[i], k - 1);
  }
  const auto Dv = op.apply(v);
  const int b = op.closure_rows();
  double err = 0.0, scale = 1.0;
  for (int i = 0; i < n; ++i) {
    scale = std::max(scale, std::abs(dv[i]));
    const bool closure = i < b || i >= n - b;
    if (closure == boundary) err = std::max(err, std::abs(Dv[i] - dv[i]));
  }
  return err / scale;
}

}  // namespace sbpsat
