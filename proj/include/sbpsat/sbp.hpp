#pragma once

#include <span>
#include <vector>

#include "sbpsat/dense.hpp"
#include "sbpsat/kernels.hpp"
#include "sbpsat/state.hpp"

namespace sbpsat {

/// Uniform grid x_i = i h, i = 0..N, on [0, L].
struct Grid {
  int N = 0;
  double L = 1.0;
  double h = 1.0;
  std::vector<double> x;

  static Grid uniform(int N, double L);
  int points() const { return N + 1; }
};

/// Diagonal-norm SBP first-derivative operator, D = H^{-1} Q.
///
/// Accuracy order p in {2,3,4,5}: central interior stencil of order 2(p-1),
/// one-sided closures of order p-1.
class SbpOperator {
 public:
  static SbpOperator build(int p, const Grid& grid);

  int order() const { return p_; }
  int interior_order() const { return 2 * (p_ - 1); }
  int boundary_order() const { return p_ - 1; }
  int closure_rows() const { return view_.block; }
  int half_width() const { return view_.half_width; }
  const Grid& grid() const { return grid_; }
  int points() const { return grid_.points(); }

  /// Diagonal of H, including the factor h.
  std::span<const double> weights() const { return weights_; }

  void apply(std::span<const double> v, std::span<double> out, Exec exec = Exec::serial) const;
  std::vector<double> apply(std::span<const double> v, Exec exec = Exec::serial) const;

  /// Single entry D(i, j).
  double entry(int i, int j) const;
  Matrix dense() const;
  Matrix dense_Q() const;

  /// Minimal supported N for order p.
  static int min_intervals(int p);

 private:
  int p_ = 0;
  Grid grid_;
  std::vector<double> weights_;
  kernels::BandedView view_;
};

/// Sum_i H_ii u_i v_i for single grid functions.
double inner_product_H(const SbpOperator& op, std::span<const double> u, std::span<const double> v);

/// (U, W)_H = u1' H w1 + u2' H w2.
double inner_product_H(const SbpOperator& op, const StateVector& U, const StateVector& W);
double norm_H(const SbpOperator& op, const StateVector& U);

/// |u'(Q + Q')v - (u_N v_N - u_0 v_0)| evaluated with the banded action of D.
double sbp_identity_residual(const SbpOperator& op, std::span<const double> u, std::span<const double> v);

/// max |(D x^k)_i - k x_i^(k-1)| over the closure rows at both ends (boundary = true)
/// or over the remaining rows, divided by max(1, max_i |k x_i^(k-1)|).
double monomial_error(const SbpOperator& op, int k, bool boundary);

}  // namespace sbpsat
