#pragma once

#include <span>
#include <vector>

#include "sbpsat/dense.hpp"
#include "sbpsat/kernels.hpp"
#include "sbpsat/problem.hpp"
#include "sbpsat/sbp.hpp"
#include "sbpsat/state.hpp"

namespace sbpsat {

/// Skew-symmetric SBP-SAT semidiscretization
///   W_t = -Lambda_D W + B W + P W + SAT data + F,
/// with Lambda_D = diag(-K, K), K = (C D + D C)/2 - diag(D c)/2, C = diag(cbar).
/// Penalties alpha0 = -cbar(0), alphaL = -cbar(L).
class Semidiscretization {
 public:
  static Semidiscretization assemble(const ProblemSpec& spec, const SbpOperator& op);

  const SbpOperator& op() const { return op_; }
  const ProblemSpec& spec() const { return spec_; }
  int points() const { return op_.points(); }
  std::size_t size() const { return 2 * static_cast<std::size_t>(op_.points()); }

  double alpha0() const { return alpha0_; }
  double alphaL() const { return alphaL_; }
  std::span<const double> cbar() const { return cbar_; }
  /// D applied to sampled cbar.
  std::span<const double> dcbar() const { return dcbar_; }

  /// Full right-hand side including boundary data and forcing at time t.
  void rhs(std::span<const double> W, double t, std::span<double> dW, Exec exec = Exec::serial) const;
  /// Right-hand side with h0 = hL = F = 0.
  void rhs_homogeneous(std::span<const double> W, std::span<double> dW, Exec exec = Exec::serial) const;
  StateVector rhs(const StateVector& W) const;

  /// Dense D_h = -Lambda_D + B + P.
  Matrix system_matrix() const;
  Matrix lambda_d() const;
  Matrix btilde() const;
  Matrix penalty() const;
  /// diag(-D c, D c).
  Matrix m_cbar() const;

  double energy(const StateVector& W) const;
  /// 2 (W, rhs(W, t))_H.
  double energy_rate(const StateVector& W) const;

  /// H-norms of the multiplication operators B and M_cbar.  H commutes with both, so
  /// these equal the 2-norms, evaluated exactly node by node.
  double norm_btilde_H() const;
  double norm_mcbar_H() const;

 private:
  void apply_K(const double* w, double* out, double* scratch, Exec exec) const;

  SbpOperator op_;
  ProblemSpec spec_;
  std::vector<double> a_, b_, c_, d_;
  std::vector<double> cbar_, dcbar_;
  double alpha0_ = 0.0;
  double alphaL_ = 0.0;
};

}  // namespace sbpsat
