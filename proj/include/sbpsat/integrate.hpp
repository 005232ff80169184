#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbpsat/kernels.hpp"
#include "sbpsat/sbp.hpp"
#include "sbpsat/semidisc.hpp"
#include "sbpsat/state.hpp"

namespace sbpsat {

struct IntegratorConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  double safety = 0.9;
  double initial_step = 0.0;  // 0 picks one automatically
  std::size_t max_steps = 50'000'000;
  Exec exec = Exec::serial;

  void validate() const;
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

/// Step size fell below the round-off floor.
class StepSizeUnderflow : public std::runtime_error {
 public:
  StepSizeUnderflow(double t, double h);
  double time_reached() const { return t_; }

 private:
  double t_;
};

/// The solution stopped being finite.
class NonFiniteState : public std::runtime_error {
 public:
  explicit NonFiniteState(double t);
  double time_reached() const { return t_; }

 private:
  double t_;
};

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;
/// Called after every accepted step, and once at the start.
using StepObserver = std::function<void(double t, std::span<const double> y)>;

/// Dormand-Prince 5(4) with PI step control; advances y from t0 to exactly T.
void dopri5(const OdeRhs& f, std::span<double> y, double t0, double T, const IntegratorConfig& cfg,
            IntegrationStats* stats = nullptr, const StepObserver& observer = {});

/// Integrates the semidiscretization from W0.t to T.
StateVector integrate(const Semidiscretization& semi, const StateVector& W0, double T, const IntegratorConfig& cfg,
                      IntegrationStats* stats = nullptr, const StepObserver& observer = {});

struct ErrorNorms {
  double absolute = 0.0;  // ||W - Wref||_H
  double relative = 0.0;  // absolute / ||Wref||_H
};

/// Throws std::domain_error when ||Wref||_H = 0.
ErrorNorms error_norms(const StateVector& W, const StateVector& Wref, const SbpOperator& op);

}  // namespace sbpsat
