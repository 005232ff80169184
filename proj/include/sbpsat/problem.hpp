#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "sbpsat/sbp.hpp"
#include "sbpsat/state.hpp"

namespace sbpsat {

/// value(x) = intercept + slope x.
struct AffineField {
  double intercept = 0.0;
  double slope = 0.0;
  double operator()(double x) const { return intercept + slope * x; }
  bool operator==(const AffineField&) const = default;
};

/// Coefficient field: affine by default, or an arbitrary callable.
/// Closed-form analytics require the affine form.
class Field {
 public:
  Field() = default;
  Field(AffineField a) : affine_(a) {}  // NOLINT(google-explicit-constructor)
  Field(double c) : affine_{c, 0.0} {}  // NOLINT(google-explicit-constructor)
  static Field general(std::function<double(double)> f);

  double operator()(double x) const { return general_ ? general_(x) : affine_(x); }
  bool is_affine() const { return !general_; }
  const AffineField& affine() const;
  bool is_constant() const { return !general_ && affine_.slope == 0.0; }
  bool is_zero() const { return is_constant() && affine_.intercept == 0.0; }
  /// max over [x0, x1]; exact for affine fields, sampled otherwise.
  double max_on(double x0, double x1) const;
  double min_on(double x0, double x1) const;

 private:
  AffineField affine_;
  std::function<double(double)> general_;
};

enum class CaseId { c1a, c1b, c2a, c2b, c3a, c3b, c4a, c4b };

CaseId parse_case(std::string_view name);
std::string to_string(CaseId id);
std::span<const CaseId> all_cases();
/// 1..4
int case_family(CaseId id);

enum class Coupling { diagonal, full };
enum class Variation { constant, variable };

struct Structure {
  Coupling coupling = Coupling::diagonal;
  Variation variation = Variation::constant;
  int family() const {
    return (coupling == Coupling::diagonal ? 1 : 2) + (variation == Variation::variable ? 2 : 0);
  }
};

using Pair = std::array<double, 2>;

/// Boundary data, forcing and initial data.  Empty callables mean zero.
struct ProblemData {
  std::function<double(double t)> h0;
  std::function<double(double t)> hL;
  std::function<Pair(double x, double t)> forcing;
  std::function<Pair(double x)> initial;
  bool homogeneous() const { return !h0 && !hL && !forcing; }
};

/// w_t + Lambda w_x = B w + F on 0 < x < L, Lambda = diag(-cbar, cbar), B = [[a, b], [c, d]],
/// w2(0,t) = R0 w1(0,t) + h0(t), w1(L,t) = RL w2(L,t) + hL(t).
struct ProblemSpec {
  double L = 2.0;
  Field a, b, c, d;
  Field cbar = 1.0;
  double R0 = 1.0;
  double RL = 1.0;
  ProblemData data;
  std::string label;

  Structure structure() const;
  /// Throws std::invalid_argument on |R| > 1, L <= 0 or cbar <= 0 somewhere on [0, L].
  void validate() const;
};

ProblemSpec make_case(CaseId id);

/// w1* = sin(pi x - t), w2* = cos(2 pi x + t) with the forcing and boundary data that
/// make it an exact solution.
struct ManufacturedSolution {
  std::function<Pair(double x, double t)> exact;
  std::function<Pair(double x, double t)> forcing;
  std::function<double(double t)> h0;
  std::function<double(double t)> hL;
};

ManufacturedSolution manufactured_data(const ProblemSpec& spec);
/// Copy of spec with forcing, boundary and initial data taken from the manufactured solution.
ProblemSpec with_manufactured_data(ProblemSpec spec);

struct GaussianPulse {
  double center = 1.0;
  double sigma = 0.2;
  double operator()(double x) const;
  static GaussianPulse centered(double L, double sigma = 0.2) { return {0.5 * L, sigma}; }
};

/// w1 = 0, w2 = exp(-(x - center)^2 / sigma^2).
StateVector gaussian_initial_data(const Grid& grid, const GaussianPulse& pulse);

/// Samples a pair-valued function of x onto the grid.
StateVector sample(const Grid& grid, const std::function<Pair(double)>& f, double t = 0.0);

}  // namespace sbpsat
