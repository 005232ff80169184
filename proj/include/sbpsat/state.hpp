#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace sbpsat {

/// Stacked characteristic unknowns [w1; w2] at time t, component-major.
struct StateVector {
  std::size_t points = 0;  // N + 1
  std::vector<double> values;
  double t = 0.0;

  StateVector() = default;
  explicit StateVector(std::size_t npoints, double time = 0.0)
      : points(npoints), values(2 * npoints, 0.0), t(time) {}

  std::size_t size() const { return values.size(); }
  std::span<double> w1() { return {values.data(), points}; }
  std::span<double> w2() { return {values.data() + points, points}; }
  std::span<const double> w1() const { return {values.data(), points}; }
  std::span<const double> w2() const { return {values.data() + points, points}; }

  void check(std::size_t npoints) const {
    if (points != npoints || values.size() != 2 * npoints)
      throw std::invalid_argument("state vector length does not match the grid");
  }
};

}  // namespace sbpsat
