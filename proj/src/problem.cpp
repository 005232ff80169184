#include "sbpsat/problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sbpsat {

namespace {

constexpr int kSamples = 1001;

constexpr std::array<CaseId, 8> kCases = {CaseId::c1a, CaseId::c1b, CaseId::c2a, CaseId::c2b,
                                          CaseId::c3a, CaseId::c3b, CaseId::c4a, CaseId::c4b};
constexpr std::array<const char*, 8> kNames = {"1a", "1b", "2a", "2b", "3a", "3b", "4a", "4b"};

}  // namespace

Field Field::general(std::function<double(double)> f) {
  if (!f) throw std::invalid_argument("empty field callable");
  Field g;
  g.general_ = std::move(f);
  return g;
}

const AffineField& Field::affine() const {
  if (general_) throw std::logic_error("field is not affine");
  return affine_;
}

double Field::max_on(double x0, double x1) const {
  if (!general_) return std::max(affine_(x0), affine_(x1));
  double m = -INFINITY;
  for (int i = 0; i < kSamples; ++i) m = std::max(m, general_(x0 + (x1 - x0) * i / (kSamples - 1)));
  return m;
}

double Field::min_on(double x0, double x1) const {
  if (!general_) return std::min(affine_(x0), affine_(x1));
  double m = INFINITY;
  for (int i = 0; i < kSamples; ++i) m = std::min(m, general_(x0 + (x1 - x0) * i / (kSamples - 1)));
  return m;
}

CaseId parse_case(std::string_view name) {
  for (std::size_t i = 0; i < kCases.size(); ++i)
    if (name == kNames[i]) return kCases[i];
  throw std::invalid_argument("unknown case id '" + std::string(name) + "' (expected 1a,1b,2a,2b,3a,3b,4a,4b)");
}

std::string to_string(CaseId id) { return kNames[static_cast<std::size_t>(id)]; }

std::span<const CaseId> all_cases() { return kCases; }

int case_family(CaseId id) { return static_cast<int>(id) / 2 + 1; }

Structure ProblemSpec::structure() const {
  Structure s;
  s.coupling = (b.is_zero() && c.is_zero()) ? Coupling::diagonal : Coupling::full;
  const bool constant = a.is_constant() && b.is_constant() && c.is_constant() && d.is_constant() && cbar.is_constant();
  s.variation = constant ? Variation::constant : Variation::variable;
  return s;
}

void ProblemSpec::validate() const {
  if (!(L > 0.0)) throw std::invalid_argument("domain length must be positive");
  if (!(std::abs(R0) <= 1.0) || !(std::abs(RL) <= 1.0))
    throw std::invalid_argument("reflection coefficients must lie in [-1, 1]");
  if (!(cbar.min_on(0.0, L) > 0.0)) throw std::invalid_argument("wave speed must be positive on [0, L]");
}

ProblemSpec make_case(CaseId id) {
  ProblemSpec s;
  s.L = 2.0;
  s.R0 = 1.0;
  s.RL = 1.0;
  s.label = to_string(id);
  switch (id) {
    case CaseId::c1a: s.a = -0.7; s.d = -1.3; s.cbar = 1.2; break;
    case CaseId::c1b: s.a = 0.7; s.d = 1.3; s.cbar = 1.2; break;
    case CaseId::c2a: s.a = 1.0; s.b = -3.0; s.c = 3.0; s.d = -5.0; s.cbar = 1.2; break;
    case CaseId::c2b: s.a = 2.0; s.b = 3.0; s.c = 2.0; s.d = 4.0; s.cbar = 1.2; break;
    case CaseId::c3a:
      s.a = AffineField{-0.7, -1.0};
      s.d = AffineField{-1.3, 0.1};
      s.cbar = AffineField{1.2, 0.5};
      break;
    case CaseId::c3b:
      s.a = AffineField{0.7, 1.0};
      s.d = AffineField{1.3, 0.1};
      s.cbar = AffineField{1.2, 0.5};
      break;
    case CaseId::c4a:
      s.a = AffineField{0.0, 1.0};
      s.b = AffineField{0.0, -3.0};
      s.c = AffineField{0.0, 3.0};
      s.d = AffineField{0.0, -5.0};
      s.cbar = AffineField{1.2, 0.5};
      break;
    case CaseId::c4b:
      s.a = AffineField{2.0, 1.0};
      s.b = AffineField{0.0, 3.0};
      s.c = AffineField{0.0, 2.0};
      s.d = AffineField{-1.0, 4.0};
      s.cbar = AffineField{1.2, 0.5};
      break;
  }
  return s;
}

ManufacturedSolution manufactured_data(const ProblemSpec& spec) {
  using std::numbers::pi;
  ManufacturedSolution m;
  m.exact = [](double x, double t) -> Pair { return {std::sin(pi * x - t), std::cos(2 * pi * x + t)}; };
  m.forcing = [a = spec.a, b = spec.b, c = spec.c, d = spec.d, cb = spec.cbar](double x, double t) -> Pair {
    const double s1 = std::sin(pi * x - t), c1 = std::cos(pi * x - t);
    const double s2 = std::sin(2 * pi * x + t), c2 = std::cos(2 * pi * x + t);
    const double v = cb(x);
    return {-(1 + v * pi) * c1 - a(x) * s1 - b(x) * c2, -(1 + 2 * v * pi) * s2 - c(x) * s1 - d(x) * c2};
  };
  m.h0 = [R0 = spec.R0](double t) { return std::cos(t) + R0 * std::sin(t); };
  m.hL = [RL = spec.RL, L = spec.L](double t) { return std::sin(pi * L - t) - RL * std::cos(2 * pi * L + t); };
  return m;
}

ProblemSpec with_manufactured_data(ProblemSpec spec) {
  auto m = manufactured_data(spec);
  spec.data.forcing = m.forcing;
  spec.data.h0 = m.h0;
  spec.data.hL = m.hL;
  spec.data.initial = [exact = m.exact](double x) { return exact(x, 0.0); };
  return spec;
}

double GaussianPulse::operator()(double x) const {
  const double z = (x - center) / sigma;
  return std::exp(-z * z);
}

StateVector gaussian_initial_data(const Grid& grid, const GaussianPulse& pulse) {
  if (!(pulse.sigma > 0.0)) throw std::invalid_argument("pulse width must be positive");
  StateVector W(grid.points());
  auto w2 = W.w2();
  for (int i = 0; i < grid.points(); ++i) w2[i] = pulse(grid.x[i]);
  return W;
}

StateVector sample(const Grid& grid, const std::function<Pair(double)>& f, double t) {
  StateVector W(grid.points(), t);
  auto w1 = W.w1();
  auto w2 = W.w2();
  for (int i = 0; i < grid.points(); ++i) {
    const auto v = f(grid.x[i]);
    w1[i] = v[0];
    w2[i] = v[1];
  }
  return W;
}

}  // namespace sbpsat
