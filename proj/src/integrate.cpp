#include "sbpsat/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sbpsat {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kBeta = 0.04;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;

double scaled_max(std::span<const double> v, std::span<const double> y, const IntegratorConfig& cfg) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]) / (cfg.abs_tol + cfg.rel_tol * std::abs(y[i])));
  return m;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw std::invalid_argument("integrator tolerances must be positive");
  if (!(safety > 0.0 && safety < 1.0)) throw std::invalid_argument("integrator safety factor must lie in (0, 1)");
  if (!(max_step > 0.0)) throw std::invalid_argument("integrator max_step must be positive");
}

StepSizeUnderflow::StepSizeUnderflow(double t, double h)
    : std::runtime_error("step size underflow (h = " + std::to_string(h) + ") at t = " + std::to_string(t)), t_(t) {}

NonFiniteState::NonFiniteState(double t)
    : std::runtime_error("non-finite solution state at t = " + std::to_string(t)), t_(t) {}

void dopri5(const OdeRhs& f, std::span<double> y, double t0, double T, const IntegratorConfig& cfg,
            IntegrationStats* stats, const StepObserver& observer) {
  cfg.validate();
  if (!(T >= t0)) throw std::invalid_argument("integration end time precedes start time");
  if (!all_finite(y)) throw NonFiniteState(t0);
  IntegrationStats local;
  IntegrationStats& st = stats ? *stats : local;
  if (observer) observer(t0, y);
  if (T == t0) return;

  const std::size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
  auto eval = [&](double t, std::span<const double> yy, std::vector<double>& out) {
    f(t, yy, out);
    ++st.rhs_evaluations;
  };

  double t = t0;
  eval(t, y, k1);

  double h = cfg.initial_step;
  if (h <= 0.0) {
    const double d0 = scaled_max(y, y, cfg);
    const double d1 = scaled_max(k1, y, cfg);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min({h0, T - t0, cfg.max_step});
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h0 * k1[i];
    eval(t + h0, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) err[i] = (k2[i] - k1[i]) / h0;
    const double d2 = scaled_max(err, y, cfg);
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min(100 * h0, h1);
  }
  h = std::min(h, cfg.max_step);

  double err_old = 1e-4;
  bool last_rejected = false;
  int nonfinite_streak = 0;
  while (t < T) {
    if (st.accepted + st.rejected >= cfg.max_steps)
      throw std::runtime_error("integrator exceeded max_steps at t = " + std::to_string(t));
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) throw StepSizeUnderflow(t, h);
    const bool final_step = t + h >= T;
    if (final_step) h = T - t;

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    eval(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eval(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    eval(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double tnew = final_step ? T : t + h;
    eval(tnew, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    eval(tnew, ynew, k7);

    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      e = std::max(e, std::abs(ei) / sc);
    }

    if (!std::isfinite(e)) {
      if (++nonfinite_streak > 50) throw NonFiniteState(t);
      ++st.rejected;
      h *= kFacMin;
      last_rejected = true;
      continue;
    }
    nonfinite_streak = 0;

    const double fac11 = std::pow(e, 0.2 - 0.75 * kBeta);
    if (e <= 1.0) {
      double fac = fac11 / std::pow(err_old, kBeta);
      fac = std::clamp(fac / cfg.safety, 1.0 / kFacMax, 1.0 / kFacMin);
      double hnew = h / fac;
      if (last_rejected) hnew = std::min(hnew, h);
      err_old = std::max(e, 1e-4);
      std::copy(ynew.begin(), ynew.end(), y.begin());
      std::swap(k1, k7);  // FSAL
      t = tnew;
      ++st.accepted;
      last_rejected = false;
      if (!all_finite(y)) throw NonFiniteState(t);
      if (observer) observer(t, y);
      h = std::min(hnew, cfg.max_step);
    } else {
      ++st.rejected;
      h /= std::min(1.0 / kFacMin, fac11 / cfg.safety);
      last_rejected = true;
    }
  }
}

StateVector integrate(const Semidiscretization& semi, const StateVector& W0, double T, const IntegratorConfig& cfg,
                      IntegrationStats* stats, const StepObserver& observer) {
  W0.check(static_cast<std::size_t>(semi.points()));
  StateVector W = W0;
  const Exec exec = cfg.exec;
  OdeRhs f = [&semi, exec](double t, std::span<const double> y, std::span<double> dy) { semi.rhs(y, t, dy, exec); };
  dopri5(f, W.values, W0.t, T, cfg, stats, observer);
  W.t = T;
  return W;
}

ErrorNorms error_norms(const StateVector& W, const StateVector& Wref, const SbpOperator& op) {
  const auto n = static_cast<std::size_t>(op.points());
  W.check(n);
  Wref.check(n);
  StateVector diff(n);
  for (std::size_t i = 0; i < diff.size(); ++i) diff.values[i] = W.values[i] - Wref.values[i];
  const double ref = norm_H(op, Wref);
  if (ref == 0.0) throw std::domain_error("relative error undefined: reference norm is zero");
  ErrorNorms e;
  e.absolute = norm_H(op, diff);
  e.relative = e.absolute / ref;
  return e;
}

}  // namespace sbpsat
