#include "sbpsat/analytic.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sbpsat {

using std::numbers::pi;

namespace {

constexpr cplx I1{0.0, 1.0};

double quad(const std::function<double(double)>& f, double x0, double x1) {
  if (x1 == x0) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, x0, x1, 15, 1e-14);
}

// u - log1p(u), accurate for small u.
double u_minus_log1p(double u) {
  if (std::abs(u) > 1e-2) return u - std::log1p(u);
  double s = 0.0, term = u;
  for (int k = 2; k < 40; ++k) {
    term *= -u;
    const double add = -term / k;  // (-1)^k u^k / k
    s += add;
    if (std::abs(add) < 1e-18 * std::abs(s)) break;
  }
  return s;
}

void require_constant(const ProblemSpec& s, const char* what) {
  if (s.structure().variation != Variation::constant)
    throw std::invalid_argument(std::string(what) + " requires constant coefficients");
}

void require_diagonal(const ProblemSpec& s, const char* what) {
  if (s.structure().coupling != Coupling::diagonal)
    throw std::invalid_argument(std::string(what) + " requires b = c = 0");
}

void add_with_conjugate(SpectrumSet& set, cplx z, int n, int n_conj) {
  set.values.push_back({z, n});
  if (z.imag() != 0.0) set.values.push_back({std::conj(z), n_conj});
}

struct Coeffs {
  double a, b, c, d, cb;
};

Coeffs constants(const ProblemSpec& s) {
  return {s.a(0.0), s.b(0.0), s.c(0.0), s.d(0.0), s.cbar(0.0)};
}

// cosh(rho) and sinh(rho)/rho as entire functions of rho^2.
void cosh_shc(cplx rho2, cplx& ch, cplx& shc) {
  if (std::abs(rho2) < 1e-6) {
    ch = 1.0 + rho2 / 2.0 + rho2 * rho2 / 24.0;
    shc = 1.0 + rho2 / 6.0 + rho2 * rho2 / 120.0;
    return;
  }
  const cplx rho = std::sqrt(rho2);
  ch = std::cosh(rho);
  shc = std::sinh(rho) / rho;
}

}  // namespace

// ---------------------------------------------------------------- PathIntegrals

PathIntegrals PathIntegrals::from(const ProblemSpec& spec) {
  if (!(spec.cbar.min_on(0.0, spec.L) > 0.0)) throw std::invalid_argument("path integrals need cbar > 0 on [0, L]");
  PathIntegrals I;
  I.cbar_ = spec.cbar;
  I.a_ = spec.a;
  I.d_ = spec.d;
  I.L_ = spec.L;
  return I;
}

double PathIntegrals::I_cbar(double x) const {
  if (cbar_.is_affine()) {
    const auto [c0, c1] = cbar_.affine();
    if (c1 == 0.0) return x / c0;
    return std::log1p(c1 * x / c0) / c1;
  }
  return quad([this](double y) { return 1.0 / cbar_(y); }, 0.0, x);
}

double PathIntegrals::I_cbar_inv(double tau) const {
  if (cbar_.is_affine()) {
    const auto [c0, c1] = cbar_.affine();
    if (c1 == 0.0) return c0 * tau;
    return c0 * std::expm1(c1 * tau) / c1;
  }
  const double T = I_cbar(L_);
  if (tau < 0.0 || tau > T) throw std::domain_error("inverse travel time outside [0, I_cbar(L)]");
  if (tau == 0.0) return 0.0;
  if (tau == T) return L_;
  auto f = [&](double x) { return I_cbar(x) - tau; };
  std::uintmax_t it = 200;
  auto r = boost::math::tools::toms748_solve(f, 0.0, L_, -tau, T - tau,
                                             boost::math::tools::eps_tolerance<double>(52), it);
  return 0.5 * (r.first + r.second);
}

double PathIntegrals::I_ratio(const Field& delta, double x) const {
  if (cbar_.is_affine() && delta.is_affine()) {
    const auto [c0, c1] = cbar_.affine();
    const auto [d0, d1] = delta.affine();
    if (c1 == 0.0) return (d0 * x + 0.5 * d1 * x * x) / c0;
    const double u = c1 * x / c0;
    return d0 * I_cbar(x) + d1 * (c0 / (c1 * c1)) * u_minus_log1p(u);
  }
  return quad([&](double y) { return delta(y) / cbar_(y); }, 0.0, x);
}

// ---------------------------------------------------------------- SpectrumSet

std::vector<cplx> SpectrumSet::points() const {
  std::vector<cplx> z;
  z.reserve(values.size());
  for (const auto& v : values) z.push_back(v.z);
  return z;
}

bool SpectrumSet::closed_under_conjugation() const {
  for (const auto& v : values) {
    if (v.z.imag() == 0.0) continue;
    const cplx c = std::conj(v.z);
    if (std::none_of(values.begin(), values.end(), [&](const Eigenvalue& w) { return w.z == c; })) return false;
  }
  return true;
}

// ---------------------------------------------------------------- constant-coefficient structure

ModeStructure mode_structure(const ProblemSpec& spec, cplx s) {
  require_constant(spec, "mode_structure");
  const auto [a, b, c, d, cb] = constants(spec);
  ModeStructure m;
  m.disc = std::pow((a - d) / cb, 2) - 4.0 * (b * c - (a - s) * (d - s)) / (cb * cb);
  const cplx root = 0.5 * std::sqrt(m.disc);
  m.lambda1 = -(a - d) / (2.0 * cb) + root;
  m.lambda2 = -(a - d) / (2.0 * cb) - root;
  if (b != 0.0) {
    m.v1 = (-(a - s) - m.lambda1 * cb) / b;
    m.v2 = (-(a - s) - m.lambda2 * cb) / b;
    m.first_component_normalised = true;
  } else if (c != 0.0) {
    m.v1 = (m.lambda1 * cb - (d - s)) / c;
    m.v2 = (m.lambda2 * cb - (d - s)) / c;
    m.first_component_normalised = false;
  } else {
    throw std::invalid_argument("mode_structure requires b != 0 or c != 0");
  }
  return m;
}

namespace {

// Both terms of detA, for the value and for residual scaling.
std::pair<cplx, cplx> detA_terms(const ProblemSpec& spec, cplx s) {
  const auto m = mode_structure(spec, s);
  cplx p1 = 1.0, q1 = m.v1, p2 = 1.0, q2 = m.v2;
  if (!m.first_component_normalised) {
    p1 = m.v1;
    q1 = 1.0;
    p2 = m.v2;
    q2 = 1.0;
  }
  const double L = spec.L, R0 = spec.R0, RL = spec.RL;
  const cplx t1 = std::exp(m.lambda1 * L) * (-p1 + RL * q1) * (-R0 * p2 + q2);
  const cplx t2 = std::exp(m.lambda2 * L) * (p2 - RL * q2) * (-R0 * p1 + q1);
  return {t1, t2};
}

}  // namespace

cplx detA(const ProblemSpec& spec, cplx s) {
  const auto [t1, t2] = detA_terms(spec, s);
  return t1 + t2;
}

cplx boundary_function(const ProblemSpec& spec, cplx s) {
  require_constant(spec, "boundary_function");
  const auto [a, b, c, d, cb] = constants(spec);
  const double L = spec.L, R0 = spec.R0, RL = spec.RL;
  const cplx q = s - 0.5 * (a + d);
  const cplx rho2 = (L / cb) * (L / cb) * (q * q - b * c);
  cplx ch, shc;
  cosh_shc(rho2, ch, shc);
  const double pre = std::exp(-0.5 * (a - d) * L / cb);
  return pre * (ch * (1.0 - RL * R0) + shc * (L / cb) * ((q - b * R0) - RL * (c - q * R0)));
}

double boundary_function_scale(const ProblemSpec& spec, cplx s) {
  const auto [a, b, c, d, cb] = constants(spec);
  const double L = spec.L, R0 = spec.R0, RL = spec.RL;
  const cplx q = s - 0.5 * (a + d);
  const cplx rho2 = (L / cb) * (L / cb) * (q * q - b * c);
  cplx ch, shc;
  cosh_shc(rho2, ch, shc);
  const double pre = std::exp(-0.5 * (a - d) * L / cb);
  const double k = std::abs(q) * (1.0 + std::abs(RL * R0)) + std::abs(b * R0) + std::abs(RL * c);
  return pre * (std::abs(ch) * (1.0 + std::abs(RL * R0)) + std::abs(shc) * (L / cb) * k);
}

// ---------------------------------------------------------------- closed-form spectra

SpectrumSet spectrum_case1(const ProblemSpec& spec, int n_max) {
  require_constant(spec, "spectrum_case1");
  require_diagonal(spec, "spectrum_case1");
  SpectrumSet set;
  set.provenance = "analytic:case1";
  const double P = spec.R0 * spec.RL;
  if (P == 0.0) {
    set.notes.push_back("no spectrum: R0 RL = 0");
    return set;
  }
  const auto [a, b, c, d, cb] = constants(spec);
  const double L = spec.L;
  const cplx lnP = std::log(cplx(P, 0.0));
  if (P < 0) set.notes.push_back("principal branch of ln(R0 RL) < 0 shifts modes by half a spacing");
  for (int n = 0; n <= n_max; ++n) {
    const cplx z = ((a + d) * L + cb * lnP + 2.0 * cb * pi * I1 * double(n)) / (2.0 * L);
    add_with_conjugate(set, z, n, P > 0 ? -n : -n - 1);
  }
  return set;
}

SpectrumSet spectrum_case2(const ProblemSpec& spec, int n_max) {
  require_constant(spec, "spectrum_case2");
  if (spec.structure().coupling == Coupling::diagonal)
    throw std::invalid_argument("spectrum_case2 requires b != 0 or c != 0; use spectrum_case1");
  if (!(spec.R0 == spec.RL && std::abs(spec.R0) == 1.0))
    throw std::domain_error("closed-form case-2 roots need R0 = RL = +-1; use detA_root_search");
  const auto [a, b, c, d, cb] = constants(spec);
  const double L = spec.L, R = spec.R0, m = 0.5 * (a + d);
  SpectrumSet set;
  set.provenance = "analytic:case2";
  const cplx s0 = 0.5 * (a + R * (b + c) + d);
  set.values.push_back({s0, 0});
  for (int n = 1; n <= n_max; ++n) {
    const double disc = b * c - pi * pi * n * n * cb * cb / (L * L);
    if (disc >= 0.0) {
      set.values.push_back({m + std::sqrt(disc), n});
      set.values.push_back({m - std::sqrt(disc), -n});
    } else {
      const cplx z = cplx(m, std::sqrt(-disc));
      add_with_conjugate(set, z, n, -n);
    }
  }
  // Degenerate branch: admitted only where the repeated-eigenvalue condition holds.
  const cplx r = std::sqrt(cplx(b * c, 0.0));
  for (const cplx cand : {m + r, m - r}) {
    const cplx q = cand - m;
    const double k = L / cb;
    const cplx lam = -(a - d) / (2.0 * cb);
    const cplx t1 = -spec.R0 * (-b * k - spec.RL * (1.0 - k * q));
    const cplx t2 = -(1.0 + k * q - spec.RL * c * k);
    const cplx val = std::exp(lam * L) * (t1 + t2);
    const double scale = std::abs(std::exp(lam * L)) * (std::abs(t1) + std::abs(t2) + 1.0);
    if (std::abs(val) > 1e-10 * scale) continue;
    const bool dup = std::any_of(set.values.begin(), set.values.end(),
                                 [&](const Eigenvalue& e) { return std::abs(e.z - cand) < 1e-10 * (1 + std::abs(cand)); });
    if (!dup) {
      set.values.push_back({cand, std::nullopt});
      set.notes.push_back("degenerate branch root admitted");
    }
  }
  return set;
}

SpectrumSet spectrum_case3(const ProblemSpec& spec, int n_max) {
  require_diagonal(spec, "spectrum_case3");
  SpectrumSet set;
  set.provenance = "analytic:case3";
  const double P = spec.R0 * spec.RL;
  if (P == 0.0) {
    set.notes.push_back("no spectrum: R0 RL = 0");
    return set;
  }
  const auto I = PathIntegrals::from(spec);
  const double L = spec.L;
  const double T = I.I_cbar(L);
  const cplx lnP = std::log(cplx(P, 0.0));
  const cplx base = lnP + I.I_d(L) + I.I_a(L);
  for (int n = 0; n <= n_max; ++n) {
    const cplx z = (base + 2.0 * pi * double(n) * I1) / (2.0 * T);
    add_with_conjugate(set, z, n, P > 0 ? -n : -n - 1);
  }
  return set;
}

// ---------------------------------------------------------------- root search

SpectrumSet detA_root_search(const ProblemSpec& spec, const SearchBox& box, const RootSearchOptions& opt) {
  require_constant(spec, "detA_root_search");
  SpectrumSet set;
  set.provenance = "analytic:rootsearch";
  const bool full = spec.structure().coupling == Coupling::full;
  std::vector<cplx> found;
  auto g = [&](cplx s) { return boundary_function(spec, s); };
  const double dre = (box.re_max - box.re_min) / std::max(1, opt.grid_re - 1);
  const double dim = (box.im_max - box.im_min) / std::max(1, opt.grid_im - 1);
  const double extent = std::abs(cplx(box.re_max - box.re_min, box.im_max - box.im_min));
  for (int i = 0; i < opt.grid_re; ++i) {
    for (int j = 0; j < opt.grid_im; ++j) {
      cplx s(box.re_min + i * dre, box.im_min + j * dim);
      bool converged = false;
      for (int it = 0; it < opt.max_iterations; ++it) {
        const cplx gs = g(s);
        const double hstep = 1e-6 * std::max(1.0, std::abs(s));
        const cplx dg = (g(s + hstep) - g(s - hstep)) / (2.0 * hstep);
        if (dg == 0.0 || !std::isfinite(std::abs(dg))) break;
        cplx step = gs / dg;
        if (std::abs(step) > 0.5 * extent) step *= 0.5 * extent / std::abs(step);
        s -= step;
        if (!std::isfinite(std::abs(s))) break;
        if (std::abs(step) < 1e-14 * (1.0 + std::abs(s))) {
          converged = true;
          break;
        }
      }
      if (!converged) continue;
      if (std::abs(s.imag()) < 1e-10 * (1.0 + std::abs(s))) s = cplx(s.real(), 0.0);
      if (!box.contains(s)) continue;
      const double scale = boundary_function_scale(spec, s);
      if (std::abs(g(s)) > opt.residual_tol * scale) continue;
      // Winding number on a small circle; rejects cancellation noise where g underflows to 0.
      {
        const int M = 32;
        const double rad = 1e-4 * (1.0 + std::abs(s));
        cplx prev = g(s + rad);
        double turn = 0.0;
        bool resolved = std::abs(prev) > 1e3 * std::numeric_limits<double>::epsilon() * scale;
        for (int k = 1; k <= M && resolved; ++k) {
          const cplx cur = g(s + rad * std::polar(1.0, 2.0 * pi * k / M));
          resolved = std::abs(cur) > 1e3 * std::numeric_limits<double>::epsilon() * scale;
          turn += std::arg(cur / prev);
          prev = cur;
        }
        if (!resolved || std::lround(turn / (2.0 * pi)) < 1) continue;
      }
      const bool dup = std::any_of(found.begin(), found.end(), [&](cplx r) {
        return std::abs(r - s) < opt.dedup_tol * (1.0 + std::abs(s));
      });
      if (!dup) found.push_back(s);
    }
  }
  // Canonical conjugate pairs.
  std::vector<cplx> upper;
  for (cplx r : found) {
    if (r.imag() < 0.0) r = std::conj(r);
    const bool dup = std::any_of(upper.begin(), upper.end(), [&](cplx u) {
      return std::abs(u - r) < opt.dedup_tol * (1.0 + std::abs(r));
    });
    if (!dup) upper.push_back(r);
  }
  std::sort(upper.begin(), upper.end(), [](cplx x, cplx y) {
    return x.imag() != y.imag() ? x.imag() < y.imag() : x.real() < y.real();
  });
  int unverified = 0;
  for (cplx r : upper) {
    if (full) {
      const auto m = mode_structure(spec, r);
      if (std::abs(m.disc) > 1e-8) {
        const auto [t1, t2] = detA_terms(spec, r);
        if (std::abs(t1 + t2) > 1e-8 * (std::abs(t1) + std::abs(t2))) ++unverified;
      }
    }
    set.values.push_back({r, std::nullopt});
    if (r.imag() != 0.0 && box.contains(std::conj(r))) set.values.push_back({std::conj(r), std::nullopt});
  }
  if (unverified > 0) set.notes.push_back(std::to_string(unverified) + " roots with large detA residual");
  if (set.values.empty()) set.notes.push_back("no roots in search box");
  return set;
}

// ---------------------------------------------------------------- exact solution

int exact_series_terms(const PathIntegrals& I, double T) {
  const double Tc = I.crossing_time();
  return static_cast<int>(std::ceil((T + Tc) / (2.0 * Tc))) + 1;
}

Pair exact_solution_case13(const PathIntegrals& I, const ProblemSpec& spec, const GaussianPulse& pulse, double x,
                           double t) {
  if (spec.structure().coupling != Coupling::diagonal)
    throw std::invalid_argument("exact_solution_case13 requires b = c = 0");
  const double L = spec.L;
  const double P = spec.R0 * spec.RL;
  const double IcL = I.I_cbar(L), IaL = I.I_a(L), IdL = I.I_d(L);
  const double Icx = I.I_cbar(x), Iax = I.I_a(x), Idx = I.I_d(x);
  const int nmax = exact_series_terms(I, t);

  double w1 = 0.0, w2 = 0.0;
  {
    const double arg = Icx - t;
    if (arg >= 0.0) {
      const double xi = I.I_cbar_inv(arg);
      w2 += std::exp(Idx - I.I_d(xi)) * pulse(xi);
    }
  }
  double amp = 1.0;  // (R0 RL)^n
  for (int n = 0; n <= nmax; ++n) {
    const double loop = n * (IdL + IaL);
    const double alpha = -Icx + (2 * n + 1) * IcL;
    const double beta = Icx + (2 * n + 1) * IcL;
    if (spec.RL != 0.0 && t >= alpha) {
      const double arg = IcL - (t - alpha);
      if (arg >= 0.0) {
        const double xi = I.I_cbar_inv(arg);
        const double y = -Iax + IaL + loop + IdL;
        w1 += spec.RL * amp * std::exp(y - I.I_d(xi)) * pulse(xi);
      }
    }
    if (P != 0.0 && t >= beta) {
      const double arg = IcL - (t - beta);
      if (arg >= 0.0) {
        const double gam = I.I_cbar_inv(arg);
        const double z = Idx + IaL + loop + IdL;
        w2 += amp * P * std::exp(z - I.I_d(gam)) * pulse(gam);
      }
    }
    amp *= P;
  }
  return {w1, w2};
}

Pair exact_solution_case13(const ProblemSpec& spec, const GaussianPulse& pulse, double x, double t) {
  return exact_solution_case13(PathIntegrals::from(spec), spec, pulse, x, t);
}

}  // namespace sbpsat
