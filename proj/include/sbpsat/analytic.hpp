#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "sbpsat/problem.hpp"

namespace sbpsat {

using cplx = std::complex<double>;

/// Travel-time and growth integrals along characteristics:
///   I_cbar(x) = int_0^x dy / cbar(y),  I[delta](x) = int_0^x delta(y) / cbar(y) dy.
/// Closed form for affine fields, adaptive quadrature otherwise.
class PathIntegrals {
 public:
  /// Throws std::invalid_argument when cbar is not positive on [0, L].
  static PathIntegrals from(const ProblemSpec& spec);

  double I_cbar(double x) const;
  /// I_cbar^{-1}; defined for tau in the image of the affine continuation.
  double I_cbar_inv(double tau) const;
  double I_ratio(const Field& delta, double x) const;
  double I_a(double x) const { return I_ratio(a_, x); }
  double I_d(double x) const { return I_ratio(d_, x); }
  double L() const { return L_; }
  /// I_cbar(L), the one-way crossing time.
  double crossing_time() const { return I_cbar(L_); }

 private:
  Field cbar_, a_, d_;
  double L_ = 0.0;
};

struct Eigenvalue {
  cplx z;
  std::optional<int> n;  // mode index for analytic values
};

/// Finite collection of complex eigenvalues with provenance.
struct SpectrumSet {
  std::vector<Eigenvalue> values;
  std::string provenance;  // "analytic:case1" or "discrete:p=4:N=128"
  std::vector<std::string> notes;

  bool empty() const { return values.empty(); }
  std::size_t size() const { return values.size(); }
  std::vector<cplx> points() const;
  /// Every non-real value has its exact conjugate in the set.
  bool closed_under_conjugation() const;
};

/// Eigen-structure of M(s) = Lambda^{-1} (B - s I) for constant coefficients.
struct ModeStructure {
  cplx lambda1, lambda2;
  cplx v1, v2;  // eigenvector components completing (1, v) when b != 0, (v, 1) when b == 0
  cplx disc;
  bool first_component_normalised = true;
};

ModeStructure mode_structure(const ProblemSpec& spec, cplx s);

/// Boundary determinant from the two eigenvector solutions.  Vanishes identically where
/// disc(M) = 0.
cplx detA(const ProblemSpec& spec, cplx s);

/// g(s) = [1, -RL] exp(M L) [1, R0]^T, an entire function whose zeros are the spectrum.
/// Equal to detA up to a factor that is nonzero where disc(M) != 0.
cplx boundary_function(const ProblemSpec& spec, cplx s);
/// Magnitude of the terms in g(s), used to scale residuals.
double boundary_function_scale(const ProblemSpec& spec, cplx s);

/// Case 1 (constant, diagonal): s_n = ((a+d)L + cbar ln(R0 RL) + 2 cbar pi i n) / (2L).
/// Contains every mode with |n| <= n_max plus the conjugates.  Empty when R0 RL = 0.
SpectrumSet spectrum_case1(const ProblemSpec& spec, int n_max);

/// Case 2 (constant, full B) with R0 = RL = R in {-1, 1}: s0 and s_n^+- for 1 <= n <= n_max,
/// plus admitted degenerate candidates (a+d)/2 +- sqrt(bc).
SpectrumSet spectrum_case2(const ProblemSpec& spec, int n_max);

struct SearchBox {
  double re_min = -10.0, re_max = 10.0;
  double im_min = -20.0, im_max = 20.0;
  bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

struct RootSearchOptions {
  int grid_re = 40;
  int grid_im = 80;
  int max_iterations = 60;
  double residual_tol = 1e-10;  // on |g| / scale
  double dedup_tol = 1e-8;
};

/// Complex Newton from a grid of starts; roots verified against detA when it is informative.
SpectrumSet detA_root_search(const ProblemSpec& spec, const SearchBox& box, const RootSearchOptions& opt = {});

/// Case 3 (affine, diagonal): s_n = (ln(R0 RL) + I_d(L) + I_a(L) + 2 pi n i) / (2 I_cbar(L)).
SpectrumSet spectrum_case3(const ProblemSpec& spec, int n_max);

/// Laplace-series solution for b = c = 0, f1 = 0, f2 = pulse, zero data.
Pair exact_solution_case13(const ProblemSpec& spec, const GaussianPulse& pulse, double x, double t);
Pair exact_solution_case13(const PathIntegrals& I, const ProblemSpec& spec, const GaussianPulse& pulse, double x,
                           double t);
/// Number of reflected terms needed up to time T.
int exact_series_terms(const PathIntegrals& I, double T);

}  // namespace sbpsat
