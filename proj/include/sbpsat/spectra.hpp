#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbpsat/analytic.hpp"
#include "sbpsat/dense.hpp"
#include "sbpsat/kernels.hpp"
#include "sbpsat/problem.hpp"

namespace sbpsat {

/// QR iteration failed to deflate an active block.
class EigenNonConvergence : public std::runtime_error {
 public:
  EigenNonConvergence(std::size_t lo, std::size_t hi, int iterations);
  std::size_t block_lo, block_hi;
};

struct EigenOptions {
  bool balance = true;
  int max_iterations_per_eigenvalue = 60;
  Exec exec = Exec::serial;
};

/// All eigenvalues of a real square matrix: balancing, Householder Hessenberg reduction
/// and Francis double-shift QR.  Complex eigenvalues come out as exact conjugate pairs.
std::vector<cplx> eigenvalues_dense(Matrix A, const EigenOptions& opt = {});

/// Reduction to upper Hessenberg form in place (exposed for testing and benchmarks).
void hessenberg_reduce(Matrix& A, Exec exec = Exec::serial);
/// Eigenvalues of an upper Hessenberg matrix; destroys A.
std::vector<cplx> hessenberg_eigenvalues(Matrix& A, int max_iterations_per_eigenvalue = 60);

/// Eigenvalues of D_h for the given problem, tagged discrete(p, N).
SpectrumSet discrete_spectrum(const ProblemSpec& spec, int p, int N, const EigenOptions& opt = {});
SpectrumSet discrete_spectrum(CaseId id, int p, int N, const EigenOptions& opt = {});

struct MatchedValue {
  cplx analytic;
  cplx nearest;
  double distance;
};

struct SpectrumComparison {
  std::vector<MatchedValue> matches;  // analytic values with |Im| <= cutoff
  double max_distance = 0.0;
  double mean_distance = 0.0;
  double threshold = 0.0;             // real-part line used for right_of_line
  int right_of_line = 0;              // discrete values with Re > threshold
  std::vector<cplx> right_of_line_values;
  double max_re_nonreal = -INFINITY;  // over discrete values with |Im| > eps
};

/// Nearest-neighbour matching of analytic values with |Im| <= im_cutoff.  The real-part line
/// defaults to the largest real part of the matched analytic values.
SpectrumComparison compare_spectra(const SpectrumSet& discrete, const SpectrumSet& analytic, double im_cutoff,
                                   std::optional<double> threshold = std::nullopt, double eps = 1e-6);

/// Default matching cutoff: 5 pi cbar_max / L.
double default_im_cutoff(const ProblemSpec& spec);

/// Largest real part among values with |Im| > eps.
double max_re_nonreal(const std::vector<cplx>& z, double eps = 1e-6);

struct Region {
  double re_min = 0.0, re_max = 10.0;
  double im_min = -20.0, im_max = 20.0;
  bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

struct RunKey {
  int p = 0;
  int N = 0;
  bool operator==(const RunKey&) const = default;
};

struct Cluster {
  cplx centroid;
  std::vector<std::pair<RunKey, cplx>> members;
  std::vector<RunKey> runs;  // distinct runs contributing
  bool persistent = false;
};

struct PersistenceTable {
  std::string case_label;
  Region region;
  double radius = 0.25;
  int N_threshold = 0;
  std::vector<RunKey> sweep;
  std::vector<Cluster> clusters;
  std::vector<std::pair<RunKey, std::string>> failures;

  std::vector<const Cluster*> persistent() const;
};

struct PersistenceOptions {
  double radius = 0.25;
  int N_threshold = 0;  // 0 means the smallest N of the sweep
  int jobs = 1;
  EigenOptions eigen;
};

/// Single-linkage clustering of in-region eigenvalues across a (p, N) sweep.  A cluster is
/// persistent iff every run with N >= N_threshold contributes a member.
PersistenceTable persistence_scan(const ProblemSpec& spec, const std::vector<int>& p_list,
                                  const std::vector<int>& N_list, const Region& region,
                                  const PersistenceOptions& opt = {});
/// Same, from precomputed spectra keyed by run.
PersistenceTable persistence_from_spectra(const std::vector<std::pair<RunKey, std::vector<cplx>>>& spectra,
                                          const Region& region, double radius, int N_threshold);

}  // namespace sbpsat
