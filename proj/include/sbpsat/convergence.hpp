#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sbpsat/integrate.hpp"
#include "sbpsat/problem.hpp"

namespace sbpsat {

/// Reference solution used to measure the error of a row.
enum class Reference { laplace_series, manufactured };

struct ConvergenceRow {
  std::string case_label;
  int p = 0;
  int N = 0;
  double T = 0.0;
  double rel_error = std::numeric_limits<double>::quiet_NaN();
  double rate = std::numeric_limits<double>::quiet_NaN();  // against the previous N at this p
  double tol = 0.0;
  double temporal_estimate = std::numeric_limits<double>::quiet_NaN();  // ||W(tol) - W(tol/10)||_H / ||Wref||_H
  std::string status = "ok";
  IntegrationStats stats;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  Reference reference = Reference::manufactured;
  std::string scheme = "dopri5(4) PI control, abs_tol = rel_tol = tol";
  std::string tolerance_policy;
  double wall_seconds = 0.0;

  bool ok() const;
  /// Rate on the finest pair for order p (NaN when unavailable).
  double finest_rate(int p) const;
  /// Header case,p,N,T,rel_error,rate; rate empty on the first row of each p.
  std::string csv() const;
};

struct StudyOptions {
  int jobs = 1;
  std::optional<double> tol;  // fixed tolerance; otherwise chosen and verified per row
  double pilot_tol = 1e-12;
  double margin = 1e-3;  // starting tolerance = margin * predicted spatial error
  double temporal_fraction = 1e-2;  // accepted ||W(tol) - W(tol/10)|| relative to the spatial error
  double tol_floor = 1e-13;
  double tol_ceiling = 1e-6;
  double sigma = 0.2;
};

/// Gaussian data with the Laplace series for diagonal B, manufactured solution otherwise.
Reference reference_for(const ProblemSpec& spec);

struct RowResult {
  double rel_error = 0.0;
  double tol = 0.0;
  double temporal_estimate = std::numeric_limits<double>::quiet_NaN();
  IntegrationStats stats;
};

/// One (p, N) integration against the reference at time T.
RowResult convergence_row(const ProblemSpec& spec, Reference ref, int p, int N, double T, double tol,
                          double sigma = 0.2);
/// Repeats the row at tol and tol/10, tightening by 100 until the difference is at most
/// temporal_fraction of the measured error (or the floor is reached).
RowResult convergence_row_verified(const ProblemSpec& spec, Reference ref, int p, int N, double T, double tol,
                                   const StudyOptions& opt);

ConvergenceReport convergence_study(const ProblemSpec& spec, const std::vector<int>& p_list,
                                    const std::vector<int>& N_list, double T, const StudyOptions& opt = {});
ConvergenceReport convergence_study(CaseId id, const std::vector<int>& p_list, const std::vector<int>& N_list,
                                    double T, const StudyOptions& opt = {});

/// Default final time: 3 for family 1, 0.1 otherwise.
double default_final_time(CaseId id);

}  // namespace sbpsat
