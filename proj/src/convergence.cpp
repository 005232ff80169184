#include "sbpsat/convergence.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "sbpsat/analytic.hpp"
#include "sbpsat/io.hpp"
#include "sbpsat/semidisc.hpp"

namespace sbpsat {

bool ConvergenceReport::ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const ConvergenceRow& r) { return r.status == "ok"; });
}

double ConvergenceReport::finest_rate(int p) const {
  const ConvergenceRow* best = nullptr;
  for (const auto& r : rows)
    if (r.p == p && (!best || r.N > best->N)) best = &r;
  return best ? best->rate : std::numeric_limits<double>::quiet_NaN();
}

std::string ConvergenceReport::csv() const {
  std::ostringstream os;
  os << "case,p,N,T,rel_error,rate\n";
  for (const auto& r : rows) {
    os << r.case_label << ',' << r.p << ',' << r.N << ',' << io::fmt(r.T) << ',' << io::fmt(r.rel_error) << ',';
    if (!std::isnan(r.rate)) os << io::fmt(r.rate);
    os << '\n';
  }
  return os.str();
}

Reference reference_for(const ProblemSpec& spec) {
  return spec.structure().coupling == Coupling::diagonal ? Reference::laplace_series : Reference::manufactured;
}

double default_final_time(CaseId id) { return case_family(id) == 1 ? 3.0 : 0.1; }

namespace {

struct Setup {
  SbpOperator op;
  Semidiscretization semi;
  StateVector W0, Wref;
};

Setup setup_row(const ProblemSpec& spec, Reference ref, int p, int N, double T, double sigma) {
  auto op = SbpOperator::build(p, Grid::uniform(N, spec.L));
  const Grid& g = op.grid();
  StateVector W0, Wref;
  ProblemSpec s = spec;
  if (ref == Reference::laplace_series) {
    s.data = {};
    const auto pulse = GaussianPulse::centered(spec.L, sigma);
    const auto I = PathIntegrals::from(s);
    W0 = gaussian_initial_data(g, pulse);
    Wref = sample(g, [&](double x) { return exact_solution_case13(I, s, pulse, x, T); }, T);
  } else {
    s = with_manufactured_data(spec);
    const auto m = manufactured_data(spec);
    W0 = sample(g, [&](double x) { return m.exact(x, 0.0); }, 0.0);
    Wref = sample(g, [&](double x) { return m.exact(x, T); }, T);
  }
  auto semi = Semidiscretization::assemble(s, op);
  return {std::move(op), std::move(semi), std::move(W0), std::move(Wref)};
}

StateVector run(const Setup& st, double T, double tol, IntegrationStats* stats) {
  IntegratorConfig cfg;
  cfg.abs_tol = cfg.rel_tol = tol;
  return integrate(st.semi, st.W0, T, cfg, stats);
}

}  // namespace

RowResult convergence_row(const ProblemSpec& spec, Reference ref, int p, int N, double T, double tol, double sigma) {
  const auto st = setup_row(spec, ref, p, N, T, sigma);
  RowResult out;
  out.tol = tol;
  out.rel_error = error_norms(run(st, T, tol, &out.stats), st.Wref, st.op).relative;
  return out;
}

RowResult convergence_row_verified(const ProblemSpec& spec, Reference ref, int p, int N, double T, double tol,
                                   const StudyOptions& opt) {
  const auto st = setup_row(spec, ref, p, N, T, opt.sigma);
  const double ref_norm = norm_H(st.op, st.Wref);
  for (;;) {
    const double fine = std::max(tol / 10.0, opt.tol_floor);
    const auto W1 = run(st, T, tol, nullptr);
    RowResult out;
    out.tol = fine;
    const auto W2 = run(st, T, fine, &out.stats);
    out.rel_error = error_norms(W2, st.Wref, st.op).relative;
    out.temporal_estimate = error_norms(W1, W2, st.op).absolute / ref_norm;
    if (out.temporal_estimate <= opt.temporal_fraction * out.rel_error || fine <= opt.tol_floor) return out;
    tol = std::max(tol / 100.0, opt.tol_floor);
  }
}

ConvergenceReport convergence_study(const ProblemSpec& spec, const std::vector<int>& p_list,
                                    const std::vector<int>& N_list, double T, const StudyOptions& opt) {
  if (p_list.empty() || N_list.empty()) throw std::invalid_argument("convergence_study: empty p or N list");
  if (!(T > 0.0)) throw std::invalid_argument("convergence_study: final time must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<int> Ns = N_list;
  std::sort(Ns.begin(), Ns.end());
  Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());

  ConvergenceReport rep;
  rep.reference = reference_for(spec);
  rep.tolerance_policy = opt.tol ? "fixed tol = " + io::fmt(*opt.tol)
                                 : "per row: start at margin * (pilot error scaled by (N0/N)^p), compare tol and tol/10, "
                                   "tighten by 100 until the difference is within temporal_fraction of the error";
  const int jobs = std::max(1, opt.jobs);

  // Pilot at the coarsest grid predicts E(N) ~ E0 (N0 / N)^p for the tolerance choice.
  std::vector<double> pilot(p_list.size(), std::numeric_limits<double>::quiet_NaN());
  if (!opt.tol) {
    const auto np = static_cast<std::ptrdiff_t>(p_list.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (std::ptrdiff_t i = 0; i < np; ++i) {
      try {
        pilot[i] = convergence_row(spec, rep.reference, p_list[i], Ns.front(), T, opt.pilot_tol, opt.sigma).rel_error;
      } catch (const std::exception&) {
      }
    }
  }

  for (std::size_t i = 0; i < p_list.size(); ++i)
    for (int N : Ns) {
      ConvergenceRow r;
      r.case_label = spec.label;
      r.p = p_list[i];
      r.N = N;
      r.T = T;
      if (opt.tol) {
        r.tol = *opt.tol;
      } else if (std::isfinite(pilot[i])) {
        const double predicted = pilot[i] * std::pow(double(Ns.front()) / N, p_list[i]);
        r.tol = std::clamp(opt.margin * predicted, opt.tol_floor * 10.0, opt.tol_ceiling);
      } else {
        r.tol = opt.tol_floor * 10.0;
      }
      rep.rows.push_back(r);
    }

  const auto nr = static_cast<std::ptrdiff_t>(rep.rows.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::ptrdiff_t i = 0; i < nr; ++i) {
    auto& r = rep.rows[i];
    try {
      const auto res = opt.tol ? convergence_row(spec, rep.reference, r.p, r.N, T, r.tol, opt.sigma)
                               : convergence_row_verified(spec, rep.reference, r.p, r.N, T, r.tol, opt);
      r.rel_error = res.rel_error;
      r.tol = res.tol;
      r.temporal_estimate = res.temporal_estimate;
      r.stats = res.stats;
    } catch (const std::exception& e) {
      r.status = e.what();
    }
  }

  std::map<int, const ConvergenceRow*> prev;
  for (auto& r : rep.rows) {
    auto it = prev.find(r.p);
    if (it != prev.end() && r.status == "ok" && it->second->status == "ok")
      r.rate = std::log(it->second->rel_error / r.rel_error) / std::log(double(r.N) / it->second->N);
    prev[r.p] = &r;
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

ConvergenceReport convergence_study(CaseId id, const std::vector<int>& p_list, const std::vector<int>& N_list,
                                    double T, const StudyOptions& opt) {
  return convergence_study(make_case(id), p_list, N_list, T, opt);
}

}  // namespace sbpsat
