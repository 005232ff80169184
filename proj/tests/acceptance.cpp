// Acceptance checks, one PASS/FAIL line per criterion.
//   acceptance [--criterion k] [--budget seconds]

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "oracles.hpp"
#include "sbpsat/analytic.hpp"
#include "sbpsat/convergence.hpp"
#include "sbpsat/io.hpp"
#include "sbpsat/sbp.hpp"
#include "sbpsat/spectra.hpp"

using namespace sbpsat;
using std::numbers::pi;
using io::fmt;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[fail] " << what << "; ";
    }
  }
  void note(const std::string& s) { detail << s << "; "; }
};

bool near(const SpectrumSet& s, cplx z, double tol) {
  return std::any_of(s.values.begin(), s.values.end(), [&](const Eigenvalue& e) { return std::abs(e.z - z) <= tol; });
}

// 1
Outcome sbp_algebra() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> nd;
  double worst_id = 0, worst_b = 0, worst_i = 0;
  for (int p = 2; p <= 5; ++p)
    for (int N : {32, 128}) {
      const auto op = SbpOperator::build(p, Grid::uniform(N, 2.0));
      const int n = op.points();
      for (int k = 0; k < 100; ++k) {
        std::vector<double> u(n), v(n);
        for (auto& x : u) x = nd(rng);
        for (auto& x : v) x = nd(rng);
        double nu = 0, nv = 0;
        for (int i = 0; i < n; ++i) {
          nu += u[i] * u[i];
          nv += v[i] * v[i];
        }
        worst_id = std::max(worst_id, sbp_identity_residual(op, u, v) / std::sqrt(nu * nv));
      }
      for (int k = 0; k <= p - 1; ++k) worst_b = std::max(worst_b, monomial_error(op, k, true));
      for (int k = 0; k <= 2 * (p - 1); ++k) worst_i = std::max(worst_i, monomial_error(op, k, false));
    }
  o.note("identity residual " + fmt(worst_id) + ", boundary exactness " + fmt(worst_b) + ", interior exactness " +
         fmt(worst_i));
  o.require(worst_id <= 1e-12, "identity above 1e-12");
  o.require(worst_b <= 1e-9 && worst_i <= 1e-9, "polynomial exactness");
  return o;
}

// 2
Outcome convergence_rates() {
  Outcome o;
  StudyOptions opt;
  opt.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  for (CaseId id : all_cases()) {
    const auto rep = convergence_study(id, {2, 3, 4, 5}, {32, 64, 128, 256, 512}, default_final_time(id), opt);
    std::string line = to_string(id) + ":";
    for (int p = 2; p <= 5; ++p) {
      const double r = rep.finest_rate(p);
      line += " " + fmt(std::round(r * 100) / 100);
      o.require(r >= p - 0.4 && r <= p + 0.7, to_string(id) + " p=" + std::to_string(p) + " rate " + fmt(r));
    }
    o.require(rep.ok(), to_string(id) + " has failed rows");
    o.note(line);
  }
  return o;
}

// 3
Outcome analytic_spectra() {
  Outcome o;
  const auto s1 = spectrum_case1(make_case(CaseId::c1a), 10);
  double worst = 0;
  for (int n = -10; n <= 10; ++n) {
    double best = INFINITY;
    for (const auto& e : s1.values) best = std::min(best, std::abs(e.z - cplx(-1.0, 0.6 * pi * n)));
    worst = std::max(worst, best);
  }
  o.require(worst <= 1e-14, "case 1a modes off by " + fmt(worst));
  const auto s3a = spectrum_case3(make_case(CaseId::c3a), 10);
  const auto s3b = spectrum_case3(make_case(CaseId::c3b), 10);
  o.require(!s3a.empty() && !s3b.empty(), "empty case 3 spectra");
  if (!s3a.empty() && !s3b.empty()) {
    const double r3a = s3a.values[0].z.real(), r3b = s3b.values[0].z.real();
    o.note("1a max error " + fmt(worst) + ", Re 3a " + fmt(r3a) + ", Re 3b " + fmt(r3b));
    o.require(std::abs(r3a + 1.40482) <= 1e-4, "Re 3a");
    o.require(std::abs(r3b - 1.49478) <= 1e-4, "Re 3b");
  }
  return o;
}

// 4
Outcome case2_roots() {
  Outcome o;
  const auto a = spectrum_case2(make_case(CaseId::c2a), 30);
  const double im1 = std::sqrt(9 + 0.36 * pi * pi);
  o.require(std::any_of(a.values.begin(), a.values.end(), [](const Eigenvalue& e) { return e.z == cplx(-2.0, 0.0); }),
            "s0 = -2 not exact");
  o.require(near(a, cplx(-2, im1), 1e-12) && near(a, cplx(-2, -im1), 1e-12), "2a s1");
  const auto b = spectrum_case2(make_case(CaseId::c2b), 30);
  o.require(near(b, cplx(4.5, 0), 0.1), "2b s1+ near 4.5");
  o.require(near(b, cplx(1.4, 0), 0.1), "2b s1- near 1.4");
  double worst = 0;
  int count = 0;
  for (CaseId id : {CaseId::c2a, CaseId::c2b}) {
    const auto spec = make_case(id);
    const SearchBox box;
    const auto roots = detA_root_search(spec, box);
    for (const auto& e : (id == CaseId::c2a ? a : b).values) {
      if (!box.contains(e.z)) continue;
      double best = INFINITY;
      for (const auto& r : roots.values) best = std::min(best, std::abs(r.z - e.z));
      worst = std::max(worst, best);
      ++count;
    }
  }
  o.note(std::to_string(count) + " closed-form roots in box, worst root-search distance " + fmt(worst));
  o.require(worst <= 1e-8, "root search misses a closed-form root");
  return o;
}

// 5
Outcome no_spectrum() {
  Outcome o;
  for (CaseId id : {CaseId::c1a, CaseId::c1b, CaseId::c3a, CaseId::c3b})
    for (int end = 0; end < 2; ++end) {
      auto spec = make_case(id);
      (end == 0 ? spec.R0 : spec.RL) = 0.0;
      const auto s = case_family(id) == 1 ? spectrum_case1(spec, 20) : spectrum_case3(spec, 20);
      o.require(s.empty(), to_string(id) + (end == 0 ? " R0=0" : " RL=0") + " closed form not empty");
    }
  for (CaseId id : {CaseId::c1a, CaseId::c1b, CaseId::c2a, CaseId::c2b})
    for (int end = 0; end < 2; ++end) {
      auto spec = make_case(id);
      (end == 0 ? spec.R0 : spec.RL) = 0.0;
      const auto roots = detA_root_search(spec, SearchBox{});
      const std::string tag = to_string(id) + (end == 0 ? " R0=0" : " RL=0");
      if (!roots.empty()) {
        std::string where;
        for (std::size_t k = 0; k < std::min<std::size_t>(roots.size(), 3); ++k)
          where += " " + fmt(roots.values[k].z.real()) + (roots.values[k].z.imag() < 0 ? "" : "+") +
                   fmt(roots.values[k].z.imag()) + "i";
        o.note(tag + ": " + std::to_string(roots.size()) + " roots," + where);
      }
      o.require(roots.empty(), tag + " root search found roots");
    }
  return o;
}

// 6
Outcome exact_oracle() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ux(0.0, 2.0), ut(0.0, 3.0);
  const auto pulse = GaussianPulse::centered(2.0);
  double worst = 0;
  int points = 0;
  for (CaseId id : {CaseId::c1a, CaseId::c1b, CaseId::c3a, CaseId::c3b}) {
    const auto s = make_case(id);
    const auto I = PathIntegrals::from(s);
    oracle::RayTracer tr;
    tr.a = [s](double x) { return s.a(x); };
    tr.d = [s](double x) { return s.d(x); };
    tr.c = [s](double x) { return s.cbar(x); };
    tr.f1 = [](double) { return 0.0; };
    tr.f2 = [pulse](double x) { return pulse(x); };
    tr.L = s.L;
    tr.R0 = s.R0;
    tr.RL = s.RL;
    for (int k = 0; k < 50; ++k) {
      const double x = ux(rng), t = ut(rng);
      const auto e = exact_solution_case13(I, s, pulse, x, t);
      worst = std::max({worst, std::abs(e[0] - tr.w1(x, t)), std::abs(e[1] - tr.w2(x, t))});
      ++points;
    }
  }
  o.note(std::to_string(points) + " points, max difference " + fmt(worst));
  o.require(worst <= 1e-10, "exceeds 1e-10");
  return o;
}

// 7
Outcome simulation() {
  Outcome o;
  const auto spec = make_case(CaseId::c1b);
  std::vector<double> err;
  for (int N : {256, 512, 1024}) err.push_back(convergence_row(spec, Reference::laplace_series, 2, N, 3.0, 1e-10).rel_error);
  const double r1 = std::log2(err[0] / err[1]), r2 = std::log2(err[1] / err[2]);
  o.note("error N=1024 " + fmt(err[2]) + ", rates " + fmt(r1) + " " + fmt(r2));
  o.require(err[2] < 5e-3, "error above 5e-3");
  o.require(std::abs(r1 - 2) <= 0.2 && std::abs(r2 - 2) <= 0.2, "rate not within 0.2 of 2");
  return o;
}

// 8
Outcome spectrum_convergence() {
  Outcome o;
  const auto spec = make_case(CaseId::c1a);
  const auto analytic = spectrum_case1(spec, 20);
  std::vector<double> dist;
  std::string line = "p=2 distances";
  for (int N : {64, 128, 256, 512}) {
    const auto d = discrete_spectrum(spec, 2, N);
    dist.push_back(compare_spectra(d, analytic, 5.0).max_distance);
    line += " " + fmt(dist.back());
    if (N == 64) {
      int right = 0;
      for (cplx z : d.points()) right += z.real() > -1.0;
      o.note("p=2 N=64 values right of -1: " + std::to_string(right));
      o.require(right >= 1, "no witness right of Re = -1");
    }
  }
  o.note(line);
  for (std::size_t k = 1; k < dist.size(); ++k) o.require(dist[k] <= dist[k - 1] + 1e-3, "not monotone");
  const double d4 = compare_spectra(discrete_spectrum(spec, 4, 256), analytic, 5.0).max_distance;
  o.note("p=4 N=256 distance " + fmt(d4));
  o.require(d4 < dist[2], "p=4 not closer than p=2 at N=256");
  return o;
}

// 9
Outcome real_part_bound() {
  Outcome o;
  for (CaseId id : {CaseId::c1a, CaseId::c1b, CaseId::c2a, CaseId::c2b, CaseId::c3a, CaseId::c3b}) {
    const auto s = make_case(id);
    const bool constant = case_family(id) <= 2;
    double bound = -INFINITY;
    for (int k = 0; k <= 200; ++k) {
      const double x = s.L * k / 200.0;
      bound = std::max({bound, s.a(x), s.d(x)});
    }
    bound += constant ? 0.1 : 0.2;
    double mx = -INFINITY;
    for (int p = 2; p <= 5; ++p)
      for (int N : {64, 128, 256}) {
        const double m = max_re_nonreal(discrete_spectrum(s, p, N).points(), 1e-6);
        mx = std::max(mx, m);
        o.require(m <= bound, to_string(id) + " p=" + std::to_string(p) + " N=" + std::to_string(N) + " max Re " + fmt(m));
      }
    o.note(to_string(id) + " max Re " + fmt(mx) + " bound " + fmt(bound));
  }
  return o;
}

// 10
Outcome persistence() {
  Outcome o;
  PersistenceOptions opt;
  opt.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const std::vector<int> Ns{64, 128, 256, 512};
  const auto t4b = persistence_scan(make_case(CaseId::c4b), {2, 3, 4, 5}, Ns, Region{0, 10, -20, 20}, opt);
  std::string found = "4b persistent:";
  for (const auto* c : t4b.persistent()) found += " " + fmt(c->centroid.real()) + (c->centroid.imag() < 0 ? "" : "+") + fmt(c->centroid.imag()) + "i";
  o.note(found);
  for (double re : {2.0, 2.7, 7.5}) {
    bool hit = false;
    for (const auto* c : t4b.persistent()) hit = hit || std::abs(c->centroid.real() - re) <= 0.5;
    o.require(hit, "no persistent 4b cluster near Re " + fmt(re));
  }
  o.require(t4b.failures.empty(), "4b scan failures");

  const auto t4a = persistence_scan(make_case(CaseId::c4a), {2, 3, 4, 5}, Ns, Region{0, 10, -20, 20}, opt);
  o.note("4a persistent clusters: " + std::to_string(t4a.persistent().size()));
  o.require(t4a.persistent().empty(), "4a has persistent clusters");

  const Region left{-3.5, -2.3, 5.5, 7.0};
  const auto t2a = persistence_scan(make_case(CaseId::c2a), {2, 3, 4, 5}, Ns, left, opt);
  int p2_clusters = 0, p2_persistent = 0;
  for (const auto& c : t2a.clusters) {
    const bool has_p2 = std::any_of(c.runs.begin(), c.runs.end(), [](const RunKey& k) { return k.p == 2; });
    p2_clusters += has_p2;
    p2_persistent += has_p2 && c.persistent;
  }
  o.note("2a left box: " + std::to_string(p2_clusters) + " clusters with p=2 members, " + std::to_string(p2_persistent) +
         " persistent");
  o.require(p2_clusters > 0, "no p=2 cluster in the 2a left box");
  o.require(p2_persistent == 0, "2a left cluster classified persistent");
  return o;
}

// 11
Outcome eigensolver() {
  Outcome o;
  double worst_sim = 0, worst_tr = 0;
  bool conj = true;
  for (int k = 0; k < 50; ++k) {
    const int n = 4 * (k + 1);
    const auto sc = oracle::similarity_case(n, 1000 + k);
    Matrix A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = sc.A(i, j);
    const auto ev = eigenvalues_dense(A);
    double scale = 1;
    for (cplx z : sc.eigenvalues) scale = std::max(scale, std::abs(z));
    worst_sim = std::max(worst_sim, oracle::match_distance(ev, sc.eigenvalues) / scale);
    cplx sum = 0;
    for (cplx z : ev) sum += z;
    worst_tr = std::max(worst_tr, std::abs(sum - A.trace()) / (scale * n));
    SpectrumSet s;
    for (cplx z : ev) s.values.push_back({z, std::nullopt});
    conj = conj && s.closed_under_conjugation() && ev.size() == static_cast<std::size_t>(n);
  }
  o.note("sizes 4..200, similarity " + fmt(worst_sim) + ", trace " + fmt(worst_tr));
  o.require(worst_sim <= 1e-8, "planted eigenvalues missed");
  o.require(worst_tr <= 1e-12, "trace");
  o.require(conj, "conjugate pairing");
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
    {"SBP algebra", sbp_algebra},
    {"convergence rates", convergence_rates},
    {"analytic spectra", analytic_spectra},
    {"case 2 roots", case2_roots},
    {"no spectrum with an absorbing end", no_spectrum},
    {"exact solution vs ray tracer", exact_oracle},
    {"simulation vs exact solution", simulation},
    {"spectrum convergence", spectrum_convergence},
    {"real-part bound", real_part_bound},
    {"persistence classification", persistence},
    {"eigensolver self-validation", eigensolver},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  double budget = 0;
  app.add_option("--criterion", only, "run a single criterion (1-11)")->check(CLI::Range(0, 11));
  app.add_option("--budget", budget, "runtime budget in seconds (0: none)");
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && static_cast<int>(k) + 1 != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget > 0 && sec > budget) o.require(false, "runtime " + fmt(sec) + " s over budget " + fmt(budget) + " s");
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << k + 1 << ". " << criteria[k].first << "  (" << fmt(std::round(sec * 100) / 100)
              << " s)  " << o.detail.str() << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
