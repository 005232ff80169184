#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbpsat/analytic.hpp"
#include "sbpsat/convergence.hpp"
#include "sbpsat/integrate.hpp"
#include "sbpsat/io.hpp"
#include "sbpsat/problem.hpp"
#include "sbpsat/sbp.hpp"
#include "sbpsat/semidisc.hpp"
#include "sbpsat/spectra.hpp"

namespace sbpsat::cli {

using json = nlohmann::ordered_json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int to_int(const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw UsageError("not an integer: '" + s + "'");
  return v;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw UsageError("not a number: '" + s + "'");
  return v;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_same_v<T, double>) s += io::fmt(v[i]);
    else if constexpr (std::is_same_v<T, std::string>) s += v[i];
    else s += std::to_string(v[i]);
  }
  return s;
}

std::string join4(const std::array<double, 4>& a) { return join(std::vector<double>(a.begin(), a.end())); }

std::array<double, 4> parse_box(const std::string& text, const char* what) {
  const auto v = parse_double_list(text);
  if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3]))
    throw UsageError(std::string(what) + " expects re_min,re_max,im_min,im_max with min < max");
  return {v[0], v[1], v[2], v[3]};
}

CaseId case_of(const std::string& name) {
  try {
    return parse_case(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

ProblemSpec resolve_spec(const RunConfig& cfg, const std::string& name) {
  ProblemSpec spec = make_case(case_of(name));
  if (cfg.R0) spec.R0 = *cfg.R0;
  if (cfg.RL) spec.RL = *cfg.RL;
  if (cfg.zero_b) spec.a = spec.b = spec.c = spec.d = 0.0;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

/// The argument vector that reproduces cfg with every default spelled out.
std::vector<std::string> resolved_argv(const RunConfig& cfg) {
  std::vector<std::string> a{cfg.command};
  auto add = [&](const std::string& flag, const std::string& value) {
    a.push_back(flag);
    a.push_back(value);
  };
  if (!cfg.cases.empty()) add("--case", join(cfg.cases));
  add("--p", join(cfg.p));
  add("--N", join(cfg.N));
  if (cfg.T) add("--T", io::fmt(*cfg.T));
  if (cfg.tol) add("--tol", io::fmt(*cfg.tol));
  add("--jobs", std::to_string(cfg.jobs));
  add("--out", cfg.out);
  add("--seed", std::to_string(cfg.seed));
  if (cfg.R0) add("--R0", io::fmt(*cfg.R0));
  if (cfg.RL) add("--RL", io::fmt(*cfg.RL));
  if (cfg.command == "simulate") {
    add("--snapshots", join(cfg.snapshots));
    add("--sigma", io::fmt(cfg.sigma));
    if (cfg.zero_b) a.push_back("--zero-B");
  }
  if (cfg.command == "converge") {
    add("--sigma", io::fmt(cfg.sigma));
    if (cfg.zero_b) a.push_back("--zero-B");
  }
  if (cfg.command == "spectrum") {
    add("--region", join4(cfg.region));
    add("--view", join4(cfg.view));
    add("--radius", io::fmt(cfg.radius));
    add("--N-threshold", std::to_string(cfg.N_threshold));
    if (cfg.export_matrix) a.push_back("--export-matrix");
    if (cfg.zero_b) a.push_back("--zero-B");
  }
  return a;
}

json config_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["cases"] = cfg.cases;
  j["p"] = cfg.p;
  j["N"] = cfg.N;
  j["T"] = cfg.T ? json(*cfg.T) : json("per-case default");
  j["tol"] = cfg.tol ? json(*cfg.tol) : json("automatic");
  j["jobs"] = cfg.jobs;
  j["out"] = cfg.out;
  j["seed"] = cfg.seed;
  j["R0"] = cfg.R0 ? json(*cfg.R0) : json("case default");
  j["RL"] = cfg.RL ? json(*cfg.RL) : json("case default");
  j["zero_B"] = cfg.zero_b;
  if (cfg.command == "simulate") {
    j["snapshots"] = cfg.snapshots;
    j["sigma"] = cfg.sigma;
  }
  if (cfg.command == "spectrum") {
    j["region"] = cfg.region;
    j["view"] = cfg.view;
    j["radius"] = cfg.radius;
    j["N_threshold"] = cfg.N_threshold;
    j["export_matrix"] = cfg.export_matrix;
  }
  return j;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out) / name).string();
}

void write_manifest(const RunConfig& cfg, json body) {
  json j;
  j["config"] = config_json(cfg);
  j["argv"] = resolved_argv(cfg);
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  io::write_atomic(out_path(cfg, "manifest_" + cfg.command + ".json"), j.dump(2) + "\n");
}

json stats_json(const IntegrationStats& s) {
  return {{"accepted", s.accepted}, {"rejected", s.rejected}, {"rhs_evaluations", s.rhs_evaluations}};
}

std::string convergence_svg(const ConvergenceReport& rep, const std::string& label) {
  io::PlotSpec plot;
  plot.title = "relative error vs N, case " + label;
  plot.xlabel = "N";
  plot.ylabel = "relative H-norm error";
  plot.logx = plot.logy = true;
  std::map<int, std::vector<const ConvergenceRow*>> by_p;
  for (const auto& r : rep.rows)
    if (r.status == "ok") by_p[r.p].push_back(&r);
  std::size_t k = 0;
  for (const auto& [p, rows] : by_p) {
    io::Series s;
    s.label = "p=" + std::to_string(p);
    s.color = io::palette(k);
    io::Series ref;
    ref.label = "N^-" + std::to_string(p);
    ref.color = io::palette(k);
    ref.markers = false;
    ref.dashed = true;
    const auto* last = rows.back();
    for (const auto* r : rows) {
      s.x.push_back(r->N);
      s.y.push_back(r->rel_error);
      ref.x.push_back(r->N);
      ref.y.push_back(last->rel_error * std::pow(double(last->N) / r->N, p));
    }
    plot.series.push_back(std::move(s));
    plot.series.push_back(std::move(ref));
    ++k;
  }
  return io::svg_plot(plot);
}

std::optional<SpectrumSet> analytic_for(const ProblemSpec& spec, const std::array<double, 4>& view) {
  constexpr int n_max = 40;
  switch (spec.structure().family()) {
    case 1: return spectrum_case1(spec, n_max);
    case 3: return spectrum_case3(spec, n_max);
    case 2:
      if (spec.R0 == spec.RL && std::abs(spec.R0) == 1.0) return spectrum_case2(spec, n_max);
      return detA_root_search(spec, SearchBox{view[0], view[1], view[2], view[3]});
    default: return std::nullopt;
  }
}

std::string comparison_csv_row(const RunKey& k, const std::optional<SpectrumComparison>& c, double mrn) {
  std::ostringstream os;
  os << k.p << ',' << k.N << ',';
  if (c) {
    os << io::fmt(c->max_distance) << ',' << io::fmt(c->mean_distance) << ',' << io::fmt(c->threshold) << ','
       << c->right_of_line;
  } else {
    os << ",,,";
  }
  os << ',' << io::fmt(mrn) << '\n';
  return os.str();
}

std::string persistence_csv(const PersistenceTable& t) {
  std::ostringstream os;
  os << "cluster,re,im,members,runs,persistent,run_list\n";
  for (std::size_t i = 0; i < t.clusters.size(); ++i) {
    const auto& c = t.clusters[i];
    std::string runs;
    for (const auto& r : c.runs) runs += (runs.empty() ? "" : ";") + ("p" + std::to_string(r.p) + "N" + std::to_string(r.N));
    os << i << ',' << io::fmt(c.centroid.real()) << ',' << io::fmt(c.centroid.imag()) << ',' << c.members.size() << ','
       << c.runs.size() << ',' << (c.persistent ? 1 : 0) << ',' << runs << '\n';
  }
  return os.str();
}

std::vector<double> default_snapshots(double T) {
  std::vector<double> s;
  for (int i = 0; i <= 6; ++i) s.push_back(i == 6 ? T : T * i / 6.0);
  return s;
}

}  // namespace

std::vector<int> parse_N_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(item));
      continue;
    }
    const int a = to_int(item.substr(0, dots));
    const int b = to_int(item.substr(dots + 2));
    if (a <= 0 || b < a) throw UsageError("bad range '" + item + "': need 0 < a <= b");
    for (long v = a; v <= b; v *= 2) out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw UsageError("empty N list");
  for (int n : out)
    if (n <= 0) throw UsageError("N must be positive");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) out.push_back(to_int(item));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(item));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

int converge(const RunConfig& cfg, std::ostream& out) {
  json rows = json::array();
  json outputs = json::array();
  json policies = json::object();
  bool all_ok = true;
  for (const auto& name : cfg.cases) {
    ProblemSpec spec = resolve_spec(cfg, name);
    spec.label = name;
    const double T = cfg.T ? *cfg.T : default_final_time(case_of(name));
    StudyOptions opt;
    opt.jobs = cfg.jobs;
    opt.tol = cfg.tol;
    opt.sigma = cfg.sigma;
    const auto rep = convergence_study(spec, cfg.p, cfg.N, T, opt);
    io::write_atomic(out_path(cfg, "converge_" + name + ".csv"), rep.csv());
    io::write_atomic(out_path(cfg, "converge_" + name + ".svg"), convergence_svg(rep, name));
    outputs.push_back("converge_" + name + ".csv");
    outputs.push_back("converge_" + name + ".svg");
    policies[name] = {{"scheme", rep.scheme},
                      {"tolerance_policy", rep.tolerance_policy},
                      {"reference", rep.reference == Reference::laplace_series ? "laplace series" : "manufactured"},
                      {"T", T}};
    for (const auto& r : rep.rows) {
      rows.push_back({{"case", name},
                      {"p", r.p},
                      {"N", r.N},
                      {"tol", r.tol},
                      {"temporal_estimate", std::isfinite(r.temporal_estimate) ? json(r.temporal_estimate) : json()},
                      {"status", r.status},
                      {"stats", stats_json(r.stats)}});
      if (r.status != "ok") out << "case " << name << " p=" << r.p << " N=" << r.N << " failed: " << r.status << '\n';
    }
    all_ok = all_ok && rep.ok();
    for (int p : cfg.p)
      out << "case " << name << " p=" << p << " finest rate " << io::fmt(rep.finest_rate(p)) << '\n';
    out << "case " << name << " wall " << io::fmt(std::round(rep.wall_seconds * 100) / 100) << " s\n";
  }
  write_manifest(cfg, {{"integrator", policies}, {"outputs", outputs}, {"rows", rows}, {"ok", all_ok}});
  return all_ok ? 0 : 1;
}

int spectrum(const RunConfig& cfg, std::ostream& out) {
  json rows = json::array();
  json outputs = json::array();
  json notes = json::object();
  bool all_ok = true;
  for (const auto& name : cfg.cases) {
    ProblemSpec spec = resolve_spec(cfg, name);
    spec.label = name;
    std::vector<RunKey> keys;
    for (int p : cfg.p)
      for (int N : cfg.N) keys.push_back({p, N});
    std::vector<SpectrumSet> sets(keys.size());
    std::vector<std::string> status(keys.size(), "ok");
    std::vector<std::string> matrices(keys.size());
    const auto nk = static_cast<std::ptrdiff_t>(keys.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, cfg.jobs))
    for (std::ptrdiff_t i = 0; i < nk; ++i) {
      try {
        sets[i] = discrete_spectrum(spec, keys[i].p, keys[i].N);
        if (cfg.export_matrix) {
          const auto op = SbpOperator::build(keys[i].p, Grid::uniform(keys[i].N, spec.L));
          matrices[i] = io::matrix_csv(Semidiscretization::assemble(spec, op).system_matrix());
        }
      } catch (const std::exception& e) {
        status[i] = "p=" + std::to_string(keys[i].p) + " N=" + std::to_string(keys[i].N) + ": " + e.what();
      }
    }

    const auto analytic = analytic_for(spec, cfg.view);
    json case_notes = json::array();
    if (!analytic) case_notes.push_back("no analytic spectrum for this coefficient family; overlay skipped");
    else {
      for (const auto& n : analytic->notes) case_notes.push_back(n);
      if (analytic->empty()) case_notes.push_back("analytic spectrum is empty (R0 RL = 0)");
      io::write_atomic(out_path(cfg, "spectrum_" + name + "_analytic.csv"), io::spectrum_csv(*analytic));
      outputs.push_back("spectrum_" + name + "_analytic.csv");
    }
    const bool compare = analytic && !analytic->empty();
    const double cutoff = default_im_cutoff(spec);

    std::string comparison = "p,N,max_distance,mean_distance,threshold,right_of_line,max_re_nonreal\n";
    std::vector<std::pair<RunKey, std::vector<cplx>>> good;
    io::PlotSpec plot;
    plot.title = "spectrum, case " + name;
    plot.xlabel = "Re(s)";
    plot.ylabel = "Im(s)";
    plot.xlim = std::pair{cfg.view[0], cfg.view[1]};
    plot.ylim = std::pair{cfg.view[2], cfg.view[3]};
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const auto& k = keys[i];
      json row{{"case", name}, {"p", k.p}, {"N", k.N}, {"status", status[i]}};
      if (status[i] != "ok") {
        all_ok = false;
        out << "case " << name << " failed: " << status[i] << '\n';
        rows.push_back(row);
        continue;
      }
      const std::string stem = name + "_p" + std::to_string(k.p) + "_N" + std::to_string(k.N);
      io::write_atomic(out_path(cfg, "spectrum_" + stem + ".csv"), io::spectrum_csv(sets[i]));
      outputs.push_back("spectrum_" + stem + ".csv");
      if (cfg.export_matrix) {
        io::write_atomic(out_path(cfg, "matrix_" + stem + ".csv"), matrices[i]);
        outputs.push_back("matrix_" + stem + ".csv");
      }
      const auto pts = sets[i].points();
      std::optional<SpectrumComparison> cmp;
      if (compare) cmp = compare_spectra(sets[i], *analytic, cutoff);
      comparison += comparison_csv_row(k, cmp, max_re_nonreal(pts));
      good.emplace_back(k, pts);

      io::Series s;
      s.label = "p=" + std::to_string(k.p) + " N=" + std::to_string(k.N);
      s.color = io::palette(i);
      s.line = false;
      s.marker_size = 2.5;
      for (const auto& z : pts) {
        s.x.push_back(z.real());
        s.y.push_back(z.imag());
      }
      plot.series.push_back(std::move(s));
      rows.push_back(row);
    }
    if (compare) {
      io::Series s;
      s.label = "analytic";
      s.color = "#000000";
      s.line = false;
      s.crosses = true;
      s.marker_size = 4;
      for (const auto& e : analytic->values) {
        s.x.push_back(e.z.real());
        s.y.push_back(e.z.imag());
      }
      plot.series.push_back(std::move(s));
    }
    io::write_atomic(out_path(cfg, "spectrum_" + name + ".svg"), io::svg_plot(plot));
    io::write_atomic(out_path(cfg, "comparison_" + name + ".csv"), comparison);
    outputs.push_back("spectrum_" + name + ".svg");
    outputs.push_back("comparison_" + name + ".csv");

    Region region{cfg.region[0], cfg.region[1], cfg.region[2], cfg.region[3]};
    const auto table = persistence_from_spectra(good, region, cfg.radius, cfg.N_threshold);
    io::write_atomic(out_path(cfg, "persistence_" + name + ".csv"), persistence_csv(table));
    outputs.push_back("persistence_" + name + ".csv");
    for (const auto* c : table.persistent())
      out << "case " << name << " persistent cluster at " << io::fmt(c->centroid.real()) << (c->centroid.imag() < 0 ? "" : "+")
          << io::fmt(c->centroid.imag()) << "i\n";
    out << "case " << name << ": " << table.persistent().size() << " persistent of " << table.clusters.size()
        << " clusters in region\n";
    notes[name] = case_notes;
  }
  write_manifest(cfg, {{"notes", notes}, {"outputs", outputs}, {"rows", rows}, {"ok", all_ok}});
  return all_ok ? 0 : 1;
}

int simulate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.p.size() != 1 || cfg.N.size() != 1) throw UsageError("simulate takes a single --p and a single --N");
  json rows = json::array();
  json outputs = json::array();
  bool all_ok = true;
  for (const auto& name : cfg.cases) {
    const ProblemSpec base = resolve_spec(cfg, name);
    const double T = cfg.T ? *cfg.T : default_final_time(case_of(name));
    auto snaps = cfg.snapshots.empty() ? default_snapshots(T) : cfg.snapshots;
    std::sort(snaps.begin(), snaps.end());
    snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
    for (double t : snaps)
      if (t < 0 || t > T) throw UsageError("snapshot time " + io::fmt(t) + " outside [0, T=" + io::fmt(T) + "]");

    const auto op = SbpOperator::build(cfg.p[0], Grid::uniform(cfg.N[0], base.L));
    const Grid& g = op.grid();
    ProblemSpec spec = base;
    std::function<Pair(double, double)> exact;
    std::string reference;
    StateVector W;
    if (reference_for(base) == Reference::laplace_series) {
      spec.data = {};
      const auto pulse = GaussianPulse::centered(spec.L, cfg.sigma);
      const auto I = PathIntegrals::from(spec);
      exact = [I, spec, pulse](double x, double t) { return exact_solution_case13(I, spec, pulse, x, t); };
      W = gaussian_initial_data(g, pulse);
      reference = "laplace series, gaussian pulse";
    } else {
      spec = with_manufactured_data(base);
      exact = manufactured_data(base).exact;
      W = sample(g, [&](double x) { return exact(x, 0.0); }, 0.0);
      reference = "manufactured solution";
    }
    const auto semi = Semidiscretization::assemble(spec, op);
    IntegratorConfig icfg;
    icfg.abs_tol = icfg.rel_tol = cfg.tol.value_or(1e-10);

    std::vector<std::pair<double, double>> energy;
    auto observer = [&](double t, std::span<const double> y) {
      if (!energy.empty() && energy.back().first == t) return;
      StateVector s(g.points(), t);
      std::copy(y.begin(), y.end(), s.values.begin());
      energy.emplace_back(t, semi.energy(s));
    };

    std::vector<io::PlotSpec> panels;
    std::string status = "ok";
    IntegrationStats stats;
    try {
      for (double ts : snaps) {
        if (ts > W.t) W = integrate(semi, W, ts, icfg, &stats, observer);
        else observer(W.t, W.values);
        std::ostringstream csv;
        csv << "x,w1,w2,w1_exact,w2_exact\n";
        io::PlotSpec panel;
        panel.title = "t = " + io::fmt(ts);
        panel.xlabel = "x";
        panel.ylabel = "w";
        io::Series n1{"w1", {}, {}, io::palette(0)}, n2{"w2", {}, {}, io::palette(1)};
        io::Series e1{"w1 exact", {}, {}, io::palette(2)}, e2{"w2 exact", {}, {}, io::palette(3)};
        for (auto* s : {&n1, &n2, &e1, &e2}) s->markers = false;
        e1.dashed = e2.dashed = true;
        for (int i = 0; i < g.points(); ++i) {
          const double x = g.x[i];
          const auto ex = exact(x, ts);
          csv << io::fmt(x) << ',' << io::fmt(W.w1()[i]) << ',' << io::fmt(W.w2()[i]) << ',' << io::fmt(ex[0]) << ','
              << io::fmt(ex[1]) << '\n';
          for (auto* s : {&n1, &n2, &e1, &e2}) s->x.push_back(x);
          n1.y.push_back(W.w1()[i]);
          n2.y.push_back(W.w2()[i]);
          e1.y.push_back(ex[0]);
          e2.y.push_back(ex[1]);
        }
        panel.series = {n1, n2, e1, e2};
        panels.push_back(std::move(panel));
        const std::string file = "snap_" + name + "_t" + io::fmt(ts) + ".csv";
        io::write_atomic(out_path(cfg, file), csv.str());
        outputs.push_back(file);
      }
      if (W.t < T) W = integrate(semi, W, T, icfg, &stats, observer);
    } catch (const std::exception& e) {
      status = e.what();
      all_ok = false;
      out << "case " << name << " failed: " << status << '\n';
    }

    std::ostringstream ecsv;
    ecsv << "t,E_h\n";
    io::PlotSpec ep;
    ep.title = "discrete energy";
    ep.xlabel = "t";
    ep.ylabel = "E_h";
    io::Series es{"E_h", {}, {}, io::palette(4)};
    es.markers = false;
    for (const auto& [t, e] : energy) {
      ecsv << io::fmt(t) << ',' << io::fmt(e) << '\n';
      es.x.push_back(t);
      es.y.push_back(e);
    }
    ep.series = {es};
    panels.push_back(std::move(ep));
    io::write_atomic(out_path(cfg, "energy_" + name + ".csv"), ecsv.str());
    io::write_atomic(out_path(cfg, "simulate_" + name + ".svg"), io::svg_panels(panels, 2));
    outputs.push_back("energy_" + name + ".csv");
    outputs.push_back("simulate_" + name + ".svg");

    json row{{"case", name}, {"p", cfg.p[0]}, {"N", cfg.N[0]}, {"T", T}, {"reference", reference},
             {"status", status}, {"stats", stats_json(stats)}};
    if (status == "ok") {
      StateVector ref = sample(g, [&](double x) { return exact(x, T); }, T);
      out << "case " << name << " p=" << cfg.p[0] << " N=" << cfg.N[0] << " T=" << io::fmt(T);
      if (norm_H(op, ref) > 0) {
        const auto err = error_norms(W, ref, op);
        row["rel_error"] = err.relative;
        out << " relative error " << io::fmt(err.relative) << '\n';
      } else {
        // exact solution has left the domain
        StateVector diff = W;
        for (std::size_t i = 0; i < diff.size(); ++i) diff.values[i] -= ref.values[i];
        row["abs_error"] = norm_H(op, diff);
        out << " absolute error " << io::fmt(norm_H(op, diff)) << " (exact solution is zero)\n";
      }
    }
    rows.push_back(row);
  }
  write_manifest(cfg, {{"outputs", outputs}, {"rows", rows}, {"ok", all_ok}});
  return all_ok ? 0 : 1;
}

int check(const RunConfig& cfg, std::ostream& out) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> nd;
  std::ostringstream csv;
  csv << "p,N,identity_residual,boundary_monomial_error,interior_monomial_error\n";
  bool ok = true;
  json rows = json::array();
  for (int p : cfg.p)
    for (int N : cfg.N) {
      SbpOperator op;
      try {
        op = SbpOperator::build(p, Grid::uniform(N, 1.0));
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const int n = op.points();
      double id = 0.0;
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> u(n), v(n);
        for (auto& x : u) x = nd(rng);
        for (auto& x : v) x = nd(rng);
        double nu = 0, nv = 0;
        for (int i = 0; i < n; ++i) {
          nu += u[i] * u[i];
          nv += v[i] * v[i];
        }
        id = std::max(id, sbp_identity_residual(op, u, v) / std::sqrt(nu * nv));
      }
      double eb = 0.0, ei = 0.0;
      for (int k = 0; k <= op.boundary_order(); ++k) eb = std::max(eb, monomial_error(op, k, true));
      for (int k = 0; k <= op.interior_order(); ++k) ei = std::max(ei, monomial_error(op, k, false));
      const bool row_ok = id <= 1e-12 && eb <= 1e-9 && ei <= 1e-9;
      ok = ok && row_ok;
      csv << p << ',' << N << ',' << io::fmt(id) << ',' << io::fmt(eb) << ',' << io::fmt(ei) << '\n';
      rows.push_back({{"p", p}, {"N", N}, {"status", row_ok ? "ok" : "failed"}});
      out << "p=" << p << " N=" << N << " identity " << io::fmt(id) << " exactness " << io::fmt(std::max(eb, ei))
          << (row_ok ? "" : "  FAILED") << '\n';
    }
  io::write_atomic(out_path(cfg, "check_sbp.csv"), csv.str());
  write_manifest(cfg, {{"outputs", json::array({"check_sbp.csv"})}, {"rows", rows}, {"ok", ok}});
  return ok ? 0 : 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SBP-SAT solver and spectrum toolkit for 2x2 hyperbolic systems", "sbpsat"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  struct Raw {
    std::string cases, p, N, T, tol, snapshots, R0, RL, region = "0,10,-20,20", view = "-10,10,-20,20";
    int jobs = 1;
    std::string out = ".";
    std::uint64_t seed = 20240601;
    double radius = 0.25, sigma = 0.2;
    int N_threshold = 0;
    bool export_matrix = false, zero_b = false;
  };
  std::map<std::string, Raw> raw;
  std::string manifest;

  auto common = [&](CLI::App* sub, Raw& r, const char* cases, const char* p, const char* N) {
    r.cases = cases;
    r.p = p;
    r.N = N;
    sub->add_option("--case", r.cases, "case ids, comma separated (1a,1b,...,4b)")->capture_default_str();
    sub->add_option("--p", r.p, "orders, comma separated")->capture_default_str();
    sub->add_option("--N", r.N, "intervals: comma list or a..b doubling")->capture_default_str();
    sub->add_option("--T", r.T, "final time (default 3 for case 1, 0.1 otherwise)");
    sub->add_option("--tol", r.tol, "fixed abs/rel integrator tolerance");
    sub->add_option("--jobs", r.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--out", r.out, "output directory")->capture_default_str();
    sub->add_option("--seed", r.seed, "random seed")->capture_default_str();
    sub->add_option("--R0", r.R0, "override R0");
    sub->add_option("--RL", r.RL, "override RL");
    sub->add_flag("--zero-B", r.zero_b, "set a = b = c = d = 0");
  };

  auto* c = app.add_subcommand("converge", "convergence study against exact or manufactured solutions");
  common(c, raw["converge"], "1a", "2,3,4,5", "32..512");
  c->add_option("--sigma", raw["converge"].sigma, "gaussian width")->capture_default_str();

  auto* s = app.add_subcommand("spectrum", "discrete vs analytic spectra and persistence");
  common(s, raw["spectrum"], "1a", "2,3,4,5", "64..512");
  s->add_option("--region", raw["spectrum"].region, "persistence box re_min,re_max,im_min,im_max")
      ->capture_default_str();
  s->add_option("--view", raw["spectrum"].view, "plot and root-search box")->capture_default_str();
  s->add_option("--radius", raw["spectrum"].radius, "clustering radius")->capture_default_str();
  s->add_option("--N-threshold", raw["spectrum"].N_threshold, "smallest N required for persistence (0: all)")
      ->capture_default_str();
  s->add_flag("--export-matrix", raw["spectrum"].export_matrix, "write D_h as CSV");

  auto* m = app.add_subcommand("simulate", "time evolution snapshots with exact overlay");
  common(m, raw["simulate"], "1b", "2", "1024");
  m->add_option("--snapshots", raw["simulate"].snapshots, "snapshot times, comma separated");
  m->add_option("--sigma", raw["simulate"].sigma, "gaussian width")->capture_default_str();

  auto* k = app.add_subcommand("check", "randomized SBP identity and exactness check");
  common(k, raw["check"], "", "2,3,4,5", "32,128");

  auto* rr = app.add_subcommand("rerun", "repeat a run from its manifest");
  rr->add_option("manifest", manifest, "manifest json")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*rr) {
      std::ifstream in(manifest);
      if (!in) throw UsageError("cannot read manifest " + manifest);
      const auto j = json::parse(in, nullptr, false);
      if (j.is_discarded() || !j.contains("argv")) throw UsageError("not a manifest: " + manifest);
      return run(j["argv"].get<std::vector<std::string>>(), out, err);
    }
    const auto* sub = app.get_subcommands().front();
    const Raw& r = raw[sub->get_name()];
    RunConfig cfg;
    cfg.command = sub->get_name();
    cfg.cases = split(r.cases, ',');
    if (cfg.command != "check") {
      if (cfg.cases.empty()) throw UsageError("no case given");
      for (const auto& cs : cfg.cases) case_of(cs);
    }
    cfg.p = parse_int_list(r.p);
    for (int p : cfg.p)
      if (p < 2 || p > 5) throw UsageError("unsupported order p=" + std::to_string(p) + " (expected 2..5)");
    cfg.N = parse_N_list(r.N);
    for (int p : cfg.p)
      for (int N : cfg.N)
        if (N < SbpOperator::min_intervals(p))
          throw UsageError("N=" + std::to_string(N) + " too small for p=" + std::to_string(p));
    if (!r.T.empty()) {
      cfg.T = to_double(r.T);
      if (!(*cfg.T > 0)) throw UsageError("--T must be positive");
    }
    if (!r.tol.empty()) {
      cfg.tol = to_double(r.tol);
      if (!(*cfg.tol > 0)) throw UsageError("--tol must be positive");
    }
    if (!r.R0.empty()) cfg.R0 = to_double(r.R0);
    if (!r.RL.empty()) cfg.RL = to_double(r.RL);
    cfg.jobs = r.jobs;
    cfg.out = r.out;
    cfg.seed = r.seed;
    cfg.region = parse_box(r.region, "--region");
    cfg.view = parse_box(r.view, "--view");
    cfg.radius = r.radius;
    cfg.N_threshold = r.N_threshold;
    cfg.sigma = r.sigma;
    if (!(cfg.sigma > 0)) throw UsageError("--sigma must be positive");
    cfg.export_matrix = r.export_matrix;
    cfg.zero_b = r.zero_b;
    if (!r.snapshots.empty()) cfg.snapshots = parse_double_list(r.snapshots);
    if (cfg.command == "simulate" && cfg.snapshots.empty())
      cfg.snapshots = default_snapshots(cfg.T.value_or(default_final_time(case_of(cfg.cases.front()))));
    std::filesystem::create_directories(cfg.out);

    if (cfg.command == "converge") return converge(cfg, out);
    if (cfg.command == "spectrum") return spectrum(cfg, out);
    if (cfg.command == "simulate") return simulate(cfg, out);
    return check(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace sbpsat::cli
