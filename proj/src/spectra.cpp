#include "sbpsat/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>

#include "sbpsat/semidisc.hpp"

namespace sbpsat {

SpectrumSet discrete_spectrum(const ProblemSpec& spec, int p, int N, const EigenOptions& opt) {
  const auto op = SbpOperator::build(p, Grid::uniform(N, spec.L));
  const auto semi = Semidiscretization::assemble(spec, op);
  SpectrumSet set;
  set.provenance = "discrete:p=" + std::to_string(p) + ":N=" + std::to_string(N);
  for (cplx z : eigenvalues_dense(semi.system_matrix(), opt)) set.values.push_back({z, std::nullopt});
  return set;
}

SpectrumSet discrete_spectrum(CaseId id, int p, int N, const EigenOptions& opt) {
  return discrete_spectrum(make_case(id), p, N, opt);
}

double default_im_cutoff(const ProblemSpec& spec) {
  return 5.0 * std::numbers::pi * spec.cbar.max_on(0.0, spec.L) / spec.L;
}

double max_re_nonreal(const std::vector<cplx>& z, double eps) {
  double m = -INFINITY;
  for (cplx v : z)
    if (std::abs(v.imag()) > eps) m = std::max(m, v.real());
  return m;
}

SpectrumComparison compare_spectra(const SpectrumSet& discrete, const SpectrumSet& analytic, double im_cutoff,
                                   std::optional<double> threshold, double eps) {
  SpectrumComparison cmp;
  const auto dz = discrete.points();
  if (dz.empty()) throw std::invalid_argument("compare_spectra: empty discrete set");
  double line = -INFINITY;
  for (const auto& e : analytic.values) {
    if (std::abs(e.z.imag()) > im_cutoff) continue;
    cplx best = dz.front();
    for (cplx d : dz)
      if (std::abs(d - e.z) < std::abs(best - e.z)) best = d;
    cmp.matches.push_back({e.z, best, std::abs(best - e.z)});
    line = std::max(line, e.z.real());
  }
  if (cmp.matches.empty()) throw std::invalid_argument("compare_spectra: no analytic values within the cutoff");
  double sum = 0.0;
  for (const auto& m : cmp.matches) {
    cmp.max_distance = std::max(cmp.max_distance, m.distance);
    sum += m.distance;
  }
  cmp.mean_distance = sum / static_cast<double>(cmp.matches.size());
  cmp.threshold = threshold.value_or(line);
  for (cplx d : dz)
    if (d.real() > cmp.threshold) cmp.right_of_line_values.push_back(d);
  cmp.right_of_line = static_cast<int>(cmp.right_of_line_values.size());
  cmp.max_re_nonreal = max_re_nonreal(dz, eps);
  return cmp;
}

std::vector<const Cluster*> PersistenceTable::persistent() const {
  std::vector<const Cluster*> out;
  for (const auto& c : clusters)
    if (c.persistent) out.push_back(&c);
  return out;
}

PersistenceTable persistence_from_spectra(const std::vector<std::pair<RunKey, std::vector<cplx>>>& spectra,
                                          const Region& region, double radius, int N_threshold) {
  PersistenceTable table;
  table.region = region;
  table.radius = radius;
  std::vector<std::pair<RunKey, cplx>> pts;
  for (const auto& [key, z] : spectra) {
    table.sweep.push_back(key);
    for (cplx v : z)
      if (region.contains(v)) pts.emplace_back(key, v);
  }
  if (N_threshold == 0 && !spectra.empty()) {
    N_threshold = spectra.front().first.N;
    for (const auto& s : spectra) N_threshold = std::min(N_threshold, s.first.N);
  }
  table.N_threshold = N_threshold;

  // Single linkage by union-find.
  std::vector<std::size_t> parent(pts.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (std::abs(pts[i].second - pts[j].second) <= radius) parent[find(i)] = find(j);

  std::vector<std::size_t> root_to_cluster(pts.size(), SIZE_MAX);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::size_t r = find(i);
    if (root_to_cluster[r] == SIZE_MAX) {
      root_to_cluster[r] = table.clusters.size();
      table.clusters.emplace_back();
    }
    table.clusters[root_to_cluster[r]].members.push_back(pts[i]);
  }
  std::vector<RunKey> required;
  for (const auto& k : table.sweep)
    if (k.N >= N_threshold) required.push_back(k);
  for (auto& c : table.clusters) {
    cplx sum = 0.0;
    for (const auto& [key, z] : c.members) {
      sum += z;
      if (std::find(c.runs.begin(), c.runs.end(), key) == c.runs.end()) c.runs.push_back(key);
    }
    c.centroid = sum / static_cast<double>(c.members.size());
    c.persistent = !required.empty() && std::all_of(required.begin(), required.end(), [&](const RunKey& k) {
      return std::find(c.runs.begin(), c.runs.end(), k) != c.runs.end();
    });
  }
  std::sort(table.clusters.begin(), table.clusters.end(), [](const Cluster& x, const Cluster& y) {
    if (x.centroid.real() != y.centroid.real()) return x.centroid.real() < y.centroid.real();
    return x.centroid.imag() < y.centroid.imag();
  });
  return table;
}

PersistenceTable persistence_scan(const ProblemSpec& spec, const std::vector<int>& p_list,
                                  const std::vector<int>& N_list, const Region& region,
                                  const PersistenceOptions& opt) {
  if (p_list.empty() || N_list.empty()) throw std::invalid_argument("persistence_scan: empty sweep");
  std::vector<RunKey> keys;
  for (int p : p_list)
    for (int N : N_list) keys.push_back({p, N});
  std::vector<std::pair<RunKey, std::vector<cplx>>> spectra(keys.size());
  std::vector<std::string> errors(keys.size());
  const auto nk = static_cast<std::ptrdiff_t>(keys.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, opt.jobs))
  for (std::ptrdiff_t i = 0; i < nk; ++i) {
    spectra[i].first = keys[i];
    try {
      spectra[i].second = discrete_spectrum(spec, keys[i].p, keys[i].N, opt.eigen).points();
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  auto table = persistence_from_spectra(spectra, region, opt.radius, opt.N_threshold);
  table.case_label = spec.label;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (!errors[i].empty()) table.failures.emplace_back(keys[i], errors[i]);
  return table;
}

}  // namespace sbpsat
