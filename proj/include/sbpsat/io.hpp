#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "sbpsat/analytic.hpp"
#include "sbpsat/dense.hpp"

namespace sbpsat::io {

/// Shortest round-trip decimal form; "nan"/"inf" for non-finite values.
std::string fmt(double v);

/// Writes via a temporary file in the same directory and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

std::string matrix_csv(const Matrix& A);
/// Header re,im,provenance,n.
std::string spectrum_csv(const SpectrumSet& set);

struct Series {
  std::string label;
  std::vector<double> x, y;
  std::string color = "#1f77b4";
  bool markers = true;
  bool line = true;
  bool crosses = false;
  bool dashed = false;
  double marker_size = 3.0;
};

struct PlotSpec {
  std::string title;
  std::string xlabel, ylabel;
  bool logx = false, logy = false;
  std::optional<std::pair<double, double>> xlim, ylim;  // linear axes only
  std::vector<Series> series;
  double width = 640, height = 480;
};

/// Self-contained SVG with a fixed viewBox.
std::string svg_plot(const PlotSpec& plot);
/// Panels laid out in a grid, each one a scaled copy of svg_plot output.
std::string svg_panels(const std::vector<PlotSpec>& panels, int columns);

/// Stable palette entry.
std::string palette(std::size_t i);

}  // namespace sbpsat::io
