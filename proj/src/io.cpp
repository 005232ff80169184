#include "sbpsat/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sbpsat::io {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string matrix_csv(const Matrix& A) {
  std::ostringstream os;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) {
      if (j) os << ',';
      os << fmt(A(i, j));
    }
    os << '\n';
  }
  return os.str();
}

std::string spectrum_csv(const SpectrumSet& set) {
  std::ostringstream os;
  os << "re,im,provenance,n\n";
  for (const auto& e : set.values) {
    os << fmt(e.z.real()) << ',' << fmt(e.z.imag()) << ',' << set.provenance << ',';
    if (e.n) os << *e.n;
    os << '\n';
  }
  return os.str();
}

std::string palette(std::size_t i) {
  static const std::array<const char*, 10> colors = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                                     "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors[i % colors.size()];
}

namespace {

struct Axis {
  double lo, hi;
  bool log;
  double map(double v, double p0, double p1) const {
    const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
    return p0 + t * (p1 - p0);
  }
};

Axis make_axis(const std::vector<const std::vector<double>*>& data, bool log) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto* d : data)
    for (double v : *d) {
      if (!std::isfinite(v) || (log && v <= 0)) continue;
      const double w = log ? std::log10(v) : v;
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
  if (!std::isfinite(lo)) {
    lo = 0;
    hi = 1;
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  if (log) {
    lo = std::floor(lo);
    hi = std::ceil(hi);
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, log};
}

std::vector<double> ticks(const Axis& a) {
  std::vector<double> t;
  if (a.log) {
    for (double e = a.lo; e <= a.hi + 1e-9; e += 1) t.push_back(std::pow(10.0, e));
    return t;
  }
  const double span = a.hi - a.lo;
  const double raw = span / 6;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  for (double v = std::ceil(a.lo / step) * step; v <= a.hi + 1e-12 * span; v += step)
    t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  return t;
}

std::string tick_label(double v, bool log) {
  std::ostringstream os;
  if (log) {
    os << "1e" << static_cast<int>(std::lround(std::log10(v)));
  } else {
    os.precision(4);
    os << v;
  }
  return os.str();
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

std::string plot_body(const PlotSpec& plot) {
  const double W = plot.width, H = plot.height;
  const double x0 = 70, x1 = W - 150, y0 = H - 50, y1 = 40;
  std::vector<const std::vector<double>*> xs, ys;
  for (const auto& s : plot.series) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  Axis ax = make_axis(xs, plot.logx);
  Axis ay = make_axis(ys, plot.logy);
  if (plot.xlim && !plot.logx) ax = {plot.xlim->first, plot.xlim->second, false};
  if (plot.ylim && !plot.logy) ay = {plot.ylim->first, plot.ylim->second, false};
  std::ostringstream os;
  os.precision(6);
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(plot.title)
     << "</text>\n";
  os << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(ax)) {
    const double px = ax.map(t, x0, x1);
    os << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\"" << y1
       << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << px << "\" y=\"" << y0 + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
       << tick_label(t, ax.log) << "</text>\n";
  }
  for (double t : ticks(ay)) {
    const double py = ay.map(t, y0, y1);
    os << "<line x1=\"" << x0 << "\" y1=\"" << py << "\" x2=\"" << x1 << "\" y2=\"" << py
       << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << x0 - 6 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
       << tick_label(t, ay.log) << "</text>\n";
  }
  os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
     << escape(plot.xlabel) << "</text>\n";
  os << "<text x=\"16\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
     << (y0 + y1) / 2 << ")\">" << escape(plot.ylabel) << "</text>\n";
  auto ok = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && !(ax.log && x <= 0) && !(ay.log && y <= 0);
  };
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    if (s.line) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
         << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (ok(s.x[i], s.y[i])) os << ax.map(s.x[i], x0, x1) << ',' << ay.map(s.y[i], y0, y1) << ' ';
      os << "\"/>\n";
    }
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!ok(s.x[i], s.y[i])) continue;
        const double px = ax.map(s.x[i], x0, x1), py = ay.map(s.y[i], y0, y1);
        if (px < x0 - 1 || px > x1 + 1 || py > y0 + 1 || py < y1 - 1) continue;
        const double r = s.marker_size;
        if (s.crosses) {
          os << "<path d=\"M" << px - r << ',' << py - r << "L" << px + r << ',' << py + r << "M" << px - r << ','
             << py + r << "L" << px + r << ',' << py - r << "\" stroke=\"" << s.color << "\" stroke-width=\"1.2\"/>\n";
        } else {
          os << "<circle cx=\"" << px << "\" cy=\"" << py << "\" r=\"" << r << "\" fill=\"" << s.color << "\"/>\n";
        }
      }
    }
    const double ly = y1 + 12 + 18 * static_cast<double>(k);
    os << "<rect x=\"" << x1 + 12 << "\" y=\"" << ly - 6 << "\" width=\"12\" height=\"8\" fill=\"" << s.color
       << "\"/>\n";
    os << "<text x=\"" << x1 + 30 << "\" y=\"" << ly + 2 << "\" font-size=\"11\">" << escape(s.label) << "</text>\n";
  }
  return os.str();
}

}  // namespace

std::string svg_plot(const PlotSpec& plot) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << plot.width << ' ' << plot.height
     << "\" width=\"" << plot.width << "\" height=\"" << plot.height << "\" font-family=\"sans-serif\">\n";
  os << plot_body(plot);
  os << "</svg>\n";
  return os.str();
}

std::string svg_panels(const std::vector<PlotSpec>& panels, int columns) {
  if (panels.empty()) return svg_plot({});
  columns = std::max(1, columns);
  const double W = panels.front().width, H = panels.front().height;
  const int rows = (static_cast<int>(panels.size()) + columns - 1) / columns;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W * columns << ' ' << H * rows
     << "\" width=\"" << W * columns << "\" height=\"" << H * rows << "\" font-family=\"sans-serif\">\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const int r = static_cast<int>(i) / columns, c = static_cast<int>(i) % columns;
    os << "<g transform=\"translate(" << c * W << ',' << r * H << ")\">\n" << plot_body(panels[i]) << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace sbpsat::io
