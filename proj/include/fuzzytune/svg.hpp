#pragma once

// Static line charts as standalone SVG. Output is a pure function of the
// input data (fixed number formatting, no timestamps).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fuzzytune::svg {

struct Series {
  std::string name;
  std::vector<double> ys;
};

struct ChartOptions {
  int width = 800;
  int height = 480;
  int margin_left = 80;
  int margin_right = 150;
  int margin_top = 30;
  int margin_bottom = 60;
  std::string x_label;
  std::string y_label;
};

namespace detail {

inline std::string num(double v, int precision = 3) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  std::string s = buf;
  if (s == "-0.000" || s == "-0.00" || s == "-0.0" || s == "-0") s.erase(0, 1);
  return s;
}

inline std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

/// 1, 2 or 5 times a power of ten, giving roughly `target` intervals.
inline double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return step * mag;
}

struct Range {
  double lo;
  double hi;
};

inline Range padded_range(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::abs(lo) > 0.0 ? std::abs(lo) * 0.5 : 1.0;
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

}  // namespace detail

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

/// Renders one polyline per series against a shared x axis.
inline std::string line_chart(const std::vector<double>& xs, const std::vector<Series>& series,
                              const ChartOptions& opt = {}) {
  if (xs.empty()) throw std::invalid_argument("line_chart: no data");
  if (series.empty()) throw std::invalid_argument("line_chart: no series");
  for (const Series& s : series) {
    if (s.ys.size() != xs.size()) throw std::invalid_argument("line_chart: series length mismatch");
  }

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (double x : xs) {
    if (std::isfinite(x)) x_lo = std::min(x_lo, x), x_hi = std::max(x_hi, x);
  }
  for (const Series& s : series) {
    for (double y : s.ys) {
      if (std::isfinite(y)) y_lo = std::min(y_lo, y), y_hi = std::max(y_hi, y);
    }
  }
  if (!std::isfinite(x_lo) || !std::isfinite(y_lo)) throw std::invalid_argument("line_chart: no finite data");

  const detail::Range xr = detail::padded_range(x_lo, x_hi);
  const detail::Range yr = detail::padded_range(y_lo, y_hi);
  const double plot_w = opt.width - opt.margin_left - opt.margin_right;
  const double plot_h = opt.height - opt.margin_top - opt.margin_bottom;
  auto px = [&](double x) { return opt.margin_left + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto py = [&](double y) { return opt.margin_top + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
      << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes frame.
  const double x0 = opt.margin_left, x1 = opt.margin_left + plot_w;
  const double y0 = opt.margin_top, y1 = opt.margin_top + plot_h;
  out << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
      << "<line x1=\"" << detail::num(x0) << "\" y1=\"" << detail::num(y1) << "\" x2=\"" << detail::num(x1)
      << "\" y2=\"" << detail::num(y1) << "\"/>\n"
      << "<line x1=\"" << detail::num(x0) << "\" y1=\"" << detail::num(y0) << "\" x2=\"" << detail::num(x0)
      << "\" y2=\"" << detail::num(y1) << "\"/>\n"
      << "</g>\n";

  out << "<g class=\"ticks\" fill=\"black\">\n";
  const double xs_step = detail::nice_step(xr.hi - xr.lo, 6);
  for (auto i = static_cast<long long>(std::ceil(xr.lo / xs_step)); i * xs_step <= xr.hi + xs_step * 1e-9; ++i) {
    const double t = static_cast<double>(i) * xs_step;
    const double x = px(t);
    out << "<line x1=\"" << detail::num(x) << "\" y1=\"" << detail::num(y1) << "\" x2=\"" << detail::num(x)
        << "\" y2=\"" << detail::num(y1 + 5) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << detail::num(x) << "\" y=\"" << detail::num(y1 + 18) << "\" text-anchor=\"middle\">"
        << detail::tick_label(t) << "</text>\n";
  }
  const double ys_step = detail::nice_step(yr.hi - yr.lo, 6);
  for (auto i = static_cast<long long>(std::ceil(yr.lo / ys_step)); i * ys_step <= yr.hi + ys_step * 1e-9; ++i) {
    const double t = static_cast<double>(i) * ys_step;
    const double y = py(t);
    out << "<line x1=\"" << detail::num(x0 - 5) << "\" y1=\"" << detail::num(y) << "\" x2=\"" << detail::num(x0)
        << "\" y2=\"" << detail::num(y) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << detail::num(x0 - 8) << "\" y=\"" << detail::num(y + 4) << "\" text-anchor=\"end\">"
        << detail::tick_label(t) << "</text>\n";
  }
  out << "</g>\n";

  if (!opt.x_label.empty()) {
    out << "<text x=\"" << detail::num(x0 + plot_w / 2) << "\" y=\"" << detail::num(y1 + 42)
        << "\" text-anchor=\"middle\">" << detail::escape(opt.x_label) << "</text>\n";
  }
  if (!opt.y_label.empty()) {
    out << "<text x=\"20\" y=\"" << detail::num(y0 + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << detail::num(y0 + plot_h / 2) << ")\">" << detail::escape(opt.y_label) << "</text>\n";
  }

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    out << "<polyline class=\"series\" data-name=\"" << detail::escape(series[k].name) << "\" fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(series[k].ys[i])) continue;
      if (!first) out << ' ';
      out << detail::num(px(xs[i])) << ',' << detail::num(py(series[k].ys[i]));
      first = false;
    }
    out << "\"/>\n";
    const double ly = y0 + 10 + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << detail::num(x1 + 15) << "\" y1=\"" << detail::num(ly) << "\" x2=\"" << detail::num(x1 + 35)
        << "\" y2=\"" << detail::num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << detail::num(x1 + 40) << "\" y=\"" << detail::num(ly + 4) << "\">"
        << detail::escape(series[k].name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace fuzzytune::svg
