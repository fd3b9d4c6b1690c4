#include "ampload/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ampload::plot {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string line_plot(const std::vector<Series>& series, std::string_view title, int width, int height) {
  const double left = 60, right = 20, top = 40, bottom = 40;
  const double pw = width - left - right, ph = height - top - bottom;
  double lo = 0.0, hi = 0.0;
  std::size_t len = 1;
  bool first = true;
  for (const Series& s : series) {
    len = std::max(len, s.y.size());
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
  }
  if (hi - lo < 1e-300) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double xmax = len > 1 ? static_cast<double>(len - 1) : 1.0;
  auto px = [&](double i) { return left + pw * i / xmax; };
  auto py = [&](double v) { return top + ph * (hi - v) / (hi - lo); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
    << "</text>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
    << "\" stroke=\"black\"/>\n";
  if (lo < 0.0 && hi > 0.0)
    o << "<line x1=\"" << left << "\" y1=\"" << num(py(0.0)) << "\" x2=\"" << left + pw << "\" y2=\"" << num(py(0.0))
      << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  o << "<text x=\"" << left - 6 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\">" << num(hi) << "</text>\n";
  o << "<text x=\"" << left - 6 << "\" y=\"" << top + ph + 4 << "\" text-anchor=\"end\">" << num(lo) << "</text>\n";
  o << "<text x=\"" << left << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">0</text>\n";
  o << "<text x=\"" << left + pw << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << len - 1
    << "</text>\n";
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 6 << "\" text-anchor=\"middle\">index</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    o << "<polyline fill=\"none\" stroke=\"" << escape(s.color) << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      o << num(px(static_cast<double>(i))) << ',' << num(py(s.y[i])) << (i + 1 < s.y.size() ? " " : "");
    }
    o << "\"/>\n";
    const double ly = top + 14.0 * static_cast<double>(k + 1);
    o << "<line x1=\"" << left + pw - 120 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw - 100 << "\" y2=\""
      << ly - 4 << "\" stroke=\"" << escape(s.color) << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << left + pw - 94 << "\" y=\"" << ly << "\">" << escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace ampload::plot
