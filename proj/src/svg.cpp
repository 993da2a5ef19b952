#include "netstate/pipeline.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace netstate {

namespace {

constexpr double kSize = 480.0;
constexpr double kMargin = 48.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

template <class... Args>
std::string fmt(const char* pattern, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

}  // namespace

std::string summary_svg(const StateSummary& summary, const std::vector<std::string>& node_labels,
                        const SummarizeConfig& config) {
  const std::size_t n = node_labels.size();
  std::vector<double> x(n), y(n);
  bool placed = n > 0;
  for (const auto& label : node_labels) placed = placed && config.node_positions.count(label) > 0;

  if (placed) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    double lo_x = inf, hi_x = -inf, lo_y = inf, hi_y = -inf;
    for (const auto& label : node_labels) {
      const auto& p = config.node_positions.at(label);
      lo_x = std::min(lo_x, p[0]);
      hi_x = std::max(hi_x, p[0]);
      lo_y = std::min(lo_y, p[1]);
      hi_y = std::max(hi_y, p[1]);
    }
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
    const double scale = (kSize - 2.0 * kMargin) / span;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = config.node_positions.at(node_labels[i]);
      x[i] = kMargin + (p[0] - lo_x) * scale;
      y[i] = kSize - kMargin - (p[1] - lo_y) * scale;
    }
  } else {
    const double r = kSize / 2.0 - kMargin;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n) - std::numbers::pi / 2;
      x[i] = kSize / 2.0 + r * std::cos(a);
      y[i] = kSize / 2.0 + r * std::sin(a);
    }
  }

  std::string out = fmt(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n", kSize,
      kSize, kSize, kSize);
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Edges arrive strongest first; the strongest is drawn widest.
  const std::size_t m = summary.edges.size();
  for (std::size_t r = 0; r < m; ++r) {
    const auto& e = summary.edges[r];
    const double width = 1.0 + 5.0 * static_cast<double>(m - r) / static_cast<double>(m);
    out += fmt("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#b2182b\" stroke-width=\"%.2f\"/>\n",
               x[e.i], y[e.i], x[e.j], y[e.j], width);
  }
  for (std::size_t i = 0; i < n; ++i) {
    out += fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.1f\" fill=\"#2166ac\"/>\n", x[i], y[i], 5.0);
    out += fmt("<text x=\"%.2f\" y=\"%.2f\" font-size=\"%.0f\" font-family=\"sans-serif\">", x[i] + 7.0, y[i] - 7.0,
               10.0);
    out += escape(node_labels[i]) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace netstate
