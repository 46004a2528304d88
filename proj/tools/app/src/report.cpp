// Copyright 2026 The mrdw Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrdw/app/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace mrdw::app {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
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

// Piecewise-linear approximation of the viridis colormap.
std::string color(double u) {
  static constexpr double kStops[][3] = {{68, 1, 84},    {59, 82, 139}, {33, 145, 140},
                                         {94, 201, 98},  {253, 231, 37}};
  u = std::clamp(u, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(u));
  const double f = u - i;
  int rgb[3];
  for (int c = 0; c < 3; ++c) {
    rgb[c] = static_cast<int>(std::lround(kStops[i][c] + f * (kStops[i + 1][c] - kStops[i][c])));
  }
  return fmt::format("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2]);
}

std::string header(double w, double h) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
      w, h);
}

}  // namespace

std::string box_plot_svg(const std::string& title, const std::vector<BoxSeries>& series) {
  const double slot = 110.0, left = 60.0, top = 40.0, plot_h = 300.0, bottom = 40.0;
  const double width = left + slot * static_cast<double>(std::max<std::size_t>(1, series.size())) + 20.0;
  const double height = top + plot_h + bottom;

  double lo = 0.0, hi = 1.0;
  for (const BoxSeries& s : series) {
    if (s.summary.n == 0) continue;
    hi = std::max(hi, s.summary.max);
  }
  // Round tick step of 1, 2 or 5 times a power of ten.
  const double raw = hi / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double step = raw <= mag ? mag : raw <= 2 * mag ? 2 * mag : raw <= 5 * mag ? 5 * mag : 10 * mag;
  hi = step * std::ceil(hi * 1.02 / step);
  auto y = [&](double v) { return top + plot_h * (1.0 - (v - lo) / (hi - lo)); };

  std::string svg = header(width, height);
  svg += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                     width / 2, escape(title));
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n",
                     left, top, top + plot_h);
  for (int i = 0; step * i <= hi + 1e-9; ++i) {
    const double v = step * i;
    svg += fmt::format(
        "<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>"
        "<text x=\"{3}\" y=\"{4:.2f}\" text-anchor=\"end\">{5:.0f}</text>\n",
        left, y(v), width - 20, left - 6, y(v) + 4, v);
  }
  svg += fmt::format(
      "<text transform=\"translate(16 {}) rotate(-90)\" text-anchor=\"middle\">common resets</text>\n",
      top + plot_h / 2);

  for (std::size_t i = 0; i < series.size(); ++i) {
    const BoxSeries& s = series[i];
    const double cx = left + slot * (static_cast<double>(i) + 0.5);
    svg += fmt::format("<g class=\"box\" data-label=\"{}\">\n", escape(s.label));
    if (s.summary.n > 0) {
      const Summary& m = s.summary;
      svg += fmt::format(
          "<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{0}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
          cx, y(m.max), y(m.min));
      for (const double v : {m.min, m.max}) {
        svg += fmt::format(
            "<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n",
            cx - 12, y(v), cx + 12);
      }
      svg += fmt::format(
          "<rect x=\"{}\" y=\"{:.2f}\" width=\"50\" height=\"{:.2f}\" fill=\"#9ecae1\" "
          "stroke=\"black\"/>\n",
          cx - 25, y(m.q3), std::max(0.5, y(m.q1) - y(m.q3)));
      svg += fmt::format(
          "<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#d62728\" "
          "stroke-width=\"2\"/>\n",
          cx - 25, y(m.median), cx + 25);
      for (const double v : s.values) {
        svg += fmt::format("<circle cx=\"{}\" cy=\"{:.2f}\" r=\"1.5\" fill=\"#555\"/>\n",
                           cx + 34, y(v));
      }
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{} (n={})</text>\n",
                       cx, top + plot_h + 20, escape(s.label), s.summary.n);
    svg += "</g>\n";
  }
  return svg + "</svg>\n";
}

std::string heatmap_svg(const std::string& title, const Room& room, Field field) {
  const SkeletonGrid& grid = room.grid;
  const Box& b = room.env.bounds();
  const double scale = 360.0 / std::max(b.width(), b.height());
  const double margin = 40.0, legend = 70.0;
  const double width = b.width() * scale + 2 * margin + legend;
  const double height = b.height() * scale + 2 * margin;
  auto sx = [&](double x) { return margin + (x - b.min.x) * scale; };
  auto sy = [&](double y) { return margin + (b.max.y - y) * scale; };

  std::vector<double> values(grid.size());
  double vmax = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = field == Field::kEscapability ? grid.escapability(i) : grid.safety(i);
    if (std::isfinite(values[i])) vmax = std::max(vmax, values[i]);
  }
  if (vmax <= 0.0) vmax = 1.0;

  std::string svg = header(width, height);
  svg += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                     (width - legend) / 2, escape(title));
  const double d = grid.params().delta;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point2 p = grid.positions()[i];
    const double v = std::isfinite(values[i]) ? values[i] : vmax;
    svg += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\">"
        "<title>({:.3f}, {:.3f}): {:.4f} s</title></rect>\n",
        sx(p.x - d / 2), sy(p.y + d / 2), d * scale, d * scale, color(v / vmax), p.x, p.y,
        values[i]);
  }

  auto outline = [&](const Polygon& poly, const char* fill) {
    std::string pts;
    for (const Point2& p : poly) pts += fmt::format("{:.2f},{:.2f} ", sx(p.x), sy(p.y));
    svg += fmt::format("<polygon points=\"{}\" fill=\"{}\" stroke=\"black\" stroke-width=\"2\"/>\n",
                       pts, fill);
  };
  outline(room.env.boundary(), "none");
  for (const Polygon& o : room.env.obstacles()) outline(o, "#888");

  const double lx = width - legend + 10, ly = margin, lh = height - 2 * margin;
  for (int i = 0; i < 50; ++i) {
    svg += fmt::format(
        "<rect x=\"{}\" y=\"{:.2f}\" width=\"16\" height=\"{:.2f}\" fill=\"{}\"/>\n", lx,
        ly + lh * i / 50.0, lh / 50.0 + 0.5, color(1.0 - (i + 0.5) / 50.0));
  }
  svg += fmt::format("<text x=\"{}\" y=\"{}\">{:.2f} s</text>\n", lx + 20, ly + 10, vmax);
  svg += fmt::format("<text x=\"{}\" y=\"{}\">0 s</text>\n", lx + 20, ly + lh);
  return svg + "</svg>\n";
}

}  // namespace mrdw::app
