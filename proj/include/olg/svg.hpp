#pragma once

#include "olg/analysis.hpp"
#include "olg/feasible.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace olg {

namespace svg_detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Canvas {
  double min_x = 0, min_y = 0, max_x = 1, max_y = 1;
  double width = 560, height = 560, margin = 60;

  double sx(double x) const {
    return margin + (x - min_x) / (max_x - min_x) * (width - 2 * margin);
  }
  double sy(double y) const {  // SVG y grows downward
    return height - margin - (y - min_y) / (max_y - min_y) * (height - 2 * margin);
  }
};

inline std::string polygon_path(const Canvas& c, const std::vector<std::array<double, 2>>& pts) {
  std::ostringstream out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out << (i == 0 ? "M" : "L") << fmt(c.sx(pts[i][0])) << " " << fmt(c.sy(pts[i][1]));
  }
  out << "Z";
  return out.str();
}

}  // namespace svg_detail

/// Projects an n-dimensional vertex to the plot plane. 2D is identity; 3D uses
/// an isometric projection.
inline std::array<double, 2> plot_projection(const Point& p) {
  if (p.size() == 2) return {rat_to_double(p[0]), rat_to_double(p[1])};
  if (p.size() == 3) {
    const double c = std::sqrt(3.0) / 2.0;
    double x = rat_to_double(p[0]), y = rat_to_double(p[1]), z = rat_to_double(p[2]);
    return {(x - y) * c, (x + y) / 2.0 + z};
  }
  throw ValidationError("plotting supports 2 players, or 3 players via projection");
}

/// 2D hull of the projected vertices, as CCW screen-space points.
inline std::vector<std::array<double, 2>> projected_outline(const Polytope& poly) {
  std::vector<Point> projected;
  for (const Point& v : poly.vertices) {
    auto [x, y] = plot_projection(v);
    projected.push_back({rat_from_double(x), rat_from_double(y)});
  }
  std::vector<std::array<double, 2>> out;
  for (const Point& p : ordered_hull_2d(projected))
    out.push_back({rat_to_double(p[0]), rat_to_double(p[1])});
  return out;
}

/// Overlays, per effective discount, the feasible set over the one-shot hull
/// (dotted) and the payoff cube frame, with a legend entry per discount.
inline std::string plot_feasible_sets(const StageGame& g, const std::vector<Rat>& deltas,
                                      long cap = enumeration_cap()) {
  if (g.num_players != 2 && g.num_players != 3)
    throw ValidationError("plotting supports 2 players, or 3 players via projection");
  static const char* kFills[] = {"#b8c4d6", "#e8b7b0", "#b9d6b4", "#e6d9a3",
                                 "#c9b6dd", "#a9d3d6", "#dcb9cf", "#c4c4c4"};

  std::vector<Rat> ordered = deltas;
  std::sort(ordered.begin(), ordered.end());  // sets shrink as the discount grows
  std::vector<std::pair<Rat, std::vector<std::array<double, 2>>>> layers;
  for (const Rat& d : ordered) layers.push_back({d, projected_outline(feasible_set(g, d, cap))});
  auto cube_outline = projected_outline(payoff_cube(g));
  auto hull_outline = projected_outline(one_shot_hull(g));

  svg_detail::Canvas canvas;
  bool first = true;
  for (const auto& [x, y] : cube_outline) {
    if (first) {
      canvas.min_x = canvas.max_x = x;
      canvas.min_y = canvas.max_y = y;
      first = false;
    }
    canvas.min_x = std::min(canvas.min_x, x);
    canvas.max_x = std::max(canvas.max_x, x);
    canvas.min_y = std::min(canvas.min_y, y);
    canvas.max_y = std::max(canvas.max_y, y);
  }
  if (canvas.max_x == canvas.min_x) canvas.max_x = canvas.min_x + 1;
  if (canvas.max_y == canvas.min_y) canvas.max_y = canvas.min_y + 1;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << canvas.width << "\" height=\""
      << canvas.height << "\" viewBox=\"0 0 " << canvas.width << " " << canvas.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // largest sets first so smaller discounts do not hide larger ones underneath
  for (std::size_t i = 0; i < layers.size(); ++i) {
    out << "<path d=\"" << svg_detail::polygon_path(canvas, layers[i].second) << "\" fill=\""
        << kFills[i % 8] << "\" fill-opacity=\"0.75\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  }
  out << "<path d=\"" << svg_detail::polygon_path(canvas, hull_outline)
      << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.2\" "
         "stroke-dasharray=\"5 4\"/>\n";
  out << "<path d=\"" << svg_detail::polygon_path(canvas, cube_outline)
      << "\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1\"/>\n";

  double ly = 18;
  for (std::size_t i = 0; i < layers.size(); ++i, ly += 18) {
    out << "<rect x=\"12\" y=\"" << svg_detail::fmt(ly - 10)
        << "\" width=\"12\" height=\"12\" fill=\"" << kFills[i % 8] << "\"/>\n";
    out << "<text x=\"30\" y=\"" << svg_detail::fmt(ly)
        << "\" font-family=\"sans-serif\" font-size=\"13\">&#916; = "
        << rat_to_string(layers[i].first) << "</text>\n";
  }
  out << "<text x=\"12\" y=\"" << svg_detail::fmt(ly)
      << "\" font-family=\"sans-serif\" font-size=\"13\">dotted: one-shot hull V, frame: "
         "payoff cube F*</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace olg
