#include "hylear/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hylear/io_util.hpp"

namespace hylear {

std::string svg_bar_chart(const std::string& title, const std::vector<BarDatum>& data) {
  const int width = 640, height = 360, margin = 50;
  double max_v = 1e-9;
  for (const auto& d : data) max_v = std::max(max_v, d.value);

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
    << height << "\">\n";
  s << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
    << title << "</text>\n";
  const int plot_w = width - 2 * margin;
  const int plot_h = height - 2 * margin;
  const int n = static_cast<int>(data.size());
  const double bar_w = n > 0 ? static_cast<double>(plot_w) / n : 1.0;
  for (int i = 0; i < n; ++i) {
    const double h = plot_h * data[i].value / max_v;
    const double x = margin + i * bar_w + bar_w * 0.15;
    const double y = height - margin - h;
    s << "<rect x=\"" << format_double(x) << "\" y=\"" << format_double(y) << "\" width=\""
      << format_double(bar_w * 0.7) << "\" height=\"" << format_double(h)
      << "\" fill=\"#4878a8\"/>\n";
    s << "<text x=\"" << format_double(x + bar_w * 0.35) << "\" y=\"" << height - margin + 16
      << "\" text-anchor=\"middle\" font-size=\"11\">" << data[i].label << "</text>\n";
    s << "<text x=\"" << format_double(x + bar_w * 0.35) << "\" y=\"" << format_double(y - 4)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(data[i].value)
      << "</text>\n";
  }
  s << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
    << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  s << "</svg>\n";
  return s.str();
}

std::string svg_plan_overlay(const CostMap& map, const std::vector<Path>& paths,
                             const WorldState& obs, const std::vector<Hazard>& hazards,
                             const RiskParams& rp) {
  const double scale = 8.0;  // pixels per meter
  const double w_m = map.width * map.resolution;
  const double h_m = map.height * map.resolution;
  const int width = static_cast<int>(w_m * scale);
  const int height = static_cast<int>(h_m * scale);
  const auto px = [&](const Vec2& p) {
    return Vec2{(p.x - map.origin.x) * scale, height - (p.y - map.origin.y) * scale};
  };

  double max_finite = 1.0;
  for (const double c : map.cells) {
    if (std::isfinite(c)) max_finite = std::max(max_finite, c);
  }

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
    << height << "\">\n";
  // Cost layer, coarse 2x2-cell blocks to keep files small.
  for (int j = 0; j < map.height; j += 2) {
    for (int i = 0; i < map.width; i += 2) {
      const double c = map.cost_at(i, j);
      int v = std::isfinite(c) ? 235 - static_cast<int>(180.0 * c / max_finite) : 20;
      v = std::clamp(v, 20, 235);
      const Vec2 p = px(map.cell_center(i, j));
      s << "<rect x=\"" << format_double(p.x) << "\" y=\""
        << format_double(p.y - 2 * map.resolution * scale) << "\" width=\""
        << format_double(2 * map.resolution * scale) << "\" height=\""
        << format_double(2 * map.resolution * scale) << "\" fill=\"rgb(" << v << "," << v << ","
        << v << ")\"/>\n";
    }
  }
  // Risk heat layer along a coarse grid.
  for (int j = 0; j < map.height; j += 8) {
    for (int i = 0; i < map.width; i += 8) {
      const Vec2 c = map.cell_center(i, j);
      const double r = risk_at({c.x, c.y, obs.car.pose.heading}, obs.car.speed, hazards, rp);
      if (r < 0.02) continue;
      const Vec2 p = px(c);
      s << "<circle cx=\"" << format_double(p.x) << "\" cy=\"" << format_double(p.y)
        << "\" r=\"" << format_double(4.0 * map.resolution * scale * r + 1.0)
        << "\" fill=\"rgba(220,60,40," << format_double(std::min(0.6, r)) << ")\"/>\n";
    }
  }
  const char* colors[3] = {"#2060c0", "#20a060", "#c08020"};
  for (const auto& path : paths) {
    s << "<polyline fill=\"none\" stroke=\"" << colors[static_cast<int>(path.source_map)]
      << "\" stroke-width=\"2\" points=\"";
    for (const auto& pose : path.poses) {
      const Vec2 p = px(pose.position());
      s << format_double(p.x) << "," << format_double(p.y) << " ";
    }
    s << "\"/>\n";
  }
  for (const auto& ped : obs.pedestrians) {
    const Vec2 p = px(ped.position);
    s << "<circle cx=\"" << format_double(p.x) << "\" cy=\"" << format_double(p.y)
      << "\" r=\"" << format_double(0.3 * scale) << "\" fill=\"#d04040\"/>\n";
  }
  const Vec2 car = px(obs.car.pose.position());
  s << "<circle cx=\"" << format_double(car.x) << "\" cy=\"" << format_double(car.y)
    << "\" r=\"" << format_double(0.9 * scale) << "\" fill=\"#3030a0\"/>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace hylear
