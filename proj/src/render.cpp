#include "tissuenet/render.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace tissuenet {

namespace {

constexpr double kScale = 48.0;
constexpr double kMargin = 32.0;
constexpr unsigned kLayoutSeed = 20240917;
constexpr int kLayoutIterations = 400;

struct Point {
  double x = 0;
  double y = 0;
};

// Light-to-dark fill by the level of the first component.
std::string fill_for(const BundleSpec& spec, const NetState& levels) {
  const auto& net = spec.module.network();
  double max = net.component(0).max_level;
  double t = max > 0 ? levels[0] / max : 0.0;
  int shade = static_cast<int>(std::lround(235 - 150 * t));
  std::ostringstream os;
  os << "rgb(" << shade << ',' << std::min(255, shade + 15) << ",255)";
  return os.str();
}

std::string level_text(const NetState& levels) {
  std::string out;
  for (auto l : levels) out += std::to_string(l);
  return out;
}

std::map<ModuleId, Point> graph_layout(const BdgGraph& g) {
  auto nodes = g.nodes();
  std::map<ModuleId, Point> pos;
  const std::size_t n = nodes.size();
  std::mt19937 rng(kLayoutSeed);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  for (std::size_t k = 0; k < n; ++k) {
    double angle = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(std::max<std::size_t>(n, 1));
    pos[nodes[k]] = {std::cos(angle) + jitter(rng), std::sin(angle) + jitter(rng)};
  }
  if (n < 2) return pos;

  const double ideal = 1.0 / std::sqrt(static_cast<double>(n));
  double temperature = 0.2;
  for (int it = 0; it < kLayoutIterations; ++it) {
    std::map<ModuleId, Point> disp;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        Point& pa = pos[nodes[a]];
        Point& pb = pos[nodes[b]];
        double dx = pa.x - pb.x;
        double dy = pa.y - pb.y;
        double d = std::max(1e-6, std::hypot(dx, dy));
        double f = ideal * ideal / d;
        disp[nodes[a]].x += dx / d * f;
        disp[nodes[a]].y += dy / d * f;
        disp[nodes[b]].x -= dx / d * f;
        disp[nodes[b]].y -= dy / d * f;
      }
    }
    for (auto u : nodes) {
      for (auto v : g.neighbors(u)) {
        if (v < u) continue;
        double dx = pos[u].x - pos[v].x;
        double dy = pos[u].y - pos[v].y;
        double d = std::max(1e-6, std::hypot(dx, dy));
        double f = d * d / ideal;
        disp[u].x -= dx / d * f;
        disp[u].y -= dy / d * f;
        disp[v].x += dx / d * f;
        disp[v].y += dy / d * f;
      }
    }
    for (auto u : nodes) {
      double len = std::hypot(disp[u].x, disp[u].y);
      if (len > 0) {
        double step = std::min(len, temperature);
        pos[u].x += disp[u].x / len * step;
        pos[u].y += disp[u].y / len * step;
      }
    }
    temperature = std::max(0.002, temperature * 0.985);
  }
  return pos;
}

class Svg {
 public:
  void grow(double x, double y, double r) {
    min_x_ = std::min(min_x_, x - r);
    min_y_ = std::min(min_y_, y - r);
    max_x_ = std::max(max_x_, x + r);
    max_y_ = std::max(max_y_, y + r);
  }
  std::ostringstream& body() { return body_; }

  std::string str() const {
    double x0 = min_x_ <= max_x_ ? min_x_ - kMargin : 0;
    double y0 = min_y_ <= max_y_ ? min_y_ - kMargin : 0;
    double w = min_x_ <= max_x_ ? max_x_ - min_x_ + 2 * kMargin : 2 * kMargin;
    double h = min_y_ <= max_y_ ? max_y_ - min_y_ + 2 * kMargin : 2 * kMargin;
    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w << "\" height=\""
       << h << "\" viewBox=\"" << x0 << ' ' << y0 << ' ' << w << ' ' << h << "\">\n"
       << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << w << "\" height=\"" << h
       << "\" fill=\"white\"/>\n"
       << body_.str() << "</svg>\n";
    return os.str();
  }

 private:
  double min_x_ = std::numeric_limits<double>::max();
  double min_y_ = std::numeric_limits<double>::max();
  double max_x_ = std::numeric_limits<double>::lowest();
  double max_y_ = std::numeric_limits<double>::lowest();
  std::ostringstream body_;
};

void label(std::ostream& os, double x, double y, ModuleId id, const NetState& levels) {
  os << "<text x=\"" << x << "\" y=\"" << y - 2 << "\" font-family=\"sans-serif\" font-size=\"13\" "
     << "text-anchor=\"middle\">" << to_index(id) << "</text>\n"
     << "<text x=\"" << x << "\" y=\"" << y + 12 << "\" font-family=\"monospace\" font-size=\"10\" "
     << "text-anchor=\"middle\">" << level_text(levels) << "</text>\n";
}

}  // namespace

std::string render_svg(const BundleSpec& spec, const BundleState& state) {
  Svg svg;
  auto& os = svg.body();
  os << std::fixed << std::setprecision(2);

  if (const auto* iface = std::get_if<GbfInterface>(&state.spatial)) {
    const bool tri = iface->kind() == GridKind::triangular;
    for (const auto& [id, at] : iface->theta()) {
      const auto& levels = state.levels.at(id);
      double x = tri ? (at.a + at.b / 2.0) * kScale : at.a * kScale;
      double y = -(tri ? at.b * std::numbers::sqrt3 / 2.0 : at.b) * kScale;
      if (tri) {
        const double r = kScale / std::numbers::sqrt3;
        os << "<polygon points=\"";
        for (int k = 0; k < 6; ++k) {
          double angle = std::numbers::pi / 6 + k * std::numbers::pi / 3;
          os << (k ? " " : "") << x + r * std::cos(angle) << ',' << y + r * std::sin(angle);
        }
        os << "\" fill=\"" << fill_for(spec, levels) << "\" stroke=\"black\"/>\n";
        svg.grow(x, y, r);
      } else {
        const double half = kScale / 2;
        os << "<rect x=\"" << x - half << "\" y=\"" << y - half << "\" width=\"" << kScale
           << "\" height=\"" << kScale << "\" fill=\"" << fill_for(spec, levels)
           << "\" stroke=\"black\"/>\n";
        svg.grow(x, y, half);
      }
      label(os, x, y, id, levels);
    }
    return svg.str();
  }

  const auto& g = std::get<BdgGraph>(state.spatial);
  auto layout = graph_layout(g);
  const double spread = kScale * std::max(2.0, std::sqrt(static_cast<double>(g.size())) * 1.5);
  auto at = [&](ModuleId id) {
    const auto& p = layout.at(id);
    return Point{p.x * spread, p.y * spread};
  };
  for (auto u : g.nodes()) {
    for (auto v : g.neighbors(u)) {
      if (v < u) continue;
      Point a = at(u);
      Point b = at(v);
      os << "<line x1=\"" << a.x << "\" y1=\"" << a.y << "\" x2=\"" << b.x << "\" y2=\"" << b.y
         << "\" stroke=\"gray\" stroke-width=\"2\"/>\n";
    }
  }
  const double r = kScale * 0.4;
  for (auto u : g.nodes()) {
    Point p = at(u);
    const auto& levels = state.levels.at(u);
    os << "<circle cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"" << r << "\" fill=\""
       << fill_for(spec, levels) << "\" stroke=\"black\"/>\n";
    label(os, p.x, p.y, u, levels);
    svg.grow(p.x, p.y, r);
  }
  return svg.str();
}

}  // namespace tissuenet
