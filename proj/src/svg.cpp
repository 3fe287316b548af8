#include "loopopt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace loopopt::svg {
namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Box {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();
};

void render_panel(std::ostringstream& os, const Panel& p, double left, double width, double height) {
  const double ml = 62, mr = 14, mt = 28, mb = 42;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto ty = [&](double y) { return p.log_y ? std::log10(y) : y; };
  auto usable = [&](double x, double y) { return std::isfinite(x) && std::isfinite(y) && (!p.log_y || y > 0.0); };

  Box b;
  for (const auto& s : p.series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      b.x0 = std::min(b.x0, s.x[i]);
      b.x1 = std::max(b.x1, s.x[i]);
      b.y0 = std::min(b.y0, ty(s.y[i]));
      b.y1 = std::max(b.y1, ty(s.y[i]));
    }
  }
  if (!(b.x0 <= b.x1)) b = {0.0, 1.0, 0.0, 1.0};
  if (b.x1 - b.x0 < 1e-300) b.x0 -= 0.5, b.x1 += 0.5;
  if (b.y1 - b.y0 < 1e-300) b.y0 -= 0.5, b.y1 += 0.5;
  double sx = pw / (b.x1 - b.x0), sy = ph / (b.y1 - b.y0);
  double ox = 0.0, oy = 0.0;
  if (p.equal_aspect) {
    const double s = std::min(sx, sy);
    ox = 0.5 * (pw - s * (b.x1 - b.x0));
    oy = 0.5 * (ph - s * (b.y1 - b.y0));
    sx = sy = s;
  }
  auto px = [&](double x) { return left + ml + ox + (x - b.x0) * sx; };
  auto py = [&](double y) { return mt + ph - oy - (ty(y) - b.y0) * sy; };

  os << "<g>\n<rect x=\"" << num(left + ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw)
     << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  os << "<text x=\"" << num(left + ml + pw / 2) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">"
     << escape(p.title) << "</text>\n";
  os << "<text x=\"" << num(left + ml + pw / 2) << "\" y=\"" << num(height - 8)
     << "\" text-anchor=\"middle\" font-size=\"11\">" << escape(p.x_label) << "</text>\n";
  os << "<text x=\"" << num(left + 14) << "\" y=\"" << num(mt + ph / 2) << "\" text-anchor=\"middle\" font-size=\"11\""
     << " transform=\"rotate(-90 " << num(left + 14) << ' ' << num(mt + ph / 2) << ")\">" << escape(p.y_label)
     << "</text>\n";
  const double ylo = p.log_y ? std::pow(10.0, b.y0) : b.y0;
  const double yhi = p.log_y ? std::pow(10.0, b.y1) : b.y1;
  os << "<text x=\"" << num(left + ml - 4) << "\" y=\"" << num(mt + ph) << "\" text-anchor=\"end\" font-size=\"10\">"
     << tick(ylo) << "</text>\n";
  os << "<text x=\"" << num(left + ml - 4) << "\" y=\"" << num(mt + 10) << "\" text-anchor=\"end\" font-size=\"10\">"
     << tick(yhi) << "</text>\n";
  os << "<text x=\"" << num(left + ml) << "\" y=\"" << num(mt + ph + 14) << "\" font-size=\"10\">" << tick(b.x0)
     << "</text>\n";
  os << "<text x=\"" << num(left + ml + pw) << "\" y=\"" << num(mt + ph + 14)
     << "\" text-anchor=\"end\" font-size=\"10\">" << tick(b.x1) << "</text>\n";

  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const Series& s = p.series[k];
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    os << "<" << (p.closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.4\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (usable(s.x[i], s.y[i])) os << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
    }
    os << "\"/>\n";
    if (!s.label.empty()) {
      const double ly = mt + 14 + 13.0 * static_cast<double>(k);
      os << "<line x1=\"" << num(left + ml + pw - 110) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
         << num(left + ml + pw - 92) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\"/>\n";
      os << "<text x=\"" << num(left + ml + pw - 88) << "\" y=\"" << num(ly) << "\" font-size=\"10\">"
         << escape(s.label) << "</text>\n";
    }
  }
  os << "</g>\n";
}

}  // namespace

std::string render(const std::vector<Panel>& panels, double panel_width, double panel_height) {
  const double total = panel_width * static_cast<double>(std::max<std::size_t>(1, panels.size()));
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(total) << "\" height=\"" << num(panel_height)
     << "\" viewBox=\"0 0 " << num(total) << ' ' << num(panel_height) << "\" font-family=\"sans-serif\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    render_panel(os, panels[i], panel_width * static_cast<double>(i), panel_width, panel_height);
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace loopopt::svg
