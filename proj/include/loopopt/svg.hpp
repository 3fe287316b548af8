#pragma once

#include <string>
#include <vector>

namespace loopopt::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  bool equal_aspect = false;
  bool closed = false;  // close each polyline (curve overlays)
  std::vector<Series> series;
};

/// Side-by-side panels in one SVG document.
std::string render(const std::vector<Panel>& panels, double panel_width = 420.0,
                   double panel_height = 340.0);

}  // namespace loopopt::svg
