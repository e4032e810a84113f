// Minimal hand-rolled RD plot output: one SVG with axes, ticks, one
// polyline per curve and a legend, plus a flat CSV of the same points.
#pragma once

#include <string>
#include <vector>

#include "pic/rd_curve.hpp"

namespace pic {

struct CurveSeries {
  std::string label;
  std::vector<RDPoint> points;
};

// Throws BadParameter when there are no points to plot.
std::string render_rd_svg(const std::vector<CurveSeries>& curves, int width = 720,
                          int height = 480);

// Header "curve,bpp,psnr", one row per point, curves in input order.
std::string render_rd_csv(const std::vector<CurveSeries>& curves);

}  // namespace pic
