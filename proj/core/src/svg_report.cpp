#include "pic/svg_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "pic/errors.hpp"

namespace pic {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
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

std::string escape_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string render_rd_svg(const std::vector<CurveSeries>& curves, int width, int height) {
  size_t total_points = 0;
  for (const CurveSeries& c : curves) total_points += c.points.size();
  if (total_points == 0) throw BadParameter("nothing to plot");

  double min_bpp = std::numeric_limits<double>::infinity(), max_bpp = -min_bpp;
  double min_psnr = min_bpp, max_psnr = -min_bpp;
  for (const CurveSeries& c : curves) {
    for (const RDPoint& p : c.points) {
      min_bpp = std::min(min_bpp, p.bpp);
      max_bpp = std::max(max_bpp, p.bpp);
      min_psnr = std::min(min_psnr, p.psnr);
      max_psnr = std::max(max_psnr, p.psnr);
    }
  }
  // Degenerate spans still need a visible box.
  if (max_bpp - min_bpp < 1e-12) {
    min_bpp -= 0.5;
    max_bpp += 0.5;
  }
  if (max_psnr - min_psnr < 1e-12) {
    min_psnr -= 0.5;
    max_psnr += 0.5;
  }

  const double ml = 64, mr = 16, mt = 16, mb = 48;  // margins
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto sx = [&](double bpp) { return ml + (bpp - min_bpp) / (max_bpp - min_bpp) * pw; };
  auto sy = [&](double psnr) { return mt + ph - (psnr - min_psnr) / (max_psnr - min_psnr) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw)
      << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"#333\"/>\n";

  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double f = double(i) / ticks;
    const double bx = min_bpp + f * (max_bpp - min_bpp);
    const double py = min_psnr + f * (max_psnr - min_psnr);
    const double x = sx(bx), y = sy(py);
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << fmt(mt + ph + 5) << "\" stroke=\"#333\"/>\n";
    svg << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(mt + ph + 18)
        << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << fmt(bx) << "</text>\n";
    svg << "<line x1=\"" << fmt(ml - 5) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(ml)
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#333\"/>\n";
    svg << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(y + 4)
        << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" << fmt(py)
        << "</text>\n";
  }
  svg << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(double(height) - 8)
      << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
         "bits per pixel</text>\n";
  svg << "<text x=\"14\" y=\"" << fmt(mt + ph / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 14 "
      << fmt(mt + ph / 2) << ")\">weighted PSNR (dB)</text>\n";

  for (size_t ci = 0; ci < curves.size(); ++ci) {
    const CurveSeries& c = curves[ci];
    if (c.points.empty()) continue;
    const char* color = kPalette[ci % (sizeof kPalette / sizeof kPalette[0])];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const RDPoint& p : c.points) svg << fmt(sx(p.bpp)) << "," << fmt(sy(p.psnr)) << " ";
    svg << "\"/>\n";
    for (const RDPoint& p : c.points) {
      svg << "<circle cx=\"" << fmt(sx(p.bpp)) << "\" cy=\"" << fmt(sy(p.psnr))
          << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
  }

  // Legend, top-left inside the plot box.
  for (size_t ci = 0; ci < curves.size(); ++ci) {
    const char* color = kPalette[ci % (sizeof kPalette / sizeof kPalette[0])];
    const double y = mt + 16 + 16 * double(ci);
    svg << "<line x1=\"" << fmt(ml + 10) << "\" y1=\"" << fmt(y - 4) << "\" x2=\""
        << fmt(ml + 30) << "\" y2=\"" << fmt(y - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fmt(ml + 36) << "\" y=\"" << fmt(y)
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << escape_xml(curves[ci].label)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_rd_csv(const std::vector<CurveSeries>& curves) {
  std::ostringstream csv;
  csv << "curve,bpp,psnr\n";
  char buf[64];
  for (const CurveSeries& c : curves) {
    for (const RDPoint& p : c.points) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", p.bpp, p.psnr);
      csv << escape_csv(c.label) << "," << buf << "\n";
    }
  }
  return csv.str();
}

}  // namespace pic
