#include <string>

#include "doctest.h"
#include "pic/svg_report.hpp"

using namespace pic;

namespace {

size_t count_occurrences(const std::string& hay, const std::string& needle) {
  size_t n = 0;
  for (size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size()))
    ++n;
  return n;
}

std::vector<CurveSeries> sample_curves() {
  return {
      {"ours", {{0.01, 30.0}, {0.02, 33.0}, {0.05, 36.0}, {0.12, 39.0}}},
      {"x264 & friends", {{0.02, 31.0}, {0.04, 34.0}, {0.08, 37.0}}},
  };
}

}  // namespace

TEST_CASE("svg report is structurally sound") {
  const std::string svg = render_rd_svg(sample_curves());
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("width=\"720\"") != std::string::npos);
  CHECK(svg.find("height=\"480\"") != std::string::npos);

  // One polyline per series, one marker per point.
  CHECK(count_occurrences(svg, "<polyline") == 2);
  CHECK(count_occurrences(svg, "<circle") == 7);

  // Legend labels present, with xml escaping applied.
  CHECK(svg.find("ours") != std::string::npos);
  CHECK(svg.find("x264 &amp; friends") != std::string::npos);
  CHECK(svg.find(" & ") == std::string::npos);

  // Axis labels.
  CHECK(svg.find("bits per pixel") != std::string::npos);
  CHECK(svg.find("weighted PSNR (dB)") != std::string::npos);
}

TEST_CASE("svg handles custom size and degenerate extents") {
  const std::string svg = render_rd_svg(
      {{"single", {{0.05, 32.0}, {0.05, 32.0}}}}, 400, 300);
  CHECK(svg.find("width=\"400\"") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
  CHECK(svg.find("inf") == std::string::npos);

  CHECK_THROWS_AS(render_rd_svg({}), BadParameter);
  CHECK_THROWS_AS(render_rd_svg({{"empty", {}}}), BadParameter);
}

TEST_CASE("csv report lists every point under a header") {
  const std::string csv = render_rd_csv(sample_curves());
  CHECK(csv.rfind("curve,bpp,psnr\n", 0) == 0);
  CHECK(count_occurrences(csv, "\n") == 8);  // header + 7 points
  CHECK(csv.find("ours,0.01,30") != std::string::npos);
  // Labels with commas or quotes get quoted.
  const std::string quoted =
      render_rd_csv({{"a,b", {{0.01, 30.0}, {0.02, 33.0}}}});
  CHECK(quoted.find("\"a,b\",0.01,30") != std::string::npos);
}
