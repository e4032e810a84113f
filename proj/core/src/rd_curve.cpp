#include "pic/rd_curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pic {

RDCurve::RDCurve(std::vector<RDPoint> points) : points_(std::move(points)) {
  if (points_.size() < 4) {
    throw TooFewPoints("an RD curve needs at least 4 points, got " +
                       std::to_string(points_.size()));
  }
  for (const RDPoint& p : points_) {
    if (!std::isfinite(p.psnr)) {
      throw InfinitePsnrPoint("lossless points are not representable on an RD curve");
    }
    if (!(p.bpp > 0.0) || !std::isfinite(p.bpp)) {
      throw NonMonotoneCurve("bpp must be positive and finite, got " +
                             std::to_string(p.bpp));
    }
  }
  std::sort(points_.begin(), points_.end(),
            [](const RDPoint& a, const RDPoint& b) { return a.psnr < b.psnr; });
  for (size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i].psnr > points_[i - 1].psnr) ||
        !(points_[i].bpp > points_[i - 1].bpp)) {
      throw NonMonotoneCurve("psnr and bpp must be strictly increasing together");
    }
  }
}

std::string rd_points_to_json(const std::vector<RDPoint>& points) {
  nlohmann::json arr = nlohmann::json::array();
  for (const RDPoint& p : points) {
    arr.push_back({{"bpp", p.bpp}, {"psnr", p.psnr}});
  }
  return arr.dump();
}

std::vector<RDPoint> rd_points_from_json(const std::string& text) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw NonMonotoneCurve(std::string("invalid RD curve JSON: ") + e.what());
  }
  if (!arr.is_array()) throw NonMonotoneCurve("RD curve JSON must be an array");
  std::vector<RDPoint> points;
  for (const auto& item : arr) {
    if (!item.is_object() || !item.contains("bpp") || !item.contains("psnr")) {
      throw NonMonotoneCurve("RD point must be an object with bpp and psnr");
    }
    points.push_back({item["bpp"].get<double>(), item["psnr"].get<double>()});
  }
  return points;
}

RDCurve load_rd_curve(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return RDCurve(rd_points_from_json(buf.str()));
}

void save_rd_points(const std::vector<RDPoint>& points,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path.string());
  out << rd_points_to_json(points) << "\n";
}

}  // namespace pic
