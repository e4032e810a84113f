// Rate-distortion sample points and validated monotone curves.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pic/errors.hpp"

namespace pic {

struct RDPoint {
  double bpp = 0.0;   // bits per luma sample, > 0 and finite
  double psnr = 0.0;  // dB, finite
};

// At least four points, strictly increasing in both psnr and bpp once sorted
// by psnr. Lossless (+inf psnr) points are rejected; drop them before
// constructing a curve.
class RDCurve {
public:
  explicit RDCurve(std::vector<RDPoint> points);

  const std::vector<RDPoint>& points() const { return points_; }
  double min_psnr() const { return points_.front().psnr; }
  double max_psnr() const { return points_.back().psnr; }

private:
  std::vector<RDPoint> points_;
};

// JSON array of {"bpp": ..., "psnr": ...} objects.
std::string rd_points_to_json(const std::vector<RDPoint>& points);
std::vector<RDPoint> rd_points_from_json(const std::string& text);
RDCurve load_rd_curve(const std::filesystem::path& path);
void save_rd_points(const std::vector<RDPoint>& points,
                    const std::filesystem::path& path);

}  // namespace pic
