#include "pic/metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include <nlohmann/json.hpp>

namespace pic {

namespace {

double plane_mse(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
  uint64_t sum_sq = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int d = int(a[i]) - int(b[i]);
    sum_sq += uint64_t(int64_t(d) * d);
  }
  return double(sum_sq) / double(a.size());
}

void require_same_geometry(const Frame& a, const Frame& b) {
  a.check();
  b.check();
  if (!a.same_geometry(b)) {
    throw DimensionMismatch("frames are " + std::to_string(a.width) + "x" +
                            std::to_string(a.height) + " vs " +
                            std::to_string(b.width) + "x" +
                            std::to_string(b.height));
  }
}

}  // namespace

void DistortionWeights::check() const {
  if (w_y < 0 || w_u < 0 || w_v < 0 || w_y + w_u + w_v <= 0) {
    throw BadParameter("distortion weights must be nonnegative with positive sum");
  }
}

double weighted_mse(const Frame& a, const Frame& b, const DistortionWeights& w) {
  require_same_geometry(a, b);
  w.check();
  double mse_y = plane_mse(a.y, b.y);
  double mse_u = plane_mse(a.u, b.u);
  double mse_v = plane_mse(a.v, b.v);
  return (w.w_y * mse_y + w.w_u * mse_u + w.w_v * mse_v) / (w.w_y + w.w_u + w.w_v);
}

double psnr_from_mse(double mse) {
  if (mse <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double weighted_psnr_combine(double py, double pu, double pv) {
  return (6.0 * py + pu + pv) / 8.0;
}

QualityReport weighted_yuv_psnr(const Frame& a, const Frame& b) {
  require_same_geometry(a, b);
  double mse_y = plane_mse(a.y, b.y);
  double mse_u = plane_mse(a.u, b.u);
  double mse_v = plane_mse(a.v, b.v);
  QualityReport report;
  report.psnr_y = psnr_from_mse(mse_y);
  report.psnr_u = psnr_from_mse(mse_u);
  report.psnr_v = psnr_from_mse(mse_v);
  report.psnr_weighted =
      weighted_psnr_combine(report.psnr_y, report.psnr_u, report.psnr_v);
  report.mse_weighted = (6.0 * mse_y + mse_u + mse_v) / 8.0;
  return report;
}

std::string QualityReport::to_json() const {
  nlohmann::json j{{"psnr_y", psnr_y},
                   {"psnr_u", psnr_u},
                   {"psnr_v", psnr_v},
                   {"psnr_weighted", psnr_weighted},
                   {"mse_weighted", mse_weighted},
                   {"bpp", bpp}};
  return j.dump();
}

double bpp(uint64_t total_bits, int width, int height, int n_frames) {
  double denom = double(width) * height * n_frames;
  if (width <= 0 || height <= 0 || n_frames <= 0) {
    throw ZeroDenominator("bpp denominator must be positive");
  }
  return double(total_bits) / denom;
}

double change_intensity(const VideoClip& clip) {
  clip.check();
  if (clip.frames.size() < 2) {
    throw ClipTooShort("change intensity needs at least 2 frames");
  }
  double pair_sum = 0.0;
  for (size_t i = 1; i < clip.frames.size(); ++i) {
    const auto& prev = clip.frames[i - 1].y;
    const auto& cur = clip.frames[i].y;
    uint64_t abs_sum = 0;
    for (size_t s = 0; s < cur.size(); ++s) {
      abs_sum += uint64_t(std::abs(int(cur[s]) - int(prev[s])));
    }
    pair_sum += double(abs_sum) / double(cur.size());
  }
  return pair_sum / (double(clip.frames.size() - 1) * 255.0);
}

MotionClass classify_static(const VideoClip& clip, double threshold) {
  return change_intensity(clip) < threshold ? MotionClass::Static
                                            : MotionClass::Dynamic;
}

}  // namespace pic
