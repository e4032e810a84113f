// Distortion, quality, rate, and clip-classification measurements.
#pragma once

#include <cstdint>
#include <string>

#include "pic/frame.hpp"

namespace pic {

// Per-plane weights for the training distortion. The default 6:1:1 weighting
// favours luma over chroma.
struct DistortionWeights {
  double w_y = 6.0;
  double w_u = 1.0;
  double w_v = 1.0;

  void check() const;
};

// Quality summary for one frame (or an average over frames). PSNR values may
// be +infinity when the corresponding plane is identical.
struct QualityReport {
  double psnr_y = 0.0;
  double psnr_u = 0.0;
  double psnr_v = 0.0;
  double psnr_weighted = 0.0;
  double mse_weighted = 0.0;
  double bpp = 0.0;

  std::string to_json() const;  // flat object with the field names above
};

// (w_y*MSE_Y + w_u*MSE_U + w_v*MSE_V) / (w_y+w_u+w_v), each plane MSE over
// its own sample count, 8-bit scale.
double weighted_mse(const Frame& a, const Frame& b,
                    const DistortionWeights& w = {});

// Per-plane PSNR at 255 peak plus the 6:1:1/8 weighted combination. A zero
// plane MSE yields +infinity for that plane and for the combination.
QualityReport weighted_yuv_psnr(const Frame& a, const Frame& b);

double psnr_from_mse(double mse);                                // 10*log10(255^2/mse)
double weighted_psnr_combine(double py, double pu, double pv);   // (6y+u+v)/8

// total_bits / (width*height*n_frames); "pixel" counts luma samples only.
double bpp(uint64_t total_bits, int width, int height, int n_frames);

// Mean over consecutive frame pairs of the mean absolute Y difference,
// normalized by 255. Needs at least two frames.
double change_intensity(const VideoClip& clip);

enum class MotionClass { Static, Dynamic };

// Static iff change_intensity(clip) < threshold (strict).
MotionClass classify_static(const VideoClip& clip, double threshold = 0.01);

}  // namespace pic
