// Quality-parameter schedule: qp in [0,63] maps to a Lagrange multiplier
// (log-linear between the endpoints) and a quantization step (proportional
// to sqrt(lambda), the high-rate RD-slope matching rule).
#pragma once

#include <array>
#include <cstdint>

namespace pic {

struct QualityConfig {
  int base_qp = 32;
  std::array<int, 8> qp_offsets{0, 1, 0, 2, 0, 2, 0, 2};
  double lambda_min = 2e-5;
  double lambda_max = 1.8e-3;
  int reset_period = 32;   // frames between temporal-reference drops
  double step_ref = 12.0;  // quantization step at qp 63

  void check() const;  // throws BadParameter / QpOutOfRange
};

inline constexpr int kQpMax = 63;

double lambda_of_qp(int qp, const QualityConfig& cfg);
double step_of_qp(int qp, const QualityConfig& cfg);

// base_qp plus the per-8-frame-group offset, clamped to [0, 63].
int qp_of_frame(int base_qp, int64_t frame_index, const QualityConfig& cfg);

}  // namespace pic
