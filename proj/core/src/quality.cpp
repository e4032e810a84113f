#include "pic/quality.hpp"

#include <algorithm>
#include <cmath>

#include "pic/errors.hpp"

namespace pic {

void QualityConfig::check() const {
  if (base_qp < 0 || base_qp > kQpMax) throw QpOutOfRange("base_qp must be in [0, 63]");
  if (reset_period < 1) throw BadParameter("reset_period must be at least 1");
  if (!(lambda_min > 0.0) || !(lambda_min < lambda_max)) {
    throw BadParameter("need 0 < lambda_min < lambda_max");
  }
  if (!(step_ref > 0.0)) throw BadParameter("step_ref must be positive");
}

double lambda_of_qp(int qp, const QualityConfig& cfg) {
  if (qp < 0 || qp > kQpMax) throw QpOutOfRange("qp must be in [0, 63]");
  cfg.check();
  return cfg.lambda_min * std::pow(cfg.lambda_max / cfg.lambda_min, double(qp) / double(kQpMax));
}

double step_of_qp(int qp, const QualityConfig& cfg) {
  return cfg.step_ref * std::sqrt(lambda_of_qp(qp, cfg) / cfg.lambda_max);
}

int qp_of_frame(int base_qp, int64_t frame_index, const QualityConfig& cfg) {
  const int offset = cfg.qp_offsets[size_t(frame_index % 8)];
  return std::clamp(base_qp + offset, 0, kQpMax);
}

}  // namespace pic
