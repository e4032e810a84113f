// The learned scene prior: background planes plus per-block mixing logits
// and entropy log-scales. Shared out-of-band between encoder and decoder;
// the bitstream only carries its digest.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pic {

// Edge length of the luma blocks that share one mixing logit and one
// entropy scale. Chroma uses the co-located 8x8 block.
inline constexpr int kBlockSize = 16;

struct ModelParams {
  int width = 0;
  int height = 0;
  std::string scene_id;
  int64_t train_step = 0;

  // Unclamped real-valued planes, frame geometry (4:2:0).
  std::vector<double> bg_y;
  std::vector<double> bg_u;
  std::vector<double> bg_v;
  // One value per 16x16 luma block, row-major grid.
  std::vector<double> mix_logits;
  std::vector<double> log_scales_y;
  std::vector<double> log_scales_uv;

  int grid_w() const { return (width + kBlockSize - 1) / kBlockSize; }
  int grid_h() const { return (height + kBlockSize - 1) / kBlockSize; }

  // Throws GeometryMismatch unless every array length matches the
  // frame/grid geometry.
  void check() const;

  // FNV-1a over the canonical serialization: all parameter arrays, in
  // declared order, as little-endian 32-bit floats. This is the value
  // bitstream headers carry.
  uint64_t content_digest() const;
};

// Geometry-sized params with zeroed arrays (callers fill them in;
// init_params in the trainer gives the useful cold start).
ModelParams make_params(int width, int height, std::string scene_id);

// Sidecar checkpoint format: "PICM" magic, version, geometry, scene id,
// train step, then the f32 parameter arrays.
std::vector<uint8_t> serialize_params(const ModelParams& params);
ModelParams parse_params(std::span<const uint8_t> data);

void save_params(const ModelParams& params, const std::string& path);
ModelParams load_params(const std::string& path);

}  // namespace pic
