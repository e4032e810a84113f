// Frame coding against the learned scene prior. Prediction mixes the
// previous reconstruction with the background per block; the residual is
// quantized and range-coded under per-block Laplacian models. Encoder and
// decoder run the same real-valued reconstruction loop, so their states
// match bit-for-bit on one platform/build.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pic/frame.hpp"
#include "pic/model_params.hpp"
#include "pic/quality.hpp"

namespace pic {

// Real-valued YUV420 planes: reconstruction state before 8-bit output
// clamping. Keeping reals avoids encoder/decoder drift from intermediate
// rounding.
struct Planes {
  int width = 0;
  int height = 0;
  std::vector<double> y;
  std::vector<double> u;
  std::vector<double> v;
};

Planes make_planes(int width, int height);
// Clamp and round (half away from zero) to an 8-bit frame.
Frame to_frame(const Planes& planes);

struct CodecState {
  std::optional<Planes> prev_recon;  // absent before the first frame
  int64_t frame_index = 0;
};

struct FrameStats {
  int64_t frame_index = 0;
  int qp = 0;
  double step = 0.0;
  size_t payload_bytes = 0;
  double est_bits = 0.0;     // ideal code length under the coded models
  double actual_bits = 0.0;  // 8 * payload_bytes
};

// Block-mixed prediction: at reset frames (frame_index % reset_period == 0)
// or with no previous reconstruction, the background alone; otherwise per
// block sigmoid(mix_logit) * prev + (1 - sigmoid) * background. Chroma
// blocks share the co-located luma block's parameters.
Planes predict(const ModelParams& params, const CodecState& state, const QualityConfig& cfg);

struct EncodedFrame {
  std::vector<uint8_t> payload;
  Planes recon;
  FrameStats stats;
};

// Encodes one frame at qp_of_frame(cfg.base_qp, state.frame_index) and
// advances the state (prev_recon, frame_index) exactly as decoding will.
EncodedFrame encode_frame(const Frame& frame, const ModelParams& params,
                          const QualityConfig& cfg, CodecState& state);

// Mirror of encode_frame; returns the reconstruction.
Planes decode_frame(std::span<const uint8_t> payload, const ModelParams& params,
                    const QualityConfig& cfg, CodecState& state);

// Container: geometry, base qp, and the digest of the parameters used at
// encode time, then the per-frame payloads. Everything else about the
// coding configuration travels out of band with the model.
struct Bitstream {
  int width = 0;
  int height = 0;
  int base_qp = 0;
  uint64_t model_digest = 0;
  std::vector<std::vector<uint8_t>> payloads;

  size_t payload_bytes() const;
};

std::vector<uint8_t> serialize_bitstream(const Bitstream& stream);
Bitstream parse_bitstream(std::span<const uint8_t> data);
void save_bitstream(const Bitstream& stream, const std::string& path);
Bitstream load_bitstream(const std::string& path);

struct EncodeResult {
  Bitstream stream;
  std::vector<FrameStats> frame_stats;
  VideoClip recon;  // encoder-side clamped reconstruction
  double bpp = 0.0; // 8 * payload_bytes / (w * h * frames)
};

EncodeResult encode_video(const VideoClip& clip, const ModelParams& params,
                          const QualityConfig& cfg);

// Validates geometry and the model digest, then decodes every frame. The
// header's base_qp overrides cfg.base_qp; the rest of cfg (offsets, reset
// period, step schedule) must match the encoder's, as it is not signaled.
VideoClip decode_video(const Bitstream& stream, const ModelParams& params,
                       const QualityConfig& cfg = {});

}  // namespace pic
