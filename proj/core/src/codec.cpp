#include "pic/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <unordered_map>

#include "pic/errors.hpp"
#include "pic/metrics.hpp"
#include "pic/range_coder.hpp"
#include "wire.hpp"

namespace pic {

namespace {

constexpr uint8_t kMagic[4] = {'P', 'I', 'C', '1'};
constexpr uint8_t kVersion = 1;

// Learned parameters are read through 32-bit float precision on both coder
// sides, so freshly trained (double) and reloaded (f32) parameters drive
// identical predictions.
double wire_value(double param) { return double(float(param)); }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// One entropy model per distinct log-scale value per frame. The scale is
// keyed by its float bits: that is exactly the wire precision, so cache
// hits are equivalences, not approximations.
class BlockModelCache {
public:
  BlockModelCache(double step, int k_max) : step_(step), k_max_(k_max) {}

  const SymbolModel& get(double log_scale) {
    const float ls = std::clamp(float(log_scale), -20.0f, 20.0f);
    const uint32_t key = std::bit_cast<uint32_t>(ls);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      const double b_sym = std::exp(double(ls)) / step_;  // scale in symbol units
      it = cache_.emplace(key, laplace_model(b_sym, 1.0, k_max_)).first;
    }
    return it->second;
  }

private:
  double step_;
  int k_max_;
  std::unordered_map<uint32_t, SymbolModel> cache_;
};

void blend_plane(std::span<const double> bg, std::span<const double> prev,
                 std::span<double> out, int pw, int ph, int block,
                 const std::vector<double>& mix, int grid_w) {
  const int bw = (pw + block - 1) / block;
  const int bh = (ph + block - 1) / block;
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      const double s = sigmoid(wire_value(mix[size_t(by) * size_t(grid_w) + size_t(bx)]));
      const int y1 = std::min((by + 1) * block, ph);
      const int x1 = std::min((bx + 1) * block, pw);
      for (int y = by * block; y < y1; ++y) {
        for (int x = bx * block; x < x1; ++x) {
          const size_t i = size_t(y) * size_t(pw) + size_t(x);
          out[i] = s * prev[i] + (1.0 - s) * wire_value(bg[i]);
        }
      }
    }
  }
}

void encode_plane(std::span<const uint8_t> src, std::span<const double> pred,
                  std::span<double> recon, int pw, int ph, int block,
                  const std::vector<double>& log_scales, int grid_w, double step,
                  int k_max, BlockModelCache& cache, RangeEncoder& enc,
                  double& est_bits) {
  const int bw = (pw + block - 1) / block;
  const int bh = (ph + block - 1) / block;
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      const SymbolModel& model = cache.get(log_scales[size_t(by) * size_t(grid_w) + size_t(bx)]);
      const int y1 = std::min((by + 1) * block, ph);
      const int x1 = std::min((bx + 1) * block, pw);
      for (int y = by * block; y < y1; ++y) {
        for (int x = bx * block; x < x1; ++x) {
          const size_t i = size_t(y) * size_t(pw) + size_t(x);
          const double r = double(src[i]) - pred[i];
          const long q = std::clamp(std::lround(r / step), long(-k_max), long(k_max));
          const int symbol = int(q) + k_max;
          enc.encode(model, symbol);
          est_bits += model.bit_cost(symbol);
          recon[i] = pred[i] + step * double(q);
        }
      }
    }
  }
}

void decode_plane(std::span<const double> pred, std::span<double> recon, int pw,
                  int ph, int block, const std::vector<double>& log_scales,
                  int grid_w, double step, int k_max, BlockModelCache& cache,
                  RangeDecoder& dec) {
  const int bw = (pw + block - 1) / block;
  const int bh = (ph + block - 1) / block;
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      const SymbolModel& model = cache.get(log_scales[size_t(by) * size_t(grid_w) + size_t(bx)]);
      const int y1 = std::min((by + 1) * block, ph);
      const int x1 = std::min((bx + 1) * block, pw);
      for (int y = by * block; y < y1; ++y) {
        for (int x = bx * block; x < x1; ++x) {
          const size_t i = size_t(y) * size_t(pw) + size_t(x);
          const int q = dec.decode(model) - k_max;
          recon[i] = pred[i] + step * double(q);
        }
      }
    }
  }
}

}  // namespace

Planes make_planes(int width, int height) {
  Planes p;
  p.width = width;
  p.height = height;
  p.y.assign(size_t(width) * size_t(height), 0.0);
  p.u.assign(size_t(width / 2) * size_t(height / 2), 0.0);
  p.v.assign(size_t(width / 2) * size_t(height / 2), 0.0);
  return p;
}

Frame to_frame(const Planes& planes) {
  Frame f(planes.width, planes.height);
  auto clamp8 = [](double v) {
    return uint8_t(std::clamp(std::lround(v), 0l, 255l));
  };
  for (size_t i = 0; i < f.y.size(); ++i) f.y[i] = clamp8(planes.y[i]);
  for (size_t i = 0; i < f.u.size(); ++i) f.u[i] = clamp8(planes.u[i]);
  for (size_t i = 0; i < f.v.size(); ++i) f.v[i] = clamp8(planes.v[i]);
  return f;
}

Planes predict(const ModelParams& params, const CodecState& state, const QualityConfig& cfg) {
  params.check();
  cfg.check();
  const bool reset =
      !state.prev_recon.has_value() || state.frame_index % cfg.reset_period == 0;
  Planes out = make_planes(params.width, params.height);
  if (reset) {
    for (size_t i = 0; i < out.y.size(); ++i) out.y[i] = wire_value(params.bg_y[i]);
    for (size_t i = 0; i < out.u.size(); ++i) out.u[i] = wire_value(params.bg_u[i]);
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] = wire_value(params.bg_v[i]);
    return out;
  }
  const Planes& prev = *state.prev_recon;
  if (prev.width != params.width || prev.height != params.height) {
    throw GeometryMismatch("previous reconstruction does not match model geometry");
  }
  const int gw = params.grid_w();
  blend_plane(params.bg_y, prev.y, out.y, params.width, params.height, kBlockSize,
              params.mix_logits, gw);
  blend_plane(params.bg_u, prev.u, out.u, params.width / 2, params.height / 2,
              kBlockSize / 2, params.mix_logits, gw);
  blend_plane(params.bg_v, prev.v, out.v, params.width / 2, params.height / 2,
              kBlockSize / 2, params.mix_logits, gw);
  return out;
}

EncodedFrame encode_frame(const Frame& frame, const ModelParams& params,
                          const QualityConfig& cfg, CodecState& state) {
  frame.check();
  if (frame.width != params.width || frame.height != params.height) {
    throw GeometryMismatch("frame does not match model geometry");
  }
  const int qp = qp_of_frame(cfg.base_qp, state.frame_index, cfg);
  const double step = step_of_qp(qp, cfg);
  const int k_max = int(std::ceil(255.0 / step));

  EncodedFrame out;
  out.recon = make_planes(params.width, params.height);
  const Planes pred = predict(params, state, cfg);

  RangeEncoder enc;
  BlockModelCache cache(step, k_max);
  double est_bits = 0.0;
  const int gw = params.grid_w();
  encode_plane(frame.y, pred.y, out.recon.y, params.width, params.height,
               kBlockSize, params.log_scales_y, gw, step, k_max, cache, enc, est_bits);
  encode_plane(frame.u, pred.u, out.recon.u, params.width / 2, params.height / 2,
               kBlockSize / 2, params.log_scales_uv, gw, step, k_max, cache, enc, est_bits);
  encode_plane(frame.v, pred.v, out.recon.v, params.width / 2, params.height / 2,
               kBlockSize / 2, params.log_scales_uv, gw, step, k_max, cache, enc, est_bits);
  out.payload = enc.finish();

  out.stats.frame_index = state.frame_index;
  out.stats.qp = qp;
  out.stats.step = step;
  out.stats.payload_bytes = out.payload.size();
  out.stats.est_bits = est_bits;
  out.stats.actual_bits = 8.0 * double(out.payload.size());

  state.prev_recon = out.recon;
  state.frame_index += 1;
  return out;
}

Planes decode_frame(std::span<const uint8_t> payload, const ModelParams& params,
                    const QualityConfig& cfg, CodecState& state) {
  const int qp = qp_of_frame(cfg.base_qp, state.frame_index, cfg);
  const double step = step_of_qp(qp, cfg);
  const int k_max = int(std::ceil(255.0 / step));

  const Planes pred = predict(params, state, cfg);
  Planes recon = make_planes(params.width, params.height);
  try {
    RangeDecoder dec(payload);
    BlockModelCache cache(step, k_max);
    const int gw = params.grid_w();
    decode_plane(pred.y, recon.y, params.width, params.height, kBlockSize,
                 params.log_scales_y, gw, step, k_max, cache, dec);
    decode_plane(pred.u, recon.u, params.width / 2, params.height / 2,
                 kBlockSize / 2, params.log_scales_uv, gw, step, k_max, cache, dec);
    decode_plane(pred.v, recon.v, params.width / 2, params.height / 2,
                 kBlockSize / 2, params.log_scales_uv, gw, step, k_max, cache, dec);
  } catch (const TruncatedStream&) {
    throw TruncatedPayload("frame payload ended before all symbols were decoded");
  }

  state.prev_recon = recon;
  state.frame_index += 1;
  return recon;
}

size_t Bitstream::payload_bytes() const {
  size_t total = 0;
  for (const auto& p : payloads) total += p.size();
  return total;
}

std::vector<uint8_t> serialize_bitstream(const Bitstream& stream) {
  std::vector<uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  wire::put_u8(out, kVersion);
  wire::put_u32(out, uint32_t(stream.width));
  wire::put_u32(out, uint32_t(stream.height));
  wire::put_u32(out, uint32_t(stream.payloads.size()));
  wire::put_u8(out, uint8_t(stream.base_qp));
  wire::put_u64(out, stream.model_digest);
  for (const auto& p : stream.payloads) {
    wire::put_u32(out, uint32_t(p.size()));
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

Bitstream parse_bitstream(std::span<const uint8_t> data) {
  wire::Reader r(data);
  uint8_t magic[4];
  r.bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kMagic)) throw BadContainer("not a coded video stream");
  if (r.u8() != kVersion) throw BadContainer("unsupported stream version");
  Bitstream s;
  s.width = int(r.u32());
  s.height = int(r.u32());
  const uint32_t frame_count = r.u32();
  s.base_qp = int(r.u8());
  s.model_digest = r.u64();
  if (s.width < 2 || s.height < 2 || s.width % 2 != 0 || s.height % 2 != 0 ||
      s.width > (1 << 16) || s.height > (1 << 16)) {
    throw BadContainer("bad geometry in stream header");
  }
  if (s.base_qp > kQpMax) throw BadContainer("bad base qp in stream header");
  s.payloads.reserve(frame_count);
  for (uint32_t i = 0; i < frame_count; ++i) {
    const uint32_t len = r.u32();
    const auto bytes = r.take(len);
    s.payloads.emplace_back(bytes.begin(), bytes.end());
  }
  if (!r.done()) throw BadContainer("trailing bytes after last frame payload");
  return s;
}

void save_bitstream(const Bitstream& stream, const std::string& path) {
  const std::vector<uint8_t> bytes = serialize_bitstream(stream);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

Bitstream load_bitstream(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_bitstream(bytes);
}

EncodeResult encode_video(const VideoClip& clip, const ModelParams& params,
                          const QualityConfig& cfg) {
  clip.check();
  params.check();
  cfg.check();
  if (clip.width() != params.width || clip.height() != params.height) {
    throw GeometryMismatch("clip does not match model geometry");
  }
  EncodeResult res;
  res.stream.width = params.width;
  res.stream.height = params.height;
  res.stream.base_qp = cfg.base_qp;
  res.stream.model_digest = params.content_digest();
  res.recon.fps_num = clip.fps_num;
  res.recon.fps_den = clip.fps_den;

  CodecState state;
  for (const Frame& frame : clip.frames) {
    EncodedFrame ef = encode_frame(frame, params, cfg, state);
    res.stream.payloads.push_back(std::move(ef.payload));
    res.frame_stats.push_back(ef.stats);
    res.recon.frames.push_back(to_frame(ef.recon));
  }
  res.bpp = bpp(8 * res.stream.payload_bytes(), params.width, params.height,
                int(clip.frames.size()));
  return res;
}

VideoClip decode_video(const Bitstream& stream, const ModelParams& params,
                       const QualityConfig& cfg) {
  params.check();
  if (stream.width != params.width || stream.height != params.height) {
    throw GeometryMismatch("stream geometry does not match model");
  }
  if (stream.model_digest != params.content_digest()) {
    throw DigestMismatch("stream was encoded with different model parameters");
  }
  QualityConfig effective = cfg;
  effective.base_qp = stream.base_qp;
  effective.check();

  VideoClip out;
  CodecState state;
  for (const auto& payload : stream.payloads) {
    out.frames.push_back(to_frame(decode_frame(payload, params, effective, state)));
  }
  return out;
}

}  // namespace pic
