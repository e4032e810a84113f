#include "pic/model_params.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>

#include "pic/errors.hpp"
#include "wire.hpp"

namespace pic {

namespace {

constexpr uint8_t kMagic[4] = {'P', 'I', 'C', 'M'};
constexpr uint8_t kVersion = 1;

size_t luma_samples(int w, int h) { return size_t(w) * size_t(h); }
size_t chroma_samples(int w, int h) { return size_t(w / 2) * size_t(h / 2); }

void append_f32_array(std::vector<uint8_t>& out, const std::vector<double>& v) {
  for (double d : v) wire::put_f32(out, float(d));
}

std::vector<double> read_f32_array(wire::Reader& r, size_t n) {
  std::vector<double> v(n);
  for (size_t i = 0; i < n; ++i) v[i] = double(r.f32());
  return v;
}

}  // namespace

void ModelParams::check() const {
  if (width < 2 || height < 2 || width % 2 != 0 || height % 2 != 0) {
    throw GeometryMismatch("model geometry must be even and at least 2x2");
  }
  const size_t grid = size_t(grid_w()) * size_t(grid_h());
  if (bg_y.size() != luma_samples(width, height) ||
      bg_u.size() != chroma_samples(width, height) ||
      bg_v.size() != chroma_samples(width, height) ||
      mix_logits.size() != grid || log_scales_y.size() != grid ||
      log_scales_uv.size() != grid) {
    throw GeometryMismatch("parameter array sizes do not match geometry");
  }
}

uint64_t ModelParams::content_digest() const {
  uint64_t h = 14695981039346656037ull;
  auto mix = [&](const std::vector<double>& v) {
    for (double d : v) {
      const uint32_t bits = std::bit_cast<uint32_t>(float(d));
      for (int i = 0; i < 4; ++i) {
        h ^= (bits >> (8 * i)) & 0xFFu;
        h *= 1099511628211ull;
      }
    }
  };
  mix(bg_y);
  mix(bg_u);
  mix(bg_v);
  mix(mix_logits);
  mix(log_scales_y);
  mix(log_scales_uv);
  return h;
}

ModelParams make_params(int width, int height, std::string scene_id) {
  ModelParams p;
  p.width = width;
  p.height = height;
  p.scene_id = std::move(scene_id);
  p.bg_y.assign(luma_samples(width, height), 0.0);
  p.bg_u.assign(chroma_samples(width, height), 0.0);
  p.bg_v.assign(chroma_samples(width, height), 0.0);
  const size_t grid = size_t(p.grid_w()) * size_t(p.grid_h());
  p.mix_logits.assign(grid, 0.0);
  p.log_scales_y.assign(grid, 0.0);
  p.log_scales_uv.assign(grid, 0.0);
  p.check();
  return p;
}

std::vector<uint8_t> serialize_params(const ModelParams& params) {
  params.check();
  std::vector<uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  wire::put_u8(out, kVersion);
  wire::put_u32(out, uint32_t(params.width));
  wire::put_u32(out, uint32_t(params.height));
  wire::put_u32(out, uint32_t(params.scene_id.size()));
  out.insert(out.end(), params.scene_id.begin(), params.scene_id.end());
  wire::put_u64(out, uint64_t(params.train_step));
  append_f32_array(out, params.bg_y);
  append_f32_array(out, params.bg_u);
  append_f32_array(out, params.bg_v);
  append_f32_array(out, params.mix_logits);
  append_f32_array(out, params.log_scales_y);
  append_f32_array(out, params.log_scales_uv);
  return out;
}

ModelParams parse_params(std::span<const uint8_t> data) {
  wire::Reader r(data);
  uint8_t magic[4];
  r.bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kMagic)) throw BadContainer("not a model parameter file");
  const uint8_t version = r.u8();
  if (version != kVersion) throw BadContainer("unsupported model file version");
  ModelParams p;
  p.width = int(r.u32());
  p.height = int(r.u32());
  if (p.width < 2 || p.height < 2 || p.width % 2 != 0 || p.height % 2 != 0 ||
      p.width > (1 << 16) || p.height > (1 << 16)) {
    throw BadContainer("bad geometry in model file");
  }
  const uint32_t id_len = r.u32();
  if (id_len > r.remaining()) throw TruncatedStream("scene id longer than file");
  p.scene_id.resize(id_len);
  if (id_len > 0) r.bytes(p.scene_id.data(), id_len);
  p.train_step = int64_t(r.u64());
  p.bg_y = read_f32_array(r, luma_samples(p.width, p.height));
  p.bg_u = read_f32_array(r, chroma_samples(p.width, p.height));
  p.bg_v = read_f32_array(r, chroma_samples(p.width, p.height));
  const size_t grid = size_t(p.grid_w()) * size_t(p.grid_h());
  p.mix_logits = read_f32_array(r, grid);
  p.log_scales_y = read_f32_array(r, grid);
  p.log_scales_uv = read_f32_array(r, grid);
  if (!r.done()) throw BadContainer("trailing bytes after model parameters");
  p.check();
  return p;
}

void save_params(const ModelParams& params, const std::string& path) {
  const std::vector<uint8_t> bytes = serialize_params(params);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

ModelParams load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_params(bytes);
}

}  // namespace pic
