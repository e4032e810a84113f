#include "pic/frame.hpp"

#include <random>
#include <string>

namespace pic {

Frame::Frame(int w, int h) : width(w), height(h) {
  if (w < 2 || h < 2 || w % 2 != 0 || h % 2 != 0) {
    throw OddGeometry("frame dimensions must be even and >= 2, got " +
                      std::to_string(w) + "x" + std::to_string(h));
  }
  y.assign(luma_samples(), 0);
  u.assign(chroma_samples(), 0);
  v.assign(chroma_samples(), 0);
}

void Frame::check() const {
  if (width < 2 || height < 2 || width % 2 != 0 || height % 2 != 0) {
    throw OddGeometry("frame dimensions must be even and >= 2, got " +
                      std::to_string(width) + "x" + std::to_string(height));
  }
  if (y.size() != luma_samples() || u.size() != chroma_samples() ||
      v.size() != chroma_samples()) {
    throw DimensionMismatch("plane sizes do not match declared dimensions");
  }
}

void VideoClip::check() const {
  if (frames.empty()) throw EmptyClip("clip has no frames");
  if (fps_num <= 0 || fps_den <= 0) throw OddGeometry("frame rate must be positive");
  for (const Frame& f : frames) {
    f.check();
    if (!f.same_geometry(frames.front())) {
      throw DimensionMismatch("clip frames have inconsistent dimensions");
    }
  }
}

namespace {

template <typename T>
std::vector<T> crop_plane(const std::vector<T>& src, int src_w, int x, int y,
                          int w, int h) {
  std::vector<T> out(size_t(w) * h);
  for (int row = 0; row < h; ++row) {
    const T* s = src.data() + size_t(y + row) * src_w + x;
    std::copy(s, s + w, out.begin() + size_t(row) * w);
  }
  return out;
}

}  // namespace

Frame crop(const Frame& frame, int x, int y, int w, int h) {
  frame.check();
  if (x % 2 || y % 2 || w % 2 || h % 2) {
    throw OddGeometry("crop rectangle coordinates must all be even");
  }
  if (w < 2 || h < 2) throw OddGeometry("crop rectangle must be at least 2x2");
  if (x < 0 || y < 0 || x + w > frame.width || y + h > frame.height) {
    throw OutOfBounds("crop rectangle exceeds frame bounds");
  }
  Frame out(w, h);
  out.y = crop_plane(frame.y, frame.width, x, y, w, h);
  out.u = crop_plane(frame.u, frame.chroma_width(), x / 2, y / 2, w / 2, h / 2);
  out.v = crop_plane(frame.v, frame.chroma_width(), x / 2, y / 2, w / 2, h / 2);
  return out;
}

size_t sample_clip_start(size_t n_frames, size_t length, uint64_t seed) {
  if (length == 0 || n_frames < length) {
    throw ClipTooShort("cannot sample " + std::to_string(length) +
                       " frames from a clip of " + std::to_string(n_frames));
  }
  size_t windows = n_frames - length + 1;
  // mt19937_64 output is fully specified by the standard; the modulo bias is
  // below 2^-50 for any realistic window count.
  std::mt19937_64 rng(seed);
  return size_t(rng() % windows);
}

VideoClip sample_clip(const VideoClip& clip, size_t length, uint64_t seed) {
  clip.check();
  size_t start = sample_clip_start(clip.frames.size(), length, seed);
  VideoClip out;
  out.fps_num = clip.fps_num;
  out.fps_den = clip.fps_den;
  out.frames.assign(clip.frames.begin() + start, clip.frames.begin() + start + length);
  return out;
}

}  // namespace pic
