// 8-bit YUV420 planar frames and frame sequences.
#pragma once

#include <cstdint>
#include <vector>

#include "pic/errors.hpp"

namespace pic {

// A single 8-bit 4:2:0 frame. Planes are stored row-major; chroma planes are
// half resolution in both dimensions, so width and height must be even.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> y;
  std::vector<uint8_t> u;
  std::vector<uint8_t> v;

  Frame() = default;
  Frame(int w, int h);  // allocates zero-filled planes

  int chroma_width() const { return width / 2; }
  int chroma_height() const { return height / 2; }
  size_t luma_samples() const { return size_t(width) * height; }
  size_t chroma_samples() const { return size_t(chroma_width()) * chroma_height(); }

  // Throws OddGeometry / DimensionMismatch when the invariants are violated.
  void check() const;

  bool same_geometry(const Frame& other) const {
    return width == other.width && height == other.height;
  }
  bool operator==(const Frame& other) const = default;
};

// An ordered frame sequence with a rational frame rate.
struct VideoClip {
  std::vector<Frame> frames;
  int fps_num = 25;
  int fps_den = 1;

  // Throws EmptyClip when empty, DimensionMismatch on ragged geometry.
  void check() const;

  int width() const { return frames.empty() ? 0 : frames.front().width; }
  int height() const { return frames.empty() ? 0 : frames.front().height; }
  size_t frame_count() const { return frames.size(); }
};

// Sub-frame extraction. All of x, y, w, h must be even and the rectangle must
// lie inside the frame; chroma is cropped at half coordinates.
Frame crop(const Frame& frame, int x, int y, int w, int h);

// Contiguous window of `length` frames starting at an index drawn uniformly
// from [0, N-length] with a seeded deterministic generator.
VideoClip sample_clip(const VideoClip& clip, size_t length, uint64_t seed);

// The start-index draw behind sample_clip, exposed for tests and the trainer.
size_t sample_clip_start(size_t n_frames, size_t length, uint64_t seed);

}  // namespace pic
