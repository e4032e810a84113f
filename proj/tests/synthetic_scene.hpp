// Deterministic surveillance-style test scene: a fixed textured background,
// a few bouncing sprites, and additive Gaussian sensor noise. frame(t) is a
// pure function of (config, t), so any frame range can be regenerated
// without storing the whole sequence.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pic/frame.hpp"

namespace synth {

struct SceneConfig {
  int width = 256;
  int height = 256;
  int sprite_count = 2;       // 1..3
  double noise_sigma = 2.0;   // per-sample Gaussian, every plane
  uint64_t seed = 1;
};

inline double gauss(std::mt19937_64& rng) {
  // Box-Muller; only one of the pair is used so frames stay pure in t.
  double u1 = double(rng() >> 11) * 0x1.0p-53;
  double u2 = double(rng() >> 11) * 0x1.0p-53;
  u1 = std::max(u1, 0x1.0p-53);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline uint8_t clamp8(double v) {
  return uint8_t(std::lround(std::clamp(v, 0.0, 255.0)));
}

class Scene {
public:
  explicit Scene(SceneConfig cfg = {}) : cfg_(cfg), bg_(cfg.width, cfg.height) {
    std::mt19937_64 rng(cfg_.seed);
    // Smooth sinusoidal shading plus frozen per-pixel texture.
    const double fx = 2.0 + double(rng() % 5);
    const double fy = 2.0 + double(rng() % 5);
    std::vector<double> texture(size_t(cfg_.width) * cfg_.height);
    for (auto& t : texture) t = double(rng() % 33) - 16.0;
    for (int r = 0; r < cfg_.height; ++r)
      for (int c = 0; c < cfg_.width; ++c) {
        const double shade = 110.0 + 55.0 * std::sin(fx * 6.2832 * c / cfg_.width) *
                                          std::cos(fy * 6.2832 * r / cfg_.height);
        bg_.y[size_t(r) * cfg_.width + c] = clamp8(shade + texture[size_t(r) * cfg_.width + c]);
      }
    for (int r = 0; r < bg_.chroma_height(); ++r)
      for (int c = 0; c < bg_.chroma_width(); ++c) {
        const size_t i = size_t(r) * bg_.chroma_width() + c;
        bg_.u[i] = clamp8(120.0 + 18.0 * std::sin(3.1 * 6.2832 * c / bg_.chroma_width()));
        bg_.v[i] = clamp8(132.0 + 14.0 * std::cos(2.3 * 6.2832 * r / bg_.chroma_height()));
      }
    // Sprite geometry: flat-filled rectangles, together under 5% of the
    // frame, gliding slowly so consecutive frames overlap almost entirely.
    for (int s = 0; s < cfg_.sprite_count; ++s) {
      Sprite sp;
      sp.w = 24 + int(rng() % 9) * 2;  // 24..40, even
      sp.h = 20 + int(rng() % 7) * 2;  // 20..32, even
      // Small test frames can't hold a full-size sprite; shrink to fit.
      sp.w = std::min(sp.w, cfg_.width & ~1);
      sp.h = std::min(sp.h, cfg_.height & ~1);
      sp.x0 = double(rng() % 1000) / 1000.0;
      sp.y0 = double(rng() % 1000) / 1000.0;
      sp.vx = 0.2 + double(rng() % 1000) / 1000.0;  // 0.2..1.2 px per frame
      sp.vy = 0.2 + double(rng() % 1000) / 1000.0;
      sp.luma = 70.0 + double(rng() % 81);  // visible against the 39..181 bg
      sp.cb = 90.0 + double(rng() % 81);
      sp.cr = 90.0 + double(rng() % 81);
      sprites_.push_back(sp);
    }
  }

  const pic::Frame& background() const { return bg_; }
  const SceneConfig& config() const { return cfg_; }

  // Noisy frame with sprites at their time-t positions.
  pic::Frame frame(int64_t t) const { return render(t, true); }
  // Noisy frame without sprites (same noise realization as frame(t)).
  pic::Frame frame_without_sprites(int64_t t) const { return render(t, false); }

  pic::VideoClip clip(int64_t t0, int n) const {
    pic::VideoClip out;
    out.frames.reserve(size_t(n));
    for (int i = 0; i < n; ++i) out.frames.push_back(frame(t0 + i));
    return out;
  }

private:
  struct Sprite {
    int w = 0, h = 0;
    double x0 = 0, y0 = 0, vx = 0, vy = 0;
    double luma = 0, cb = 0, cr = 0;
  };

  static double bounce(double start01, double v, int64_t t, double range) {
    if (range <= 0) return 0.0;
    const double s = std::fmod(start01 * range + v * double(t), 2.0 * range);
    const double p = s < 0 ? s + 2.0 * range : s;
    return p < range ? p : 2.0 * range - p;
  }

  pic::Frame render(int64_t t, bool with_sprites) const {
    pic::Frame f = bg_;
    if (with_sprites) {
      for (const Sprite& sp : sprites_) {
        const int x = int(bounce(sp.x0, sp.vx, t, double(cfg_.width - sp.w)));
        const int y = int(bounce(sp.y0, sp.vy, t, double(cfg_.height - sp.h)));
        const int r1 = std::min(y + sp.h, cfg_.height);
        const int c1 = std::min(x + sp.w, cfg_.width);
        for (int r = y; r < r1; ++r)
          for (int c = x; c < c1; ++c)
            f.y[size_t(r) * cfg_.width + c] = clamp8(sp.luma);
        for (int r = y / 2; r < r1 / 2; ++r)
          for (int c = x / 2; c < c1 / 2; ++c) {
            f.u[size_t(r) * f.chroma_width() + c] = clamp8(sp.cb);
            f.v[size_t(r) * f.chroma_width() + c] = clamp8(sp.cr);
          }
      }
    }
    if (cfg_.noise_sigma > 0) {
      std::mt19937_64 rng(cfg_.seed * 0x9E3779B97F4A7C15ull + uint64_t(t) + 1);
      for (auto* plane : {&f.y, &f.u, &f.v})
        for (auto& v : *plane) v = clamp8(double(v) + cfg_.noise_sigma * gauss(rng));
    }
    return f;
  }

  SceneConfig cfg_;
  pic::Frame bg_;
  std::vector<Sprite> sprites_;
};

}  // namespace synth
