#include <cmath>
#include <random>

#include "doctest.h"
#include "pic/metrics.hpp"

using namespace pic;

namespace {

Frame constant_frame(int w, int h, uint8_t yv, uint8_t uv = 128, uint8_t vv = 128) {
  Frame f(w, h);
  std::fill(f.y.begin(), f.y.end(), yv);
  std::fill(f.u.begin(), f.u.end(), uv);
  std::fill(f.v.begin(), f.v.end(), vv);
  return f;
}

}  // namespace

TEST_CASE("weighted mse closed form") {
  // Every Y sample differs by 8, chroma identical:
  // (6*64 + 1*0 + 1*0) / 8 = 48.
  Frame a = constant_frame(2, 2, 100);
  Frame b = constant_frame(2, 2, 108);
  CHECK(weighted_mse(a, b) == 48.0);
  CHECK(weighted_mse(a, a) == 0.0);

  // Custom weights: (1*64 + 2*0 + 3*0) / 6.
  DistortionWeights w{1.0, 2.0, 3.0};
  CHECK(weighted_mse(a, b, w) == doctest::Approx(64.0 / 6.0).epsilon(1e-12));

  DistortionWeights bad{0.0, 0.0, 0.0};
  CHECK_THROWS_AS(weighted_mse(a, b, bad), BadParameter);

  Frame other(4, 2);
  CHECK_THROWS_AS(weighted_mse(a, other), DimensionMismatch);
}

TEST_CASE("psnr hits 30 dB exactly by construction") {
  // 10x4 luma = 40 samples; one differing by 51 gives MSE = 2601/40 = 65.025
  // and 255^2/65.025 = 1000, so PSNR = 10*log10(1000) = 30.
  Frame a = constant_frame(10, 4, 50);
  Frame b = a;
  b.y[7] = uint8_t(b.y[7] + 51);
  QualityReport q = weighted_yuv_psnr(a, b);
  CHECK(q.psnr_y == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(std::isinf(q.psnr_u));
  CHECK(std::isinf(q.psnr_v));
  CHECK(std::isinf(q.psnr_weighted));
}

TEST_CASE("weighted psnr uses the 6:1:1/8 combination") {
  CHECK(weighted_psnr_combine(40.0, 30.0, 30.0) == 37.5);

  // 40x20: two Y diffs of 51 -> MSE 2*2601/800 = 6.5025 -> 40 dB;
  // five diffs of 51 in each 20x10 chroma plane -> 65.025 -> 30 dB.
  Frame a = constant_frame(40, 20, 64, 100, 100);
  Frame b = a;
  b.y[3] = uint8_t(b.y[3] + 51);
  b.y[777] = uint8_t(b.y[777] - 51);
  for (int i = 0; i < 5; ++i) {
    b.u[size_t(i) * 31] = uint8_t(b.u[size_t(i) * 31] + 51);
    b.v[size_t(i) * 29] = uint8_t(b.v[size_t(i) * 29] - 51);
  }
  QualityReport q = weighted_yuv_psnr(a, b);
  CHECK(q.psnr_y == doctest::Approx(40.0).epsilon(1e-12));
  CHECK(q.psnr_u == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(q.psnr_v == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(q.psnr_weighted == doctest::Approx(37.5).epsilon(1e-12));

  CHECK(psnr_from_mse(65025.0) == doctest::Approx(0.0));
  CHECK(std::isinf(psnr_from_mse(0.0)));
}

TEST_CASE("bpp counts luma samples only") {
  CHECK(bpp(64000, 320, 200, 10) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(bpp(0, 320, 200, 10) == 0.0);
  CHECK_THROWS_AS(bpp(1, 0, 200, 10), ZeroDenominator);
  CHECK_THROWS_AS(bpp(1, 320, 200, 0), ZeroDenominator);
}

TEST_CASE("quality report serializes to flat json") {
  Frame a = constant_frame(10, 4, 50);
  Frame b = a;
  b.y[0] = uint8_t(b.y[0] + 51);
  QualityReport q = weighted_yuv_psnr(a, b);
  q.bpp = 0.25;
  const std::string j = q.to_json();
  CHECK(j.find("\"psnr_y\"") != std::string::npos);
  CHECK(j.find("\"bpp\"") != std::string::npos);
  CHECK(j.find("30") != std::string::npos);
}

TEST_CASE("change intensity and the static/dynamic classifier") {
  VideoClip constant;
  for (int i = 0; i < 6; ++i) constant.frames.push_back(constant_frame(16, 16, 77));
  CHECK(change_intensity(constant) == 0.0);
  CHECK(classify_static(constant) == MotionClass::Static);

  // Exact value: frame pair differing by 51 on every Y sample, then static.
  VideoClip ramp;
  ramp.frames.push_back(constant_frame(16, 16, 0));
  ramp.frames.push_back(constant_frame(16, 16, 51));
  ramp.frames.push_back(constant_frame(16, 16, 51));
  // Pair diffs: 51/255 = 0.2 and 0 -> mean 0.1.
  CHECK(change_intensity(ramp) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(classify_static(ramp, 0.11) == MotionClass::Static);
  CHECK(classify_static(ramp, 0.10) == MotionClass::Dynamic);  // strict <

  VideoClip noise;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 4; ++i) {
    Frame f(16, 16);
    for (auto& v : f.y) v = uint8_t(rng());
    noise.frames.push_back(std::move(f));
  }
  CHECK(classify_static(noise) == MotionClass::Dynamic);

  VideoClip single;
  single.frames.push_back(constant_frame(16, 16, 1));
  CHECK_THROWS_AS(change_intensity(single), ClipTooShort);
}
