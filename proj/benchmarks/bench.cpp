// Microbenchmarks for the hot paths: entropy coding, frame coding, training
// gradients, and the BD-rate statistics.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "pic/bd_metrics.hpp"
#include "pic/codec.hpp"
#include "pic/metrics.hpp"
#include "pic/range_coder.hpp"
#include "pic/trainer.hpp"
#include "../tests/synthetic_scene.hpp"

using namespace pic;

namespace {

std::vector<int> sample_symbols(const SymbolModel& m, size_t count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> out(count);
  for (auto& s : out) {
    const uint32_t target = uint32_t(rng() % SymbolModel::kTotal);
    int k = 0;
    while (m.cum(k + 1) <= target) ++k;
    s = k;
  }
  return out;
}

void bm_range_encode(benchmark::State& state) {
  const SymbolModel m = laplace_model(2.0, 1.0, 32);
  const auto symbols = sample_symbols(m, 1 << 16, 1);
  for (auto _ : state) {
    RangeEncoder enc;
    for (int s : symbols) enc.encode(m, s);
    benchmark::DoNotOptimize(enc.finish());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(symbols.size()));
}
BENCHMARK(bm_range_encode);

void bm_range_decode(benchmark::State& state) {
  const SymbolModel m = laplace_model(2.0, 1.0, 32);
  const auto symbols = sample_symbols(m, 1 << 16, 2);
  RangeEncoder enc;
  for (int s : symbols) enc.encode(m, s);
  const auto bytes = enc.finish();
  for (auto _ : state) {
    RangeDecoder dec(bytes);
    int sink = 0;
    for (size_t i = 0; i < symbols.size(); ++i) sink += dec.decode(m);
    benchmark::DoNotOptimize(sink);
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(symbols.size()));
}
BENCHMARK(bm_range_decode);

void bm_laplace_table(benchmark::State& state) {
  double b = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(laplace_model(b, 1.0, 64));
    b += 1e-9;  // defeat caching across iterations
  }
}
BENCHMARK(bm_laplace_table);

struct CodecFixture {
  synth::Scene scene{synth::SceneConfig{256, 256, 2, 2.0, 11}};
  ModelParams params = init_params(scene.clip(0, 8).frames, "bench");
  Frame frame = scene.frame(100);
};

void bm_encode_frame(benchmark::State& state) {
  static CodecFixture fx;
  QualityConfig qc;
  qc.base_qp = int(state.range(0));
  for (auto _ : state) {
    CodecState cs;
    benchmark::DoNotOptimize(encode_frame(fx.frame, fx.params, qc, cs));
  }
  state.SetItemsProcessed(int64_t(state.iterations()));
  state.SetBytesProcessed(int64_t(state.iterations()) *
                          int64_t(fx.frame.luma_samples() + 2 * fx.frame.chroma_samples()));
}
BENCHMARK(bm_encode_frame)->Arg(8)->Arg(32)->Arg(56);

void bm_decode_frame(benchmark::State& state) {
  static CodecFixture fx;
  QualityConfig qc;
  qc.base_qp = 32;
  CodecState enc_state;
  const EncodedFrame ef = encode_frame(fx.frame, fx.params, qc, enc_state);
  for (auto _ : state) {
    CodecState cs;
    benchmark::DoNotOptimize(decode_frame(ef.payload, fx.params, qc, cs));
  }
  state.SetItemsProcessed(int64_t(state.iterations()));
}
BENCHMARK(bm_decode_frame);

void bm_gradient_step(benchmark::State& state) {
  synth::Scene scene(synth::SceneConfig{64, 64, 1, 2.0, 4});
  const VideoClip clip = scene.clip(0, 8);
  const ModelParams params = init_params(scene.clip(0, 4).frames, "grad");
  QualityConfig qc;
  const QualityPoint pt = quality_point_from_qp(40, qc);
  uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gradients(clip.frames, params, pt, qc, ++seed));
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(clip.frame_count()));
}
BENCHMARK(bm_gradient_step);

void bm_bd_rate(benchmark::State& state) {
  const RDCurve anchor({{0.01, 30}, {0.02, 33}, {0.05, 36}, {0.12, 39}});
  const RDCurve test({{0.008, 30}, {0.014, 33}, {0.045, 36}, {0.102, 39}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(bd_rate(anchor, test, Interp::MonotonePchip));
    benchmark::DoNotOptimize(bd_rate(anchor, test, Interp::CubicSpline));
  }
}
BENCHMARK(bm_bd_rate);

void bm_weighted_psnr(benchmark::State& state) {
  synth::Scene scene(synth::SceneConfig{256, 256, 1, 2.0, 6});
  const Frame a = scene.frame(0);
  const Frame b = scene.frame(1);
  for (auto _ : state) benchmark::DoNotOptimize(weighted_yuv_psnr(a, b));
  state.SetItemsProcessed(int64_t(state.iterations()));
}
BENCHMARK(bm_weighted_psnr);

}  // namespace

BENCHMARK_MAIN();
