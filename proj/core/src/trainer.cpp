#include "pic/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include <nlohmann/json.hpp>

#include "pic/codec.hpp"
#include "pic/errors.hpp"

namespace pic {

namespace {

constexpr double kLog2e = 1.4426950408889634;
constexpr double kLn2 = 0.6931471805599453;

// Per-block constants of the continuous Laplacian interval likelihood.
struct BlockEntropy {
  double b;         // scale, pixel units
  double t;         // exp(-step/b) == exp(-2h/b)
  double log1p_mt;  // log1p(-t)
};

struct RateTerms {
  double bits;
  double d_dr;  // d bits / d residual
  double d_dl;  // d bits / d log_scale
};

// bits = -log2(F(r+h) - F(r-h)) for the Laplacian CDF F with scale b,
// h = step/2. Split into tail branches (interval on one side of zero,
// where the mass factorizes and log1p keeps the small factor exact) and
// the straddling branch (expm1 avoids 1 - exp cancellation).
RateTerms interval_bits(double r, double h, const BlockEntropy& be, bool want_grad) {
  RateTerms out{0.0, 0.0, 0.0};
  const double b = be.b;
  if (r >= h || r <= -h) {
    const double a = (r >= h) ? r : -r;  // distance of the near edge from 0 is a-h
    const double ln_p = -(a - h) / b + be.log1p_mt - kLn2;
    out.bits = -ln_p * kLog2e;
    if (want_grad) {
      const double sign = (r >= h) ? 1.0 : -1.0;
      out.d_dr = sign * kLog2e / b;
      out.d_dl = kLog2e * (be.t * (a + h) - (a - h)) / (b * (1.0 - be.t));
    }
  } else {
    const double a1 = (h - r) / b;
    const double a2 = (h + r) / b;
    const double p = -0.5 * (std::expm1(-a1) + std::expm1(-a2));
    out.bits = -std::log(p) * kLog2e;
    if (want_grad) {
      const double e1 = std::exp(-a1);
      const double e2 = std::exp(-a2);
      out.d_dr = -kLog2e * (e2 - e1) / (2.0 * b * p);
      out.d_dl = kLog2e * ((h - r) * e1 + (h + r) * e2) / (2.0 * b * p);
    }
  }
  return out;
}

void size_gradients(GradientSet& gs, const ModelParams& params) {
  gs.bg_y.assign(params.bg_y.size(), 0.0);
  gs.bg_u.assign(params.bg_u.size(), 0.0);
  gs.bg_v.assign(params.bg_v.size(), 0.0);
  gs.mix_logits.assign(params.mix_logits.size(), 0.0);
  gs.log_scales_y.assign(params.log_scales_y.size(), 0.0);
  gs.log_scales_uv.assign(params.log_scales_uv.size(), 0.0);
}

// Forward pass of the training surrogate over a clip; optionally
// accumulates the analytic gradients. One function so the forward used for
// validation and the one differentiated are the same code.
void run_surrogate(std::span<const Frame> frames, const ModelParams& params,
                   const QualityPoint& point, const QualityConfig& qcfg,
                   uint64_t noise_seed, NoiseMode mode, SurrogateResult* sr,
                   GradientSet* gs) {
  params.check();
  qcfg.check();
  if (frames.empty()) throw EmptyClip("surrogate pass needs at least one frame");
  for (const Frame& f : frames) {
    f.check();
    if (f.width != params.width || f.height != params.height) {
      throw GeometryMismatch("clip does not match model geometry");
    }
  }
  if (!(point.step > 0.0) || !std::isfinite(point.step) || !(point.lambda >= 0.0)) {
    throw BadParameter("quality point needs step > 0 and lambda >= 0");
  }
  if (gs != nullptr && mode == NoiseMode::HardQuant) {
    throw BadParameter("gradients are undefined under hard quantization");
  }

  const int W = params.width;
  const int H = params.height;
  const int cw = W / 2;
  const int ch = H / 2;
  const double step = point.step;
  const double h = 0.5 * step;
  const size_t T = frames.size();
  const double rate_w = 1.0 / (double(W) * double(H) * double(T));
  const int gw = params.grid_w();
  const double n_luma = double(W) * double(H);
  const double n_chroma = double(cw) * double(ch);

  if (gs) size_gradients(*gs, params);
  if (sr) {
    sr->per_frame_bpp.clear();
    sr->per_frame_bpp.reserve(T);
  }

  std::mt19937_64 rng(noise_seed);
  auto draw_noise = [&]() {
    return double(rng() >> 11) * 0x1.0p-53 * step - h;  // U[-h, h)
  };

  Planes prev = make_planes(W, H);
  Planes cur = make_planes(W, H);
  bool have_prev = false;

  double total_bits = 0.0;
  double dist_sum = 0.0;

  for (size_t t = 0; t < T; ++t) {
    const Frame& f = frames[t];
    const bool reset = !have_prev || int64_t(t) % qcfg.reset_period == 0;
    double frame_bits = 0.0;
    double sq[3] = {0.0, 0.0, 0.0};

    struct PlaneCtx {
      const uint8_t* src;
      const double* bg;
      const double* prv;
      double* out;
      const double* ls;
      double* g_bg;
      double* g_ls;
      int pw, ph, blk;
    };
    const PlaneCtx planes[3] = {
        {f.y.data(), params.bg_y.data(), prev.y.data(), cur.y.data(),
         params.log_scales_y.data(), gs ? gs->bg_y.data() : nullptr,
         gs ? gs->log_scales_y.data() : nullptr, W, H, kBlockSize},
        {f.u.data(), params.bg_u.data(), prev.u.data(), cur.u.data(),
         params.log_scales_uv.data(), gs ? gs->bg_u.data() : nullptr,
         gs ? gs->log_scales_uv.data() : nullptr, cw, ch, kBlockSize / 2},
        {f.v.data(), params.bg_v.data(), prev.v.data(), cur.v.data(),
         params.log_scales_uv.data(), gs ? gs->bg_v.data() : nullptr,
         gs ? gs->log_scales_uv.data() : nullptr, cw, ch, kBlockSize / 2},
    };

    for (int pi = 0; pi < 3; ++pi) {
      const PlaneCtx& pl = planes[pi];
      const int bw = (pl.pw + pl.blk - 1) / pl.blk;
      const int bh = (pl.ph + pl.blk - 1) / pl.blk;
      for (int by = 0; by < bh; ++by) {
        for (int bx = 0; bx < bw; ++bx) {
          const size_t g = size_t(by) * size_t(gw) + size_t(bx);
          BlockEntropy be;
          be.b = std::exp(pl.ls[g]);
          be.t = std::exp(-step / be.b);
          be.log1p_mt = std::log1p(-be.t);
          const double s = reset ? 0.0 : 1.0 / (1.0 + std::exp(-params.mix_logits[g]));
          const int y1 = std::min((by + 1) * pl.blk, pl.ph);
          const int x1 = std::min((bx + 1) * pl.blk, pl.pw);
          for (int y = by * pl.blk; y < y1; ++y) {
            for (int x = bx * pl.blk; x < x1; ++x) {
              const size_t i = size_t(y) * size_t(pl.pw) + size_t(x);
              const double pred =
                  reset ? pl.bg[i] : s * pl.prv[i] + (1.0 - s) * pl.bg[i];
              double r = 0.0;
              switch (mode) {
                case NoiseMode::Uniform:
                  r = (double(pl.src[i]) - pred) + draw_noise();
                  break;
                case NoiseMode::Zero:
                  r = double(pl.src[i]) - pred;
                  break;
                case NoiseMode::HardQuant:
                  r = step * double(std::lround((double(pl.src[i]) - pred) / step));
                  break;
              }
              const RateTerms rt = interval_bits(r, h, be, gs != nullptr);
              frame_bits += rt.bits;
              const double recon = pred + r;
              const double d = recon - double(pl.src[i]);
              sq[pi] += d * d;
              pl.out[i] = recon;
              if (gs) {
                if (reset) {
                  pl.g_bg[i] -= rt.d_dr * rate_w;
                } else {
                  pl.g_bg[i] -= rt.d_dr * (1.0 - s) * rate_w;
                  gs->mix_logits[g] -=
                      rt.d_dr * s * (1.0 - s) * (pl.prv[i] - pl.bg[i]) * rate_w;
                }
                pl.g_ls[g] += rt.d_dl * rate_w;
              }
            }
          }
        }
      }
    }

    total_bits += frame_bits;
    dist_sum += (6.0 * (sq[0] / n_luma) + sq[1] / n_chroma + sq[2] / n_chroma) / 8.0;
    if (sr) sr->per_frame_bpp.push_back(frame_bits / n_luma);
    std::swap(prev, cur);
    have_prev = true;
  }

  const double rate_bpp = total_bits * rate_w;
  const double distortion = dist_sum / double(T);
  if (sr) {
    sr->rate_bpp = rate_bpp;
    sr->distortion = distortion;
  }
  if (gs) {
    gs->rate_bpp = rate_bpp;
    gs->distortion = distortion;
    gs->loss = rd_loss(distortion, rate_bpp, point.lambda);
  }
}

struct AdamGroup {
  std::vector<double> m, v;
};

void adam_step(std::vector<double>& theta, const std::vector<double>& grad,
               AdamGroup& st, double lr, const TrainConfig& cfg, int t) {
  if (st.m.empty()) {
    st.m.assign(theta.size(), 0.0);
    st.v.assign(theta.size(), 0.0);
  }
  const double bc1 = 1.0 - std::pow(cfg.beta1, double(t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, double(t));
  for (size_t i = 0; i < theta.size(); ++i) {
    st.m[i] = cfg.beta1 * st.m[i] + (1.0 - cfg.beta1) * grad[i];
    st.v[i] = cfg.beta2 * st.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
    theta[i] -= lr * (st.m[i] / bc1) / (std::sqrt(st.v[i] / bc2) + cfg.epsilon);
  }
}

void add_scaled(std::vector<double>& acc, const std::vector<double>& g, double c) {
  for (size_t i = 0; i < acc.size(); ++i) acc[i] += c * g[i];
}

}  // namespace

void TrainConfig::check() const {
  if (clip_len < 2) throw BadParameter("clip_len must be at least 2");
  if (!(learning_rate > 0.0)) throw BadParameter("learning_rate must be positive");
  if (scale_group_lr && !(*scale_group_lr > 0.0)) {
    throw BadParameter("scale_group_lr must be positive when set");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw BadParameter("betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw BadParameter("epsilon must be positive");
  if (!(plateau_factor > 0.0 && plateau_factor < 1.0)) {
    throw BadParameter("plateau_factor must lie in (0, 1)");
  }
  if (plateau_patience < 1) throw BadParameter("plateau_patience must be at least 1");
  if (epochs < 0) throw BadParameter("epochs must be nonnegative");
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
    throw BadParameter("val_fraction must lie in [0, 1)");
  }
  if (qp_list.empty() && lambda_list.empty()) {
    throw ConfigError("need a qp_list or a lambda_list to train against");
  }
  for (int qp : qp_list) {
    if (qp < 0 || qp > kQpMax) throw QpOutOfRange("qp_list entry outside [0, 63]");
  }
  for (double l : lambda_list) {
    if (!(l > 0.0) || !std::isfinite(l)) throw BadParameter("lambda_list entries must be positive");
  }
  quality.check();
}

TrainConfig TrainConfig::preset_dcvc() {
  TrainConfig c;
  c.clip_len = 32;
  c.learning_rate = 1e-6;
  c.scale_group_lr.reset();
  return c;
}

TrainConfig TrainConfig::preset_ssf() {
  TrainConfig c;
  c.clip_len = 20;
  c.learning_rate = 2e-5;
  c.scale_group_lr = 1e-3;
  c.lambda_list = {0.0018, 0.013, 0.0483, 0.0932, 0.18};
  return c;
}

QualityPoint quality_point_from_qp(int qp, const QualityConfig& cfg) {
  return {lambda_of_qp(qp, cfg), step_of_qp(qp, cfg), qp};
}

QualityPoint quality_point_from_lambda(double lambda, const QualityConfig& cfg) {
  cfg.check();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw BadParameter("lambda must be positive and finite");
  }
  return {lambda, cfg.step_ref * std::sqrt(lambda / cfg.lambda_max), -1};
}

double rd_loss(double distortion, double rate_bpp_est, double lambda) {
  return rate_bpp_est + lambda * distortion;
}

SurrogateResult surrogate_rate_and_distortion(std::span<const Frame> frames,
                                              const ModelParams& params,
                                              const QualityPoint& point,
                                              const QualityConfig& cfg,
                                              uint64_t noise_seed, NoiseMode mode) {
  SurrogateResult sr;
  run_surrogate(frames, params, point, cfg, noise_seed, mode, &sr, nullptr);
  return sr;
}

SurrogateResult surrogate_rate_and_distortion(std::span<const Frame> frames,
                                              const ModelParams& params, int qp,
                                              const QualityConfig& cfg,
                                              uint64_t noise_seed, NoiseMode mode) {
  return surrogate_rate_and_distortion(frames, params, quality_point_from_qp(qp, cfg),
                                       cfg, noise_seed, mode);
}

GradientSet gradients(std::span<const Frame> frames, const ModelParams& params,
                      const QualityPoint& point, const QualityConfig& cfg,
                      uint64_t noise_seed, NoiseMode mode) {
  GradientSet gs;
  run_surrogate(frames, params, point, cfg, noise_seed, mode, nullptr, &gs);
  return gs;
}

GradientSet gradients(std::span<const Frame> frames, const ModelParams& params,
                      int qp, const QualityConfig& cfg, uint64_t noise_seed,
                      NoiseMode mode) {
  return gradients(frames, params, quality_point_from_qp(qp, cfg), cfg, noise_seed, mode);
}

ModelParams init_params(std::span<const Frame> warmup_frames, std::string scene_id) {
  if (warmup_frames.empty()) throw EmptyWarmup("need at least one warmup frame");
  const int w = warmup_frames[0].width;
  const int h = warmup_frames[0].height;
  for (const Frame& f : warmup_frames) {
    f.check();
    if (f.width != w || f.height != h) {
      throw GeometryMismatch("warmup frames must share one geometry");
    }
  }
  ModelParams p = make_params(w, h, std::move(scene_id));
  const double inv_n = 1.0 / double(warmup_frames.size());
  for (const Frame& f : warmup_frames) {
    for (size_t i = 0; i < f.y.size(); ++i) p.bg_y[i] += double(f.y[i]) * inv_n;
    for (size_t i = 0; i < f.u.size(); ++i) p.bg_u[i] += double(f.u[i]) * inv_n;
    for (size_t i = 0; i < f.v.size(); ++i) p.bg_v[i] += double(f.v[i]) * inv_n;
  }
  const double ls = std::log(4.0);
  std::fill(p.log_scales_y.begin(), p.log_scales_y.end(), ls);
  std::fill(p.log_scales_uv.begin(), p.log_scales_uv.end(), ls);
  return p;
}

std::string TrainLog::to_json() const {
  nlohmann::json j;
  j["epochs"] = nlohmann::json::array();
  for (const EpochStats& e : epochs) {
    j["epochs"].push_back({{"epoch", e.epoch},
                           {"train_loss", e.train_loss},
                           {"val_loss", e.val_loss},
                           {"learning_rate", e.learning_rate},
                           {"rate_bpp", e.rate_bpp},
                           {"distortion", e.distortion}});
  }
  return j.dump(2);
}

FinetuneResult finetune(const std::vector<VideoClip>& dataset,
                        const ModelParams& initial, const TrainConfig& cfg) {
  cfg.check();
  initial.check();
  if (dataset.empty()) throw EmptyDataset("no training sources");

  struct SourceSplit {
    size_t train_n;  // frames [0, train_n) are sampled for training
    size_t val_n;    // frames [train_n, train_n + val_n) are held out
  };
  std::vector<SourceSplit> splits;
  for (const VideoClip& src : dataset) {
    src.check();
    if (src.width() != initial.width || src.height() != initial.height) {
      throw GeometryMismatch("training source does not match model geometry");
    }
    const size_t n = src.frames.size();
    const size_t val_n =
        std::max<size_t>(size_t(cfg.clip_len), size_t(std::llround(double(n) * cfg.val_fraction)));
    if (n < val_n + size_t(cfg.clip_len)) {
      throw ClipTooShort("source too short for a training + validation split");
    }
    splits.push_back({n - val_n, val_n});
  }

  std::vector<QualityPoint> points;
  if (!cfg.lambda_list.empty()) {
    for (double l : cfg.lambda_list) points.push_back(quality_point_from_lambda(l, cfg.quality));
  } else {
    for (int qp : cfg.qp_list) points.push_back(quality_point_from_qp(qp, cfg.quality));
  }

  FinetuneResult result;
  result.params = initial;
  ModelParams& params = result.params;

  std::mt19937_64 rng(cfg.seed);
  const uint64_t val_seed = cfg.seed ^ 0x9E3779B97F4A7C15ull;
  const QualityPoint val_point = points[points.size() / 2];
  const double inv_sources = 1.0 / double(dataset.size());

  double lr = cfg.learning_rate;
  AdamGroup opt_bg_y, opt_bg_u, opt_bg_v, opt_mix, opt_ls_y, opt_ls_uv;
  double best_val = std::numeric_limits<double>::infinity();
  int bad_epochs = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const QualityPoint& point = points[size_t(rng() % points.size())];

    GradientSet total;
    size_gradients(total, params);
    double loss_sum = 0.0, rate_sum = 0.0, dist_sum = 0.0;
    for (size_t s = 0; s < dataset.size(); ++s) {
      const uint64_t clip_seed = rng();
      const uint64_t noise_seed = rng();
      const size_t start =
          sample_clip_start(splits[s].train_n, size_t(cfg.clip_len), clip_seed);
      const std::span<const Frame> clip(dataset[s].frames.data() + start,
                                        size_t(cfg.clip_len));
      const GradientSet g = gradients(clip, params, point, cfg.quality, noise_seed);
      add_scaled(total.bg_y, g.bg_y, inv_sources);
      add_scaled(total.bg_u, g.bg_u, inv_sources);
      add_scaled(total.bg_v, g.bg_v, inv_sources);
      add_scaled(total.mix_logits, g.mix_logits, inv_sources);
      add_scaled(total.log_scales_y, g.log_scales_y, inv_sources);
      add_scaled(total.log_scales_uv, g.log_scales_uv, inv_sources);
      loss_sum += g.loss;
      rate_sum += g.rate_bpp;
      dist_sum += g.distortion;
    }

    const double scale_lr = cfg.scale_group_lr.value_or(lr);
    adam_step(params.bg_y, total.bg_y, opt_bg_y, lr, cfg, epoch);
    adam_step(params.bg_u, total.bg_u, opt_bg_u, lr, cfg, epoch);
    adam_step(params.bg_v, total.bg_v, opt_bg_v, lr, cfg, epoch);
    adam_step(params.mix_logits, total.mix_logits, opt_mix, lr, cfg, epoch);
    adam_step(params.log_scales_y, total.log_scales_y, opt_ls_y, scale_lr, cfg, epoch);
    adam_step(params.log_scales_uv, total.log_scales_uv, opt_ls_uv, scale_lr, cfg, epoch);
    params.train_step += 1;

    double val_loss = 0.0;
    for (size_t s = 0; s < dataset.size(); ++s) {
      const std::span<const Frame> val_clip(
          dataset[s].frames.data() + splits[s].train_n, size_t(cfg.clip_len));
      const SurrogateResult vr = surrogate_rate_and_distortion(
          val_clip, params, val_point, cfg.quality, val_seed, NoiseMode::Uniform);
      val_loss += rd_loss(vr.distortion, vr.rate_bpp, val_point.lambda);
    }
    val_loss *= inv_sources;

    result.log.epochs.push_back({epoch, loss_sum * inv_sources, val_loss, lr,
                                 rate_sum * inv_sources, dist_sum * inv_sources});

    if (val_loss < best_val) {
      best_val = val_loss;
      bad_epochs = 0;
    } else if (++bad_epochs >= cfg.plateau_patience) {
      lr *= cfg.plateau_factor;
      bad_epochs = 0;
    }
  }
  return result;
}

}  // namespace pic
