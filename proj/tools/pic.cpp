// Command-line front end. Machine-readable JSON goes to stdout, one object
// per line; human-oriented notes go to stderr. Exit codes: 0 success,
// 2 IO/subprocess, 3 malformed data, 4 digest mismatch, 5 configuration.
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pic/bd_metrics.hpp"
#include "pic/codec.hpp"
#include "pic/config.hpp"
#include "pic/errors.hpp"
#include "pic/extern_codec.hpp"
#include "pic/metrics.hpp"
#include "pic/model_params.hpp"
#include "pic/svg_report.hpp"
#include "pic/trainer.hpp"
#include "pic/y4m.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string hex_digest(uint64_t digest) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016" PRIx64, digest);
  return buf;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw pic::IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw pic::IoError("write failed: " + path.string());
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

struct EncodeArgs {
  std::string input, model, output;
  int qp = 32;
};

int run_encode(const EncodeArgs& a) {
  const pic::VideoClip clip = pic::read_y4m_file(a.input);
  const pic::ModelParams params = pic::load_params(a.model);
  pic::QualityConfig qc;
  qc.base_qp = a.qp;
  const pic::EncodeResult res = pic::encode_video(clip, params, qc);
  pic::save_bitstream(res.stream, a.output);
  for (const pic::FrameStats& s : res.frame_stats) {
    emit({{"frame", s.frame_index},
          {"qp", s.qp},
          {"step", s.step},
          {"payload_bytes", s.payload_bytes},
          {"est_bits", s.est_bits},
          {"actual_bits", s.actual_bits}});
  }
  emit({{"bpp", res.bpp},
        {"frames", res.stream.payloads.size()},
        {"payload_bytes", res.stream.payload_bytes()},
        {"model_digest", hex_digest(res.stream.model_digest)},
        {"output", a.output}});
  std::cerr << "encoded " << res.stream.payloads.size() << " frames at base qp " << a.qp
            << ", " << res.bpp << " bpp -> " << a.output << "\n";
  return 0;
}

struct DecodeArgs {
  std::string input, model, output;
};

int run_decode(const DecodeArgs& a) {
  const pic::Bitstream stream = pic::load_bitstream(a.input);
  const pic::ModelParams params = pic::load_params(a.model);
  const pic::VideoClip clip = pic::decode_video(stream, params);
  pic::write_y4m_file(clip, a.output);
  emit({{"frames", clip.frames.size()},
        {"width", clip.width()},
        {"height", clip.height()},
        {"output", a.output}});
  std::cerr << "decoded " << clip.frames.size() << " frames -> " << a.output << "\n";
  return 0;
}

struct FinetuneArgs {
  std::string config;
  std::string preset;  // "", "dcvc", "ssf"
  std::string scene_id;
};

std::vector<pic::VideoClip> load_dataset(const std::string& dir) {
  if (!fs::is_directory(dir)) throw pic::IoError("dataset directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".y4m") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<pic::VideoClip> dataset;
  for (const fs::path& f : files) dataset.push_back(pic::read_y4m_file(f));
  if (dataset.empty()) throw pic::EmptyDataset("no .y4m files in " + dir);
  return dataset;
}

int run_finetune(const FinetuneArgs& a) {
  pic::TrainConfig base;
  if (a.preset == "dcvc") base = pic::TrainConfig::preset_dcvc();
  else if (a.preset == "ssf") base = pic::TrainConfig::preset_ssf();
  const pic::ExperimentConfig cfg = pic::load_experiment_config(a.config, base);
  if (cfg.dataset_dir.empty()) throw pic::ConfigError("paths.dataset_dir is required");
  if (cfg.output_dir.empty()) throw pic::ConfigError("paths.output_dir is required");

  const std::vector<pic::VideoClip> dataset = load_dataset(cfg.dataset_dir);

  pic::ModelParams initial;
  if (!cfg.model_file.empty()) {
    initial = pic::load_params(cfg.model_file);
    std::cerr << "starting from checkpoint " << cfg.model_file << "\n";
  } else {
    // Cold start: average the head of every source into the background.
    std::vector<pic::Frame> warmup;
    for (const pic::VideoClip& src : dataset) {
      const size_t take = std::min(src.frames.size(), size_t(cfg.train.clip_len));
      warmup.insert(warmup.end(), src.frames.begin(), src.frames.begin() + long(take));
    }
    initial = pic::init_params(warmup, a.scene_id);
    std::cerr << "cold start from " << warmup.size() << " warmup frames\n";
  }

  const pic::FinetuneResult result = pic::finetune(dataset, initial, cfg.train);

  fs::create_directories(cfg.output_dir);
  const fs::path ckpt = fs::path(cfg.output_dir) / "model.picm";
  const fs::path log_path = fs::path(cfg.output_dir) / "train_log.json";
  pic::save_params(result.params, ckpt.string());
  write_text_file(log_path, result.log.to_json());

  for (const pic::EpochStats& e : result.log.epochs) {
    emit({{"epoch", e.epoch},
          {"train_loss", e.train_loss},
          {"val_loss", e.val_loss},
          {"learning_rate", e.learning_rate},
          {"rate_bpp", e.rate_bpp},
          {"distortion", e.distortion}});
  }
  emit({{"checkpoint", ckpt.string()},
        {"train_log", log_path.string()},
        {"model_digest", hex_digest(result.params.content_digest())},
        {"epochs", result.log.epochs.size()}});
  std::cerr << "finetuned " << result.log.epochs.size() << " epochs -> " << ckpt.string() << "\n";
  return 0;
}

struct EvalArgs {
  std::string input, model, output;
  std::vector<int> qp_list{8, 24, 40, 56};
};

int run_eval(const EvalArgs& a) {
  const pic::VideoClip clip = pic::read_y4m_file(a.input);
  const pic::ModelParams params = pic::load_params(a.model);
  std::vector<pic::RDPoint> points;
  for (int qp : a.qp_list) {
    pic::QualityConfig qc;
    qc.base_qp = qp;
    const pic::EncodeResult res = pic::encode_video(clip, params, qc);
    double psnr_sum = 0.0;
    for (size_t i = 0; i < clip.frames.size(); ++i) {
      psnr_sum += pic::weighted_yuv_psnr(clip.frames[i], res.recon.frames[i]).psnr_weighted;
    }
    const double psnr = psnr_sum / double(clip.frames.size());
    points.push_back({res.bpp, psnr});
    emit({{"qp", qp}, {"bpp", res.bpp}, {"psnr", psnr}});
  }
  std::string curve_error;
  if (points.size() < 4) {
    curve_error = "need at least 4 points for an RD curve";
  } else {
    try {
      pic::RDCurve curve(points);
    } catch (const pic::Error& e) {
      curve_error = e.what();
    }
  }
  if (!curve_error.empty()) std::cerr << "no RD curve: " << curve_error << "\n";
  if (!a.output.empty()) {
    write_text_file(a.output, pic::rd_points_to_json(points));
    std::cerr << "wrote " << points.size() << " points -> " << a.output << "\n";
  }
  emit({{"points", points.size()}, {"curve_ok", curve_error.empty()}});
  return 0;
}

struct BdrateArgs {
  std::string anchor, test, interp = "pchip";
  std::vector<double> window;
};

int run_bdrate(const BdrateArgs& a) {
  const pic::RDCurve anchor = pic::load_rd_curve(a.anchor);
  const pic::RDCurve test = pic::load_rd_curve(a.test);
  const pic::Interp interp =
      a.interp == "spline" ? pic::Interp::CubicSpline : pic::Interp::MonotonePchip;
  std::optional<std::pair<double, double>> window;
  if (!a.window.empty()) window = {a.window[0], a.window[1]};
  const double rate = pic::bd_rate(anchor, test, interp, window);
  const double dpsnr = pic::bd_psnr(anchor, test, interp);
  json j{{"bd_rate_percent", rate}, {"bd_psnr_db", dpsnr}, {"interp", a.interp}};
  if (window) j["window"] = {window->first, window->second};
  emit(j);
  std::cerr << "BD-rate " << rate << "% (" << a.interp << ")\n";
  return 0;
}

struct ClassifyArgs {
  std::string input;
  double threshold = 0.01;
  int window = 0;  // 0: whole clip
};

int run_classify(const ClassifyArgs& a) {
  const pic::VideoClip clip = pic::read_y4m_file(a.input);
  const size_t n = clip.frames.size();
  const size_t win = a.window <= 0 ? n : std::min<size_t>(size_t(a.window), n);
  size_t index = 0;
  for (size_t start = 0; start < n; ++index) {
    size_t len = std::min(win, n - start);
    if (n - (start + len) == 1) len += 1;  // a 1-frame tail cannot stand alone
    pic::VideoClip window_clip;
    window_clip.fps_num = clip.fps_num;
    window_clip.fps_den = clip.fps_den;
    window_clip.frames.assign(clip.frames.begin() + long(start),
                              clip.frames.begin() + long(start + len));
    const double intensity = pic::change_intensity(window_clip);
    const bool is_static =
        pic::classify_static(window_clip, a.threshold) == pic::MotionClass::Static;
    emit({{"window", index},
          {"start", start},
          {"frames", len},
          {"intensity", intensity},
          {"class", is_static ? "static" : "dynamic"}});
    start += len;
  }
  return 0;
}

struct ReportArgs {
  std::vector<std::string> curves;
  std::string svg, csv;
};

int run_report(const ReportArgs& a) {
  std::vector<pic::CurveSeries> series;
  for (const std::string& path : a.curves) {
    std::ifstream in(path);
    if (!in) throw pic::IoError("cannot open: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    series.push_back({fs::path(path).stem().string(), pic::rd_points_from_json(text)});
  }
  if (!a.svg.empty()) write_text_file(a.svg, pic::render_rd_svg(series));
  if (!a.csv.empty()) write_text_file(a.csv, pic::render_rd_csv(series));
  size_t total = 0;
  for (const auto& s : series) total += s.points.size();
  emit({{"curves", series.size()}, {"points", total}, {"svg", a.svg}, {"csv", a.csv}});
  return 0;
}

struct BaselineArgs {
  std::string config, input, name, work_dir = "baseline_work";
};

int run_baseline_cmd(const BaselineArgs& a) {
  const pic::ExperimentConfig cfg = pic::load_experiment_config(a.config);
  if (cfg.baselines.empty()) throw pic::ConfigError("config defines no baseline.* blocks");
  bool matched = false;
  for (const pic::CodecCommand& cmd : cfg.baselines) {
    if (!a.name.empty() && cmd.name != a.name) continue;
    matched = true;
    const pic::BaselineResult res = pic::run_baseline(a.input, cmd, a.work_dir);
    const fs::path out = fs::path(a.work_dir) / (cmd.name + "_curve.json");
    pic::save_rd_points(res.points, out);
    json jp = json::array();
    for (const pic::RDPoint& p : res.points) jp.push_back({{"bpp", p.bpp}, {"psnr", p.psnr}});
    emit({{"name", cmd.name},
          {"points", jp},
          {"curve_ok", res.curve.has_value()},
          {"curve_error", res.curve_error},
          {"curve_file", out.string()}});
    std::cerr << "baseline " << cmd.name << ": " << res.points.size() << " points -> "
              << out.string() << "\n";
  }
  if (!matched) throw pic::ConfigError("no baseline named '" + a.name + "' in config");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scene-prior video codec toolkit"};
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* enc_cmd = app.add_subcommand("encode", "encode a Y4M video against a model checkpoint");
  enc_cmd->add_option("input", enc.input, "source .y4m")->required();
  enc_cmd->add_option("model", enc.model, "model checkpoint (.picm)")->required();
  enc_cmd->add_option("output", enc.output, "coded stream (.pic)")->required();
  enc_cmd->add_option("--qp", enc.qp, "base quality parameter, 0..63");

  DecodeArgs dec;
  auto* dec_cmd = app.add_subcommand("decode", "decode a coded stream back to Y4M");
  dec_cmd->add_option("input", dec.input, "coded stream (.pic)")->required();
  dec_cmd->add_option("model", dec.model, "model checkpoint (.picm)")->required();
  dec_cmd->add_option("output", dec.output, "reconstructed .y4m")->required();

  FinetuneArgs ft;
  auto* ft_cmd = app.add_subcommand("finetune", "finetune a scene prior on a dataset");
  ft_cmd->add_option("config", ft.config, "experiment config file")->required();
  ft_cmd->add_option("--preset", ft.preset, "training preset")
      ->check(CLI::IsMember({"dcvc", "ssf"}));
  ft_cmd->add_option("--scene-id", ft.scene_id, "scene id stored in cold-start checkpoints");

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "sweep qps and report RD points");
  ev_cmd->add_option("input", ev.input, "source .y4m")->required();
  ev_cmd->add_option("model", ev.model, "model checkpoint (.picm)")->required();
  ev_cmd->add_option("--qp-list", ev.qp_list, "base qps to sweep")->delimiter(',');
  ev_cmd->add_option("--output", ev.output, "write RD points JSON here");

  BdrateArgs bd;
  auto* bd_cmd = app.add_subcommand("bdrate", "BD-rate between two RD curve files");
  bd_cmd->add_option("anchor", bd.anchor, "anchor curve JSON")->required();
  bd_cmd->add_option("test", bd.test, "test curve JSON")->required();
  bd_cmd->add_option("--interp", bd.interp, "interpolant")
      ->check(CLI::IsMember({"pchip", "spline"}));
  bd_cmd->add_option("--window", bd.window, "explicit psnr window lo,hi")
      ->delimiter(',')
      ->expected(2);

  ClassifyArgs cl;
  auto* cl_cmd = app.add_subcommand("classify", "static/dynamic grouping by change intensity");
  cl_cmd->add_option("input", cl.input, "source .y4m")->required();
  cl_cmd->add_option("--threshold", cl.threshold, "static/dynamic intensity threshold");
  cl_cmd->add_option("--window", cl.window, "frames per window (default: whole clip)");

  ReportArgs rp;
  auto* rp_cmd = app.add_subcommand("report", "render RD curves to SVG and CSV");
  rp_cmd->add_option("curves", rp.curves, "RD points JSON files")->required();
  rp_cmd->add_option("--svg", rp.svg, "output SVG path");
  rp_cmd->add_option("--csv", rp.csv, "output CSV path");

  BaselineArgs bl;
  auto* bl_cmd = app.add_subcommand("baseline", "run external codec baselines from config");
  bl_cmd->add_option("config", bl.config, "experiment config file")->required();
  bl_cmd->add_option("input", bl.input, "source .y4m")->required();
  bl_cmd->add_option("--name", bl.name, "run only this baseline");
  bl_cmd->add_option("--work-dir", bl.work_dir, "directory for intermediate files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 5;
  }

  try {
    if (enc_cmd->parsed()) return run_encode(enc);
    if (dec_cmd->parsed()) return run_decode(dec);
    if (ft_cmd->parsed()) return run_finetune(ft);
    if (ev_cmd->parsed()) return run_eval(ev);
    if (bd_cmd->parsed()) return run_bdrate(bd);
    if (cl_cmd->parsed()) return run_classify(cl);
    if (rp_cmd->parsed()) return run_report(rp);
    if (bl_cmd->parsed()) return run_baseline_cmd(bl);
  } catch (const pic::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
