// Drives external encoders/decoders (x264, x265, ffmpeg, ...) as
// subprocesses to produce baseline RD curves. Nothing is linked or
// invoked implicitly: callers supply full command templates.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pic/rd_curve.hpp"

namespace pic {

struct CodecCommand {
  std::string name;
  // Shell command with {input} {output} {quality}, each exactly once.
  std::string encode_template;
  // Shell command with {input} {output}, each exactly once (no {quality}).
  std::string decode_template;
  // One encode/decode round per value; substituted verbatim.
  std::vector<std::string> quality_values;
  double timeout_seconds = 600.0;  // per subprocess

  void check() const;
};

struct BaselineResult {
  // One point per quality value, in quality-value order. Rate comes from
  // the encoded file's actual byte size; quality is the mean per-frame
  // weighted YUV PSNR against the source.
  std::vector<RDPoint> points;
  // Present when the points form a valid monotone curve; otherwise
  // curve_error says why and the raw points remain for inspection.
  std::optional<RDCurve> curve;
  std::string curve_error;
};

// Encodes/decodes the Y4M at video_path once per quality value, keeping
// every intermediate file under work_dir (created if missing). Throws
// BinaryNotFound / NonZeroExit / TimedOut for subprocess failures,
// GeometryMismatch when a decode changes geometry, InfinitePsnrPoint when
// a decode is lossless (not representable on an RD curve).
BaselineResult run_baseline(const std::string& video_path, const CodecCommand& cmd,
                            const std::string& work_dir);

}  // namespace pic
