#include "pic/extern_codec.hpp"

#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "pic/errors.hpp"
#include "pic/metrics.hpp"
#include "pic/y4m.hpp"

namespace pic {

namespace {

size_t count_occurrences(const std::string& s, const std::string& token) {
  size_t count = 0;
  for (size_t pos = s.find(token); pos != std::string::npos; pos = s.find(token, pos + token.size())) {
    ++count;
  }
  return count;
}

std::string replace_all(std::string s, const std::string& token, const std::string& value) {
  for (size_t pos = s.find(token); pos != std::string::npos; pos = s.find(token, pos + value.size())) {
    s.replace(pos, token.size(), value);
  }
  return s;
}

struct ProcResult {
  int exit_code = 0;
  bool timed_out = false;
};

// Runs `command` under /bin/sh -c with stderr captured to stderr_path.
// After timeout_s the process group is killed and timed_out is set.
ProcResult run_shell(const std::string& command, const std::string& stderr_path,
                     double timeout_s) {
  const pid_t pid = fork();
  if (pid < 0) throw IoError("fork failed");
  if (pid == 0) {
    setpgid(0, 0);  // own process group so a timeout kill reaps children too
    if (!freopen("/dev/null", "r", stdin)) _exit(126);
    if (!freopen(stderr_path.c_str(), "w", stderr)) _exit(126);
    execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
    _exit(127);
  }

  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
  ProcResult res;
  int status = 0;
  for (;;) {
    const pid_t done = waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0) throw IoError("waitpid failed");
    if (std::chrono::steady_clock::now() > deadline) {
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      res.timed_out = true;
      break;
    }
    timespec ts{0, 20 * 1000 * 1000};  // 20 ms
    nanosleep(&ts, nullptr);
  }
  if (WIFEXITED(status)) {
    res.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    res.exit_code = 128 + WTERMSIG(status);
  }
  return res;
}

std::string read_tail(const std::string& path, size_t max_bytes = 2000) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "";
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (all.size() > max_bytes) return all.substr(all.size() - max_bytes);
  return all;
}

void run_step(const std::string& command, const std::string& stderr_path,
              const CodecCommand& cmd, const std::string& what) {
  const ProcResult pr = run_shell(command, stderr_path, cmd.timeout_seconds);
  if (pr.timed_out) {
    throw TimedOut(cmd.name + " " + what + " exceeded " +
                   std::to_string(cmd.timeout_seconds) + " s: " + command);
  }
  if (pr.exit_code == 127) {
    throw BinaryNotFound(cmd.name + " " + what + " command not found: " + command);
  }
  if (pr.exit_code != 0) {
    throw NonZeroExit(cmd.name + " " + what + " exited with " +
                      std::to_string(pr.exit_code) + ": " + command +
                      "\nstderr: " + read_tail(stderr_path));
  }
}

}  // namespace

void CodecCommand::check() const {
  if (name.empty()) throw BadParameter("codec command needs a name");
  if (count_occurrences(encode_template, "{input}") != 1 ||
      count_occurrences(encode_template, "{output}") != 1 ||
      count_occurrences(encode_template, "{quality}") != 1) {
    throw BadParameter(name + ": encode template must use {input}, {output}, {quality} exactly once");
  }
  if (count_occurrences(decode_template, "{input}") != 1 ||
      count_occurrences(decode_template, "{output}") != 1 ||
      count_occurrences(decode_template, "{quality}") != 0) {
    throw BadParameter(name + ": decode template must use {input} and {output} exactly once");
  }
  if (quality_values.empty()) throw BadParameter(name + ": no quality values");
  if (!(timeout_seconds > 0.0)) throw BadParameter(name + ": timeout must be positive");
}

BaselineResult run_baseline(const std::string& video_path, const CodecCommand& cmd,
                            const std::string& work_dir) {
  cmd.check();
  const VideoClip source = read_y4m_file(video_path);
  std::filesystem::create_directories(work_dir);

  BaselineResult result;
  for (size_t qi = 0; qi < cmd.quality_values.size(); ++qi) {
    const std::string& quality = cmd.quality_values[qi];
    const std::string base = work_dir + "/" + cmd.name + "_q" + std::to_string(qi);
    const std::string enc_path = base + ".bin";
    const std::string dec_path = base + "_dec.y4m";

    const std::string enc_cmd = replace_all(
        replace_all(replace_all(cmd.encode_template, "{input}", video_path), "{output}", enc_path),
        "{quality}", quality);
    run_step(enc_cmd, base + "_enc.stderr", cmd, "encode");

    std::error_code ec;
    const uintmax_t enc_bytes = std::filesystem::file_size(enc_path, ec);
    if (ec) throw IoError(cmd.name + ": encoder produced no output file: " + enc_path);

    const std::string dec_cmd =
        replace_all(replace_all(cmd.decode_template, "{input}", enc_path), "{output}", dec_path);
    run_step(dec_cmd, base + "_dec.stderr", cmd, "decode");

    const VideoClip decoded = read_y4m_file(dec_path);
    if (decoded.width() != source.width() || decoded.height() != source.height() ||
        decoded.frames.size() != source.frames.size()) {
      throw GeometryMismatch(cmd.name + ": decoded video geometry differs from source");
    }

    double psnr_sum = 0.0;
    for (size_t i = 0; i < source.frames.size(); ++i) {
      psnr_sum += weighted_yuv_psnr(source.frames[i], decoded.frames[i]).psnr_weighted;
    }
    const double psnr = psnr_sum / double(source.frames.size());
    if (std::isinf(psnr)) {
      throw InfinitePsnrPoint(cmd.name + ": lossless output at quality " + quality +
                              " cannot sit on an RD curve");
    }
    const double rate = bpp(8 * uint64_t(enc_bytes), source.width(), source.height(),
                            int(source.frames.size()));
    result.points.push_back({rate, psnr});
  }

  try {
    result.curve = RDCurve(result.points);
  } catch (const Error& e) {
    result.curve_error = e.what();
  }
  return result;
}

}  // namespace pic
