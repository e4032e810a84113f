#include "pic/y4m.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace pic {

namespace {

constexpr char kMagic[] = "YUV4MPEG2";

int parse_int(std::string_view text, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value <= 0) {
    throw MalformedHeader(std::string("bad ") + what + " value '" +
                          std::string(text) + "'");
  }
  return value;
}

bool read_plane(std::istream& in, std::vector<uint8_t>& plane) {
  in.read(reinterpret_cast<char*>(plane.data()),
          static_cast<std::streamsize>(plane.size()));
  return static_cast<size_t>(in.gcount()) == plane.size();
}

}  // namespace

VideoClip read_y4m(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw MalformedHeader("empty stream");
  std::istringstream tags(header);
  std::string tag;
  tags >> tag;
  if (tag != kMagic) throw MalformedHeader("missing YUV4MPEG2 magic");

  int width = 0, height = 0, fps_num = 25, fps_den = 1;
  while (tags >> tag) {
    switch (tag[0]) {
      case 'W': width = parse_int(std::string_view(tag).substr(1), "W"); break;
      case 'H': height = parse_int(std::string_view(tag).substr(1), "H"); break;
      case 'F': {
        auto colon = tag.find(':');
        if (colon == std::string::npos) throw MalformedHeader("F tag missing ':'");
        fps_num = parse_int(std::string_view(tag).substr(1, colon - 1), "F numerator");
        fps_den = parse_int(std::string_view(tag).substr(colon + 1), "F denominator");
        break;
      }
      case 'C':
        if (tag.rfind("C420", 0) != 0) {
          throw UnsupportedChroma("only 4:2:0 is supported, got " + tag);
        }
        break;
      case 'I': case 'A': case 'X':
        break;  // interlace/aspect/extension tags accepted and ignored
      default:
        throw MalformedHeader("unrecognized tag " + tag);
    }
  }
  if (width == 0 || height == 0) throw MalformedHeader("missing W or H tag");
  if (width % 2 || height % 2) {
    throw UnsupportedChroma("odd dimensions are not representable in 4:2:0");
  }

  VideoClip clip;
  clip.fps_num = fps_num;
  clip.fps_den = fps_den;
  std::string frame_line;
  while (std::getline(in, frame_line)) {
    if (frame_line.rfind("FRAME", 0) != 0) {
      throw MalformedHeader("expected FRAME marker, got '" + frame_line + "'");
    }
    Frame frame(width, height);
    if (!read_plane(in, frame.y) || !read_plane(in, frame.u) ||
        !read_plane(in, frame.v)) {
      throw TruncatedFrame("frame " + std::to_string(clip.frames.size()) +
                           " is incomplete");
    }
    clip.frames.push_back(std::move(frame));
  }
  if (clip.frames.empty()) throw TruncatedFrame("stream contains no frames");
  return clip;
}

void write_y4m(const VideoClip& clip, std::ostream& out) {
  clip.check();
  out << kMagic << " W" << clip.width() << " H" << clip.height() << " F"
      << clip.fps_num << ":" << clip.fps_den << " Ip A1:1 C420\n";
  for (const Frame& frame : clip.frames) {
    out << "FRAME\n";
    out.write(reinterpret_cast<const char*>(frame.y.data()),
              static_cast<std::streamsize>(frame.y.size()));
    out.write(reinterpret_cast<const char*>(frame.u.data()),
              static_cast<std::streamsize>(frame.u.size()));
    out.write(reinterpret_cast<const char*>(frame.v.data()),
              static_cast<std::streamsize>(frame.v.size()));
  }
  if (!out) throw IoError("y4m write failed");
}

VideoClip read_y4m_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_y4m(in);
}

void write_y4m_file(const VideoClip& clip, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path.string());
  write_y4m(clip, out);
}

VideoClip read_raw_yuv(std::istream& in, int width, int height, int fps_num,
                       int fps_den) {
  if (width < 2 || height < 2 || width % 2 || height % 2) {
    throw OddGeometry("raw yuv geometry must be even and >= 2");
  }
  VideoClip clip;
  clip.fps_num = fps_num;
  clip.fps_den = fps_den;
  for (;;) {
    Frame frame(width, height);
    in.read(reinterpret_cast<char*>(frame.y.data()),
            static_cast<std::streamsize>(frame.y.size()));
    if (in.gcount() == 0) break;
    if (static_cast<size_t>(in.gcount()) != frame.y.size() ||
        !read_plane(in, frame.u) || !read_plane(in, frame.v)) {
      throw TruncatedFrame("raw stream ends mid-frame");
    }
    clip.frames.push_back(std::move(frame));
  }
  if (clip.frames.empty()) throw TruncatedFrame("raw stream contains no frames");
  return clip;
}

VideoClip read_raw_yuv_file(const std::filesystem::path& path, int width,
                            int height, int fps_num, int fps_den) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_raw_yuv(in, width, height, fps_num, fps_den);
}

}  // namespace pic
