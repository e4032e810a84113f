// YUV4MPEG2 and headerless planar YUV420 readers/writers.
#pragma once

#include <filesystem>
#include <iosfwd>

#include "pic/frame.hpp"

namespace pic {

// Parses a YUV4MPEG2 stream. Only 8-bit 4:2:0 is accepted ("C420*" tags or
// no C tag); interlace and aspect tags are ignored. A trailing partial frame
// raises TruncatedFrame.
VideoClip read_y4m(std::istream& in);
VideoClip read_y4m_file(const std::filesystem::path& path);

// Emits the canonical header "YUV4MPEG2 W{w} H{h} F{n}:{d} Ip A1:1 C420"
// followed by FRAME-delimited planes. read->write round-trips byte-exactly
// on files this writer produced.
void write_y4m(const VideoClip& clip, std::ostream& out);
void write_y4m_file(const VideoClip& clip, const std::filesystem::path& path);

// Headerless planar 4:2:0 dumps; geometry and frame rate come from the
// caller. The stream must contain a whole number of frames.
VideoClip read_raw_yuv(std::istream& in, int width, int height,
                       int fps_num = 25, int fps_den = 1);
VideoClip read_raw_yuv_file(const std::filesystem::path& path, int width,
                            int height, int fps_num = 25, int fps_den = 1);

}  // namespace pic
