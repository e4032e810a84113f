// Error hierarchy shared by every module. Each exception carries a coarse
// category that the CLI maps to its documented exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace pic {

enum class ErrorCategory {
  io = 2,      // filesystem / subprocess failures
  format = 3,  // malformed or inconsistent input data
  digest = 4,  // model/bitstream digest mismatch
  config = 5,  // invalid parameters or configuration
};

class Error : public std::runtime_error {
public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const { return category_; }

private:
  ErrorCategory category_;
};

#define PIC_DEFINE_ERROR(name, category)                    \
  class name : public Error {                               \
  public:                                                   \
    explicit name(const std::string& what)                  \
        : Error(ErrorCategory::category, #name ": " + what) {} \
  }

// video_io
PIC_DEFINE_ERROR(MalformedHeader, format);
PIC_DEFINE_ERROR(UnsupportedChroma, format);
PIC_DEFINE_ERROR(TruncatedFrame, format);
PIC_DEFINE_ERROR(EmptyClip, config);
PIC_DEFINE_ERROR(ClipTooShort, config);
PIC_DEFINE_ERROR(OddGeometry, config);
PIC_DEFINE_ERROR(OutOfBounds, config);

// metrics
PIC_DEFINE_ERROR(DimensionMismatch, config);
PIC_DEFINE_ERROR(ZeroDenominator, config);

// bd_metrics
PIC_DEFINE_ERROR(NoOverlap, format);
PIC_DEFINE_ERROR(TooFewPoints, format);
PIC_DEFINE_ERROR(NonMonotoneCurve, format);
PIC_DEFINE_ERROR(InfinitePsnrPoint, format);
PIC_DEFINE_ERROR(OutOfRange, config);

// entropy_coding
PIC_DEFINE_ERROR(SymbolOutOfAlphabet, config);
PIC_DEFINE_ERROR(TruncatedStream, format);
PIC_DEFINE_ERROR(BadParameter, config);

// codec_core
PIC_DEFINE_ERROR(QpOutOfRange, config);
PIC_DEFINE_ERROR(GeometryMismatch, config);
PIC_DEFINE_ERROR(DigestMismatch, digest);
PIC_DEFINE_ERROR(TruncatedPayload, format);
PIC_DEFINE_ERROR(BadContainer, format);

// pic_trainer
PIC_DEFINE_ERROR(EmptyWarmup, config);
PIC_DEFINE_ERROR(EmptyDataset, config);

// extern_codecs
PIC_DEFINE_ERROR(BinaryNotFound, io);
PIC_DEFINE_ERROR(NonZeroExit, io);
PIC_DEFINE_ERROR(TimedOut, io);

// cli / config
PIC_DEFINE_ERROR(ConfigError, config);
PIC_DEFINE_ERROR(IoError, io);

#undef PIC_DEFINE_ERROR

}  // namespace pic
