// Bit-exact range coding of symbols under fixed 16-bit-precision models.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pic/errors.hpp"

namespace pic {

// Cumulative-count table over a finite alphabet. cdf has alphabet_size()+1
// entries with cdf[0] == 0 and cdf.back() == 2^16; every symbol keeps at
// least one count so any symbol stays decodable.
class SymbolModel {
public:
  static constexpr uint32_t kTotal = 1u << 16;

  explicit SymbolModel(std::vector<uint32_t> cdf);

  int alphabet_size() const { return int(cdf_.size()) - 1; }
  uint32_t cum(int symbol) const { return cdf_[size_t(symbol)]; }
  uint32_t freq(int symbol) const {
    return cdf_[size_t(symbol) + 1] - cdf_[size_t(symbol)];
  }
  const std::vector<uint32_t>& cdf() const { return cdf_; }

  // -log2(freq/2^16): the ideal code length for the symbol in bits.
  double bit_cost(int symbol) const;

private:
  std::vector<uint32_t> cdf_;
};

// Discretized Laplacian over symbols {-k_max .. k_max} (alphabet index is
// symbol + k_max). Interior symbols take the probability mass of their
// step-wide interval; the extreme symbols absorb the tails. Counts are
// quantized by largest remainder with a floor of one count.
SymbolModel laplace_model(double scale_b, double step, int k_max);

// 32-bit range, 16-bit probability precision, carries resolved by
// back-patching already-emitted bytes. Streams are byte-identical across
// runs: the coder path is integer-only.
class RangeEncoder {
public:
  void encode(const SymbolModel& model, int symbol);
  // Flushes exactly 8 bytes of the low accumulator and returns the stream.
  std::vector<uint8_t> finish();
  size_t bytes_emitted() const { return buf_.size(); }

private:
  void propagate_carry();

  std::vector<uint8_t> buf_;
  uint64_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
};

class RangeDecoder {
public:
  explicit RangeDecoder(std::span<const uint8_t> data);
  int decode(const SymbolModel& model);

private:
  uint8_t next_byte();

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
  uint64_t code_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
};

}  // namespace pic
