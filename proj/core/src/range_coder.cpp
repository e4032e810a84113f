#include "pic/range_coder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pic {

namespace {

constexpr uint32_t kTopValue = 1u << 24;  // renormalize below this range

}  // namespace

SymbolModel::SymbolModel(std::vector<uint32_t> cdf) : cdf_(std::move(cdf)) {
  if (cdf_.size() < 2) throw BadParameter("symbol model needs at least one symbol");
  if (cdf_.front() != 0) throw BadParameter("cdf must start at 0");
  if (cdf_.back() != kTotal) throw BadParameter("cdf must end at 2^16");
  for (size_t i = 1; i < cdf_.size(); ++i) {
    if (cdf_[i] <= cdf_[i - 1]) throw BadParameter("cdf must be strictly increasing");
  }
}

double SymbolModel::bit_cost(int symbol) const {
  return 16.0 - std::log2(double(freq(symbol)));
}

SymbolModel laplace_model(double scale_b, double step, int k_max) {
  if (!(scale_b > 0.0) || !std::isfinite(scale_b)) throw BadParameter("laplace scale must be positive");
  if (!(step > 0.0) || !std::isfinite(step)) throw BadParameter("quantizer step must be positive");
  if (k_max < 1) throw BadParameter("k_max must be at least 1");
  if (2 * int64_t(k_max) + 1 > int64_t(SymbolModel::kTotal)) {
    throw BadParameter("alphabet too large for 16-bit model");
  }

  // Probability mass per symbol. Evaluate k >= 0 only and mirror so the
  // real-valued table is exactly symmetric; integer apportionment below then
  // keeps mirrored counts within one of each other.
  const int n = 2 * k_max + 1;
  std::vector<double> mass(size_t(n), 0.0);
  auto at = [&](int k) -> double& { return mass[size_t(k + k_max)]; };
  // P(0) = F(step/2) - F(-step/2) = 1 - exp(-step/(2b))
  at(0) = -std::expm1(-0.5 * step / scale_b);
  for (int k = 1; k < k_max; ++k) {
    const double hi = std::exp(-(double(k) - 0.5) * step / scale_b);
    const double lo = std::exp(-(double(k) + 0.5) * step / scale_b);
    const double p = 0.5 * (hi - lo);
    at(k) = p;
    at(-k) = p;
  }
  // Extremes absorb the tail beyond (k_max - 1/2) * step.
  const double tail = 0.5 * std::exp(-(double(k_max) - 0.5) * step / scale_b);
  at(k_max) = tail;
  at(-k_max) = tail;

  // Largest-remainder quantization to a total of exactly 2^16, with every
  // symbol keeping at least one count.
  std::vector<uint32_t> count(static_cast<size_t>(n));
  std::vector<double> remainder(static_cast<size_t>(n));
  uint64_t sum = 0;
  for (int i = 0; i < n; ++i) {
    const double scaled = mass[size_t(i)] * double(SymbolModel::kTotal);
    uint32_t c = uint32_t(std::floor(scaled));
    double r = scaled - double(c);
    if (c == 0) {
      c = 1;
      r = -1.0;  // already got its bump; last in line for extras
    }
    count[size_t(i)] = c;
    remainder[size_t(i)] = r;
    sum += c;
  }

  if (sum < SymbolModel::kTotal) {
    // Hand out the missing counts to the largest remainders, lowest index
    // first on ties, so the result is deterministic.
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return remainder[size_t(a)] > remainder[size_t(b)];
    });
    uint64_t missing = SymbolModel::kTotal - sum;
    for (size_t i = 0; missing > 0; i = (i + 1) % order.size()) {
      ++count[size_t(order[i])];
      --missing;
    }
  } else if (sum > SymbolModel::kTotal) {
    // The floor-of-one bumps can overshoot. Shave one count at a time off
    // the current largest bin (lowest index on ties): draining only maxima
    // keeps the table symmetric and monotone to within one count.
    uint64_t excess = sum - SymbolModel::kTotal;
    while (excess > 0) {
      int best = -1;
      for (int i = 0; i < n; ++i) {
        if (count[size_t(i)] > 1 && (best < 0 || count[size_t(i)] > count[size_t(best)])) best = i;
      }
      --count[size_t(best)];
      --excess;
    }
  }

  std::vector<uint32_t> cdf(size_t(n) + 1, 0);
  for (int i = 0; i < n; ++i) cdf[size_t(i) + 1] = cdf[size_t(i)] + count[size_t(i)];
  return SymbolModel(std::move(cdf));
}

void RangeEncoder::propagate_carry() {
  // low overflowed 32 bits: add one to the emitted stream, rippling back
  // through any 0xFF bytes. The first symbols cannot overflow before a
  // byte exists (low + range <= 2^32 until the first renormalization), so
  // the buffer is never empty here.
  size_t i = buf_.size();
  while (i > 0 && ++buf_[--i] == 0) {
  }
}

void RangeEncoder::encode(const SymbolModel& model, int symbol) {
  if (symbol < 0 || symbol >= model.alphabet_size()) {
    throw SymbolOutOfAlphabet("symbol outside model alphabet");
  }
  const uint32_t r = range_ >> 16;
  low_ += uint64_t(r) * model.cum(symbol);
  if (low_ >= (uint64_t(1) << 32)) {
    propagate_carry();
    low_ &= 0xFFFFFFFFu;
  }
  range_ = r * model.freq(symbol);
  while (range_ < kTopValue) {
    buf_.push_back(uint8_t(low_ >> 24));
    low_ = (low_ << 8) & 0xFFFFFFFFu;
    range_ <<= 8;
  }
}

std::vector<uint8_t> RangeEncoder::finish() {
  for (int i = 0; i < 8; ++i) {
    buf_.push_back(uint8_t(low_ >> 24));
    low_ = (low_ << 8) & 0xFFFFFFFFu;
  }
  return std::move(buf_);
}

RangeDecoder::RangeDecoder(std::span<const uint8_t> data) : data_(data) {
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
}

uint8_t RangeDecoder::next_byte() {
  if (pos_ >= data_.size()) throw TruncatedStream("range-coded stream ended early");
  return data_[pos_++];
}

int RangeDecoder::decode(const SymbolModel& model) {
  const uint32_t r = range_ >> 16;
  uint32_t dv = uint32_t(code_ / r);
  if (dv > SymbolModel::kTotal - 1) dv = SymbolModel::kTotal - 1;
  const auto& cdf = model.cdf();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), dv);
  const int symbol = int(it - cdf.begin()) - 1;
  code_ -= uint64_t(r) * model.cum(symbol);
  range_ = r * model.freq(symbol);
  while (range_ < kTopValue) {
    code_ = ((code_ << 8) | next_byte()) & 0xFFFFFFFFu;
    range_ <<= 8;
  }
  return symbol;
}

}  // namespace pic
