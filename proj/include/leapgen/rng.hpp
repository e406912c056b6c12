#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace leapgen {

// Philox4x32-10 counter-based generator, 64-bit output.
// key = seed, counter = (block index, stream id); streams never overlap.
class Philox4x32 {
public:
  using result_type = std::uint64_t;

  static constexpr const char* kName = "philox4x32-10";
  static constexpr int kVersion = 1;

  explicit Philox4x32(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (pos_ == 2) refill();
    return buf_[pos_++];
  }

  // [0,1) with 53 random bits
  double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }
  // (0,1)
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }
  // exact uniform integer in [0, bound)
  std::uint64_t below(std::uint64_t bound) noexcept;

  // 64-bit words handed out so far
  std::uint64_t draws() const noexcept { return 2 * counter_ - static_cast<std::uint64_t>(2 - pos_); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  // one block of the raw bijection, exposed for known-answer tests
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) noexcept;

private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int pos_ = 2;
};

using Rng = Philox4x32;

// sub-seed stream for chunk `chunk` of a campaign seeded with `seed`
inline Rng chunk_stream(std::uint64_t seed, std::uint64_t chunk) { return Rng(seed, chunk); }

}  // namespace leapgen
