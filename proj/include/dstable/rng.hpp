#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace dstable {

/// xoshiro256** generator with a deterministic split.
///
/// The state is seeded from a 64-bit value through splitmix64. split(i)
/// derives the i-th child stream from the current state without advancing
/// it, so a parent can hand out keyed streams to parallel batches.
class RngState {
 public:
  using result_type = std::uint64_t;

  explicit RngState(std::uint64_t seed = 0);

  std::uint64_t next_u64() noexcept;
  result_type operator()() noexcept { return next_u64(); }
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;

  RngState split(std::uint64_t child_index) const noexcept;

  const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace dstable
