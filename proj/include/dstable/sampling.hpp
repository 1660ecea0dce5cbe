#pragma once

#include <cstdint>
#include <vector>

#include "dstable/families.hpp"
#include "dstable/rng.hpp"

namespace dstable {

/// Largest jump magnitude and lattice index a sampler returns; heavier
/// draws saturate here.
inline constexpr std::int64_t kIndexCap = std::int64_t{1} << 62;

/// Poisson(rate): sequential inversion below rate 30, PTRS transformed
/// rejection above.
std::int64_t sample_poisson(double rate, RngState& rng);

/// Binomial(n, 1/2): popcount of random bits for moderate n, BTRS above.
std::int64_t sample_binomial_half(std::int64_t n, RngState& rng);

/// Sibuya(alpha) by inversion of the closed-form survival function.
std::int64_t sample_sibuya(double alpha, RngState& rng);

/// Sibuya(alpha) tilted by e^{-theta k}: Sibuya proposals accepted with
/// probability e^{-theta (K - 1)}. proposals, when given, accumulates the
/// number of proposals drawn.
std::int64_t sample_tempered_sibuya(double alpha, double theta, RngState& rng, std::int64_t* proposals = nullptr);

/// Zeta law P(K = k) = k^{-s} / zeta(s), s > 1, by Devroye's rejection.
std::int64_t sample_zeta(double s, RngState& rng);

/// Compound-Poisson sampler for one family; tables are built once.
class FamilySampler {
 public:
  explicit FamilySampler(FamilyParams p);

  /// Lattice index K of one draw X = a K.
  std::int64_t sample_index(RngState& rng) const;
  /// One draw X = a K.
  double sample(RngState& rng) const { return a_ * static_cast<double>(sample_index(rng)); }
  /// One jump of the compound sum, as a lattice index.
  std::int64_t sample_jump(RngState& rng) const;

  const FamilyParams& params() const noexcept { return p_; }
  double total_intensity() const noexcept { return intensity_; }

 private:
  FamilyParams p_;
  double a_;
  double intensity_;
  double p_positive_;             // probability a jump is positive (skewed families)
  std::vector<double> cdf_;       // TruncatedSDS: cumulative w_k / W
  double theta_pos_ = 0.0;
  double theta_neg_ = 0.0;
};

/// One draw from the family (builds a FamilySampler on each call).
double sample_family(const FamilyParams& p, RngState& rng);

/// Draws per batch in sample_indices; batch b uses RngState(seed).split(b).
inline constexpr std::int64_t kSampleBatch = 4096;

/// count lattice indices, generated in fixed batches keyed by batch index
/// and spread over up to threads workers. The output depends on (p, count,
/// seed) only.
std::vector<std::int64_t> sample_indices(const FamilyParams& p, std::int64_t count, std::uint64_t seed,
                                         int threads = 1);

}  // namespace dstable
