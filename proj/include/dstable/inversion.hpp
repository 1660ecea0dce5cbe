#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dstable/special_fn.hpp"

namespace dstable {

using CfFunction = std::function<ComplexValue(double)>;

/// Masses on the lattice a k, k = k_min .. k_min + N - 1.
///
/// masses holds the raw inversion output (entries may dip to -1e-12 from
/// rounding); clamped() returns the nonnegative copy used for probabilities.
/// alias_bound estimates the mass that fell outside the window.
struct LatticePMF {
  double a = 1.0;
  std::int64_t k_min = 0;
  std::vector<double> masses;
  double alias_bound = 0.0;

  std::int64_t size() const noexcept { return static_cast<std::int64_t>(masses.size()); }
  std::int64_t k_max() const noexcept { return k_min + size() - 1; }
  /// Raw mass at index k; zero outside the window.
  double mass(std::int64_t k) const noexcept;
  std::vector<double> clamped() const;
};

/// Masses within -kNegativeTolerance of zero are accepted as rounding.
inline constexpr double kNegativeTolerance = 1e-12;

/// Inverts a 2 pi / a periodic CF on N = 2^m points:
/// p_k = (1/N) sum_j cf(2 pi j / (N a)) e^{-2 pi i j k / N}, k in [-N/2, N/2).
/// The result is the true pmf folded modulo N.
LatticePMF pmf_from_cf(const CfFunction& cf, double a, std::int64_t N);

/// pmf_from_cf at the smallest N = 2^m >= n_min with alias_bound < target.
/// Throws PrecisionError when n_max is reached first.
LatticePMF pmf_auto(const CfFunction& cf, double a, double target = 1e-6, std::int64_t n_min = 1024,
                    std::int64_t n_max = std::int64_t{1} << 24);

/// Inversion through an exponential tilt. tilted_cf is the CF of the law with
/// masses p_k e^{eta k - log_mgf}; the returned masses are the untilted p_k.
/// Relative accuracy is kept on the side where eta k > 0, which is where
/// the untilted masses are too small for direct inversion.
LatticePMF pmf_from_tilted_cf(const CfFunction& tilted_cf, double a, std::int64_t N, double eta, double log_mgf);

/// P(|X| > x) from clamped masses. Lattice points within a relative 1e-9
/// of x count as equal to x.
double tail_prob(const LatticePMF& pmf, double x);

/// P(X <= x) from clamped masses.
double cdf_from_pmf(const LatticePMF& pmf, double x);

namespace detail {
/// Decade-extrapolated estimate of the mass beyond the window edges.
double alias_estimate(const std::vector<double>& clamped);
}  // namespace detail

}  // namespace dstable
