#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dstable/families.hpp"
#include "dstable/inversion.hpp"

namespace dstable {

/// Tail constants of a SymmetricDS law, lim x^{2 gamma} P(|X| > x).
struct TailConstants {
  double printed = 0.0;       // the lambda-form constant, gamma = 1/2 branch included
  double simplified = 0.0;    // sigma^{2 gamma} / (Gamma(1 - 2 gamma) cos(pi gamma)); NaN at gamma = 1/2
  double continuation = 0.0;  // limit of the simplified form as gamma -> 1/2: 2 sigma / pi
  bool half_branch = false;   // |gamma - 1/2| <= 1e-12
};

TailConstants tail_constants(const SymmetricDS& p);

/// The lambda-form constant: lambda a^{2 gamma} 2^{-gamma} / (Gamma(1 - 2 gamma) cos(pi gamma)),
/// or lambda (a / 2)(2 / pi) when |gamma - 1/2| <= 1e-12. Requires gamma < 1.
double tail_constant_theoretical(const SymmetricDS& p);

/// Tail diagnostics on a grid of x values.
///
/// For SymmetricDS, scaled_tail holds x^{2 gamma} P(|X| > x) and relative_gap
/// compares it to the printed constant at the largest reliable x. For every
/// family neg_log_tail holds -log P(|X| > x) and decay_exponent is the slope
/// of log(-log P(|X| > x)) against log x over the last decade of the grid;
/// super_linear is decay_exponent > 1.
struct TailReport {
  std::vector<double> x_grid;
  std::vector<double> tail;
  std::vector<double> scaled_tail;
  std::vector<double> neg_log_tail;
  std::vector<bool> reliable;
  double theoretical_constant = 0.0;  // NaN for families without a power tail constant
  double continuation_constant = 0.0;
  double relative_gap = 0.0;          // NaN unless SymmetricDS with a reliable point
  double reliable_x = 0.0;            // largest reliable x, NaN if none
  double decay_exponent = 0.0;
  bool super_linear = false;
  std::int64_t window = 0;            // N used for the inversion
};

/// x_grid must be strictly increasing and positive. SymmetricDS, DS and
/// PolylogDS tails come from direct inversion at N = window, with a point
/// counted as reliable when the N = window / 2 result agrees to 1e-8 (the
/// mass that aliasing moves inside |k| <= x). The light-tailed families
/// (TruncatedSDS, TemperedDS, TruncatedPolylogDS) use exponentially tilted
/// inversion with a saddle-point tilt per x and ignore window.
TailReport tail_check(const FamilyParams& p, const std::vector<double>& x_grid,
                      std::int64_t window = std::int64_t{1} << 22);

/// sup over `points` uniform t in [-T, T] of |char_fn(p, t) - limit CF|.
/// points = 1 evaluates t = 0 only. DomainError if p has no stable target.
double cf_distance(const FamilyParams& p, double T, int points = 2001);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double excess_kurtosis = 0.0;  // m4 / m2^2 - 3 from central moments; NaN if variance is 0
};

Moments sample_moments(const std::vector<double>& samples);

/// Kolmogorov-Smirnov distance between the empirical law of samples and a
/// CDF. For lattice or other discontinuous CDFs pass cdf_left(x) = F(x-)
/// so ties are compared on both sides of each jump.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left = nullptr);

/// Total-variation distance between the histogram of lattice indices and
/// pmf, on cells of consecutive lattice points merged left to right until
/// each expects at least min_expected draws. Draws outside the window form
/// one extra cell with expected mass max(0, 1 - sum of clamped masses).
double histogram_tv(const std::vector<std::int64_t>& indices, const LatticePMF& pmf, double min_expected = 5.0);

/// Pre-limit experiment: reps draws of S_n = n^{-1/alpha}(X_1 + ... + X_n)
/// for each n, with alpha from target_stable(p), compared by KS to the
/// stable CDF and to a normal CDF with the sample mean and variance.
struct PrelimitReport {
  std::vector<std::int64_t> n_values;
  std::vector<double> ks_to_stable;
  std::vector<double> ks_to_gaussian;
  std::vector<double> sample_sd;
  std::vector<double> predicted_sd;   // sqrt(n^{1 - 2/alpha} Var(X_1))
  std::vector<bool> variance_regime;  // predicted_sd below a quarter of the stable scale
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
};

/// p must be TruncatedSDS or TemperedDS and reps >= 10^4 (DomainError
/// otherwise). Deterministic in seed for any thread count.
PrelimitReport prelimit_experiment(const FamilyParams& p, const std::vector<std::int64_t>& n_values,
                                   std::int64_t reps, std::uint64_t seed, int threads = 1);

/// Variance of X_1 for the light-tailed families, from the cumulant
/// function; DomainError otherwise.
double family_variance(const FamilyParams& p);

}  // namespace dstable
