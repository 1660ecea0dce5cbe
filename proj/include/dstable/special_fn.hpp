#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace dstable {

using ComplexValue = std::complex<double>;

/// Natural log of the gamma function for x > 0.
double log_gamma(double x);

/// log Gamma(x) - log Gamma(x + d) without the cancellation of two large
/// log-gamma values. Requires x > 0 and x + d > 0.
double log_gamma_ratio(double x, double d);

/// Generalized binomial coefficient g (g-1) ... (g-k+1) / k!.
double gen_binomial(double g, std::int64_t k);

/// Sibuya law on {1, 2, ...}: P(K = k) = (-1)^{k+1} binom(alpha, k), alpha in (0, 1].
double sibuya_pmf(double alpha, std::int64_t k);

/// P(K > m) = prod_{j <= m} (1 - alpha / j) for the Sibuya law.
double sibuya_survival(double alpha, std::int64_t m);

/// log P(K > m); finite for every m >= 0 when alpha < 1.
double sibuya_log_survival(double alpha, std::int64_t m);

/// Riemann zeta for real s > 1 by Euler-Maclaurin summation.
double riemann_zeta(double s);

/// Li_s(e^{i theta}) = sum_{k >= 1} e^{i k theta} / k^s for s > 1.
ComplexValue polylog_unit(double s, double theta);

/// Polylogarithm on the unit circle for a fixed order s > 1.
///
/// Construction precomputes the zeta coefficients of the expansion around
/// theta = 0, so repeated evaluation (characteristic-function grids) is cheap.
/// Instances are immutable and may be shared between threads.
class PolylogUnitCircle {
 public:
  explicit PolylogUnitCircle(double s);

  ComplexValue operator()(double theta) const;

  double order() const noexcept { return s_; }
  /// Li_s(1) = zeta(s).
  double at_one() const noexcept { return zeta_s_; }

  /// Expansion in powers of theta; valid for 0 < |theta| < 2 pi.
  ComplexValue near_zero(double theta) const;
  /// Direct partial sum plus a convergent difference-series tail; any theta
  /// not close to a multiple of 2 pi.
  ComplexValue direct(double theta) const;

 private:
  double s_;
  double zeta_s_;
  int nearest_int_;
  double eps_;         // s - nearest_int_
  bool near_integer_;  // |eps_| small: singular pair handled analytically
  double gamma_1ms_;   // Gamma(1 - s), unused when near_integer_
  double pair_shift_;  // near_integer_: log Gamma(1 - eps)/eps - sum_j log1p(eps/j)/eps
  double pair_regular_;  // near_integer_: zeta(1 + eps) - 1/eps
  std::vector<double> coeff_;  // zeta(s - k) / k!
};

namespace detail {
/// zeta(u) for any real u != 1 (analytic continuation); test and polylog use.
double zeta_continued(double u);
}  // namespace detail

}  // namespace dstable
