#include "dstable/special_fn.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dstable/errors.hpp"

namespace dstable {

namespace {

double lgamma_abs(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

// Stirling series remainder S(z) in
// log Gamma(z) = (z - 1/2) log z - z + log(2 pi)/2 + S(z), z >= 15.
double stirling_remainder(double z) {
  // B_{2j} / (2j (2j - 1)) for j = 1..6
  constexpr std::array<double, 6> c = {1.0 / 12.0,   -1.0 / 360.0,         1.0 / 1260.0,
                                       -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0};
  const double zi = 1.0 / z;
  const double z2 = zi * zi;
  double acc = 0.0;
  for (std::size_t j = c.size(); j-- > 0;) acc = acc * z2 + c[j];
  return acc * zi;
}

bool is_integer(double x) { return std::floor(x) == x; }

// sign of Gamma(x) for non-integer x
double gamma_sign(double x) {
  if (x > 0.0) return 1.0;
  const auto f = static_cast<long long>(std::floor(x));
  return (f % 2 == 0) ? 1.0 : -1.0;
}

double binomial_product(double g, std::int64_t k) {
  double r = 1.0;
  for (std::int64_t j = 0; j < k; ++j) {
    r *= (g - static_cast<double>(j)) / static_cast<double>(j + 1);
    if (r == 0.0) break;
  }
  return r;
}

constexpr std::int64_t kProductCutoff = 64;

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: requires finite x > 0, got " + std::to_string(x));
  }
  return lgamma_abs(x);
}

double log_gamma_ratio(double x, double d) {
  const double y = x + d;
  if (!(x > 0.0) || !(y > 0.0)) throw DomainError("log_gamma_ratio: arguments must be positive");
  if (d == 0.0) return 0.0;
  constexpr double kStirling = 15.0;
  if (x < kStirling || y < kStirling) return lgamma_abs(x) - lgamma_abs(y);
  // (x - 1/2) log x - (y - 1/2) log y - x + y, rearranged around log1p(d / x)
  const double main = -(x - 0.5) * std::log1p(d / x) - d * std::log(y) + d;
  return main + stirling_remainder(x) - stirling_remainder(y);
}

double gen_binomial(double g, std::int64_t k) {
  if (k < 0) throw DomainError("gen_binomial: k must be nonnegative");
  if (k == 0) return 1.0;
  const double kd = static_cast<double>(k);
  if (is_integer(g)) {
    if (g >= 0.0 && kd > g) return 0.0;
    return binomial_product(g, k);
  }
  if (k <= kProductCutoff || kd <= g + 1.0) return binomial_product(g, k);
  // binom(g, k) = (-1)^k Gamma(k - g) / (Gamma(-g) Gamma(k + 1)), k > g
  const double log_mag = log_gamma_ratio(kd - g, 1.0 + g) - lgamma_abs(-g);
  const double sign = ((k % 2 == 0) ? 1.0 : -1.0) * gamma_sign(-g);
  return sign * std::exp(log_mag);
}

double sibuya_pmf(double alpha, std::int64_t k) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("sibuya_pmf: alpha must lie in (0, 1]");
  if (k < 1) throw DomainError("sibuya_pmf: k must be >= 1");
  const double b = gen_binomial(alpha, k);
  return ((k % 2 == 1) ? b : -b) + 0.0;
}

double sibuya_log_survival(double alpha, std::int64_t m) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("sibuya_survival: alpha must lie in (0, 1]");
  if (m < 0) throw DomainError("sibuya_survival: m must be >= 0");
  if (m == 0) return 0.0;
  if (alpha == 1.0) return -std::numeric_limits<double>::infinity();
  const double md = static_cast<double>(m);
  // Gamma(m + 1 - alpha) / (Gamma(1 - alpha) Gamma(m + 1))
  return log_gamma_ratio(md + 1.0 - alpha, alpha) - lgamma_abs(1.0 - alpha);
}

double sibuya_survival(double alpha, std::int64_t m) {
  return std::exp(sibuya_log_survival(alpha, m));
}

double riemann_zeta(double s) {
  if (!(s > 1.0)) throw DomainError("riemann_zeta: requires s > 1");
  if (std::isinf(s)) return 1.0;
  return detail::zeta_continued(s);
}

namespace detail {

double zeta_continued(double u) {
  if (u == 1.0 || std::isnan(u)) throw DomainError("zeta: pole at u = 1");
  if (u < 0.0) {
    // zeta(u) = 2^u pi^(u-1) sin(pi u / 2) Gamma(1 - u) zeta(1 - u)
    const double half = u / 2.0;
    if (is_integer(half)) return 0.0;  // trivial zeros
    const double v = 1.0 - u;
    const double log_mag = u * std::numbers::ln2 + (u - 1.0) * std::log(std::numbers::pi) + lgamma_abs(v);
    return std::sin(std::numbers::pi * half) * std::exp(log_mag) * zeta_continued(v);
  }
  // Euler-Maclaurin: N - 1 direct terms, endpoint terms, 8 Bernoulli corrections.
  constexpr int kDirect = 20;
  constexpr std::array<double, 8> bernoulli = {1.0 / 6.0,    -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,
                                               5.0 / 66.0,   -691.0 / 2730.0, 7.0 / 6.0,  -3617.0 / 510.0};
  double sum = 0.0;
  for (int n = kDirect - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -u);
  const double N = kDirect;
  const double n_pow = std::pow(N, -u);
  sum += N * n_pow / (u - 1.0) + 0.5 * n_pow;
  // term_j = B_{2j}/(2j)! * u (u+1) ... (u+2j-2) * N^{-u-2j+1}
  double rising = u;          // u (u+1) ... (u + 2j - 2)
  double factorial = 2.0;     // (2j)!
  double power = n_pow / N;   // N^{-u-2j+1}
  for (std::size_t j = 0; j < bernoulli.size(); ++j) {
    sum += bernoulli[j] / factorial * rising * power;
    const double a = u + 2.0 * static_cast<double>(j) + 1.0;
    rising *= a * (a + 1.0);
    const double m = 2.0 * static_cast<double>(j) + 3.0;
    factorial *= m * (m + 1.0);
    power /= N * N;
  }
  return sum;
}

}  // namespace detail

}  // namespace dstable
