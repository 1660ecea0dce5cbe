#include <array>
#include <cmath>
#include <numbers>

#include "dstable/errors.hpp"
#include "dstable/special_fn.hpp"

namespace dstable {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286061;
// Stieltjes constants gamma_1 .. gamma_4
constexpr std::array<double, 4> kStieltjes = {-0.07281584548367672486, -0.00969036319287231848,
                                              0.00205383442030334587, 0.00232537006546730006};
constexpr double kNearIntegerWindow = 1e-3;
constexpr double kSeriesRadius = 2.0;  // |theta| at or below: expansion around 0
constexpr int kDifferenceOrder = 20;

// (exp(d) - 1) / d, continuous at d = 0
ComplexValue expm1_over(ComplexValue d) {
  if (std::abs(d) < 1e-8) return 1.0 + d * (0.5 + d / 6.0);
  const double x = d.real();
  const double y = d.imag();
  const double sh = std::sin(0.5 * y);
  const ComplexValue e{std::expm1(x) * std::cos(y) - 2.0 * sh * sh, std::exp(x) * std::sin(y)};
  return e / d;
}

double log1p_over(double x) { return x == 0.0 ? 1.0 : std::log1p(x) / x; }

double factorial(int n) {
  double f = 1.0;
  for (int j = 2; j <= n; ++j) f *= j;
  return f;
}

}  // namespace

PolylogUnitCircle::PolylogUnitCircle(double s)
    : s_(s),
      zeta_s_(0.0),
      nearest_int_(0),
      eps_(0.0),
      near_integer_(false),
      gamma_1ms_(0.0),
      pair_shift_(0.0),
      pair_regular_(0.0) {
  if (!(s > 1.0) || !std::isfinite(s)) throw DomainError("polylog_unit: requires finite s > 1");
  zeta_s_ = riemann_zeta(s);
  nearest_int_ = static_cast<int>(std::lround(s));
  eps_ = s - nearest_int_;
  near_integer_ = std::abs(eps_) < kNearIntegerWindow;
  const int k0 = nearest_int_ - 1;

  if (near_integer_) {
    const double e = eps_;
    // log Gamma(1 - e) / e = gamma_E + sum_{k >= 2} zeta(k) e^{k-1} / k
    double lg = kEulerGamma;
    double ep = 1.0;
    for (int k = 2; k <= 10; ++k) {
      ep *= e;
      lg += riemann_zeta(k) * ep / k;
    }
    double harmonic = 0.0;
    for (int j = 1; j <= nearest_int_ - 1; ++j) harmonic += log1p_over(e / j) / j;
    pair_shift_ = lg - harmonic;
    double reg = kEulerGamma;
    double en = 1.0;
    double nf = 1.0;
    for (std::size_t n = 0; n < kStieltjes.size(); ++n) {
      en *= e;
      nf *= static_cast<double>(n + 1);
      reg += ((n % 2 == 0) ? -1.0 : 1.0) * kStieltjes[n] * en / nf;
    }
    pair_regular_ = reg;
  } else {
    gamma_1ms_ = std::tgamma(1.0 - s);
  }

  // Coefficients zeta(s - k) / k!; their growth is ~ (2 pi)^{-k}, so stop once
  // the term at |theta| = 2 is negligible.
  // Trivial zeros of zeta make every other coefficient vanish, so the stopping
  // test looks at two consecutive terms.
  double kfact = 1.0;
  double prev = 0.0;
  for (int k = 0; k < 160; ++k) {
    if (k > 0) kfact *= k;
    double c = 0.0;
    if (!(near_integer_ && k == k0)) c = detail::zeta_continued(s - k) / kfact;
    coeff_.push_back(c);
    const double r = std::pow(kSeriesRadius, k);
    if (k > s + 3.0 && std::abs(c) * r < 1e-19 && std::abs(prev) * r < 1e-19) break;
    prev = c;
  }
}

ComplexValue PolylogUnitCircle::near_zero(double theta) const {
  const ComplexValue itheta{0.0, theta};
  ComplexValue power{1.0, 0.0};
  ComplexValue sum{0.0, 0.0};
  for (double c : coeff_) {
    sum += c * power;
    power *= itheta;
  }
  const double log_theta = std::log(std::abs(theta));
  const ComplexValue log_u{log_theta, theta > 0.0 ? -kPi / 2.0 : kPi / 2.0};  // log(-i theta)
  if (!near_integer_) {
    return sum + gamma_1ms_ * std::exp((s_ - 1.0) * log_u);
  }
  // Gamma(1-s) u^{s-1} + zeta(1+eps) (i theta)^{m-1}/(m-1)! with the 1/eps
  // poles cancelled analytically.
  const int m = nearest_int_;
  const ComplexValue d_over_eps = pair_shift_ + log_u;
  const ComplexValue d = eps_ * d_over_eps;
  const ComplexValue u_pow = std::exp(static_cast<double>(m - 1) * log_u);
  const double fm = factorial(m - 1);
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  const ComplexValue pair = sign * u_pow * d_over_eps * expm1_over(d) / fm +
                            pair_regular_ * std::pow(itheta, m - 1) / fm;
  return sum + pair;
}

ComplexValue PolylogUnitCircle::direct(double theta) const {
  using LComplex = std::complex<long double>;
  const long double th = theta;
  const long double half_sin = std::sin(th / 2.0L);
  const LComplex one_minus_z{2.0L * half_sin * half_sin, -std::sin(th)};
  const long double gap = std::abs(one_minus_z);
  if (gap < 1e-3L) throw DomainError("polylog direct summation: theta too close to 0 mod 2 pi");
  const long double s = s_;
  const int M = kDifferenceOrder;
  const auto N = static_cast<long>(std::max(8.0L, std::ceil(4.0L * (s + M) / gap)));

  LComplex head{0.0L, 0.0L};
  for (long k = N - 1; k >= 1; --k) {
    const long double kl = static_cast<long double>(k);
    head += std::polar(std::pow(kl, -s), kl * th);
  }

  std::array<long double, kDifferenceOrder + 1> v{};
  for (int i = 0; i <= M; ++i) v[i] = std::pow(static_cast<long double>(N + i), -s);
  std::array<long double, kDifferenceOrder + 1> delta{};
  delta[0] = v[0];
  for (int m = 1; m <= M; ++m) {
    for (int i = 0; i + m <= M; ++i) v[i] = v[i + 1] - v[i];
    delta[m] = v[0];
  }
  const LComplex z = std::polar(1.0L, th);
  const LComplex w = z / one_minus_z;
  LComplex series{0.0L, 0.0L};
  for (int m = M; m >= 0; --m) series = series * w + delta[m];
  const LComplex tail = std::polar(1.0L, static_cast<long double>(N) * th) / one_minus_z * series;
  const LComplex total = head + tail;
  return {static_cast<double>(total.real()), static_cast<double>(total.imag())};
}

ComplexValue PolylogUnitCircle::operator()(double theta) const {
  if (!std::isfinite(theta)) throw DomainError("polylog_unit: theta must be finite");
  double r = std::remainder(theta, 2.0 * kPi);
  if (r == 0.0) return {zeta_s_, 0.0};
  const bool flip = r < 0.0;
  r = std::abs(r);
  const ComplexValue v = (r <= kSeriesRadius) ? near_zero(r) : direct(r);
  return flip ? std::conj(v) : v;
}

ComplexValue polylog_unit(double s, double theta) { return PolylogUnitCircle(s)(theta); }

}  // namespace dstable
