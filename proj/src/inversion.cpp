#include "dstable/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dstable/errors.hpp"
#include "dstable/fft.hpp"

namespace dstable {

namespace {

constexpr std::int64_t kDirectMax = 1024;
constexpr double kCfNormTolerance = 1e-12;
constexpr double kImagTolerance = 1e-10;
constexpr double kLatticeSlack = 1e-9;

std::vector<ComplexValue> transform(const CfFunction& cf, double a, std::int64_t N) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("inversion: lattice step a must be > 0");
  if (N < 8 || !detail::is_power_of_two(N)) {
    throw DomainError("inversion: N must be a power of two >= 8, got " + std::to_string(N));
  }
  const ComplexValue c0 = cf(0.0);
  if (!(std::abs(c0 - 1.0) <= kCfNormTolerance)) {
    throw InvalidCfError("inversion: cf(0) must be 1, got (" + std::to_string(c0.real()) + ", " +
                         std::to_string(c0.imag()) + ")");
  }
  const auto n = static_cast<std::size_t>(N);
  std::vector<ComplexValue> grid(n);
  const double dt = 2.0 * std::numbers::pi / (static_cast<double>(N) * a);
  grid[0] = c0;
  for (std::size_t j = 1; j < n; ++j) {
    // frequencies above N/2 are evaluated at their negative alias
    const auto jj = static_cast<std::int64_t>(j);
    const std::int64_t m = (jj <= N / 2) ? jj : jj - N;
    grid[j] = cf(dt * static_cast<double>(m));
  }
  if (N <= kDirectMax) return detail::dft_forward(grid);
  detail::fft_forward(grid);
  return grid;
}

// X_k at k = k_min + i, scaled by 1/N, with checks
std::vector<double> real_masses(const std::vector<ComplexValue>& spectrum, std::int64_t N) {
  const double inv = 1.0 / static_cast<double>(N);
  std::vector<double> out(static_cast<std::size_t>(N));
  double worst_imag = 0.0;
  for (std::int64_t i = 0; i < N; ++i) {
    const std::int64_t k = -N / 2 + i;
    const ComplexValue v = spectrum[static_cast<std::size_t>((k + N) % N)] * inv;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw PrecisionError("inversion: non-finite mass");
    worst_imag = std::max(worst_imag, std::abs(v.imag()));
    out[static_cast<std::size_t>(i)] = v.real();
  }
  if (worst_imag > kImagTolerance) {
    throw InvalidCfError("inversion: imaginary residual " + std::to_string(worst_imag) +
                         " exceeds 1e-10; cf is not Hermitian");
  }
  return out;
}

void check_negative(const std::vector<double>& m, std::int64_t k_min) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] < -kNegativeTolerance) {
      throw PrecisionError("inversion: mass " + std::to_string(m[i]) + " at k = " +
                           std::to_string(k_min + static_cast<std::int64_t>(i)) + " is below -1e-12");
    }
  }
}

double sum_clamped(const std::vector<double>& m) {
  double s = 0.0;
  for (double v : m) s += std::max(v, 0.0);
  return s;
}

}  // namespace

double LatticePMF::mass(std::int64_t k) const noexcept {
  if (k < k_min || k > k_max()) return 0.0;
  return masses[static_cast<std::size_t>(k - k_min)];
}

std::vector<double> LatticePMF::clamped() const {
  std::vector<double> out(masses);
  for (double& v : out) v = std::max(v, 0.0);
  return out;
}

namespace detail {

double alias_estimate(const std::vector<double>& c) {
  const auto N = static_cast<std::int64_t>(c.size());
  const std::int64_t K = N / 2;
  // decades when the window allows, octaves otherwise
  const std::int64_t ratio = (K >= 100) ? 10 : 2;
  const std::int64_t inner = K / ratio;
  const std::int64_t innermost = inner / ratio;
  const double eps = std::numeric_limits<double>::epsilon();
  const double noise_per_mass = 4.0 * eps * std::log2(static_cast<double>(std::max<std::int64_t>(N, 2)));
  auto mass_at = [&](std::int64_t k) { return c[static_cast<std::size_t>(k + K)]; };
  double total = 0.0;
  for (int side : {1, -1}) {
    double d2 = 0.0;
    double d1 = 0.0;
    for (std::int64_t j = inner; j < K; ++j) d2 += mass_at(side * j);
    if (side == -1) d2 += mass_at(-K);
    for (std::int64_t j = std::max<std::int64_t>(innermost, 1); j < inner; ++j) d1 += mass_at(side * j);
    const double floor2 = noise_per_mass * static_cast<double>(K - inner + 1);
    if (d2 <= floor2) {
      total += d2;
      continue;
    }
    const double rho = (d1 > 0.0) ? d2 / d1 : std::numeric_limits<double>::infinity();
    if (!(rho < 1.0)) return 1.0;  // no decay visible: window far too small
    total += d2 * rho / (1.0 - rho);
  }
  return std::min(total, 1.0);
}

}  // namespace detail

LatticePMF pmf_from_cf(const CfFunction& cf, double a, std::int64_t N) {
  const auto spectrum = transform(cf, a, N);
  LatticePMF out;
  out.a = a;
  out.k_min = -N / 2;
  out.masses = real_masses(spectrum, N);
  check_negative(out.masses, out.k_min);
  const auto cl = out.clamped();
  out.alias_bound = std::max(0.0, 1.0 - sum_clamped(cl)) + detail::alias_estimate(cl);
  out.alias_bound = std::min(out.alias_bound, 1.0);
  return out;
}

LatticePMF pmf_auto(const CfFunction& cf, double a, double target, std::int64_t n_min, std::int64_t n_max) {
  if (!(target > 0.0)) throw DomainError("pmf_auto: target must be > 0");
  std::int64_t N = 8;
  while (N < n_min) N *= 2;
  double last = 1.0;
  for (; N <= n_max; N *= 2) {
    auto pmf = pmf_from_cf(cf, a, N);
    if (pmf.alias_bound < target) return pmf;
    last = pmf.alias_bound;
  }
  throw PrecisionError("pmf_auto: alias bound " + std::to_string(last) + " still above target " +
                       std::to_string(target) + " at N = " + std::to_string(n_max) +
                       "; a larger window or coarser lattice is required");
}

LatticePMF pmf_from_tilted_cf(const CfFunction& tilted_cf, double a, std::int64_t N, double eta, double log_mgf) {
  const auto spectrum = transform(tilted_cf, a, N);
  LatticePMF out;
  out.a = a;
  out.k_min = -N / 2;
  auto q = real_masses(spectrum, N);
  check_negative(q, out.k_min);
  std::vector<double> qc(q);
  for (double& v : qc) v = std::max(v, 0.0);
  // the window bound applies to the tilted law
  out.alias_bound = std::min(1.0, std::max(0.0, 1.0 - sum_clamped(qc)) + detail::alias_estimate(qc));
  for (std::int64_t i = 0; i < N; ++i) {
    const double k = static_cast<double>(out.k_min + i);
    auto& v = q[static_cast<std::size_t>(i)];
    // rounding-level tilted masses carry no information once untilted
    v = (v <= 0.0) ? 0.0 : std::exp(std::log(v) - eta * k + log_mgf);
    if (!std::isfinite(v)) v = 0.0;
  }
  out.masses = std::move(q);
  return out;
}

double tail_prob(const LatticePMF& pmf, double x) {
  if (!(x >= 0.0)) throw DomainError("tail_prob: x must be >= 0");
  const double lim = x / pmf.a * (1.0 + kLatticeSlack);
  double s = 0.0;
  for (std::int64_t i = 0; i < pmf.size(); ++i) {
    const std::int64_t k = pmf.k_min + i;
    if (static_cast<double>(k < 0 ? -k : k) > lim) s += std::max(pmf.masses[static_cast<std::size_t>(i)], 0.0);
  }
  return s;
}

double cdf_from_pmf(const LatticePMF& pmf, double x) {
  if (std::isnan(x)) throw DomainError("cdf_from_pmf: x is NaN");
  const double lim = x / pmf.a;
  const double slack = kLatticeSlack * std::max(1.0, std::abs(lim));
  double s = 0.0;
  for (std::int64_t i = 0; i < pmf.size(); ++i) {
    const double k = static_cast<double>(pmf.k_min + i);
    if (k <= lim + slack) s += std::max(pmf.masses[static_cast<std::size_t>(i)], 0.0);
  }
  return std::min(s, 1.0);
}

}  // namespace dstable
