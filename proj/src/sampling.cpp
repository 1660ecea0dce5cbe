#include "dstable/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dstable/errors.hpp"
#include "dstable/parallel.hpp"
#include "dstable/special_fn.hpp"

namespace dstable {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kPoissonSwitch = 30.0;
constexpr std::int64_t kPopcountMax = 4096;
constexpr std::int64_t kSibuyaSequential = 16;

std::int64_t saturating_add(std::int64_t x, std::int64_t y) {
  const std::int64_t s = x + y;  // |x|, |y| <= 2^62 keeps this in range
  return std::clamp(s, -kIndexCap, kIndexCap);
}

std::int64_t poisson_inversion(double rate, RngState& rng) {
  const double u = rng.uniform();
  double p = std::exp(-rate);
  double cdf = p;
  std::int64_t k = 0;
  // the loop ends once the cdf reaches u; the guard covers cdf rounding below 1
  while (u > cdf && k < 1000) {
    ++k;
    p *= rate / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

// Hormann (1993), transformed rejection with squeeze
std::int64_t poisson_ptrs(double mu, RngState& rng) {
  const double smu = std::sqrt(mu);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mu = std::log(mu);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + mu + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(kd);
    if (kd < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b);
    const double rhs = -mu + kd * log_mu - log_gamma(kd + 1.0);
    if (lhs <= rhs) return static_cast<std::int64_t>(kd);
  }
}

// log k! - [(k + 1/2) log(k + 1) - (k + 1) + log(2 pi)/2]
double stirling_tail(double k) {
  static constexpr double table[10] = {0.08106146679532726, 0.04134069595540929, 0.02767792568499834,
                                       0.02079067210376509, 0.01664469118982119, 0.01387612882307075,
                                       0.01189670994589177, 0.01041126526197209, 0.009255462182712733,
                                       0.008330563433362871};
  if (k < 10.0) return table[static_cast<int>(k)];
  const double r = 1.0 / (k + 1.0);
  const double r2 = r * r;
  return (1.0 / 12.0 - (1.0 / 360.0 - r2 / 1260.0) * r2) * r;
}

// Hormann (1993) BTRS for p = 1/2
std::int64_t binomial_btrs(std::int64_t n_int, RngState& rng) {
  const double n = static_cast<double>(n_int);
  const double spq = std::sqrt(n * 0.25);
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * 0.5;
  const double c = n * 0.5 + 0.5;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double vr = 0.92 - 4.2 / b;
  const double m = std::floor((n + 1.0) * 0.5);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + c);
    if (k < 0.0 || k > n) continue;
    if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(k);
    v = std::log(v * alpha / (a / (us * us) + b));
    // log of f(k)/f(m) for the symmetric binomial, ratios kept as log1p
    const double upper = (m + 0.5) * std::log((m + 1.0) / (n - m + 1.0)) +
                         (n + 1.0) * std::log1p((k - m) / (n - k + 1.0)) +
                         (k + 0.5) * std::log((n - k + 1.0) / (k + 1.0)) + stirling_tail(m) + stirling_tail(n - m) -
                         stirling_tail(k) - stirling_tail(n - k);
    if (v <= upper) return static_cast<std::int64_t>(k);
  }
}

}  // namespace

std::int64_t sample_poisson(double rate, RngState& rng) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw DomainError("sample_poisson: rate must be finite and >= 0");
  if (rate == 0.0) return 0;
  return (rate < kPoissonSwitch) ? poisson_inversion(rate, rng) : poisson_ptrs(rate, rng);
}

std::int64_t sample_binomial_half(std::int64_t n, RngState& rng) {
  if (n < 0) throw DomainError("sample_binomial_half: n must be >= 0");
  if (n <= kPopcountMax) {
    std::int64_t count = 0;
    std::int64_t left = n;
    while (left >= 64) {
      count += std::popcount(rng.next_u64());
      left -= 64;
    }
    if (left > 0) count += std::popcount(rng.next_u64() >> (64 - left));
    return count;
  }
  return binomial_btrs(n, rng);
}

std::int64_t sample_sibuya(double alpha, RngState& rng) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("sample_sibuya: alpha must lie in (0, 1]");
  if (alpha == 1.0) return 1;
  // K = min{m >= 1 : S(m) <= U} has P(K > m) = S(m)
  const double u = rng.uniform();
  double surv = 1.0;
  for (std::int64_t m = 1; m <= kSibuyaSequential; ++m) {
    surv *= 1.0 - alpha / static_cast<double>(m);
    if (surv <= u) return m;
  }
  const double log_u = std::log(u);
  std::int64_t lo = kSibuyaSequential;  // S(lo) > u
  std::int64_t hi = 2 * lo;
  while (sibuya_log_survival(alpha, hi) > log_u) {
    lo = hi;
    if (hi >= kIndexCap / 2) return kIndexCap;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (sibuya_log_survival(alpha, mid) > log_u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

std::int64_t sample_tempered_sibuya(double alpha, double theta, RngState& rng, std::int64_t* proposals) {
  if (!(theta > 0.0) || std::isnan(theta)) throw DomainError("sample_tempered_sibuya: theta must be > 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("sample_tempered_sibuya: alpha must lie in (0, 1]");
  for (;;) {
    const std::int64_t k = sample_sibuya(alpha, rng);
    if (proposals != nullptr) ++*proposals;
    if (k == 1) return 1;
    if (std::log(rng.uniform()) < -theta * static_cast<double>(k - 1)) return k;
  }
}

std::int64_t sample_zeta(double s, RngState& rng) {
  if (!(s > 1.0) || !std::isfinite(s)) throw DomainError("sample_zeta: s must be finite and > 1");
  // Devroye (1986), X.6: envelope from the Pareto law with index s - 1
  const double sm1 = s - 1.0;
  const double b = std::exp2(sm1);
  const double bm1 = std::expm1(sm1 * std::numbers::ln2);
  for (;;) {
    const double u = rng.uniform();
    const double v = rng.uniform();
    const double xr = std::floor(std::exp(-std::log(u) / sm1));
    if (!(xr < static_cast<double>(kIndexCap))) return kIndexCap;
    const double t1 = std::expm1(sm1 * std::log1p(1.0 / xr));  // T - 1
    const double t = 1.0 + t1;
    if (v * xr * t1 / bm1 <= t / b) return static_cast<std::int64_t>(xr);
  }
}

FamilySampler::FamilySampler(FamilyParams p)
    : p_(std::move(p)), a_(lattice_step(p_)), intensity_(compound_poisson_view(p_).total_intensity), p_positive_(0.5) {
  std::visit(Overloaded{
                 [this](const TruncatedSDS& f) {
                   cdf_.reserve(f.weights().size());
                   double acc = 0.0;
                   for (double w : f.weights()) {
                     acc += w;
                     cdf_.push_back(acc / f.weight_sum());
                   }
                   cdf_.back() = 1.0;
                 },
                 [this](const DiscreteStable&) {
                   const auto [l1, l2] = derived_intensities(p_);
                   p_positive_ = l1 / (l1 + l2);
                 },
                 [this](const TemperedDS& f) {
                   const auto [l1, l2] = derived_intensities(p_);
                   auto side = [&](double theta) {
                     return theta == 0.0 ? 1.0 : -std::expm1(f.alpha() * std::log(-std::expm1(-theta)));
                   };
                   const double m1 = l1 * side(f.theta1());
                   const double m2 = l2 * side(f.theta2());
                   p_positive_ = m1 / (m1 + m2);
                   theta_pos_ = f.theta1();
                   theta_neg_ = f.theta2();
                 },
                 [this](const PolylogDS& f) { p_positive_ = f.P() / (f.P() + f.Q()); },
                 [this](const TruncatedPolylogDS& f) { p_positive_ = f.P() / (f.P() + f.Q()); },
                 [](const SymmetricDS&) {},
             },
             p_);
}

std::int64_t FamilySampler::sample_jump(RngState& rng) const {
  return std::visit(
      Overloaded{
          [&](const SymmetricDS& f) {
            const std::int64_t k = sample_sibuya(f.gamma(), rng);
            return 2 * sample_binomial_half(k, rng) - k;
          },
          [&](const TruncatedSDS& f) {
            const double u = rng.uniform();
            const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
            const auto k = static_cast<std::int64_t>(it - cdf_.begin()) + 1;
            const std::int64_t jump = 2 * sample_binomial_half(k, rng) - k;
            if (k > f.M() || jump > f.M() || -jump > f.M()) throw std::logic_error("truncated-sds: jump beyond a M");
            return jump;
          },
          [&](const DiscreteStable& f) {
            const bool up = rng.uniform() < p_positive_;
            const std::int64_t k = sample_sibuya(f.alpha(), rng);
            return up ? k : -k;
          },
          [&](const TemperedDS& f) {
            const bool up = rng.uniform() < p_positive_;
            const double theta = up ? theta_pos_ : theta_neg_;
            const std::int64_t k =
                theta > 0.0 ? sample_tempered_sibuya(f.alpha(), theta, rng) : sample_sibuya(f.alpha(), rng);
            return up ? k : -k;
          },
          [&](const PolylogDS& f) {
            const bool up = rng.uniform() < p_positive_;
            const std::int64_t k = sample_zeta(1.0 + f.alpha(), rng);
            return up ? k : -k;
          },
          [&](const TruncatedPolylogDS& f) {
            const bool up = rng.uniform() < p_positive_;
            std::int64_t k = 0;
            do {
              k = sample_zeta(1.0 + f.alpha(), rng);
            } while (k > f.M());
            return up ? k : -k;
          },
      },
      p_);
}

std::int64_t FamilySampler::sample_index(RngState& rng) const {
  const std::int64_t n = sample_poisson(intensity_, rng);
  std::int64_t total = 0;
  for (std::int64_t j = 0; j < n; ++j) total = saturating_add(total, sample_jump(rng));
  return total;
}

double sample_family(const FamilyParams& p, RngState& rng) { return FamilySampler(p).sample(rng); }

std::vector<std::int64_t> sample_indices(const FamilyParams& p, std::int64_t count, std::uint64_t seed,
                                         int threads) {
  if (count < 0) throw DomainError("sample_indices: count must be >= 0");
  const FamilySampler sampler(p);
  const RngState root(seed);
  std::vector<std::int64_t> out(static_cast<std::size_t>(count));
  const std::int64_t batches = (count + kSampleBatch - 1) / kSampleBatch;
  auto run_batch = [&](std::int64_t b) {
    RngState rng = root.split(static_cast<std::uint64_t>(b));
    const std::int64_t lo = b * kSampleBatch;
    const std::int64_t hi = std::min(count, lo + kSampleBatch);
    for (std::int64_t i = lo; i < hi; ++i) out[static_cast<std::size_t>(i)] = sampler.sample_index(rng);
  };
  detail::parallel_for(batches, threads, run_batch);
  return out;
}

}  // namespace dstable
