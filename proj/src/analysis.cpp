#include "dstable/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dstable/errors.hpp"
#include "dstable/parallel.hpp"
#include "dstable/rng.hpp"
#include "dstable/sampling.hpp"
#include "dstable/stable_cdf.hpp"

namespace dstable {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kHalfBranch = 1e-12;
constexpr double kReliableGap = 1e-8;
constexpr std::int64_t kTiltWindowMax = std::int64_t{1} << 22;
constexpr double kLatticeSlack = 1e-9;
constexpr std::int64_t kPrelimitBatch = 1024;
constexpr double kKsTol = 1e-9;

bool light_tailed(const FamilyParams& p) {
  return std::holds_alternative<TruncatedSDS>(p) || std::holds_alternative<TemperedDS>(p) ||
         std::holds_alternative<TruncatedPolylogDS>(p);
}

// d psi / d eta by central differences, kept inside the strip
double cumulant_slope(const FamilyParams& p, double eta, double h) {
  return (log_mgf_index(p, eta + h) - log_mgf_index(p, eta - h)) / (2.0 * h);
}

// upper end of the admissible tilts on one side (infinite for truncated families)
double tilt_limit(const FamilyParams& p, int side) {
  if (const auto* t = std::get_if<TemperedDS>(&p)) return side > 0 ? t->theta1() : t->theta2();
  return std::numeric_limits<double>::infinity();
}

// Tilt eta (sign = side) with tilted mean side * k0, by bisection.
double saddle_tilt(const FamilyParams& p, double k0, int side) {
  const double limit = tilt_limit(p, side);
  if (!(limit > 0.0)) return kNaN;
  auto slope = [&](double e) {
    const double h = std::min(1e-5 * std::max(1.0, e), 0.25 * (limit - e));
    return side * cumulant_slope(p, side * e, h);
  };
  double lo = 0.0;
  double hi = std::isfinite(limit) ? limit * (1.0 - 1e-12) : 1.0;
  if (!std::isfinite(limit)) {
    while (slope(hi) < k0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 700.0) return kNaN;
    }
  } else if (slope(hi) < k0) {
    return kNaN;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) < k0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return side * 0.5 * (lo + hi);
}

// P(side * K > k0) through the tilted law centered at side * k0
double tilted_side_tail(const FamilyParams& p, double k0, int side, std::int64_t& window) {
  const double eta = saddle_tilt(p, k0, side);
  if (std::isnan(eta)) return kNaN;
  const double room = tilt_limit(p, side) - std::abs(eta);
  const double h = std::min(1e-4 * std::max(1.0, std::abs(eta)), 0.5 * room);
  const double var =
      (log_mgf_index(p, eta + h) - 2.0 * log_mgf_index(p, eta) + log_mgf_index(p, eta - h)) / (h * h);
  const double spread = std::sqrt(std::max(var, 1.0));
  std::int64_t N = 1024;
  // the right side of the tilted law must sit inside [0, N/2)
  while (static_cast<double>(N) < 2.0 * (k0 + 16.0 * spread) && N < kTiltWindowMax) N *= 2;
  window = std::max(window, N);
  const double psi = log_mgf_index(p, eta);
  CfFunction tilted = [&](double t) { return std::exp(log_char_fn_tilted(p, t, eta)); };
  const LatticePMF pmf = pmf_from_tilted_cf(tilted, lattice_step(p), N, eta, psi);
  const double lim = k0 * (1.0 + kLatticeSlack);
  double s = 0.0;
  for (std::int64_t i = 0; i < pmf.size(); ++i) {
    const double k = side * static_cast<double>(pmf.k_min + i);
    if (k > lim) s += pmf.masses[static_cast<std::size_t>(i)];
  }
  return s;
}

// least-squares slope of y on x
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den > 0.0 ? (n * sxy - sx * sy) / den : kNaN;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

TailConstants tail_constants(const SymmetricDS& p) {
  const double g = p.gamma();
  if (!(g < 1.0)) throw DomainError("tail_constant_theoretical: gamma must be < 1, got " + std::to_string(g));
  TailConstants out;
  out.half_branch = std::abs(g - 0.5) <= kHalfBranch;
  out.continuation = 2.0 * p.sigma() / kPi;
  const double scale = p.lambda() * std::pow(p.a(), 2.0 * g);
  if (out.half_branch) {
    out.printed = scale / 2.0 * (2.0 / kPi);
    out.simplified = kNaN;
    return out;
  }
  const double den = std::tgamma(1.0 - 2.0 * g) * std::cos(kPi * g);
  // for gamma in (1/2, 1) both factors are negative
  if (!(den > 0.0)) throw PrecisionError("tail_constant_theoretical: non-positive denominator");
  out.printed = scale * std::pow(2.0, -g) / den;
  out.simplified = std::pow(p.sigma(), 2.0 * g) / den;
  return out;
}

double tail_constant_theoretical(const SymmetricDS& p) { return tail_constants(p).printed; }

TailReport tail_check(const FamilyParams& p, const std::vector<double>& x_grid, std::int64_t window) {
  if (x_grid.empty()) throw DomainError("tail_check: empty x grid");
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    if (!(x_grid[i] > 0.0) || (i > 0 && !(x_grid[i] > x_grid[i - 1]))) {
      throw DomainError("tail_check: x grid must be positive and strictly increasing");
    }
  }
  const double a = lattice_step(p);
  TailReport r;
  r.x_grid = x_grid;
  r.theoretical_constant = kNaN;
  r.continuation_constant = kNaN;
  r.relative_gap = kNaN;
  r.reliable_x = kNaN;
  const std::size_t n = x_grid.size();
  r.tail.assign(n, kNaN);
  r.reliable.assign(n, false);

  if (light_tailed(p)) {
    for (std::size_t i = 0; i < n; ++i) {
      const double k0 = x_grid[i] / a;
      const double right = tilted_side_tail(p, k0, 1, r.window);
      const double left = tilted_side_tail(p, k0, -1, r.window);
      r.tail[i] = right + left;
      r.reliable[i] = std::isfinite(r.tail[i]) && r.tail[i] > 0.0;
    }
  } else {
    const CfFunction cf = [&](double t) { return char_fn(p, t); };
    const LatticePMF fine = pmf_from_cf(cf, a, window);
    const LatticePMF coarse = pmf_from_cf(cf, a, window / 2);
    r.window = window;
    for (std::size_t i = 0; i < n; ++i) {
      if (x_grid[i] / a >= static_cast<double>(window / 4)) continue;
      const double t2 = tail_prob(fine, x_grid[i]);
      const double t1 = tail_prob(coarse, x_grid[i]);
      r.tail[i] = t2;
      r.reliable[i] = std::abs(t2 - t1) < kReliableGap && t2 > 0.0;
    }
    if (!std::any_of(r.reliable.begin(), r.reliable.end(), [](bool b) { return b; })) {
      throw PrecisionError("tail_check: no grid point is resolved at N = " + std::to_string(window) +
                           "; a larger N, a coarser lattice or smaller x is required");
    }
  }

  r.neg_log_tail.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.neg_log_tail[i] = r.tail[i] > 0.0 ? -std::log(r.tail[i]) : kNaN;

  double x_last = kNaN;
  for (std::size_t i = 0; i < n; ++i) {
    if (r.reliable[i]) x_last = x_grid[i];
  }
  r.reliable_x = x_last;

  if (const auto* s = std::get_if<SymmetricDS>(&p); s != nullptr && s->gamma() < 1.0) {
    const TailConstants c = tail_constants(*s);
    r.theoretical_constant = c.printed;
    r.continuation_constant = c.continuation;
    r.scaled_tail.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.scaled_tail[i] = std::pow(x_grid[i], 2.0 * s->gamma()) * r.tail[i];
    for (std::size_t i = n; i-- > 0;) {
      if (r.reliable[i]) {
        r.relative_gap = std::abs(r.scaled_tail[i] - c.printed) / c.printed;
        break;
      }
    }
  }

  // decay exponent over the last decade of reliable points
  std::vector<double> lx;
  std::vector<double> ly;
  if (std::isfinite(x_last)) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!r.reliable[i] || x_grid[i] < x_last / 10.0 * (1.0 - 1e-12)) continue;
      if (!(r.neg_log_tail[i] > 0.0)) continue;
      lx.push_back(std::log(x_grid[i]));
      ly.push_back(std::log(r.neg_log_tail[i]));
    }
  }
  r.decay_exponent = lx.size() >= 2 ? ls_slope(lx, ly) : kNaN;
  r.super_linear = r.decay_exponent > 1.0;
  return r;
}

double cf_distance(const FamilyParams& p, double T, int points) {
  if (!(T > 0.0)) throw DomainError("cf_distance: T must be > 0");
  if (points < 1) throw DomainError("cf_distance: points must be >= 1");
  const StableTarget target = target_stable(p);
  if (!target.has_stable) throw DomainError("cf_distance: family has no stable limit (Gaussian attraction only)");
  double worst = 0.0;
  for (int j = 0; j < points; ++j) {
    const double t = (points == 1) ? 0.0 : -T + 2.0 * T * j / (points - 1);
    worst = std::max(worst, std::abs(char_fn(p, t) - stable_cf(target.params, t, target.symmetric)));
  }
  return worst;
}

Moments sample_moments(const std::vector<double>& x) {
  if (x.size() < 2) throw DomainError("sample_moments: need at least 2 samples");
  const auto n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  Moments out;
  out.mean = mean;
  out.variance = m2 / (n - 1.0);
  out.excess_kurtosis = m2 > 0.0 ? (m4 / n) / ((m2 / n) * (m2 / n)) - 3.0 : kNaN;
  return out;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left) {
  if (samples.empty()) throw DomainError("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double v = samples[i];
    const double below = static_cast<double>(i) / n;
    const double at = static_cast<double>(j) / n;
    const double f = cdf(v);
    const double f_left = cdf_left ? cdf_left(v) : f;
    d = std::max({d, std::abs(at - f), std::abs(below - f_left)});
    i = j;
  }
  return d;
}

double histogram_tv(const std::vector<std::int64_t>& indices, const LatticePMF& pmf, double min_expected) {
  if (indices.empty()) throw DomainError("histogram_tv: no samples");
  if (!(min_expected > 0.0)) throw DomainError("histogram_tv: min_expected must be > 0");
  const auto n = static_cast<double>(indices.size());
  std::vector<double> counts(static_cast<std::size_t>(pmf.size()), 0.0);
  double outside = 0.0;
  for (std::int64_t k : indices) {
    if (k < pmf.k_min || k > pmf.k_max()) {
      outside += 1.0;
    } else {
      counts[static_cast<std::size_t>(k - pmf.k_min)] += 1.0;
    }
  }
  struct Cell {
    double observed, expected;
  };
  std::vector<Cell> cells;
  Cell open{0.0, 0.0};
  double mass = 0.0;
  for (std::int64_t i = 0; i < pmf.size(); ++i) {
    const double p = std::max(pmf.masses[static_cast<std::size_t>(i)], 0.0);
    mass += p;
    open.expected += p;
    open.observed += counts[static_cast<std::size_t>(i)] / n;
    if (open.expected * n >= min_expected) {
      cells.push_back(open);
      open = {0.0, 0.0};
    }
  }
  if (cells.empty()) {
    cells.push_back(open);
  } else {
    cells.back().observed += open.observed;
    cells.back().expected += open.expected;
  }
  cells.push_back({outside / n, std::max(0.0, 1.0 - mass)});
  double tv = 0.0;
  for (const Cell& c : cells) tv += std::abs(c.observed - c.expected);
  return 0.5 * tv;
}

double family_variance(const FamilyParams& p) {
  if (!light_tailed(p)) throw DomainError("family_variance: only the truncated and tempered families have finite variance");
  const double a = lattice_step(p);
  if (const auto* t = std::get_if<TemperedDS>(&p); t != nullptr) {
    if (!(t->theta1() > 0.0 && t->theta2() > 0.0)) {
      const auto [l1, l2] = derived_intensities(p);
      if ((t->theta1() == 0.0 && l1 > 0.0) || (t->theta2() == 0.0 && l2 > 0.0)) {
        return std::numeric_limits<double>::infinity();
      }
    }
  }
  const double limit = std::min(tilt_limit(p, 1), tilt_limit(p, -1));
  const double h = std::isfinite(limit) ? std::min(1e-3, 0.25 * limit) : 1e-3;
  const double d2 = (log_mgf_index(p, h) - 2.0 * log_mgf_index(p, 0.0) + log_mgf_index(p, -h)) / (h * h);
  return a * a * d2;
}

PrelimitReport prelimit_experiment(const FamilyParams& p, const std::vector<std::int64_t>& n_values, std::int64_t reps,
                                   std::uint64_t seed, int threads) {
  if (!std::holds_alternative<TruncatedSDS>(p) && !std::holds_alternative<TemperedDS>(p)) {
    throw DomainError("prelimit_experiment: family must be truncated-sds or tempered-ds");
  }
  if (reps < 10000) throw DomainError("prelimit_experiment: reps must be >= 10^4");
  for (auto n : n_values) {
    if (n < 1) throw DomainError("prelimit_experiment: n values must be >= 1");
  }
  const StableTarget target = target_stable(p);
  const double alpha = target.params.alpha;
  const double a = lattice_step(p);
  const double var1 = family_variance(p);
  const FamilySampler sampler(p);
  const RngState root(seed);

  PrelimitReport r;
  r.n_values = n_values;
  r.reps = reps;
  r.seed = seed;
  for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
    const std::int64_t n = n_values[ni];
    const double scale = a * std::pow(static_cast<double>(n), -1.0 / alpha);
    const RngState stream = root.split(ni);
    std::vector<double> sums(static_cast<std::size_t>(reps));
    const std::int64_t batches = (reps + kPrelimitBatch - 1) / kPrelimitBatch;
    detail::parallel_for(batches, threads, [&](std::int64_t b) {
      RngState rng = stream.split(static_cast<std::uint64_t>(b));
      const std::int64_t hi = std::min(reps, (b + 1) * kPrelimitBatch);
      for (std::int64_t rep = b * kPrelimitBatch; rep < hi; ++rep) {
        std::int64_t total = 0;
        for (std::int64_t j = 0; j < n; ++j) total += sampler.sample_index(rng);
        sums[static_cast<std::size_t>(rep)] = scale * static_cast<double>(total);
      }
    });
    const Moments m = sample_moments(sums);
    const double sd = std::sqrt(m.variance);
    const auto stable = [&](double x) { return stable_cdf(target.params, x, kKsTol, target.symmetric); };
    const auto gauss = [&](double x) { return sd > 0.0 ? normal_cdf((x - m.mean) / sd) : (x >= m.mean ? 1.0 : 0.0); };
    r.ks_to_stable.push_back(ks_statistic(sums, stable));
    r.ks_to_gaussian.push_back(ks_statistic(sums, gauss));
    r.sample_sd.push_back(sd);
    const double pred = std::sqrt(std::pow(static_cast<double>(n), 1.0 - 2.0 / alpha) * var1);
    r.predicted_sd.push_back(pred);
    r.variance_regime.push_back(pred < 0.25 * target.params.sigma);
  }
  return r;
}

}  // namespace dstable
