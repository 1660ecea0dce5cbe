#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dstable/analysis.hpp"
#include "dstable/errors.hpp"
#include "dstable/rng.hpp"
#include "dstable/sampling.hpp"
#include "dstable/stable_cdf.hpp"

using namespace dstable;

namespace {

constexpr double kPi = std::numbers::pi;

// Gil-Pelaez: F(x) = 1/2 - (1/pi) int_0^inf Im(e^{-itx} phi(t)) / t dt,
// with t = u^{2/alpha} and a midpoint rule on [0, U].
double gil_pelaez(const StableParams& s, double x, int n) {
  const double p = 2.0 / s.alpha;
  const double t_max = std::pow(40.0, 1.0 / s.alpha) / s.sigma;
  const double u_max = std::pow(t_max, 1.0 / p);
  double acc = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double u = u_max * (i - 0.5) / n;
    const double t = std::pow(u, p);
    const std::complex<double> v = std::exp(std::complex<double>(0.0, -t * x)) * stable_cf(s, t, false);
    acc += v.imag() * p / u;
  }
  return 0.5 - acc * u_max / n / kPi;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  std::vector<double> out;
  const int steps = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
  for (int i = 0; i <= steps; ++i) out.push_back(lo * std::pow(10.0, static_cast<double>(i) / per_decade));
  return out;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("tail constants") {
    const auto half = tail_constants(SymmetricDS(0.5, 1.0, 1.0));
    CHECK(half.half_branch);
    CHECK(half.printed == doctest::Approx(std::sqrt(2.0) / kPi).epsilon(1e-14));
    CHECK(half.printed == doctest::Approx(0.4502).epsilon(1e-4));
    CHECK(half.continuation == doctest::Approx(2.0 / kPi).epsilon(1e-14));
    CHECK(tail_constants(SymmetricDS(0.5 + 5e-13, 1.0, 1.0)).half_branch);
    CHECK_FALSE(tail_constants(SymmetricDS(0.5 + 1e-9, 1.0, 1.0)).half_branch);

    const auto quarter = tail_constants(SymmetricDS(0.25, 1.0, 1.0));
    const double expected = 1.0 / (std::sqrt(kPi) * std::cos(kPi / 4.0));
    CHECK(expected == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-14));
    CHECK(quarter.printed == doctest::Approx(expected).epsilon(1e-13));
    CHECK(quarter.simplified == doctest::Approx(quarter.printed).epsilon(1e-13));

    for (double g : {0.1, 0.3, 0.45, 0.6, 0.75, 0.95}) {
      const double ref = tail_constant_theoretical(SymmetricDS(g, 1.3, 1.0));
      CHECK(ref > 0.0);
      for (double a : {0.01, 0.1}) {
        const auto c = tail_constants(SymmetricDS(g, 1.3, a));
        CHECK(c.printed == doctest::Approx(ref).epsilon(1e-12));
        CHECK(c.simplified == doctest::Approx(c.printed).epsilon(1e-12));
      }
    }
    // the general branch approaches 2 sigma / pi, not the printed half branch
    const auto near = tail_constants(SymmetricDS(0.5 + 1e-7, 2.0, 1.0));
    CHECK(near.printed == doctest::Approx(near.continuation).epsilon(1e-5));
    CHECK(tail_constants(SymmetricDS(0.5, 2.0, 1.0)).printed == doctest::Approx(near.continuation / std::sqrt(2.0)).epsilon(1e-5));
    CHECK_THROWS_AS(tail_constant_theoretical(SymmetricDS(1.0, 1.0, 1.0)), DomainError);
  }

  TEST_CASE("power tail of the symmetric family") {
    auto grid = log_grid(10.0, 1e4, 10);
    grid.push_back(2e4);
    grid.insert(std::lower_bound(grid.begin(), grid.end(), 200.0), 200.0);
    const SymmetricDS p(0.4, 1.0, 1.0);
    const TailReport r = tail_check(p, grid);
    REQUIRE(r.x_grid.size() == r.scaled_tail.size());
    const auto at = static_cast<std::size_t>(std::find(grid.begin(), grid.end(), 200.0) - grid.begin());
    CHECK(r.reliable[at]);
    CHECK(std::abs(r.scaled_tail[at] - r.theoretical_constant) / r.theoretical_constant <= 0.1);
    CHECK(r.relative_gap <= 0.1);
    CHECK(r.reliable_x >= 200.0);
    CHECK_FALSE(r.super_linear);

    // the reported tail is the N = 2^22 lattice tail
    const auto pmf = pmf_from_cf([&](double t) { return char_fn(p, t); }, 1.0, std::int64_t{1} << 22);
    CHECK(r.tail[at] == doctest::Approx(tail_prob(pmf, 200.0)).epsilon(1e-14));
    for (std::size_t i = 1; i < r.tail.size(); ++i) CHECK(r.tail[i] <= r.tail[i - 1]);
  }

  TEST_CASE("truncated tail decays super-linearly") {
    const TruncatedSDS p(0.4, 1.0, 1.0, 8);
    const auto grid = log_grid(10.0, 100.0, 10);
    const TailReport r = tail_check(p, grid);
    CHECK(r.super_linear);
    CHECK(r.decay_exponent > 1.0);
    // direct inversion is accurate where the tail is far above rounding
    const auto direct = pmf_from_cf([&](double t) { return char_fn(p, t); }, 1.0, 1024);
    CHECK(r.tail[0] == doctest::Approx(tail_prob(direct, 10.0)).epsilon(1e-9));
    const auto j = static_cast<std::size_t>(3);
    CHECK(r.tail[j] == doctest::Approx(tail_prob(direct, grid[j])).epsilon(1e-6));
    for (std::size_t i = 1; i < r.tail.size(); ++i) CHECK(r.tail[i] < r.tail[i - 1]);
  }

  TEST_CASE("tempered tail is exponential with rate theta / a") {
    const TemperedDS p(0.7, 0.0, 1.0, 1.0, 0.5, 0.5);
    const auto grid = log_grid(10.0, 100.0, 10);
    const TailReport r = tail_check(p, grid);
    // -log T(x) = theta x + (1 + alpha) log x + O(1)
    const std::size_t n = grid.size();
    const double rate = (r.neg_log_tail[n - 1] - r.neg_log_tail[n - 4]) / (grid[n - 1] - grid[n - 4]);
    const double log_term = (1.0 + p.alpha()) * std::log(grid[n - 1] / grid[n - 4]) / (grid[n - 1] - grid[n - 4]);
    CHECK(rate - log_term == doctest::Approx(0.5).epsilon(0.02));
    // a pure exponential has log(-log T) slope below 1 on a finite window
    CHECK(r.decay_exponent < 1.0);
    CHECK_FALSE(r.super_linear);
    const auto direct = pmf_from_cf([&](double t) { return char_fn(p, t); }, 1.0, 4096);
    CHECK(r.tail[0] == doctest::Approx(tail_prob(direct, 10.0)).epsilon(1e-8));
  }

  TEST_CASE("tail_check rejects bad grids") {
    const SymmetricDS p(0.4, 1.0, 1.0);
    CHECK_THROWS_AS(tail_check(p, {}), DomainError);
    CHECK_THROWS_AS(tail_check(p, {2.0, 1.0}), DomainError);
    CHECK_THROWS_AS(tail_check(p, {-1.0}), DomainError);
  }

  TEST_CASE("cf_distance decreases with the lattice step") {
    CHECK(cf_distance(SymmetricDS(0.75, 1.0, 0.3), 10.0, 1) == 0.0);
    auto sweep = [](auto make) {
      std::vector<double> d;
      for (double a : {0.5, 0.1, 0.02}) d.push_back(cf_distance(make(a), 10.0));
      return d;
    };
    const auto sds = sweep([](double a) { return FamilyParams{SymmetricDS(0.75, 1.0, a)}; });
    const auto ds = sweep([](double a) { return FamilyParams{DiscreteStable(0.7, 0.5, 1.0, a)}; });
    const auto pds = sweep([](double a) { return FamilyParams{PolylogDS(0.8, 1.0, 1.0, a)}; });
    for (const auto* d : {&sds, &ds, &pds}) {
      CHECK((*d)[1] < (*d)[0]);
      CHECK((*d)[2] < (*d)[1]);
    }
    // regression anchors
    CHECK(sds[0] == doctest::Approx(0.024628).epsilon(1e-4));
    CHECK(sds[1] == doctest::Approx(4.3834e-4).epsilon(1e-4));
    CHECK(sds[2] == doctest::Approx(1.75076e-5).epsilon(1e-4));
    CHECK(ds[0] == doctest::Approx(0.130418).epsilon(1e-4));
    CHECK(ds[2] == doctest::Approx(0.010146).epsilon(1e-4));
    CHECK(pds[0] == doctest::Approx(5.38893e-3).epsilon(1e-4));
    CHECK(pds[2] == doctest::Approx(1.09584e-4).epsilon(1e-4));
    CHECK_THROWS_AS(cf_distance(PolylogDS(2.5, 1.0, 1.0, 0.1), 10.0), DomainError);
  }

  TEST_CASE("stable cdf closed forms") {
    CHECK(stable_cdf({0.8, 0.0, 1.0}, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(stable_cdf({1.5, 0.7, 1.0}, 0.0, 1e-10, true) == doctest::Approx(0.5).epsilon(1e-14));
    const double g = 0.5 * std::erfc(-1.3859 / std::sqrt(2.0) / std::sqrt(2.0));
    CHECK(stable_cdf({2.0, 0.0, 1.0}, 1.3859) == doctest::Approx(g).epsilon(1e-14));
    CHECK(stable_cdf({2.0, 0.0, 1.0}, 1.3859) == doctest::Approx(0.8365).epsilon(1e-4));
    CHECK(stable_cdf({1.0, 0.0, 1.0}, 1.0) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK_THROWS_AS(stable_cdf({1.0, 0.5, 1.0}, 1.0), DomainError);
    CHECK_THROWS_AS(stable_cdf({0.5, 0.0, 1.0}, 1.0, 1e-16), DomainError);
    // Levy law: alpha = 1/2, beta = 1 has F(x) = erfc(sqrt(sigma / (2x)))
    for (double sigma : {0.5, 2.0}) {
      for (double x : {0.1, 1.0, 3.0, 50.0}) {
        CHECK(stable_cdf({0.5, 1.0, sigma}, x) == doctest::Approx(std::erfc(std::sqrt(sigma / (2.0 * x)))).epsilon(1e-10));
      }
      CHECK(stable_cdf({0.5, 1.0, sigma}, -1.0) == 0.0);
    }
  }

  TEST_CASE("stable cdf near alpha = 2 approaches the Gaussian") {
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double x = -5.0 + 0.1 * i;
      worst = std::max(worst, std::abs(stable_cdf({1.999999, 0.0, 1.0}, x) - 0.5 * std::erfc(-x / 2.0)));
    }
    CHECK(worst < 1e-6);
  }

  TEST_CASE("stable cdf against Gil-Pelaez") {
    for (const StableParams s : {StableParams{0.7, 0.5, 1.0}, StableParams{0.3, -0.4, 2.0}, StableParams{1.5, -0.3, 1.0},
                                 StableParams{1.2, 1.0, 0.7}}) {
      for (double x : {-2.0, -0.5, 0.3, 1.0, 4.0}) {
        const int n = s.alpha < 1.0 ? 400000 : 4000000;
        const double tol = s.alpha < 1.0 ? 1e-9 : 1e-7;
        CHECK_MESSAGE(std::abs(stable_cdf(s, x, 1e-12) - gil_pelaez(s, x, n)) < tol, "alpha ", s.alpha, " x ", x);
      }
    }
    // reflection F(x; beta) = 1 - F(-x; -beta)
    CHECK(stable_cdf({0.6, 0.3, 1.0}, 1.7) == doctest::Approx(1.0 - stable_cdf({0.6, -0.3, 1.0}, -1.7)).epsilon(1e-12));
    const std::vector<double> xs = {3.0, -1.0, 0.0, 100.0, -100.0};
    const auto many = stable_cdf_many({0.9, 0.2, 1.0}, xs);
    CHECK(many[4] < many[1]);
    CHECK(many[1] < many[2]);
    CHECK(many[2] < many[0]);
    CHECK(many[0] < many[3]);
  }

  TEST_CASE("moments") {
    CHECK(sample_moments({2.0, 2.0, 2.0}).variance == 0.0);
    CHECK_THROWS_AS(sample_moments({1.0}), DomainError);
    RngState rng(4);
    const double a = 0.3;
    const int n = 1000000;
    std::vector<double> coin(n);
    for (auto& v : coin) v = (rng.next_u64() >> 63) ? a : -a;
    const Moments m = sample_moments(coin);
    CHECK(std::abs(m.mean) < 3.0 * a / std::sqrt(static_cast<double>(n)));
    CHECK(m.variance == doctest::Approx(a * a).epsilon(0.01));
    CHECK(m.excess_kurtosis == doctest::Approx(-2.0).epsilon(1e-3));

    const TruncatedSDS t(0.4, 1.0, 0.5, 8);
    auto draws = [&](std::int64_t count, std::uint64_t seed) {
      std::vector<double> x;
      for (auto k : sample_indices(t, count, seed)) x.push_back(0.5 * static_cast<double>(k));
      return sample_moments(x).variance;
    };
    const double v1 = draws(100000, 1);
    const double v2 = draws(200000, 2);
    CHECK(v2 / v1 >= 0.95);
    CHECK(v2 / v1 <= 1.05);
    CHECK(v2 == doctest::Approx(family_variance(t)).epsilon(0.03));
  }

  TEST_CASE("variance of the light-tailed families") {
    // truncated symmetric law: Var K = lambda sum w_k k
    const TruncatedSDS t(0.4, 1.0, 0.5, 8);
    double s = 0.0;
    for (std::size_t k = 0; k < t.weights().size(); ++k) s += t.weights()[k] * static_cast<double>(k + 1);
    CHECK(family_variance(t) == doctest::Approx(0.25 * t.lambda() * s).epsilon(1e-6));
    // tempered: sum over both sides of lambda' sum k^2 p_k e^{-theta k}
    const TemperedDS d(0.7, 0.2, 1.0, 0.5, 0.4, 0.6);
    const auto [l1, l2] = derived_intensities(d);
    double v = 0.0;
    for (std::int64_t k = 1; k < 5000; ++k) {
      const double k2 = static_cast<double>(k) * static_cast<double>(k);
      v += k2 * sibuya_pmf(0.7, k) * (l1 * std::exp(-0.4 * k) + l2 * std::exp(-0.6 * k));
    }
    CHECK(family_variance(d) == doctest::Approx(0.25 * v).epsilon(1e-6));
    CHECK(std::isinf(family_variance(TemperedDS(0.7, 0.2, 1.0, 0.5, 0.0, 0.6))));
    CHECK_THROWS_AS(family_variance(SymmetricDS(0.5, 1.0, 1.0)), DomainError);
  }

  TEST_CASE("ks statistic") {
    auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(ks_statistic({0.5}, uniform) == doctest::Approx(0.5));
    CHECK(ks_statistic({0.25, 0.75}, uniform) == doctest::Approx(0.25));
    // ties: two equal samples jump the empirical CDF by 1
    CHECK(ks_statistic({0.5, 0.5}, uniform) == doctest::Approx(0.5));
    // lattice law compared with its own atoms, both sides of each jump
    auto coin = [](double x) { return x < 0.0 ? 0.0 : (x < 1.0 ? 0.5 : 1.0); };
    auto coin_left = [](double x) { return x <= 0.0 ? 0.0 : (x <= 1.0 ? 0.5 : 1.0); };
    CHECK(ks_statistic({0.0, 1.0}, coin, coin_left) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(ks_statistic({0.0, 0.0, 0.0, 1.0}, coin, coin_left) == doctest::Approx(0.25));
    CHECK_THROWS_AS(ks_statistic({}, uniform), DomainError);
  }

  TEST_CASE("samples pass KS against their own lattice cdf") {
    const std::vector<FamilyParams> fams = {SymmetricDS(0.6, 1.0, 0.5), TruncatedSDS(0.4, 1.0, 0.5, 8),
                                            DiscreteStable(0.8, 0.3, 1.0, 0.5), TemperedDS(0.7, 0.0, 1.0, 0.5, 0.5, 0.2),
                                            PolylogDS(1.3, 1.0, 0.5, 0.5), TruncatedPolylogDS(0.9, 1.0, 1.0, 0.5, 20)};
    const std::int64_t n = 20000;
    std::uint64_t seed = 900;
    for (const auto& p : fams) {
      const double a = lattice_step(p);
      const auto pmf = pmf_from_cf([&](double t) { return char_fn(p, t); }, a, std::int64_t{1} << 18);
      std::vector<double> x;
      for (auto k : sample_indices(p, n, seed++)) x.push_back(a * static_cast<double>(k));
      const double d = ks_statistic(
          x, [&](double v) { return cdf_from_pmf(pmf, v); }, [&](double v) { return cdf_from_pmf(pmf, v - 0.5 * a); });
      CHECK_MESSAGE(d < 1.63 / std::sqrt(static_cast<double>(n)), family_name(p), " D = ", d);
    }
  }

  TEST_CASE("histogram total variation") {
    LatticePMF pmf;
    pmf.a = 1.0;
    pmf.k_min = 0;
    pmf.masses = {0.5, 0.5};
    CHECK(histogram_tv({0, 1}, pmf, 1.0) == doctest::Approx(0.0));
    CHECK(histogram_tv({0, 0, 0, 1}, pmf, 1.0) == doctest::Approx(0.25));
    CHECK(histogram_tv({0, 1, 7}, pmf, 1.0) == doctest::Approx(1.0 / 3.0));
    // sparse atoms merge: with min_expected = 4 both atoms share one cell
    CHECK(histogram_tv({0, 0, 0, 0}, pmf, 4.0) == doctest::Approx(0.0));
  }

  TEST_CASE("sampler histogram TV is at the multinomial noise floor") {
    // DiscreteStable(0.6, 0.4, 1, 0.1): compare the sampler to draws made
    // directly from the inverted pmf, which carry only multinomial noise
    const DiscreteStable p(0.6, 0.4, 1.0, 0.1);
    const auto pmf = pmf_from_cf([&](double t) { return char_fn(p, t); }, 0.1, std::int64_t{1} << 20);
    const std::int64_t n = 1000000;
    const double tv = histogram_tv(sample_indices(p, n, 42), pmf);
    std::vector<double> cdf;
    double acc = 0.0;
    for (double m : pmf.clamped()) cdf.push_back(acc += m);
    double floor_sum = 0.0;
    const int reps = 3;
    for (int r = 0; r < reps; ++r) {
      RngState rng(1000 + r);
      std::vector<std::int64_t> ref(static_cast<std::size_t>(n));
      for (auto& k : ref) {
        const double u = rng.uniform() * acc;
        k = pmf.k_min + (std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      }
      floor_sum += histogram_tv(ref, pmf);
    }
    const double floor = floor_sum / reps;
    MESSAGE("sampler TV ", tv, " noise floor ", floor);
    CHECK(tv < 1.1 * floor);
    CHECK(tv > 0.9 * floor);
  }

  TEST_CASE("low-noise histogram TV") {
    const SymmetricDS p(0.75, 1.0, 1.0);
    const auto pmf = pmf_from_cf([&](double t) { return char_fn(p, t); }, 1.0, std::int64_t{1} << 16);
    CHECK(histogram_tv(sample_indices(p, 1000000, 42), pmf) <= 0.005);
  }

  TEST_CASE("prelimit experiment") {
    const TemperedDS p(0.7, 0.0, 1.0, 1.0, 0.5, 0.5);
    CHECK_THROWS_AS(prelimit_experiment(SymmetricDS(0.5, 1.0, 1.0), {1}, 10000, 1), DomainError);
    CHECK_THROWS_AS(prelimit_experiment(p, {1}, 100, 1), DomainError);
    const auto r1 = prelimit_experiment(p, {1, 1000}, 10000, 7, 1);
    const auto r3 = prelimit_experiment(p, {1, 1000}, 10000, 7, 3);
    CHECK(r1.ks_to_stable == r3.ks_to_stable);
    CHECK(r1.ks_to_gaussian == r3.ks_to_gaussian);
    CHECK(r1.sample_sd == r3.sample_sd);
    for (std::size_t i = 0; i < r1.n_values.size(); ++i) {
      CHECK(r1.ks_to_stable[i] >= 0.0);
      CHECK(r1.ks_to_stable[i] <= 1.0);
      CHECK(r1.ks_to_gaussian[i] >= 0.0);
      CHECK(r1.ks_to_gaussian[i] <= 1.0);
      // finite variance: the spread follows n^{1/2 - 1/alpha} sd(X_1)
      CHECK(r1.sample_sd[i] == doctest::Approx(r1.predicted_sd[i]).epsilon(0.05));
    }
    CHECK_FALSE(r1.variance_regime[0]);
    CHECK(r1.variance_regime[1]);
    CHECK(r1.reps == 10000);
    CHECK(r1.seed == 7);
  }
}
