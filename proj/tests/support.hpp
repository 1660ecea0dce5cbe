#pragma once

#include <cmath>
#include <random>

#include "dstable/families.hpp"

namespace dstable::testing {

// Random valid parameters for family index 0..5 (variant order).
inline FamilyParams random_family(int kind, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * u01(gen); };
  const double a = std::exp(in(std::log(0.05), std::log(2.0)));
  const double sigma = in(0.3, 2.0);
  switch (kind) {
    case 0:
      return SymmetricDS(in(0.1, 1.0), sigma, a);
    case 1:
      return TruncatedSDS(in(0.1, 1.0), sigma, a, static_cast<std::int64_t>(in(1.0, 40.0)));
    case 2:
      return DiscreteStable(in(0.1, 0.95), in(-1.0, 1.0), sigma, a);
    case 3:
      return TemperedDS(in(0.1, 0.95), in(-1.0, 1.0), sigma, a, in(0.0, 2.0), in(0.01, 2.0));
    case 4:
      return PolylogDS(in(0.2, 2.5), in(0.0, 2.0), in(0.05, 2.0), a);
    default:
      return TruncatedPolylogDS(in(0.2, 2.5), in(0.0, 2.0), in(0.05, 2.0), a, static_cast<std::int64_t>(in(1.0, 200.0)));
  }
}

// sup over an n-point grid on [-T, T] of |f - g|
template <class F, class G>
double sup_distance(F&& f, G&& g, double T, int n) {
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const double t = (n == 1) ? 0.0 : -T + 2.0 * T * j / (n - 1);
    worst = std::max(worst, std::abs(f(t) - g(t)));
  }
  return worst;
}

}  // namespace dstable::testing
