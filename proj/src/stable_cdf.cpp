#include "dstable/stable_cdf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "dstable/errors.hpp"

namespace dstable {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxPieces = 4000;

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1]
constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(F& f, double lo, double hi, double& value, double& error) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double d = h * kXgk[static_cast<std::size_t>(j)];
    const double s = f(c - d) + f(c + d);
    kron += kWgk[static_cast<std::size_t>(j)] * s;
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * s;
  }
  value = kron * h;
  error = std::abs((kron - gauss) * h);
}

// Global adaptive bisection of the interval with the largest error estimate.
template <class F>
double adaptive(F& f, double lo, double hi, double tol) {
  struct Piece {
    double lo, hi, value, error;
  };
  std::vector<Piece> pieces;
  auto make = [&](double a, double b) {
    Piece p{a, b, 0.0, 0.0};
    gk15(f, a, b, p.value, p.error);
    return p;
  };
  auto by_error = [](const Piece& x, const Piece& y) { return x.error < y.error; };
  pieces.push_back(make(lo, hi));
  double total_error = pieces.front().error;
  while (total_error > tol) {
    if (static_cast<int>(pieces.size()) >= kMaxPieces) throw PrecisionError("stable_cdf: quadrature did not converge");
    std::pop_heap(pieces.begin(), pieces.end(), by_error);
    const Piece worst = pieces.back();
    pieces.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) throw PrecisionError("stable_cdf: quadrature did not converge");
    for (const Piece& p : {make(worst.lo, mid), make(mid, worst.hi)}) {
      pieces.push_back(p);
      std::push_heap(pieces.begin(), pieces.end(), by_error);
    }
    total_error = 0.0;
    for (const Piece& p : pieces) total_error += p.error;
  }
  double sum = 0.0;
  for (const Piece& p : pieces) sum += p.value;
  return sum;
}

// CDF of the standard (sigma = 1) law at z > 0
double cdf_positive(double alpha, double beta, double z, double tol) {
  const double theta0 = std::atan(beta * std::tan(kPi * alpha / 2.0)) / alpha;
  const double c1 = (alpha < 1.0) ? (kPi / 2.0 - theta0) / kPi : 1.0;
  const double lo = -theta0;
  const double hi = kPi / 2.0;
  if (!(hi - lo > 0.0)) return c1;
  const double e = alpha / (alpha - 1.0);
  const double log_z = std::log(z);
  const double log_cos_a0 = std::log(std::cos(alpha * theta0));
  // log of z^{alpha/(alpha-1)} V(theta)
  auto log_g = [&](double theta) {
    const double cos_t = std::sin(hi - theta);
    const double sin_a = std::sin(alpha * (theta - lo));
    return e * log_z + log_cos_a0 / (alpha - 1.0) + e * std::log(cos_t / sin_a) +
           std::log(std::cos(alpha * theta0 + (alpha - 1.0) * theta) / cos_t);
  };
  auto integrand = [&](double theta) {
    const double lg = log_g(theta);
    if (lg > 7.0) return 0.0;  // exp(-e^7) underflows
    const double v = std::exp(-std::exp(lg));
    return std::isfinite(v) ? v : 0.0;
  };
  // g moves monotonically between 0 and infinity; split where g = 1
  double a = lo;
  double b = hi;
  const double span = hi - lo;
  double la = log_g(lo + 1e-12 * span);
  double lb = log_g(hi - 1e-12 * span);
  double split = 0.5 * (lo + hi);
  if (std::isfinite(la) && std::isfinite(lb) && (la < 0.0) != (lb < 0.0)) {
    for (int it = 0; it < 200 && b - a > 1e-15 * span; ++it) {
      const double m = 0.5 * (a + b);
      const double lm = log_g(m);
      if ((lm < 0.0) == (la < 0.0)) {
        a = m;
        la = lm;
      } else {
        b = m;
      }
    }
    split = 0.5 * (a + b);
  }
  const double abs_tol = tol * kPi / 4.0;
  const double integral = adaptive(integrand, lo, split, abs_tol) + adaptive(integrand, split, hi, abs_tol);
  const double sign = (alpha < 1.0) ? 1.0 : -1.0;
  return c1 + sign * integral / kPi;
}

double standard_cdf(double alpha, double beta, double z, double tol) {
  if (z == 0.0) {
    const double theta0 = std::atan(beta * std::tan(kPi * alpha / 2.0)) / alpha;
    return (kPi / 2.0 - theta0) / kPi;
  }
  if (z < 0.0) return 1.0 - cdf_positive(alpha, -beta, -z, tol);
  return cdf_positive(alpha, beta, z, tol);
}

}  // namespace

double stable_cdf(const StableParams& s, double x, double tol, bool symmetric) {
  if (!(tol >= 1e-14)) throw DomainError("stable_cdf: tol must be >= 1e-14");
  if (!(s.alpha > 0.0 && s.alpha <= 2.0)) throw DomainError("stable_cdf: alpha must lie in (0, 2]");
  if (!(s.sigma > 0.0)) throw DomainError("stable_cdf: sigma must be > 0");
  if (std::isnan(x)) throw DomainError("stable_cdf: x is NaN");
  const double beta = symmetric ? 0.0 : s.beta;
  if (!(beta >= -1.0 && beta <= 1.0)) throw DomainError("stable_cdf: beta must lie in [-1, 1]");
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
  const double z = x / s.sigma;
  if (s.alpha == 2.0) return 0.5 * std::erfc(-z / 2.0);  // exp(-t^2) is N(0, 2)
  if (s.alpha == 1.0) {
    if (beta != 0.0) throw DomainError("stable_cdf: skewed alpha = 1 law is not strictly stable");
    return 0.5 + std::atan(z) / kPi;
  }
  return std::clamp(standard_cdf(s.alpha, beta, z, tol), 0.0, 1.0);
}

std::vector<double> stable_cdf_many(const StableParams& s, const std::vector<double>& xs, double tol,
                                    bool symmetric) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
  std::vector<double> out(xs.size());
  double running = 0.0;
  for (std::size_t i : order) {
    running = std::max(running, stable_cdf(s, xs[i], tol, symmetric));
    out[i] = running;
  }
  return out;
}

}  // namespace dstable
