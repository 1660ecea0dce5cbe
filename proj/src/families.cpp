#include "dstable/families.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "dstable/errors.hpp"

namespace dstable {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::int64_t kMaxAtoms = 100000000;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require(bool ok, const std::string& what, double got) {
  if (!ok) throw ParameterError(what + ", got " + fmt(got));
}

void require_positive_finite(double v, const char* name) {
  require(std::isfinite(v) && v > 0.0, std::string(name) + " must be finite and > 0", v);
}

void require_atoms(std::int64_t M) {
  if (M < 1 || M > kMaxAtoms) {
    throw ParameterError("M must lie in [1, " + std::to_string(kMaxAtoms) + "], got " + std::to_string(M));
  }
}

void require_skew(double alpha, double beta) {
  require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)", alpha);
  require(std::isfinite(beta) && beta >= -1.0 && beta <= 1.0, "beta must lie in [-1, 1]", beta);
}

void require_pq(double P, double Q) {
  require(std::isfinite(P) && P >= 0.0, "P must be finite and >= 0", P);
  require(std::isfinite(Q) && Q >= 0.0, "Q must be finite and >= 0", Q);
  require(P + Q > 0.0, "P + Q must be > 0", P + Q);
}

// sigma^alpha (1 +- beta) / (2 cos(pi alpha / 2)) a^{-alpha}
std::pair<double, double> skew_intensities(double alpha, double beta, double sigma, double a) {
  const double base = std::pow(sigma / a, alpha) / (2.0 * std::cos(kPi * alpha / 2.0));
  return {base * (1.0 + beta), base * (1.0 - beta)};
}

// (1 - e^{ix})^alpha on the principal branch, x reduced to [-pi, pi]:
// 1 - e^{ix} = 2 sin(x/2) e^{i (x - pi)/2}.
ComplexValue one_minus_phase_pow(double x, double alpha) {
  const double r = std::remainder(x, 2.0 * kPi);
  if (r == 0.0) return {0.0, 0.0};
  const double mod = std::pow(2.0 * std::abs(std::sin(r / 2.0)), alpha);
  const double arg = alpha * (r - std::copysign(kPi, r)) / 2.0;
  return std::polar(mod, arg);
}

// (1 - e^{-theta} e^{ix})^alpha for theta > 0; |e^{-theta}| < 1 keeps the
// base in the right half-plane.
ComplexValue one_minus_damped_phase_pow(double x, double theta, double alpha) {
  const double w = std::exp(-theta);
  const double s = std::sin(x / 2.0);
  const ComplexValue base{-std::expm1(-theta) + 2.0 * w * s * s, -w * std::sin(x)};
  return std::pow(base, alpha);
}

// (1 - e^{u}) for complex u with Re u < 0, written to avoid cancellation.
ComplexValue one_minus_exp(ComplexValue u) {
  const double w = std::exp(u.real());
  const double s = std::sin(u.imag() / 2.0);
  return {-std::expm1(u.real()) + 2.0 * w * s * s, -w * std::sin(u.imag())};
}

// 1 - cos(x)^k, accurate for small x
double one_minus_cos_pow(double x, std::int64_t k) {
  const double s = std::sin(x / 2.0);
  const double c = std::cos(x);
  if (c > 0.5) return -std::expm1(static_cast<double>(k) * std::log1p(-2.0 * s * s));
  return 1.0 - std::pow(c, static_cast<double>(k));
}

// (e^{i y} - 1)
ComplexValue phase_minus_one(double y) {
  const double s = std::sin(y / 2.0);
  return {-2.0 * s * s, std::sin(y)};
}

double tempered_side_mass(double theta, double alpha) {
  // 1 - (1 - e^{-theta})^alpha: the Sibuya weights summed against e^{-theta k}
  if (theta == 0.0) return 1.0;
  return -std::expm1(alpha * std::log(-std::expm1(-theta)));
}

// one side of the tempered exponent: -lambda [(1 - e^{ix - theta})^alpha - (1 - e^{-theta})^alpha]
ComplexValue tempered_side(double lambda, double x, double theta, double alpha) {
  if (lambda == 0.0) return {0.0, 0.0};
  if (theta == 0.0) return -lambda * one_minus_phase_pow(x, alpha);
  const double base0 = std::pow(-std::expm1(-theta), alpha);
  return -lambda * (one_minus_damped_phase_pow(x, theta, alpha) - base0);
}

}  // namespace

SymmetricDS::SymmetricDS(double gamma, double sigma, double a) : gamma_(gamma), sigma_(sigma), a_(a) {
  require(std::isfinite(gamma) && gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]", gamma);
  require_positive_finite(sigma, "sigma");
  require_positive_finite(a, "a");
  lambda_ = std::pow(sigma / a, 2.0 * gamma) * std::pow(2.0, gamma);
}

TruncatedSDS::TruncatedSDS(double gamma, double sigma, double a, std::int64_t M)
    : gamma_(gamma), sigma_(sigma), a_(a), M_(M) {
  require(std::isfinite(gamma) && gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]", gamma);
  require_positive_finite(sigma, "sigma");
  require_positive_finite(a, "a");
  require_atoms(M);
  lambda_ = std::pow(sigma / a, 2.0 * gamma) * std::pow(2.0, gamma);
  weights_.reserve(static_cast<std::size_t>(M));
  double w = gamma;  // w_1
  weight_sum_ = 0.0;
  for (std::int64_t k = 1; k <= M; ++k) {
    if (k > 1) w *= (static_cast<double>(k - 1) - gamma) / static_cast<double>(k);
    weights_.push_back(w);
    weight_sum_ += w;
  }
}

DiscreteStable::DiscreteStable(double alpha, double beta, double sigma, double a)
    : alpha_(alpha), beta_(beta), sigma_(sigma), a_(a) {
  require_skew(alpha, beta);
  require_positive_finite(sigma, "sigma");
  require_positive_finite(a, "a");
}

TemperedDS::TemperedDS(double alpha, double beta, double sigma, double a, double theta1, double theta2)
    : alpha_(alpha), beta_(beta), sigma_(sigma), a_(a), theta1_(theta1), theta2_(theta2) {
  require_skew(alpha, beta);
  require_positive_finite(sigma, "sigma");
  require_positive_finite(a, "a");
  require(std::isfinite(theta1) && theta1 >= 0.0, "theta1 must be finite and >= 0", theta1);
  require(std::isfinite(theta2) && theta2 >= 0.0, "theta2 must be finite and >= 0", theta2);
  require(theta1 + theta2 > 0.0, "theta1 + theta2 must be > 0", theta1 + theta2);
}

PolylogDS::PolylogDS(double alpha, double P, double Q, double a)
    : alpha_(alpha), P_(P), Q_(Q), a_(a), li_(std::isfinite(alpha) && alpha > 0.0 ? 1.0 + alpha : 2.0) {
  require(std::isfinite(alpha) && alpha > 0.0, "alpha must be finite and > 0", alpha);
  require_pq(P, Q);
  require_positive_finite(a, "a");
}

TruncatedPolylogDS::TruncatedPolylogDS(double alpha, double P, double Q, double a, std::int64_t M)
    : alpha_(alpha), P_(P), Q_(Q), a_(a), M_(M) {
  require(std::isfinite(alpha) && alpha > 0.0, "alpha must be finite and > 0", alpha);
  require_pq(P, Q);
  require_positive_finite(a, "a");
  require_atoms(M);
  mags_.reserve(static_cast<std::size_t>(M));
  for (std::int64_t k = 1; k <= M; ++k) mags_.push_back(std::pow(static_cast<double>(k), -(1.0 + alpha)));
  // small terms first
  mag_sum_ = 0.0;
  for (auto it = mags_.rbegin(); it != mags_.rend(); ++it) mag_sum_ += *it;
}

std::string family_name(const FamilyParams& p) {
  return std::visit(Overloaded{
                        [](const SymmetricDS&) { return std::string("sds"); },
                        [](const TruncatedSDS&) { return std::string("truncated-sds"); },
                        [](const DiscreteStable&) { return std::string("ds"); },
                        [](const TemperedDS&) { return std::string("tempered-ds"); },
                        [](const PolylogDS&) { return std::string("polylog-ds"); },
                        [](const TruncatedPolylogDS&) { return std::string("truncated-polylog-ds"); },
                    },
                    p);
}

double lattice_step(const FamilyParams& p) {
  return std::visit([](const auto& f) { return f.a(); }, p);
}

std::pair<double, double> derived_intensities(const FamilyParams& p) {
  return std::visit(Overloaded{
                        [](const SymmetricDS& f) { return std::pair{f.lambda() / 2.0, f.lambda() / 2.0}; },
                        [](const TruncatedSDS& f) {
                          const double L = f.lambda() * f.weight_sum();
                          return std::pair{L / 2.0, L / 2.0};
                        },
                        [](const DiscreteStable& f) { return skew_intensities(f.alpha(), f.beta(), f.sigma(), f.a()); },
                        [](const TemperedDS& f) { return skew_intensities(f.alpha(), f.beta(), f.sigma(), f.a()); },
                        [](const PolylogDS& f) {
                          const double scale = std::pow(f.a(), -f.alpha()) * f.polylog().at_one();
                          return std::pair{f.P() * scale, f.Q() * scale};
                        },
                        [](const TruncatedPolylogDS& f) {
                          const double scale = std::pow(f.a(), -f.alpha()) * f.magnitude_sum();
                          return std::pair{f.P() * scale, f.Q() * scale};
                        },
                    },
                    p);
}

ComplexValue log_char_fn(const FamilyParams& p, double t) {
  return std::visit(
      Overloaded{
          [t](const SymmetricDS& f) {
            const double s = std::sin(f.a() * t / 2.0);
            return ComplexValue{-f.lambda() * std::pow(2.0 * s * s, f.gamma()), 0.0};
          },
          [t](const TruncatedSDS& f) {
            const double x = f.a() * t;
            const auto& w = f.weights();
            double acc = 0.0;
            for (std::size_t j = w.size(); j-- > 0;) acc += w[j] * one_minus_cos_pow(x, static_cast<std::int64_t>(j + 1));
            return ComplexValue{-f.lambda() * acc, 0.0};
          },
          [t](const DiscreteStable& f) {
            const auto [l1, l2] = skew_intensities(f.alpha(), f.beta(), f.sigma(), f.a());
            const double x = f.a() * t;
            const ComplexValue up = one_minus_phase_pow(x, f.alpha());
            // (1 - e^{-ix})^alpha is the conjugate
            return -l1 * up - l2 * std::conj(up);
          },
          [t](const TemperedDS& f) {
            const auto [l1, l2] = skew_intensities(f.alpha(), f.beta(), f.sigma(), f.a());
            const double x = f.a() * t;
            return tempered_side(l1, x, f.theta1(), f.alpha()) + std::conj(tempered_side(l2, x, f.theta2(), f.alpha()));
          },
          [t](const PolylogDS& f) {
            const ComplexValue li = f.polylog()(f.a() * t);
            const double z = f.polylog().at_one();
            const ComplexValue d = li - z;
            return std::pow(f.a(), -f.alpha()) * (f.P() * d + f.Q() * std::conj(d));
          },
          [t](const TruncatedPolylogDS& f) {
            const double x = f.a() * t;
            const auto& m = f.magnitudes();
            double re = 0.0;
            double im = 0.0;
            for (std::size_t j = m.size(); j-- > 0;) {
              const ComplexValue e = phase_minus_one(static_cast<double>(j + 1) * x);
              re += m[j] * e.real();
              im += m[j] * e.imag();
            }
            const double scale = std::pow(f.a(), -f.alpha());
            return scale * ComplexValue{(f.P() + f.Q()) * re, (f.P() - f.Q()) * im};
          },
      },
      p);
}

ComplexValue char_fn(const FamilyParams& p, double t) { return std::exp(log_char_fn(p, t)); }

bool tilt_admissible(const FamilyParams& p, double eta) {
  if (!std::isfinite(eta)) return false;
  if (eta == 0.0) return true;
  return std::visit(Overloaded{
                        [](const TruncatedSDS&) { return true; },
                        [](const TruncatedPolylogDS&) { return true; },
                        [eta](const TemperedDS& f) { return eta < f.theta1() && -eta < f.theta2(); },
                        [](const auto&) { return false; },
                    },
                    p);
}

namespace {

// log E exp(u K) for complex u inside the strip of analyticity.
ComplexValue log_mgf_complex(const FamilyParams& p, ComplexValue u) {
  return std::visit(
      Overloaded{
          [u](const TruncatedSDS& f) {
            // cos(at) generalizes to cosh(u)
            const ComplexValue c = std::cosh(u);
            const auto& w = f.weights();
            ComplexValue acc{0.0, 0.0};
            ComplexValue pw{1.0, 0.0};
            for (double wk : w) {
              pw *= c;
              acc += wk * (pw - 1.0);
            }
            return f.lambda() * acc;
          },
          [u](const TemperedDS& f) {
            const auto [l1, l2] = skew_intensities(f.alpha(), f.beta(), f.sigma(), f.a());
            const double al = f.alpha();
            ComplexValue out{0.0, 0.0};
            if (l1 > 0.0) {
              out -= l1 * (std::pow(one_minus_exp(u - f.theta1()), al) - std::pow(-std::expm1(-f.theta1()), al));
            }
            if (l2 > 0.0) {
              out -= l2 * (std::pow(one_minus_exp(-u - f.theta2()), al) - std::pow(-std::expm1(-f.theta2()), al));
            }
            return out;
          },
          [u](const TruncatedPolylogDS& f) {
            const auto& m = f.magnitudes();
            ComplexValue acc{0.0, 0.0};
            for (std::size_t j = m.size(); j-- > 0;) {
              const double k = static_cast<double>(j + 1);
              acc += m[j] * (f.P() * (std::exp(k * u) - 1.0) + f.Q() * (std::exp(-k * u) - 1.0));
            }
            return std::pow(f.a(), -f.alpha()) * acc;
          },
          [&p, u](const auto&) { return log_char_fn(p, u.imag() / lattice_step(p)); },
      },
      p);
}

}  // namespace

double log_mgf_index(const FamilyParams& p, double eta) {
  if (!tilt_admissible(p, eta)) throw DomainError("log_mgf_index: tilt outside the strip of analyticity");
  if (eta == 0.0) return 0.0;
  return log_mgf_complex(p, {eta, 0.0}).real();
}

ComplexValue log_char_fn_tilted(const FamilyParams& p, double t, double eta) {
  if (!tilt_admissible(p, eta)) throw DomainError("log_char_fn_tilted: tilt outside the strip of analyticity");
  if (eta == 0.0) return log_char_fn(p, t);
  const double x = lattice_step(p) * t;
  return std::visit(
      Overloaded{
          [&](const TruncatedSDS& f) {
            // lambda sum w_k (cosh(eta + ix)^k - cosh(eta)^k)
            const ComplexValue c = std::cosh(ComplexValue{eta, x});
            const double c0 = std::cosh(eta);
            ComplexValue pw{1.0, 0.0};
            double pw0 = 1.0;
            ComplexValue acc{0.0, 0.0};
            for (double wk : f.weights()) {
              pw *= c;
              pw0 *= c0;
              acc += wk * (pw - pw0);
            }
            return f.lambda() * acc;
          },
          [&](const TemperedDS& f) {
            const auto [l1, l2] = skew_intensities(f.alpha(), f.beta(), f.sigma(), f.a());
            const double al = f.alpha();
            ComplexValue out{0.0, 0.0};
            if (l1 > 0.0) {
              const double th = f.theta1() - eta;
              out += tempered_side(l1, x, th, al);
            }
            if (l2 > 0.0) {
              const double th = f.theta2() + eta;
              out += std::conj(tempered_side(l2, x, th, al));
            }
            return out;
          },
          [&](const TruncatedPolylogDS& f) {
            const auto& m = f.magnitudes();
            ComplexValue acc{0.0, 0.0};
            for (std::size_t j = m.size(); j-- > 0;) {
              const double k = static_cast<double>(j + 1);
              const ComplexValue e = phase_minus_one(k * x);
              acc += m[j] * (f.P() * std::exp(k * eta) * e + f.Q() * std::exp(-k * eta) * std::conj(e));
            }
            return std::pow(f.a(), -f.alpha()) * acc;
          },
          [&](const auto&) { return log_char_fn(p, t); },
      },
      p);
}

ComplexValue stable_cf(const StableParams& s, double t, bool symmetric) {
  if (!(s.alpha > 0.0 && s.alpha <= 2.0)) throw DomainError("stable_cf: alpha must lie in (0, 2]");
  if (!(s.sigma > 0.0)) throw DomainError("stable_cf: sigma must be > 0");
  const double mag = std::pow(s.sigma * std::abs(t), s.alpha);
  if (symmetric) return {std::exp(-mag), 0.0};
  if (s.alpha == 1.0) throw DomainError("stable_cf: the skewed form is undefined at alpha = 1");
  if (!(s.beta >= -1.0 && s.beta <= 1.0)) throw DomainError("stable_cf: beta must lie in [-1, 1]");
  const double sgn = (t > 0.0) ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
  const ComplexValue expo{-mag, mag * s.beta * sgn * std::tan(kPi * s.alpha / 2.0)};
  return std::exp(expo);
}

CompoundPoissonView compound_poisson_view(const FamilyParams& p) {
  return std::visit(
      Overloaded{
          [](const SymmetricDS& f) {
            const double a = f.a();
            const double g = f.gamma();
            return CompoundPoissonView{f.lambda(), [a, g](double t) {
                                         const double s = std::sin(a * t / 2.0);
                                         return ComplexValue{1.0 - std::pow(2.0 * s * s, g), 0.0};
                                       }};
          },
          [](const TruncatedSDS& f) {
            const double a = f.a();
            auto w = f.weights();
            const double W = f.weight_sum();
            return CompoundPoissonView{f.lambda() * W, [a, w, W](double t) {
                                         const double c = std::cos(a * t);
                                         double acc = 0.0;
                                         double pw = 1.0;
                                         for (double wk : w) {
                                           pw *= c;
                                           acc += wk * pw;
                                         }
                                         return ComplexValue{acc / W, 0.0};
                                       }};
          },
          [](const DiscreteStable& f) {
            const auto [l1, l2] = skew_intensities(f.alpha(), f.beta(), f.sigma(), f.a());
            const double L = l1 + l2;
            const double a = f.a();
            const double al = f.alpha();
            return CompoundPoissonView{L, [=](double t) {
                                         const ComplexValue up = one_minus_phase_pow(a * t, al);
                                         return 1.0 - (l1 / L) * up - (l2 / L) * std::conj(up);
                                       }};
          },
          [](const TemperedDS& f) {
            const auto [l1, l2] = skew_intensities(f.alpha(), f.beta(), f.sigma(), f.a());
            const double al = f.alpha();
            const double th1 = f.theta1();
            const double th2 = f.theta2();
            const double L = l1 * tempered_side_mass(th1, al) + l2 * tempered_side_mass(th2, al);
            const double a = f.a();
            // mixture of tempered Sibuya laws on each side
            auto side = [al](double x, double theta) {
              const ComplexValue pw =
                  (theta == 0.0) ? one_minus_phase_pow(x, al) : one_minus_damped_phase_pow(x, theta, al);
              return 1.0 - pw;
            };
            return CompoundPoissonView{L, [=](double t) {
                                         const double x = a * t;
                                         return (l1 * side(x, th1) + l2 * std::conj(side(x, th2))) / L;
                                       }};
          },
          [](const PolylogDS& f) {
            const double z = f.polylog().at_one();
            const double L = (f.P() + f.Q()) * std::pow(f.a(), -f.alpha()) * z;
            const PolylogUnitCircle li = f.polylog();
            const double a = f.a();
            const double P = f.P();
            const double Q = f.Q();
            return CompoundPoissonView{L, [=](double t) {
                                         const ComplexValue v = li(a * t);
                                         return (P * v + Q * std::conj(v)) / ((P + Q) * z);
                                       }};
          },
          [](const TruncatedPolylogDS& f) {
            const double H = f.magnitude_sum();
            const double L = (f.P() + f.Q()) * std::pow(f.a(), -f.alpha()) * H;
            auto m = f.magnitudes();
            const double a = f.a();
            const double P = f.P();
            const double Q = f.Q();
            return CompoundPoissonView{L, [=](double t) {
                                         double re = 0.0;
                                         double im = 0.0;
                                         for (std::size_t j = m.size(); j-- > 0;) {
                                           const double y = static_cast<double>(j + 1) * a * t;
                                           re += m[j] * std::cos(y);
                                           im += m[j] * std::sin(y);
                                         }
                                         return ComplexValue{re, im * (P - Q) / (P + Q)} / H;
                                       }};
          },
      },
      p);
}

double levy_weight(const FamilyParams& p, std::int64_t k) {
  if (k == 0) throw DomainError("levy_weight: the Levy measure has no mass at 0");
  const std::int64_t ak = (k > 0) ? k : -k;
  return std::visit(
      Overloaded{
          [](const SymmetricDS&) -> double {
            throw DomainError("levy_weight: no closed form for sds; use symmetric_levy_weights");
          },
          [](const TruncatedSDS&) -> double {
            throw DomainError("levy_weight: no closed form for truncated-sds; use symmetric_levy_weights");
          },
          [k, ak](const DiscreteStable& f) {
            const auto [l1, l2] = skew_intensities(f.alpha(), f.beta(), f.sigma(), f.a());
            return (k > 0 ? l1 : l2) * sibuya_pmf(f.alpha(), ak);
          },
          [k, ak](const TemperedDS& f) {
            const auto [l1, l2] = skew_intensities(f.alpha(), f.beta(), f.sigma(), f.a());
            const double theta = (k > 0) ? f.theta1() : f.theta2();
            return (k > 0 ? l1 : l2) * sibuya_pmf(f.alpha(), ak) * std::exp(-theta * static_cast<double>(ak));
          },
          [k, ak](const PolylogDS& f) {
            return (k > 0 ? f.P() : f.Q()) * std::pow(f.a(), -f.alpha()) *
                   std::pow(static_cast<double>(ak), -(1.0 + f.alpha()));
          },
          [k, ak](const TruncatedPolylogDS& f) {
            if (ak > f.M()) return 0.0;
            return (k > 0 ? f.P() : f.Q()) * std::pow(f.a(), -f.alpha()) *
                   f.magnitudes()[static_cast<std::size_t>(ak - 1)];
          },
      },
      p);
}

std::vector<double> symmetric_levy_weights(const FamilyParams& p, std::int64_t kmax, std::int64_t cutoff) {
  if (kmax < 0 || cutoff < 1) throw DomainError("symmetric_levy_weights: need kmax >= 0 and cutoff >= 1");
  double lambda = 0.0;
  double gamma = 0.0;
  std::int64_t jmax = cutoff;
  if (const auto* s = std::get_if<SymmetricDS>(&p)) {
    lambda = s->lambda();
    gamma = s->gamma();
  } else if (const auto* t = std::get_if<TruncatedSDS>(&p)) {
    lambda = t->lambda();
    gamma = t->gamma();
    jmax = std::min(cutoff, t->M());
  } else {
    throw DomainError("symmetric_levy_weights: only sds and truncated-sds");
  }
  std::vector<double> out(static_cast<std::size_t>(kmax + 1), 0.0);
  double w = 0.0;
  for (std::int64_t j = 1; j <= jmax; ++j) {
    w = (j == 1) ? gamma : w * (static_cast<double>(j - 1) - gamma) / static_cast<double>(j);
    const double lj = std::lgamma(static_cast<double>(j) + 1.0) - static_cast<double>(j) * std::numbers::ln2;
    for (std::int64_t k = j % 2; k <= std::min(j, kmax); k += 2) {
      // P(walk_j = k) = binom(j, (j + k)/2) 2^{-j}
      const double up = static_cast<double>((j + k) / 2);
      const double dn = static_cast<double>((j - k) / 2);
      out[static_cast<std::size_t>(k)] += lambda * w * std::exp(lj - std::lgamma(up + 1.0) - std::lgamma(dn + 1.0));
    }
  }
  return out;
}

StableTarget target_stable(const FamilyParams& p) {
  auto polylog_target = [](double alpha, double P, double Q, bool truncated) {
    StableTarget out;
    out.gaussian_attraction = truncated || alpha >= 2.0;
    if (alpha >= 2.0) {
      out.has_stable = false;
      return out;
    }
    // -Gamma(-alpha) cos(pi alpha / 2) in a form without the pole at alpha = 1
    const double c = kPi / (2.0 * std::tgamma(1.0 + alpha) * std::sin(kPi * alpha / 2.0));
    out.params = {alpha, (P - Q) / (P + Q), std::pow(c * (P + Q), 1.0 / alpha)};
    out.symmetric = (P == Q);
    return out;
  };
  return std::visit(Overloaded{
                        [](const SymmetricDS& f) {
                          return StableTarget{{2.0 * f.gamma(), 0.0, f.sigma()}, true, true, false};
                        },
                        [](const TruncatedSDS& f) {
                          return StableTarget{{2.0 * f.gamma(), 0.0, f.sigma()}, true, true, true};
                        },
                        [](const DiscreteStable& f) {
                          return StableTarget{{f.alpha(), f.beta(), f.sigma()}, true, false, false};
                        },
                        [](const TemperedDS& f) {
                          return StableTarget{{f.alpha(), f.beta(), f.sigma()}, true, false, true};
                        },
                        [&](const PolylogDS& f) { return polylog_target(f.alpha(), f.P(), f.Q(), false); },
                        [&](const TruncatedPolylogDS& f) { return polylog_target(f.alpha(), f.P(), f.Q(), true); },
                    },
                    p);
}

}  // namespace dstable
