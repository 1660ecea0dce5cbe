#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dstable/special_fn.hpp"

namespace dstable {

/// Strictly stable law: alpha in (0, 2], beta in [-1, 1], sigma > 0.
struct StableParams {
  double alpha;
  double beta;
  double sigma;
};

/// Symmetric lattice law with log g(t) = -sigma^{2 gamma} 2^gamma a^{-2 gamma} (1 - cos at)^gamma.
class SymmetricDS {
 public:
  SymmetricDS(double gamma, double sigma, double a);
  double gamma() const noexcept { return gamma_; }
  double sigma() const noexcept { return sigma_; }
  double a() const noexcept { return a_; }
  /// Poisson intensity sigma^{2 gamma} 2^gamma / a^{2 gamma}.
  double lambda() const noexcept { return lambda_; }

 private:
  double gamma_, sigma_, a_, lambda_;
};

/// SymmetricDS with the jump series cut after M terms.
class TruncatedSDS {
 public:
  TruncatedSDS(double gamma, double sigma, double a, std::int64_t M);
  double gamma() const noexcept { return gamma_; }
  double sigma() const noexcept { return sigma_; }
  double a() const noexcept { return a_; }
  std::int64_t M() const noexcept { return M_; }
  double lambda() const noexcept { return lambda_; }
  /// Sibuya weights w_1 .. w_M (index 0 holds w_1).
  const std::vector<double>& weights() const noexcept { return weights_; }
  double weight_sum() const noexcept { return weight_sum_; }

 private:
  double gamma_, sigma_, a_;
  std::int64_t M_;
  double lambda_;
  std::vector<double> weights_;
  double weight_sum_;
};

/// Skewed lattice law with Sibuya jump magnitudes; alpha in (0, 1).
class DiscreteStable {
 public:
  DiscreteStable(double alpha, double beta, double sigma, double a);
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double sigma() const noexcept { return sigma_; }
  double a() const noexcept { return a_; }

 private:
  double alpha_, beta_, sigma_, a_;
};

/// DiscreteStable with the Levy weight at index k multiplied by
/// exp(-theta1 k) for k > 0 and exp(-theta2 |k|) for k < 0.
class TemperedDS {
 public:
  TemperedDS(double alpha, double beta, double sigma, double a, double theta1, double theta2);
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double sigma() const noexcept { return sigma_; }
  double a() const noexcept { return a_; }
  double theta1() const noexcept { return theta1_; }
  double theta2() const noexcept { return theta2_; }

 private:
  double alpha_, beta_, sigma_, a_, theta1_, theta2_;
};

/// Discretized stable Levy measure: weight P a^{-alpha} k^{-(1+alpha)} at ak,
/// k > 0, and Q a^{-alpha} |k|^{-(1+alpha)} at k < 0.
class PolylogDS {
 public:
  PolylogDS(double alpha, double P, double Q, double a);
  double alpha() const noexcept { return alpha_; }
  double P() const noexcept { return P_; }
  double Q() const noexcept { return Q_; }
  double a() const noexcept { return a_; }
  const PolylogUnitCircle& polylog() const noexcept { return li_; }

 private:
  double alpha_, P_, Q_, a_;
  PolylogUnitCircle li_;
};

/// PolylogDS with atoms beyond |k| = M removed.
class TruncatedPolylogDS {
 public:
  TruncatedPolylogDS(double alpha, double P, double Q, double a, std::int64_t M);
  double alpha() const noexcept { return alpha_; }
  double P() const noexcept { return P_; }
  double Q() const noexcept { return Q_; }
  double a() const noexcept { return a_; }
  std::int64_t M() const noexcept { return M_; }
  /// k^{-(1+alpha)} for k = 1 .. M (index 0 holds k = 1).
  const std::vector<double>& magnitudes() const noexcept { return mags_; }
  /// sum_{k <= M} k^{-(1+alpha)}
  double magnitude_sum() const noexcept { return mag_sum_; }

 private:
  double alpha_, P_, Q_, a_;
  std::int64_t M_;
  std::vector<double> mags_;
  double mag_sum_;
};

using FamilyParams = std::variant<SymmetricDS, TruncatedSDS, DiscreteStable, TemperedDS, PolylogDS, TruncatedPolylogDS>;

/// Short family name as used on the command line ("sds", "ds", ...).
std::string family_name(const FamilyParams& p);
/// Lattice pitch a.
double lattice_step(const FamilyParams& p);

/// One-sided jump intensities (positive side, negative side).
///
/// SymmetricDS and TruncatedSDS split the total intensity evenly. The skewed
/// families return sigma^alpha (1 +- beta) / (2 cos(pi alpha/2)) a^{-alpha},
/// the polylog families the one-sided sums of their Levy weights.
std::pair<double, double> derived_intensities(const FamilyParams& p);

/// log of the characteristic function at t.
ComplexValue log_char_fn(const FamilyParams& p, double t);
/// Characteristic function E exp(i t X).
ComplexValue char_fn(const FamilyParams& p, double t);

/// Whether the tilt E exp(eta X / a) is finite, i.e. eta lies in the open
/// strip of analyticity (any eta for the truncated families, (-theta2,
/// theta1) for TemperedDS, only 0 otherwise).
bool tilt_admissible(const FamilyParams& p, double eta);
/// log of the cumulant function E exp(eta K) where X = a K.
double log_mgf_index(const FamilyParams& p, double eta);
/// log E exp((eta + i a t) K) - log E exp(eta K): the CF of the
/// exponentially tilted law with masses p_k e^{eta k} / E e^{eta K}.
ComplexValue log_char_fn_tilted(const FamilyParams& p, double t, double eta);

/// Characteristic function of the strictly stable law.
///
/// symmetric: exp(-sigma^alpha |t|^alpha), beta ignored.
/// Otherwise exp(-sigma^alpha |t|^alpha (1 - i beta sign(t) tan(pi alpha / 2))), alpha != 1.
ComplexValue stable_cf(const StableParams& s, double t, bool symmetric);

/// Compound-Poisson form exp(-Lambda (1 - h(t))) of a family.
struct CompoundPoissonView {
  double total_intensity;
  std::function<ComplexValue(double)> jump_cf;
};
CompoundPoissonView compound_poisson_view(const FamilyParams& p);

/// Levy measure mass at lattice point a k, k != 0. SymmetricDS and
/// TruncatedSDS are rejected; see symmetric_levy_weights.
double levy_weight(const FamilyParams& p, std::int64_t k);

/// Levy weights of SymmetricDS / TruncatedSDS at k = 0 .. kmax, from the
/// mixture of +-1 walks sum_j lambda w_j P(walk_j = k) with j <= cutoff.
/// Entry 0 is the zero-length jump mass, which the compound-Poisson form
/// carries but which does not move the process.
std::vector<double> symmetric_levy_weights(const FamilyParams& p, std::int64_t kmax, std::int64_t cutoff);

/// Limit law as a -> 0 and domain-of-attraction flags.
struct StableTarget {
  StableParams params{2.0, 0.0, 1.0};
  bool has_stable = true;            // false for polylog families with alpha >= 2
  bool symmetric = false;            // params.beta is 0 by construction
  bool gaussian_attraction = false;  // finite-variance family (truncated / tempered)
};
StableTarget target_stable(const FamilyParams& p);

}  // namespace dstable
