#pragma once

#include <vector>

#include "dstable/families.hpp"

namespace dstable {

/// CDF of the strictly stable law whose CF is stable_cf(s, ., symmetric).
///
/// alpha = 2 and the symmetric alpha = 1 case use closed forms. Otherwise
/// the CDF is a single integral over a bounded angle interval with a
/// non-oscillating integrand (Zolotarev's representation), evaluated by
/// adaptive Gauss-Kronrod to absolute error tol. Throws PrecisionError if
/// the quadrature does not converge, DomainError for tol < 1e-14 or for a
/// skewed alpha = 1 law.
double stable_cdf(const StableParams& s, double x, double tol = 1e-10, bool symmetric = false);

/// stable_cdf at every point of xs (any order), made monotone along sorted
/// x by a running maximum so rounding never produces a decreasing CDF.
std::vector<double> stable_cdf_many(const StableParams& s, const std::vector<double>& xs, double tol = 1e-10,
                                    bool symmetric = false);

}  // namespace dstable
