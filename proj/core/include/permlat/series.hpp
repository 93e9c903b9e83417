#pragma once

#include "permlat/types.hpp"

namespace permlat::series {

/// A partial/analytic sum together with a certified bound on its absolute
/// error.  Tail completions keep `error` near rounding level, so results are
/// effectively exact.
struct TailSum {
  double value = 0.0;
  double error = 0.0;
};

/// sum_{m >= m_start} R(m)^{-s} for s > 1, certified by Euler-Maclaurin tail
/// completion (MixedSmoothness uses a bracketed binomial comparison against
/// m^{-s} series).  Throws DivergentSeries for s <= 1.
TailSum r_pow_sum(const DecayProfile& profile, double s, long long m_start,
                  long long direct_terms = 4096);

/// sum_{m >= m_start, m = c (mod n)} R(m)^{-s}, same guarantees.
TailSum r_pow_sum_class(const DecayProfile& profile, double s, long long m_start,
                        long long n, long long c, long long direct_terms = 4096);

/// Crude closed-form upper bound on sum_{m > M} R(m)^{-s} by integral
/// comparison with the monotone surrogate (scale * m)^{-s}.
double r_pow_tail_upper(const DecayProfile& profile, double s, long long M);

/// N_R(a) = sum_{m >= 1} R(m)^{-2a}.  Throws DivergentSeries when 2a <= 1.
TailSum n_r_certified(const SpaceParams& params, double a);

/// Convenience wrapper returning the value; raises TailToleranceExceeded when
/// the certified error exceeds tol.
double n_r(const SpaceParams& params, double a, double tol = 1e-10);

/// Full-line sum of the p-th power of the inverse one-dimensional weight,
///   s(p) = beta0^p + 2 beta1^p sum_{m>=1} R(m)^{-2 alpha p}.
/// Requires 2 alpha p > 1.
TailSum weight_power_line_sum(const SpaceParams& params, double p);

/// Residue-class decomposition of the full-line sum of (r1^{-1})^p:
///   a[c] = sum_{m in Z, m = c (mod n)} r1^{-1}(m)^p,  c = 0..n-1,
/// with err a certified bound on the total absolute error across classes.
/// direct_terms controls the direct-summation cutoff before analytic
/// completion.
struct LineClassSums {
  std::vector<double> a;
  double err = 0.0;
};

LineClassSums line_class_sums(const SpaceParams& params, double p, long long n,
                              long long direct_terms = 4096);

}  // namespace permlat::series
