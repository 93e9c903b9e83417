#pragma once

#include "permlat/types.hpp"

namespace permlat::kernels {

struct KernelValue {
    double value = 0.0;
    double tail_bound = 0.0;  // certified bound on |true - value|; 0 if exact
};

/// Univariate reproducing kernel K_1(u) = beta0 + 2 beta1 sum_{m>=1} R(m)^{-2a} cos(2 pi m u).
///
/// For the Korobov and SobolevTwoPi profiles with integer alpha in {1,..,4}
/// the series collapses to a Bernoulli polynomial and is evaluated exactly.
/// Otherwise a truncated cosine series with `series_terms` terms is used and
/// tail() reports a certified truncation bound.
class Kernel1 {
public:
    explicit Kernel1(const SpaceParams& params, long long series_terms = 1 << 14);

    double value(double u) const;  // u is reduced mod 1 internally
    double tail() const { return tail_; }
    bool exact() const { return closed_form_; }

private:
    SpaceParams params_;
    bool closed_form_ = false;
    int two_alpha_ = 0;          // closed form: 2 alpha
    double scale_ = 0.0;         // closed form: coefficient of B_{2 alpha}({u})
    std::vector<double> coef_;   // series: coef_[m] multiplies cos(2 pi m u), m >= 1
    double tail_ = 0.0;
};

/// Bernoulli polynomial B_k(t) for k in {2, 4, 6, 8}, t in [0, 1).
double bernoulli_poly(int k, double t);

/// d-variate product kernel K(x, y) = prod_l K_1(x_l - y_l).
KernelValue kernel_full(const SpaceParams& params, const Point& x, const Point& y,
                        long long series_terms = 1 << 14);

/// Kernel of the permutation-invariant subspace: the average of
/// K(P(x), y) over the coordinate permutations P fixing the complement of
/// the invariant block.  Equals the plain average over the distinct
/// rearrangements of x's block.
KernelValue kernel_invariant(const SpaceParams& params, const InvarianceSpec& inv,
                             const Point& x, const Point& y,
                             long long series_terms = 1 << 14);

/// Shift-averaged invariant kernel
///   K^sh(x, y) = sum_h (M(h)! / #S) r^{-1}(h) cos(2 pi h . (x - y)),
/// truncated to the box |h_l| <= trunc.box_radius with a tensor tail bound.
/// Depends on x, y only through frac(x - y).
KernelValue kernel_shift_invariant(const SpaceParams& params, const InvarianceSpec& inv,
                                   const Point& x, const Point& y, const Truncation& trunc);

}  // namespace permlat::kernels
