#pragma once

#include <optional>

#include "permlat/types.hpp"

namespace permlat::bounds {

/// Closed-form constants of the invariant space.  s_d is the squared initial
/// error; the m-quantities are the kernel-diagonal integrals driving the
/// mean-based existence bounds.
struct TractabilityConstants {
    double s_d = 1.0;              // beta0^d
    double m2_invariant = 1.0;     // sum over Nabla_d of r^{-1}
    double m2_full = 1.0;          // (beta0 + 2 beta1 N_R(alpha))^d
    double m1_full = 1.0;          // equals m2_full (constant kernel diagonal)
    int v_star = 0;
    double eta_star = 0.0;         // eta*(v_star)
};

double s_d(const SpaceParams& params, const InvarianceSpec& inv);
double log_s_d(const SpaceParams& params, const InvarianceSpec& inv);

/// sum_{k in Nabla_d} r^{-1}(k), truncated to |k_l| <= trunc.box_radius with
/// a certified tail (free coordinates and the sorted invariant block bounded
/// separately).
ErrorReport m2_invariant(const SpaceParams& params, const InvarianceSpec& inv,
                         const Truncation& trunc);

/// Same quantity through the permutation cycle-type identity
///   sum_{k in Nabla_d} r^{-1}(k) = (1/m!) sum_{P in S_m} prod_{cycles} s(len)
/// with s(p) the full-line sum of the p-th power of the univariate weight.
/// Exact up to certified series tails; no box truncation.
double m2_invariant_exact(const SpaceParams& params, const InvarianceSpec& inv);

double m2_full(const SpaceParams& params, int d);
double m1_full(const SpaceParams& params, int d);

/// eta*(v) = (2 beta1 / beta0) sum_{m > v} R(m)^{-2 alpha}, certified to tol.
double eta_star(const SpaceParams& params, int v, double tol = 1e-10);

/// Minimal v >= 0 with eta*(v) < 1.
int v_star(const SpaceParams& params);

/// Root of eta*(0) = 1 as a function of alpha (bisection), i.e. the
/// smoothness threshold above which eta*(0) < 1.  ParameterDomain when no
/// root exists (beta1 = 0, or the level-1 line is never crossed).
double alpha_star(const SpaceParams& params);

/// Mean-based upper bound on the n-th minimal QMC worst-case error:
///   e(0) sqrt(V* + 1/(1-eta*)) (1 + 2 beta1 N_R / beta0)^{(d-#I)/2}
///   (#I)^{V*/2} n^{-1/2}.
/// Requires #I >= 2 and 2 beta1 <= beta0 R(1)^{2 alpha} (AssumptionViolated).
double theorem_upper_bound(const SpaceParams& params, const InvarianceSpec& inv,
                           long long n);

/// Lower bound for every unshifted rank-1 lattice rule, on the error scale.
/// exact: beta0^{d/2} ([1 + (2 beta1/beta0) sum_m R(nm)^{-2 alpha}]^d - 1)^{1/2}
/// weak:  the same with sum_m R(nm)^{-2 alpha} replaced by N_R(alpha) n^{-2 alpha};
/// weak <= exact termwise.
struct UnshiftedLowerBound {
    double exact = 0.0;
    double weak = 0.0;
};
UnshiftedLowerBound unshifted_lower_bound(const SpaceParams& params,
                                          const InvarianceSpec& inv, long long n);

/// Lower bound on the shift-averaged (rms) error of every rank-1 rule with
/// prime n; `full` carries both case branches (#I < d and #I = d),
/// `simplified` is e(0) sqrt(2 beta1 N_R / beta0) max{d-#I,1}^{1/2} n^{-alpha}.
struct RmseLowerBound {
    double full = 0.0;
    double simplified = 0.0;
};
RmseLowerBound rmse_lower_bound(const SpaceParams& params, const InvarianceSpec& inv,
                                long long n);

/// C_{d,lambda} = ( sum_{0 != h} [ (M(h)!/#S) r^{-1}(h) ]^{1/lambda} )^lambda,
/// box-truncated over Nabla_d representatives with their distinct-image
/// counts; certified tensor tail.  Requires 2 alpha / lambda > 1.
ErrorReport c_d_lambda(const SpaceParams& params, const InvarianceSpec& inv,
                       double lambda, const Truncation& trunc);

/// Same constant via equality-pattern decomposition over the invariant block
/// (set-partition Moebius inversion); exact up to series tails.
double c_d_lambda_exact(const SpaceParams& params, const InvarianceSpec& inv,
                        double lambda);

/// Auxiliary parameters of the upper estimate: requires
/// 1 < lambda < 2 alpha, alpha > a + 1/2 > lambda/2, gamma > 0.
struct CdLambdaAux {
    double a = 0.0;
    double gamma = 1.0;
};

/// lower: case split lambda = 1 / lambda > 1 and #I in {0, (0,d), d}.
/// upper: for lambda > 1 the substitution estimate
///   C_{d,1}(alpha-a, (beta0, beta1 gamma)) ([1 + 2 gamma^{-1/(lambda-1)}
///   N_R(a/(lambda-1))]^d - 1)^{lambda-1};
/// for lambda = 1 the exact representation m2_invariant - beta0^d.  Absent
/// when lambda > 1 and no aux was supplied.
struct CdLambdaBounds {
    double lower = 0.0;
    std::optional<double> upper;
};
CdLambdaBounds c_d_lambda_bounds(const SpaceParams& params, const InvarianceSpec& inv,
                                 double lambda,
                                 std::optional<CdLambdaAux> aux = std::nullopt);

/// Both sides of the sorted-sum estimate
///   sum_{0<=k_1<=...<=k_d} prod lambda_{k_l}
///   <= lambda_0^d d^v (1 + v + sum_{L=1}^d lambda_0^{-L} T_L),
/// T_L the sorted sum over indices >= v+1.  The sequence is finite
/// (lambda_m = 0 beyond it), which makes both sides exact.
struct LemmaBoundSides {
    double lhs = 0.0;
    double rhs = 0.0;
};
LemmaBoundSides lemma_bound_sides(const std::vector<double>& lambda_seq, int d, int v);

TractabilityConstants tractability_constants(const SpaceParams& params,
                                             const InvarianceSpec& inv);

}  // namespace permlat::bounds
