#include "permlat/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "permlat/partitions.hpp"
#include "permlat/series.hpp"
#include "permlat/spaces.hpp"

namespace permlat::bounds {

namespace {

// Full-line sum of the q-th power of the univariate inverse weight.
double sfun(const SpaceParams& params, double q) {
    return series::weight_power_line_sum(params, q).value;
}

double two_alpha(const SpaceParams& params) { return 2.0 * params.alpha; }

// [ (1 + e^lt)^d - 1 ]^lam1 with underflow/overflow-safe asymptotics.
double bracket_power(double lt, int d, double lam1) {
    const double kLo = std::log(1e-12), kHi = std::log(1e12);
    if (lt < kLo) return std::exp(lam1 * (std::log(static_cast<double>(d)) + lt));
    if (lt > kHi) return std::exp(lam1 * static_cast<double>(d) * lt);
    const double inner = std::expm1(static_cast<double>(d) * std::log1p(std::exp(lt)));
    return std::pow(inner, lam1);
}

}  // namespace

double s_d(const SpaceParams& params, const InvarianceSpec& inv) {
    return std::pow(params.beta0, inv.d);
}

double log_s_d(const SpaceParams& params, const InvarianceSpec& inv) {
    return static_cast<double>(inv.d) * std::log(params.beta0);
}

double m2_full(const SpaceParams& params, int d) {
    if (d < 1) throw ParameterDomain("m2_full: d must be positive");
    return std::pow(sfun(params, 1.0), d);
}

double m1_full(const SpaceParams& params, int d) { return m2_full(params, d); }

ErrorReport m2_invariant(const SpaceParams& params, const InvarianceSpec& inv,
                         const Truncation& trunc) {
    const int d = inv.d;
    const int m = inv.size();
    const long long H = trunc.box_radius;
    if (H < 0) throw ParameterDomain("m2_invariant: negative box radius");

    ErrorReport out;
    NablaEnumerator en(inv, H);
    Frequency k;
    double sum = 0.0;
    while (en.next(k)) sum += weight_inv(params, k);
    out.value = sum;
    out.terms = en.produced();

    // Tail: with B the exact sorted-block sum and F the full free-coordinate
    // tensor sum, the complete Nabla sum is B F; bound the omitted part by
    // B (F - F_H) + F_H (B - B_H) and the sorted-block remainder by the full
    // box remainder of Z^m.
    const series::TailSum line = series::weight_power_line_sum(params, 1.0);
    const double full_line = line.value + line.error;
    double trunc_line = params.beta0;
    for (long long v = 1; v <= H; ++v)
        trunc_line +=
            2.0 * params.beta1 * params.profile.r_pow_neg(static_cast<double>(v), two_alpha(params));
    trunc_line = std::min(trunc_line, full_line);

    const double block_exact =
        (m == 0) ? 1.0 : m2_invariant_exact(params, InvarianceSpec::full(m));
    const double free_full = std::pow(full_line, d - m);
    const double free_trunc = std::pow(trunc_line, d - m);
    const double block_box_tail = std::pow(full_line, m) - std::pow(trunc_line, m);
    out.tail_bound = block_exact * (free_full - free_trunc) + free_trunc * block_box_tail;
    if (out.tail_bound > trunc.tail_tol)
        throw TailToleranceExceeded("m2_invariant: tail bound exceeds tolerance");
    return out;
}

double m2_invariant_exact(const SpaceParams& params, const InvarianceSpec& inv) {
    const int d = inv.d;
    const int m = inv.size();
    // Average over S_m of the fixed-point weight sums: a permutation of cycle
    // type (c_j) fixes exactly prod_j s(j)^{c_j} worth of block mass.
    double block = 0.0;
    partitions::for_each_integer_partition(m, [&](const std::vector<int>& parts) {
        double prod = partitions::cycle_type_weight(parts);
        for (int part : parts) prod *= sfun(params, static_cast<double>(part));
        block += prod;
    });
    return block * std::pow(sfun(params, 1.0), d - m);
}

double eta_star(const SpaceParams& params, int v, double tol) {
    if (v < 0) throw ParameterDomain("eta_star: v must be nonnegative");
    if (two_alpha(params) <= 1.0) throw DivergentSeries("eta_star: 2 alpha <= 1");
    const double scale = 2.0 * params.beta1 / params.beta0;
    const series::TailSum ts = series::r_pow_sum(params.profile, two_alpha(params), v + 1);
    if (scale * ts.error > tol)
        throw TailToleranceExceeded("eta_star: certified error above tolerance");
    return scale * ts.value;
}

int v_star(const SpaceParams& params) {
    for (int v = 0; v < 1000000; ++v) {
        const double scale = 2.0 * params.beta1 / params.beta0;
        const series::TailSum ts = series::r_pow_sum(params.profile, two_alpha(params), v + 1);
        if (scale * (ts.value + ts.error) < 1.0) return v;
    }
    throw Error("v_star: no admissible v below 10^6");
}

double alpha_star(const SpaceParams& params) {
    if (params.beta1 <= 0.0)
        throw ParameterDomain("alpha_star: eta*(0) vanishes identically for beta1 = 0");
    auto eta0 = [&](double a) {
        return eta_star(SpaceParams(a, params.beta0, params.beta1, params.profile), 0);
    };
    double lo = 0.5 + 1e-7;
    if (eta0(lo) <= 1.0)
        throw ParameterDomain("alpha_star: root lies below the supported smoothness range");
    double hi = 1.0;
    while (eta0(hi) >= 1.0) {
        hi *= 2.0;
        if (hi > 1024.0)
            throw ParameterDomain("alpha_star: eta*(0) never drops below 1 (2 beta1 >= beta0?)");
    }
    while (hi - lo > 1e-11) {
        const double mid = 0.5 * (lo + hi);
        (eta0(mid) >= 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double theorem_upper_bound(const SpaceParams& params, const InvarianceSpec& inv,
                           long long n) {
    const int d = inv.d;
    const int m = inv.size();
    if (n < 1) throw ParameterDomain("theorem_upper_bound: n must be positive");
    if (m < 2) throw AssumptionViolated("theorem_upper_bound: requires #I_d >= 2");
    // R is nondecreasing, so checking the admissibility condition at m = 1
    // covers every m.
    const double r1 = params.profile.R(1.0);
    if (2.0 * params.beta1 > params.beta0 * std::pow(r1, two_alpha(params)) * (1.0 + 1e-14))
        throw AssumptionViolated("theorem_upper_bound: 2 beta1 <= beta0 R(1)^{2 alpha} fails");

    const int V = v_star(params);
    const double eta = eta_star(params, V);
    const double nr = series::n_r_certified(params, params.alpha).value;
    return std::pow(params.beta0, 0.5 * d) * std::sqrt(V + 1.0 / (1.0 - eta)) *
           std::pow(1.0 + 2.0 * params.beta1 * nr / params.beta0, 0.5 * (d - m)) *
           std::pow(static_cast<double>(m), 0.5 * V) / std::sqrt(static_cast<double>(n));
}

UnshiftedLowerBound unshifted_lower_bound(const SpaceParams& params,
                                          const InvarianceSpec& inv, long long n) {
    if (n < 1) throw ParameterDomain("unshifted_lower_bound: n must be positive");
    const int d = inv.d;
    const double scale = 2.0 * params.beta1 / params.beta0;
    const series::TailSum sn =
        series::r_pow_sum_class(params.profile, two_alpha(params), n, n, 0);
    const double nr = series::n_r_certified(params, params.alpha).value;

    UnshiftedLowerBound out;
    const double e0sq = std::pow(params.beta0, d);
    out.exact = std::sqrt(e0sq * std::expm1(d * std::log1p(scale * sn.value)));
    out.weak = std::sqrt(
        e0sq * std::expm1(d * std::log1p(scale * nr * std::pow(static_cast<double>(n),
                                                               -two_alpha(params)))));
    return out;
}

RmseLowerBound rmse_lower_bound(const SpaceParams& params, const InvarianceSpec& inv,
                                long long n) {
    if (!is_prime(n)) throw ParameterDomain("rmse_lower_bound: n must be prime");
    const int d = inv.d;
    const int m = inv.size();
    const double npow = std::pow(static_cast<double>(n), -two_alpha(params));
    const double nr = series::n_r_certified(params, params.alpha).value;
    const double e0sq = std::pow(params.beta0, d);

    // sum_{l=1..m} [ beta1 N_R(alpha l)^{1/l} / (beta0 n^{2 alpha}) ]^l,
    // expanded as (beta1 npow / beta0)^l N_R(alpha l).
    double block_sum = 0.0;
    for (int l = 1; l <= m; ++l) {
        const double base = params.beta1 * npow / params.beta0;
        const double nrl = series::n_r_certified(params, params.alpha * l).value;
        block_sum += std::pow(base, l) * nrl;
    }

    RmseLowerBound out;
    const double x = 2.0 * params.beta1 * nr * npow / params.beta0;
    if (m < d) {
        out.full = std::sqrt(e0sq * std::expm1((d - m) * std::log1p(x)) *
                             (1.0 + 2.0 * block_sum));
    } else {
        out.full = std::sqrt(e0sq * 2.0 * block_sum);
    }
    out.simplified = std::sqrt(e0sq * 2.0 * params.beta1 * nr / params.beta0 *
                               static_cast<double>(std::max(d - m, 1)) * npow);
    return out;
}

ErrorReport c_d_lambda(const SpaceParams& params, const InvarianceSpec& inv,
                       double lambda, const Truncation& trunc) {
    if (lambda < 1.0) throw ParameterDomain("c_d_lambda: lambda must be >= 1");
    if (two_alpha(params) / lambda <= 1.0)
        throw DivergentSeries("c_d_lambda: 2 alpha / lambda <= 1");
    const int d = inv.d;
    const double mu = 1.0 / lambda;
    const long long H = trunc.box_radius;

    const auto group = inv.group_size_exact();
    if (!group) throw TooManyPermutations("c_d_lambda: invariant block larger than 20");
    const double group_d = static_cast<double>(*group);

    double inner = 0.0;
    NablaEnumerator en(inv, H);
    Frequency k;
    while (en.next(k)) {
        bool zero = true;
        for (long long v : k)
            if (v != 0) { zero = false; break; }
        if (zero) continue;
        const FactorialValue mf = multiplicity_factorial(k, inv);
        const double images = group_d / static_cast<double>(mf.exact);
        inner += images *
                 std::pow(weight_inv(params, k) * static_cast<double>(mf.exact) / group_d, mu);
    }

    const series::TailSum line = series::weight_power_line_sum(params, mu);
    const double full_line = line.value + line.error;
    double trunc_line = std::pow(params.beta0, mu);
    for (long long v = 1; v <= H; ++v)
        trunc_line += 2.0 * std::pow(params.beta1, mu) *
                      params.profile.r_pow_neg(static_cast<double>(v), two_alpha(params) * mu);
    trunc_line = std::min(trunc_line, full_line);
    const double inner_tail = std::pow(full_line, d) - std::pow(trunc_line, d);

    ErrorReport out;
    out.value = std::pow(inner, lambda);
    out.tail_bound = std::pow(inner + inner_tail, lambda) - out.value;
    out.terms = en.produced();
    if (out.tail_bound > trunc.tail_tol)
        throw TailToleranceExceeded("c_d_lambda: tail bound exceeds tolerance");
    return out;
}

double c_d_lambda_exact(const SpaceParams& params, const InvarianceSpec& inv,
                        double lambda) {
    if (lambda < 1.0) throw ParameterDomain("c_d_lambda_exact: lambda must be >= 1");
    if (two_alpha(params) / lambda <= 1.0)
        throw DivergentSeries("c_d_lambda_exact: 2 alpha / lambda <= 1");
    const int d = inv.d;
    const int m = inv.size();
    const double mu = 1.0 / lambda;
    const double m_fact = static_cast<double>(factorial(m).exact);

    // sum over equality patterns pi of the block: (M!/m!)^mu times the sum
    // over pairwise-distinct block values, the latter un-distinct-ified by
    // Moebius inversion over merges of pi's blocks.
    double block_sum = 0.0;
    partitions::for_each_set_partition(m, [&](const partitions::SetPartition& pi) {
        std::vector<int> sizes;
        sizes.reserve(pi.size());
        double mult_fact = 1.0;
        for (const auto& b : pi) {
            sizes.push_back(static_cast<int>(b.size()));
            mult_fact *= static_cast<double>(factorial(static_cast<int>(b.size())).exact);
        }
        const double coeff = std::pow(mult_fact / m_fact, mu);
        double epi = 0.0;
        partitions::for_each_set_partition(
            static_cast<int>(sizes.size()), [&](const partitions::SetPartition& sigma) {
                double term = 1.0;
                for (const auto& c : sigma) {
                    int total = 0;
                    for (int i : c) total += sizes[static_cast<std::size_t>(i)];
                    const double sign = (c.size() % 2 == 1) ? 1.0 : -1.0;
                    term *= sign *
                            static_cast<double>(factorial(static_cast<int>(c.size()) - 1).exact) *
                            sfun(params, mu * total);
                }
                epi += term;
            });
        block_sum += coeff * epi;
    });

    const double inner =
        block_sum * std::pow(sfun(params, mu), d - m) - std::pow(params.beta0, mu * d);
    return std::pow(inner, lambda);
}

CdLambdaBounds c_d_lambda_bounds(const SpaceParams& params, const InvarianceSpec& inv,
                                 double lambda, std::optional<CdLambdaAux> aux) {
    if (lambda < 1.0) throw ParameterDomain("c_d_lambda_bounds: lambda must be >= 1");
    const int d = inv.d;
    const int m = inv.size();
    const double e0sq = std::pow(params.beta0, d);
    const double q =
        params.beta1 / (params.beta0 * std::pow(params.profile.R(1.0), two_alpha(params)));

    CdLambdaBounds out;
    if (lambda == 1.0) {
        double geo = 0.0, qp = 1.0;
        for (int l = 1; l <= m; ++l) {
            qp *= q;
            geo += qp;
        }
        if (m == d) {
            out.lower = e0sq * 2.0 * geo;
        } else {
            const double nr = series::n_r_certified(params, params.alpha).value;
            const double first =
                std::expm1((d - m) * std::log1p(2.0 * (params.beta1 / params.beta0) * nr));
            out.lower = e0sq * first * (1.0 + 2.0 * geo);
        }
        out.upper = m2_invariant_exact(params, inv) - e0sq;
        return out;
    }

    const double lam1 = lambda - 1.0;
    const double lt = std::log(q) / lam1;  // log of q^{1/(lambda-1)}
    if (m == d) {
        out.lower = e0sq * std::pow(2.0, lambda) * bracket_power(lt, d, lam1);
    } else {
        if (two_alpha(params) / lambda <= 1.0)
            throw DivergentSeries("c_d_lambda_bounds: 2 alpha / lambda <= 1");
        const double nr_mu =
            series::r_pow_sum(params.profile, two_alpha(params) / lambda, 1).value;
        const double first = std::pow(
            std::expm1((d - m) *
                       std::log1p(2.0 * std::pow(params.beta1 / params.beta0, 1.0 / lambda) *
                                  nr_mu)),
            lambda);
        const double second =
            (m == 0) ? 1.0 : 1.0 + std::pow(2.0, lambda) * bracket_power(lt, m, lam1);
        out.lower = e0sq * first * second;
    }

    if (aux) {
        if (!(lambda < two_alpha(params)))
            throw ParameterDomain("c_d_lambda_bounds: upper estimate needs lambda < 2 alpha");
        if (!(params.alpha > aux->a + 0.5 && aux->a + 0.5 > 0.5 * lambda))
            throw ParameterDomain("c_d_lambda_bounds: need alpha > A + 1/2 > lambda/2");
        if (!(aux->gamma > 0.0)) throw ParameterDomain("c_d_lambda_bounds: gamma must be positive");
        const SpaceParams mod(params.alpha - aux->a, params.beta0, params.beta1 * aux->gamma,
                              params.profile);
        const double c1 = m2_invariant_exact(mod, inv) - e0sq;
        const double nr_a =
            series::r_pow_sum(params.profile, 2.0 * aux->a / lam1, 1).value;
        const double lt_up = std::log(2.0 * nr_a) - std::log(aux->gamma) / lam1;
        out.upper = c1 * bracket_power(lt_up, d, lam1);
    }
    return out;
}

LemmaBoundSides lemma_bound_sides(const std::vector<double>& lambda_seq, int d, int v) {
    if (lambda_seq.empty()) throw ParameterDomain("lemma_bound_sides: empty sequence");
    if (d < 1) throw ParameterDomain("lemma_bound_sides: d must be positive");
    if (v < 0) throw ParameterDomain("lemma_bound_sides: v must be nonnegative");
    const double lam0 = lambda_seq[0];
    if (!(lam0 > 0.0)) throw ParameterDomain("lemma_bound_sides: lambda_0 must be positive");
    for (double lm : lambda_seq)
        if (lm < 0.0 || lm > lam0)
            throw ParameterDomain("lemma_bound_sides: need 0 <= lambda_m <= lambda_0");

    const int M = static_cast<int>(lambda_seq.size()) - 1;
    // G[L][lo] = sum over nondecreasing (k_1..k_L) with values in [lo, M].
    auto sorted_sum = [&](int len, int lo_min) {
        std::vector<std::vector<double>> g(static_cast<std::size_t>(len) + 1,
                                           std::vector<double>(static_cast<std::size_t>(M) + 2, 0.0));
        for (int lo = 0; lo <= M + 1; ++lo) g[0][static_cast<std::size_t>(lo)] = 1.0;
        for (int L = 1; L <= len; ++L)
            for (int lo = M; lo >= lo_min; --lo)
                g[static_cast<std::size_t>(L)][static_cast<std::size_t>(lo)] =
                    g[static_cast<std::size_t>(L)][static_cast<std::size_t>(lo) + 1] +
                    lambda_seq[static_cast<std::size_t>(lo)] *
                        g[static_cast<std::size_t>(L) - 1][static_cast<std::size_t>(lo)];
        return g;
    };

    LemmaBoundSides out;
    const auto g_all = sorted_sum(d, 0);
    out.lhs = g_all[static_cast<std::size_t>(d)][0];

    double series_part = 0.0;
    if (v + 1 <= M) {
        const auto g_hi = sorted_sum(d, v + 1);
        double lam0_pow = 1.0;
        for (int L = 1; L <= d; ++L) {
            lam0_pow *= lam0;
            series_part += g_hi[static_cast<std::size_t>(L)][static_cast<std::size_t>(v) + 1] / lam0_pow;
        }
    }
    out.rhs = std::pow(lam0, d) * std::pow(static_cast<double>(d), v) *
              (1.0 + v + series_part);
    return out;
}

TractabilityConstants tractability_constants(const SpaceParams& params,
                                             const InvarianceSpec& inv) {
    TractabilityConstants out;
    out.s_d = s_d(params, inv);
    out.m2_invariant = m2_invariant_exact(params, inv);
    out.m2_full = m2_full(params, inv.d);
    out.m1_full = m1_full(params, inv.d);
    out.v_star = v_star(params);
    out.eta_star = eta_star(params, out.v_star);
    return out;
}

}  // namespace permlat::bounds
