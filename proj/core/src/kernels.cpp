#include "permlat/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "permlat/series.hpp"
#include "permlat/spaces.hpp"

namespace permlat::kernels {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double factorial_d(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

double bernoulli_poly(int k, double t) {
    const double t2 = t * t;
    switch (k) {
        case 2:
            return t2 - t + 1.0 / 6.0;
        case 4:
            return t2 * t2 - 2.0 * t2 * t + t2 - 1.0 / 30.0;
        case 6: {
            const double t4 = t2 * t2;
            return t4 * t2 - 3.0 * t4 * t + 2.5 * t4 - 0.5 * t2 + 1.0 / 42.0;
        }
        case 8: {
            const double t4 = t2 * t2;
            return t4 * t4 - 4.0 * t4 * t2 * t + (14.0 / 3.0) * t4 * t2 - (7.0 / 3.0) * t4 +
                   (2.0 / 3.0) * t2 - 1.0 / 30.0;
        }
        default:
            throw ParameterDomain("bernoulli_poly: k must be one of {2, 4, 6, 8}");
    }
}

Kernel1::Kernel1(const SpaceParams& params, long long series_terms) : params_(params) {
    const double a = params.alpha;
    const bool integral = a == std::floor(a) && a >= 1.0 && a <= 4.0;
    if (integral && params.profile.kind != Profile::MixedSmoothness) {
        closed_form_ = true;
        two_alpha_ = 2 * static_cast<int>(a);
        const double sign = (static_cast<int>(a) % 2 == 0) ? -1.0 : 1.0;
        double num = sign * params.beta1 / factorial_d(two_alpha_);
        if (params.profile.kind == Profile::Korobov) num *= std::pow(kTwoPi, two_alpha_);
        scale_ = num;
        tail_ = 0.0;
        return;
    }
    if (series_terms < 1) throw ParameterDomain("Kernel1: series_terms must be positive");
    coef_.assign(static_cast<std::size_t>(series_terms) + 1, 0.0);
    for (long long m = 1; m <= series_terms; ++m)
        coef_[static_cast<std::size_t>(m)] =
            2.0 * params.beta1 * params.profile.r_pow_neg(static_cast<double>(m), 2.0 * a);
    const series::TailSum ts =
        series::r_pow_sum(params.profile, 2.0 * a, series_terms + 1);
    tail_ = 2.0 * params.beta1 * (ts.value + ts.error);
}

double Kernel1::value(double u) const {
    const double t = frac(u);
    if (closed_form_) return params_.beta0 + scale_ * bernoulli_poly(two_alpha_, t);
    double s = params_.beta0;
    const double theta = kTwoPi * t;
    for (std::size_t m = 1; m < coef_.size(); ++m)
        s += coef_[m] * std::cos(theta * static_cast<double>(m));
    return s;
}

KernelValue kernel_full(const SpaceParams& params, const Point& x, const Point& y,
                        long long series_terms) {
    if (x.size() != y.size()) throw ParameterDomain("kernel_full: dimension mismatch");
    const Kernel1 k1(params, series_terms);
    double prod = 1.0, prod_hi = 1.0;
    for (std::size_t l = 0; l < x.size(); ++l) {
        const double v = k1.value(x[l] - y[l]);
        prod *= v;
        prod_hi *= std::abs(v) + k1.tail();
    }
    double abs_prod = std::abs(prod);
    return {prod, prod_hi - abs_prod};
}

KernelValue kernel_invariant(const SpaceParams& params, const InvarianceSpec& inv,
                             const Point& x, const Point& y, long long series_terms) {
    if (static_cast<int>(x.size()) != inv.d || x.size() != y.size())
        throw ParameterDomain("kernel_invariant: dimension mismatch");
    const int m = inv.size();
    if (m > 12) throw TooManyPermutations("kernel_invariant: invariant block larger than 12");
    const Kernel1 k1(params, series_terms);

    const std::vector<int> block = inv.block0();
    std::vector<double> vals(block.size());
    for (std::size_t i = 0; i < block.size(); ++i) vals[i] = x[static_cast<std::size_t>(block[i])];
    std::sort(vals.begin(), vals.end());

    // Off-block factor is shared by every rearrangement.
    double free_prod = 1.0, free_abs = 1.0, free_hi = 1.0;
    std::vector<char> in_block(x.size(), 0);
    for (int b : block) in_block[static_cast<std::size_t>(b)] = 1;
    for (std::size_t l = 0; l < x.size(); ++l)
        if (!in_block[l]) {
            const double v = k1.value(x[l] - y[l]);
            free_prod *= v;
            free_abs *= std::abs(v);
            free_hi *= std::abs(v) + k1.tail();
        }

    // Average value and the averaged tensor tail bound over arrangements.
    double sum = 0.0, sum_abs = 0.0, sum_hi = 0.0;
    unsigned long long count = 0;
    do {
        double p = 1.0, p_abs = 1.0, p_hi = 1.0;
        for (std::size_t i = 0; i < block.size(); ++i) {
            const double v = k1.value(vals[i] - y[static_cast<std::size_t>(block[i])]);
            p *= v;
            p_abs *= std::abs(v);
            p_hi *= std::abs(v) + k1.tail();
        }
        sum += p;
        sum_abs += p_abs;
        sum_hi += p_hi;
        ++count;
    } while (std::next_permutation(vals.begin(), vals.end()));
    const double inv_count = 1.0 / static_cast<double>(count);
    const double value = free_prod * sum * inv_count;
    const double tail = (free_hi * sum_hi - free_abs * sum_abs) * inv_count;
    return {value, tail};
}

KernelValue kernel_shift_invariant(const SpaceParams& params, const InvarianceSpec& inv,
                                   const Point& x, const Point& y, const Truncation& trunc) {
    if (static_cast<int>(x.size()) != inv.d || x.size() != y.size())
        throw ParameterDomain("kernel_shift_invariant: dimension mismatch");
    const int d = inv.d;
    const long long H = trunc.box_radius;
    if (H < 0) throw ParameterDomain("kernel_shift_invariant: negative box radius");

    const auto group = inv.group_size_exact();
    if (!group) throw TooManyPermutations("kernel_shift_invariant: invariant block larger than 20");
    const double inv_group = 1.0 / static_cast<double>(*group);

    std::vector<double> u(x.size());
    for (std::size_t l = 0; l < x.size(); ++l) u[l] = frac(x[l] - y[l]);

    Frequency h(static_cast<std::size_t>(d), -H);
    double sum = 0.0;
    unsigned long long terms = 0;
    for (;;) {
        const double w = weight_inv(params, h);
        if (w != 0.0) {
            double dot = 0.0;
            for (int l = 0; l < d; ++l) dot += static_cast<double>(h[static_cast<std::size_t>(l)]) *
                                                u[static_cast<std::size_t>(l)];
            const FactorialValue mf = multiplicity_factorial(h, inv);
            sum += static_cast<double>(mf.exact) * inv_group * w * std::cos(kTwoPi * dot);
        }
        ++terms;
        int pos = d - 1;
        while (pos >= 0 && h[static_cast<std::size_t>(pos)] == H) {
            h[static_cast<std::size_t>(pos)] = -H;
            --pos;
        }
        if (pos < 0) break;
        ++h[static_cast<std::size_t>(pos)];
    }

    // Tail: M!/#S <= 1 and |cos| <= 1, so the omitted mass is at most the
    // tensor-product tail of the weight sums.
    const series::TailSum nr = series::n_r_certified(params, params.alpha);
    const double full_line = params.beta0 + 2.0 * params.beta1 * (nr.value + nr.error);
    double trunc_line = params.beta0;
    for (long long m = 1; m <= H; ++m)
        trunc_line += 2.0 * params.beta1 *
                      params.profile.r_pow_neg(static_cast<double>(m), 2.0 * params.alpha);
    const double tail =
        std::pow(full_line, d) - std::pow(std::min(trunc_line, full_line), d);
    if (tail > trunc.tail_tol)
        throw TailToleranceExceeded("kernel_shift_invariant: tail bound exceeds tolerance");
    return {sum, tail};
}

}  // namespace permlat::kernels
