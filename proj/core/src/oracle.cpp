#include "permlat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include "permlat/kernels.hpp"
#include "permlat/series.hpp"

namespace permlat::oracle {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;

}  // namespace

std::uint64_t CounterRng::at(std::uint64_t counter) const {
    std::uint64_t x = seed_ ^ (counter * 0xD1B54A32D192ED03ULL);
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double CounterRng::unit_at(std::uint64_t counter) const {
    return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
}

ErrorReport wce_quadratic_form(const SpaceParams& params, const InvarianceSpec& inv,
                               const std::vector<Point>& nodes,
                               const std::vector<double>& weights, const Truncation& trunc) {
    const std::size_t nn = nodes.size();
    if (nn == 0) throw ParameterDomain("wce_quadratic_form: no nodes");
    const int d = inv.d;
    for (const Point& t : nodes)
        if (static_cast<int>(t.size()) != d)
            throw ParameterDomain("wce_quadratic_form: node dimension mismatch");
    std::vector<double> w(weights);
    if (w.empty()) w.assign(nn, 1.0);
    if (w.size() != nn) throw ParameterDomain("wce_quadratic_form: weights/nodes size mismatch");
    // The rule carries an explicit 1/n, so fold it into the weights here.
    for (double& v : w) v /= static_cast<double>(nn);

    const long long terms = std::max<long long>(trunc.box_radius, 4096);
    double wsum = 0.0;
    for (double v : w) wsum += v;

    double sq = std::pow(params.beta0, d) * (1.0 - 2.0 * wsum);
    double tail = 0.0;
    double abs_acc = std::abs(sq);
    // K_inv is symmetric, so the off-diagonal pairs enter twice.
    for (std::size_t i = 0; i < nn; ++i) {
        for (std::size_t j = i; j < nn; ++j) {
            const kernels::KernelValue kv =
                kernels::kernel_invariant(params, inv, nodes[i], nodes[j], terms);
            const double mult = (i == j ? 1.0 : 2.0) * w[i] * w[j];
            sq += mult * kv.value;
            tail += std::abs(mult) * kv.tail_bound;
            abs_acc += std::abs(mult * kv.value);
        }
    }
    tail += static_cast<double>(nn) * static_cast<double>(nn) *
            std::numeric_limits<double>::epsilon() * abs_acc;
    return sqrt_error_report(sq, tail, trunc.tail_tol,
                             static_cast<unsigned long long>(nn * (nn + 1) / 2),
                             "wce_quadratic_form");
}

ErrorReport general_error_formula(const SpaceParams& params, const InvarianceSpec& inv,
                                  const std::vector<Point>& nodes,
                                  const std::vector<double>& weights, const Truncation& trunc) {
    const std::size_t nn = nodes.size();
    if (nn == 0) throw ParameterDomain("general_error_formula: no nodes");
    const int d = inv.d;
    for (const Point& t : nodes)
        if (static_cast<int>(t.size()) != d)
            throw ParameterDomain("general_error_formula: node dimension mismatch");
    std::vector<double> w(weights);
    if (w.empty()) w.assign(nn, 1.0);
    if (w.size() != nn) throw ParameterDomain("general_error_formula: weights/nodes size mismatch");
    // Same unnormalized convention as wce_quadratic_form.
    for (double& v : w) v /= static_cast<double>(nn);

    const long long H = trunc.box_radius;
    if (H < 0) throw ParameterDomain("general_error_formula: negative box radius");
    const long long width = 2 * H + 1;
    long double cells_ld = 1.0L;
    for (int l = 0; l < d; ++l) {
        cells_ld *= static_cast<long double>(width);
        if (cells_ld > 2e7L)
            throw SearchSpaceTooLarge("general_error_formula: frequency box above 2*10^7 cells");
    }
    const auto cells = static_cast<unsigned long long>(cells_ld + 0.5L);

    const std::vector<int> block = inv.block0();
    const int m = static_cast<int>(block.size());
    if (m > 12) throw TooManyPermutations("general_error_formula: invariant block larger than 12");
    const double m_fact = static_cast<double>(factorial(m).exact);
    if (m_fact * static_cast<double>(cells) > 2e9)
        throw SearchSpaceTooLarge("general_error_formula: box times permutation count too large");

    // Per-coordinate phase tables tab[l][k*nn + j] = exp(2 pi i (k - H) t_{j,l})
    // and the shared inverse-weight line.
    std::vector<std::vector<std::complex<double>>> tab(static_cast<std::size_t>(d));
    for (int l = 0; l < d; ++l) {
        auto& tl = tab[static_cast<std::size_t>(l)];
        tl.resize(static_cast<std::size_t>(width) * nn);
        for (long long k = 0; k < width; ++k) {
            const auto hv = static_cast<double>(k - H);
            for (std::size_t j = 0; j < nn; ++j)
                tl[static_cast<std::size_t>(k) * nn + j] =
                    std::polar(1.0, kTwoPi * frac(hv * nodes[j][static_cast<std::size_t>(l)]));
        }
    }
    std::vector<double> wline(static_cast<std::size_t>(width));
    for (long long k = 0; k < width; ++k) {
        const long long hv = k - H;
        wline[static_cast<std::size_t>(k)] =
            hv == 0 ? params.beta0
                    : params.beta1 * params.profile.r_pow_neg(static_cast<double>(std::llabs(hv)),
                                                              2.0 * params.alpha);
    }

    std::vector<long long> stride(static_cast<std::size_t>(d), 1);
    for (int l = d - 2; l >= 0; --l)
        stride[static_cast<std::size_t>(l)] = stride[static_cast<std::size_t>(l) + 1] * width;

    // Pass 1: Phi over the whole box, odometer order, per-node prefix
    // products refreshed from the lowest changed digit.
    std::vector<std::complex<double>> phi(cells);
    std::vector<std::vector<std::complex<double>>> pref(
        static_cast<std::size_t>(d) + 1, std::vector<std::complex<double>>(nn, {1.0, 0.0}));
    std::vector<long long> digit(static_cast<std::size_t>(d), 0);
    auto refresh = [&](int from) {
        for (int l = from; l < d; ++l) {
            const auto& tl = tab[static_cast<std::size_t>(l)];
            const auto base = static_cast<std::size_t>(digit[static_cast<std::size_t>(l)]) * nn;
            for (std::size_t j = 0; j < nn; ++j)
                pref[static_cast<std::size_t>(l) + 1][j] =
                    pref[static_cast<std::size_t>(l)][j] * tl[base + j];
        }
    };
    refresh(0);
    for (unsigned long long idx = 0;; ++idx) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < nn; ++j) acc += w[j] * pref[static_cast<std::size_t>(d)][j];
        phi[idx] = acc;
        int l = d - 1;
        while (l >= 0 && ++digit[static_cast<std::size_t>(l)] == width) {
            digit[static_cast<std::size_t>(l)] = 0;
            --l;
        }
        if (l < 0) break;
        refresh(l);
    }

    // Pass 2: e^2 = beta0^d (1 - 2 W) + sum_box r^{-1}(h) Re[Phi(h) PhiS(h)~].
    double wsum = 0.0;
    for (double v : w) wsum += v;
    double sq = std::pow(params.beta0, d) * (1.0 - 2.0 * wsum);
    std::vector<double> wpref(static_cast<std::size_t>(d) + 1, 1.0);
    std::fill(digit.begin(), digit.end(), 0);
    auto refresh_w = [&](int from) {
        for (int l = from; l < d; ++l)
            wpref[static_cast<std::size_t>(l) + 1] =
                wpref[static_cast<std::size_t>(l)] *
                wline[static_cast<std::size_t>(digit[static_cast<std::size_t>(l)])];
    };
    refresh_w(0);
    std::vector<int> perm(static_cast<std::size_t>(m));
    for (unsigned long long idx = 0;; ++idx) {
        std::complex<double> phis{0.0, 0.0};
        std::iota(perm.begin(), perm.end(), 0);
        do {
            // Permuting h only moves block digits, so adjust idx in place.
            auto pidx = static_cast<long long>(idx);
            for (int i = 0; i < m; ++i) {
                const auto bi = static_cast<std::size_t>(block[static_cast<std::size_t>(i)]);
                const auto bp = static_cast<std::size_t>(
                    block[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
                pidx += (digit[bp] - digit[bi]) * stride[bi];
            }
            phis += phi[static_cast<unsigned long long>(pidx)];
        } while (std::next_permutation(perm.begin(), perm.end()));
        phis /= m_fact;
        sq += wpref[static_cast<std::size_t>(d)] * (phi[idx] * std::conj(phis)).real();
        int l = d - 1;
        while (l >= 0 && ++digit[static_cast<std::size_t>(l)] == width) {
            digit[static_cast<std::size_t>(l)] = 0;
            --l;
        }
        if (l < 0) break;
        refresh_w(l);
    }

    // Omitted frequencies: |Phi| <= sum|w| everywhere, so the tail is bounded
    // by (sum|w|)^2 times the tensor mass outside the box.
    double wabs = 0.0;
    for (double v : w) wabs += std::abs(v);
    const series::TailSum line = series::weight_power_line_sum(params, 1.0);
    const double full_line = line.value + line.error;
    double trunc_line = params.beta0;
    for (long long v = 1; v <= H; ++v)
        trunc_line += 2.0 * params.beta1 *
                      params.profile.r_pow_neg(static_cast<double>(v), 2.0 * params.alpha);
    trunc_line = std::min(trunc_line, full_line);
    double tail = wabs * wabs * (std::pow(full_line, d) - std::pow(trunc_line, d));
    tail += static_cast<double>(cells) * (d + 2.0) * std::numeric_limits<double>::epsilon() *
            wabs * wabs * std::pow(full_line, d);

    return sqrt_error_report(sq, tail, trunc.tail_tol, cells, "general_error_formula");
}

McEstimate m1_invariant_mc(const SpaceParams& params, const InvarianceSpec& inv,
                           std::uint64_t n_samples, std::uint64_t seed) {
    if (n_samples < 2) throw ParameterDomain("m1_invariant_mc: need at least two samples");
    const int d = inv.d;
    const CounterRng rng(seed);
    double sum = 0.0, sum_sq = 0.0, tail_acc = 0.0;
    Point x(static_cast<std::size_t>(d));
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        for (int l = 0; l < d; ++l)
            x[static_cast<std::size_t>(l)] =
                rng.unit_at(i * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(l));
        const kernels::KernelValue kv = kernels::kernel_invariant(params, inv, x, x);
        sum += std::sqrt(std::max(kv.value, 0.0));
        sum_sq += std::max(kv.value, 0.0);
        tail_acc += kv.tail_bound;
    }
    const auto nd = static_cast<double>(n_samples);
    const double mean = sum / nd;
    const double var = std::max(0.0, (sum_sq / nd - mean * mean) * nd / (nd - 1.0));
    McEstimate out;
    out.estimate = mean * mean;
    // Delta method for mean^2, plus the certified kernel truncation slack.
    out.std_error = 2.0 * mean * std::sqrt(var / nd) + 2.0 * (mean + 1.0) * (tail_acc / nd);
    return out;
}

}  // namespace permlat::oracle
