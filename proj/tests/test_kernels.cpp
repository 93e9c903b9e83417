#include <doctest.h>

#include <cmath>
#include <vector>

#include "permlat/kernels.hpp"
#include "permlat/oracle.hpp"
#include "permlat/series.hpp"

using namespace permlat;

namespace {

const double kZeta2 = M_PI * M_PI / 6.0;

SpaceParams unit(Profile prof, double alpha = 1.0) {
    return {alpha, 1.0, 1.0, DecayProfile{prof}};
}

// truncated cosine series, the definition with no closed-form shortcuts
double brute_k1(const SpaceParams& p, double u, long long terms) {
    double acc = p.beta0;
    for (long long m = 1; m <= terms; ++m)
        acc += 2.0 * p.beta1 * p.profile.r_pow_neg(static_cast<double>(m), 2.0 * p.alpha) *
               std::cos(2.0 * M_PI * static_cast<double>(m) * u);
    return acc;
}

// min eigenvalue of a small symmetric matrix by cyclic Jacobi rotations
double min_eigenvalue(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-26) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-18) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    double mn = a[0][0];
    for (std::size_t i = 1; i < n; ++i) mn = std::min(mn, a[i][i]);
    return mn;
}

}  // namespace

TEST_CASE("univariate kernel: closed forms agree with the series") {
    for (Profile prof : {Profile::Korobov, Profile::SobolevTwoPi}) {
        for (double alpha : {1.0, 2.0}) {
            SpaceParams p{alpha, 1.2, 0.7, DecayProfile{prof}};
            kernels::Kernel1 k(p);
            CHECK(k.exact());
            CHECK(k.tail() == 0.0);
            // The brute sum is the approximate side here; allow its tail.
            const long long terms = 400000;
            const double slack =
                2.0 * p.beta1 * series::r_pow_tail_upper(p.profile, 2.0 * alpha, terms) + 1e-10;
            for (double u : {0.0, 0.1, 0.37, 0.5, 0.93})
                CHECK(std::abs(k.value(u) - brute_k1(p, u, terms)) <= slack);
        }
    }
}

TEST_CASE("univariate kernel: series path carries a certified tail") {
    SpaceParams p = unit(Profile::MixedSmoothness, 1.0);
    kernels::Kernel1 k(p, 1 << 12);
    CHECK_FALSE(k.exact());
    CHECK(k.tail() > 0.0);
    for (double u : {0.0, 0.25, 0.6})
        CHECK(std::abs(k.value(u) - brute_k1(p, u, 3000000)) <= k.tail() + 1e-9);
}

TEST_CASE("kernel_full anchors") {
    SpaceParams p = unit(Profile::Korobov);
    auto diag = kernels::kernel_full(p, {0.3}, {0.3});
    CHECK(diag.value == doctest::Approx(1.0 + 2.0 * kZeta2).epsilon(1e-12));

    // tensor structure: d=2 diagonal is the square of the d=1 diagonal
    auto diag2 = kernels::kernel_full(p, {0.3, 0.7}, {0.3, 0.7});
    CHECK(diag2.value == doctest::Approx(diag.value * diag.value).epsilon(1e-12));

    SpaceParams flat{1.0, 1.5, 0.0, DecayProfile::korobov()};
    auto c = kernels::kernel_full(flat, {0.1, 0.9, 0.4}, {0.8, 0.2, 0.6});
    CHECK(c.value == doctest::Approx(std::pow(1.5, 3)).epsilon(1e-14));

    // symmetry K(x,y) = K(y,x)
    auto xy = kernels::kernel_full(p, {0.15, 0.62}, {0.4, 0.05});
    auto yx = kernels::kernel_full(p, {0.4, 0.05}, {0.15, 0.62});
    CHECK(xy.value == doctest::Approx(yx.value).epsilon(1e-14));
}

TEST_CASE("kernel_invariant reduces and symmetrizes") {
    SpaceParams p = unit(Profile::Korobov);

    auto plain = kernels::kernel_full(p, {0.2, 0.8}, {0.5, 0.1});
    auto none = kernels::kernel_invariant(p, InvarianceSpec::none(2), {0.2, 0.8}, {0.5, 0.1});
    auto single = kernels::kernel_invariant(p, InvarianceSpec(2, {2}), {0.2, 0.8}, {0.5, 0.1});
    CHECK(none.value == doctest::Approx(plain.value).epsilon(1e-14));
    CHECK(single.value == doctest::Approx(plain.value).epsilon(1e-14));

    auto inv = InvarianceSpec::full(2);
    auto ab = kernels::kernel_invariant(p, inv, {0.1, 0.4}, {0.2, 0.9});
    auto ba = kernels::kernel_invariant(p, inv, {0.4, 0.1}, {0.2, 0.9});
    CHECK(ab.value == doctest::Approx(ba.value).epsilon(1e-14));

    // two-term average against kernel_full directly
    auto k1 = kernels::kernel_full(p, {0.1, 0.4}, {0.2, 0.9});
    auto k2 = kernels::kernel_full(p, {0.4, 0.1}, {0.2, 0.9});
    CHECK(ab.value == doctest::Approx(0.5 * (k1.value + k2.value)).epsilon(1e-13));
}

TEST_CASE("kernel_invariant tensor factorization over the split") {
    // invariant block {1,2} with two free coordinates: product of the
    // 2-variate fully invariant kernel and the 2-variate full kernel
    SpaceParams p{1.5, 1.1, 0.6, DecayProfile::korobov()};
    Point x = {0.15, 0.85, 0.3, 0.7}, y = {0.5, 0.25, 0.9, 0.05};
    auto whole = kernels::kernel_invariant(p, InvarianceSpec(4, {1, 2}), x, y);
    auto block = kernels::kernel_invariant(p, InvarianceSpec::full(2), {x[0], x[1]},
                                           {y[0], y[1]});
    auto free_part = kernels::kernel_full(p, {x[2], x[3]}, {y[2], y[3]});
    CHECK(std::abs(whole.value - block.value * free_part.value) <=
          2.0 * (whole.tail_bound + block.tail_bound + free_part.tail_bound) + 1e-10);
}

TEST_CASE("kernel_shift_invariant: reductions and shift independence") {
    SpaceParams p = unit(Profile::Korobov);
    Truncation tr{64, 1e300};

    auto none = kernels::kernel_shift_invariant(p, InvarianceSpec::none(2), {0.2, 0.8},
                                                {0.5, 0.1}, tr);
    auto full2 = kernels::kernel_full(p, {0.2, 0.8}, {0.5, 0.1});
    CHECK(std::abs(none.value - full2.value) <= none.tail_bound + 1e-10);

    auto inv = InvarianceSpec::full(2);
    auto base = kernels::kernel_shift_invariant(p, inv, {0.12, 0.5}, {0.4, 0.93}, tr);
    auto moved = kernels::kernel_shift_invariant(p, inv, {0.12 + 0.3, 0.5 + 0.77},
                                                 {0.4 + 0.3, 0.93 + 0.77}, tr);
    CHECK(base.value == doctest::Approx(moved.value).epsilon(1e-10));
}

TEST_CASE("kernel_shift_invariant matches the shift-grid quadrature") {
    // 64^2 midpoint grid average of kernel_invariant(x+delta, y+delta)
    SpaceParams p = unit(Profile::Korobov);
    auto inv = InvarianceSpec::full(2);
    Point x = {0.25, 0.5}, y = {0.0, 0.0};
    auto closed = kernels::kernel_shift_invariant(p, inv, x, y, Truncation{30, 1e300});

    const int g = 64;
    double acc = 0.0;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            const double di = (i + 0.5) / g, dj = (j + 0.5) / g;
            acc += kernels::kernel_invariant(p, inv, {frac(x[0] + di), frac(x[1] + dj)},
                                             {frac(y[0] + di), frac(y[1] + dj)})
                       .value;
        }
    acc /= g * g;
    CHECK(std::abs(closed.value - acc) < 1e-3);
}

TEST_CASE("kernels are positive semidefinite on random point sets") {
    SpaceParams p{1.0, 1.0, 1.0, DecayProfile::sobolev_two_pi()};
    auto inv = InvarianceSpec::full(3);
    oracle::CounterRng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 3 + rng.next() % 6;  // up to 8 points
        std::vector<Point> pts(n, Point(3));
        for (auto& pt : pts)
            for (double& c : pt) c = rng.next_unit();
        std::vector<std::vector<double>> gram(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                double v = kernels::kernel_invariant(p, inv, pts[i], pts[j]).value;
                gram[i][j] = gram[j][i] = v;
            }
        CHECK(min_eigenvalue(gram) >= -1e-8);
    }
}

TEST_CASE("bernoulli polynomials at rational points") {
    CHECK(kernels::bernoulli_poly(2, 0.0) == doctest::Approx(1.0 / 6.0));
    CHECK(kernels::bernoulli_poly(2, 0.5) == doctest::Approx(-1.0 / 12.0));
    CHECK(kernels::bernoulli_poly(4, 0.0) == doctest::Approx(-1.0 / 30.0));
    CHECK(kernels::bernoulli_poly(6, 0.0) == doctest::Approx(1.0 / 42.0));
    CHECK(kernels::bernoulli_poly(8, 0.0) == doctest::Approx(-1.0 / 30.0));
}
