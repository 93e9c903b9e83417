#include "permlat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "permlat/bounds.hpp"
#include "permlat/lattice.hpp"
#include "permlat/oracle.hpp"
#include "permlat/types.hpp"

namespace permlat::verify {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b);
    return buf;
}

struct Margin {
    double worst = -1e300;  // largest (lhs - allowed); pass while <= 0
    std::string where;

    void feed(double excess, const std::string& at) {
        if (excess > worst) {
            worst = excess;
            where = at;
        }
    }
    CheckResult result(const std::string& name) const {
        CheckResult out{name, worst <= 0.0, ""};
        out.detail = fmt("worst excess %.3g", worst) + (where.empty() ? "" : " at " + where);
        return out;
    }
};

std::vector<SpaceParams> alpha_one_spaces() {
    return {SpaceParams(1.0, 1.0, 1.0, DecayProfile::korobov()),
            SpaceParams(1.0, 1.0, 1.0, DecayProfile::sobolev_two_pi())};
}

std::vector<InvarianceSpec> small_grid() {
    return {InvarianceSpec::none(1), InvarianceSpec::none(2), InvarianceSpec::full(2),
            InvarianceSpec::full(3)};
}

std::string at_string(const SpaceParams& p, const InvarianceSpec& inv, long long n,
                      const std::vector<long long>& z) {
    std::string s = to_string(p.profile.kind) + " d=" + std::to_string(inv.d) +
                    " m=" + std::to_string(inv.size()) + " n=" + std::to_string(n) + " z=(";
    for (std::size_t l = 0; l < z.size(); ++l) s += (l ? "," : "") + std::to_string(z[l]);
    return s + ")";
}

std::vector<Point> lattice_nodes(const lattice::Lattice& lat) {
    std::vector<Point> nodes;
    nodes.reserve(static_cast<std::size_t>(lat.n));
    for (long long j = 0; j < lat.n; ++j) nodes.push_back(lat.point(j));
    return nodes;
}

void for_all_z(long long n, int d, const std::function<void(const std::vector<long long>&)>& fn) {
    std::vector<long long> z(static_cast<std::size_t>(d), 0);
    while (true) {
        fn(z);
        int l = d - 1;
        while (l >= 0 && ++z[static_cast<std::size_t>(l)] == n) z[static_cast<std::size_t>(l--)] = 0;
        if (l < 0) break;
    }
}

CheckResult check_oracle_equivalence() {
    Margin m;
    const Truncation tr;
    for (const SpaceParams& p : alpha_one_spaces()) {
        for (const InvarianceSpec& inv : small_grid()) {
            for (long long n : {2LL, 3LL, 5LL}) {
                const lattice::LatticeErrors eng(p, inv, n, tr);
                for_all_z(n, inv.d, [&](const std::vector<long long>& z) {
                    const ErrorReport lhs = eng.wce_unshifted(z);
                    const ErrorReport rhs = oracle::wce_quadratic_form(
                        p, inv, lattice_nodes(lattice::Lattice(n, z)), {}, tr);
                    const double tol = 1e-6 + lhs.tail_bound + rhs.tail_bound;
                    m.feed(std::abs(lhs.value - rhs.value) - tol, at_string(p, inv, n, z));
                });
            }
        }
    }
    return m.result("oracle-equivalence");
}

CheckResult check_general_formula() {
    Margin m;
    const Truncation tr;
    // Box radii per dimension keep the run at seconds; tolerances stay honest
    // because the certified box tail enters the allowance.
    const std::vector<std::pair<InvarianceSpec, long long>> grid = {
        {InvarianceSpec::none(1), 20000},
        {InvarianceSpec::full(2), 150},
        {InvarianceSpec::full(3), 16},
    };
    for (const SpaceParams& p : alpha_one_spaces()) {
        for (const auto& [inv, radius] : grid) {
            Truncation box;
            box.box_radius = radius;
            for (long long n : {3LL, 5LL}) {
                for_all_z(n, inv.d, [&](const std::vector<long long>& z) {
                    const auto nodes = lattice_nodes(lattice::Lattice(n, z));
                    const ErrorReport lhs = oracle::general_error_formula(p, inv, nodes, {}, box);
                    const ErrorReport rhs = oracle::wce_quadratic_form(p, inv, nodes, {}, tr);
                    const double tol = 1e-6 + lhs.tail_bound + rhs.tail_bound;
                    m.feed(std::abs(lhs.value - rhs.value) - tol, at_string(p, inv, n, z));
                });
            }
        }
    }
    return m.result("general-formula-equivalence");
}

CheckResult check_bound_chain() {
    Margin m;
    const Truncation tr;
    for (const SpaceParams& p : alpha_one_spaces()) {
        for (const InvarianceSpec& inv : small_grid()) {
            for (long long n : {2LL, 3LL, 5LL}) {
                const lattice::LatticeErrors eng(p, inv, n, tr);
                double min_wce = 1e300, min_rms = 1e300;
                for_all_z(n, inv.d, [&](const std::vector<long long>& z) {
                    const ErrorReport wce = eng.wce_unshifted(z);
                    const ErrorReport rms = eng.rms_shifted(z);
                    min_wce = std::min(min_wce, wce.value + wce.tail_bound);
                    min_rms = std::min(min_rms, rms.value + rms.tail_bound);
                    m.feed(rms.value - (wce.value + wce.tail_bound + rms.tail_bound + 1e-12),
                           "rms<=wce " + at_string(p, inv, n, z));
                });
                const bounds::UnshiftedLowerBound ulb = bounds::unshifted_lower_bound(p, inv, n);
                m.feed(ulb.weak - ulb.exact - 1e-12, "weak<=exact " + at_string(p, inv, n, {}));
                m.feed(ulb.exact - min_wce - 1e-12, "thm4.3 " + at_string(p, inv, n, {}));
                const bounds::RmseLowerBound rlb = bounds::rmse_lower_bound(p, inv, n);
                m.feed(rlb.full - min_rms - 1e-12, "thm4.6 " + at_string(p, inv, n, {}));
            }
        }
    }
    return m.result("bound-chain");
}

CheckResult check_average_bound() {
    Margin m;
    const Truncation tr;
    const SpaceParams p(1.0, 1.0, 1.0, DecayProfile::korobov());
    const InvarianceSpec inv = InvarianceSpec::full(2);
    for (long long n : {3LL, 5LL}) {
        for (double lam : {1.0, 1.5}) {
            const lattice::AverageCheck av = lattice::average_over_z(p, inv, n, lam, tr);
            m.feed(av.empirical_average - av.bound * (1.0 + 1e-9),
                   fmt("n=%.0f lambda=%.2f", static_cast<double>(n), lam));
        }
    }
    return m.result("average-bound");
}

CheckResult check_character_identity() {
    for (long long n : {3LL, 5LL, 7LL}) {
        for (int d : {1, 2}) {
            std::vector<long long> h(static_cast<std::size_t>(d), -2);
            while (true) {
                bool zero_mod = true;
                for (long long hv : h) zero_mod = zero_mod && mod_pos(hv, n) == 0;
                unsigned long long want = 1;
                for (int l = 0; l < d - 1; ++l) want *= static_cast<unsigned long long>(n);
                if (zero_mod) want *= static_cast<unsigned long long>(n);
                if (lattice::dual_indicator_count(n, h) != want)
                    return {"character-identity", false,
                            fmt("count mismatch at n=%.0f d=%.0f", static_cast<double>(n),
                                static_cast<double>(d))};
                int l = d - 1;
                while (l >= 0 && ++h[static_cast<std::size_t>(l)] == 3) h[static_cast<std::size_t>(l--)] = -2;
                if (l < 0) break;
            }
        }
    }
    return {"character-identity", true, "exact on all boxes"};
}

CheckResult check_product_bound_sides() {
    Margin m;
    const oracle::CounterRng rng(2024);
    std::uint64_t ctr = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int len = 4 + static_cast<int>(rng.at(ctr++) % 7ULL);
        std::vector<double> seq(static_cast<std::size_t>(len));
        for (double& v : seq) v = 2.0 * rng.unit_at(ctr++);
        std::sort(seq.rbegin(), seq.rend());
        const int d = 1 + static_cast<int>(rng.at(ctr++) % 6ULL);
        for (int v = 0; v <= 3; ++v) {
            const bounds::LemmaBoundSides sides = bounds::lemma_bound_sides(seq, d, v);
            m.feed(sides.lhs - sides.rhs * (1.0 + 1e-12),
                   fmt("trial d=%.0f v=%.0f", static_cast<double>(d), static_cast<double>(v)));
            if (v == 0)
                m.feed(std::abs(sides.lhs - sides.rhs) - 1e-10 * std::abs(sides.rhs),
                       fmt("equality trial d=%.0f", static_cast<double>(d)));
        }
    }
    return m.result("product-bound-sides");
}

CheckResult check_cdlambda_sandwich() {
    Margin m;
    const SpaceParams p(2.0, 1.3, 0.6, DecayProfile::korobov());
    for (int d : {1, 2}) {
        for (const InvarianceSpec& inv : {InvarianceSpec::none(d), InvarianceSpec::full(d)}) {
            for (double lam : {1.0, 1.2, 1.5}) {
                const double exact = bounds::c_d_lambda_exact(p, inv, lam);
                std::optional<bounds::CdLambdaAux> aux;
                if (lam > 1.0) aux = bounds::CdLambdaAux{lam == 1.2 ? 0.8 : 1.0, 1.0};
                const bounds::CdLambdaBounds b = bounds::c_d_lambda_bounds(p, inv, lam, aux);
                const std::string at =
                    fmt("d=%.0f lambda=%.2f", static_cast<double>(d), lam) +
                    " m=" + std::to_string(inv.size());
                m.feed(b.lower - exact * (1.0 + 1e-12), "lower " + at);
                if (b.upper) m.feed(exact - *b.upper * (1.0 + 1e-12), "upper " + at);
                // Scaling: C(beta0, beta1) = beta0^d C(1, beta1/beta0).
                const SpaceParams unit(p.alpha, 1.0, p.beta1 / p.beta0, p.profile);
                const double scaled =
                    std::pow(p.beta0, d) * bounds::c_d_lambda_exact(unit, inv, lam);
                m.feed(std::abs(exact - scaled) - 1e-10 * exact, "scaling " + at);
            }
        }
    }
    return m.result("cdlambda-sandwich");
}

CheckResult check_degenerate_identities() {
    Margin m;
    const Truncation tr;
    for (const SpaceParams& p : alpha_one_spaces()) {
        for (int d : {1, 2, 3}) {
            const InvarianceSpec inv = InvarianceSpec::full(d);
            const lattice::Lattice one(1, std::vector<long long>(static_cast<std::size_t>(d), 0));
            const ErrorReport rep = lattice::wce_unshifted(p, inv, one, tr);
            const double want = std::sqrt(bounds::m2_full(p, d) - std::pow(p.beta0, d));
            m.feed(std::abs(rep.value - want) - (1e-10 + rep.tail_bound),
                   "n=1 d=" + std::to_string(d));
            // Zero-weight rule: the initial error, exactly.
            const ErrorReport zero = oracle::wce_quadratic_form(
                p, inv, {Point(static_cast<std::size_t>(d), 0.25)}, {0.0}, tr);
            m.feed(std::abs(zero.value - std::pow(p.beta0, 0.5 * d)), "zero-weight d=" + std::to_string(d));
        }
    }
    // d=1 Korobov alpha=1 anchors: dual 3Z and the single-node rule.
    const SpaceParams kor(1.0, 1.0, 1.0, DecayProfile::korobov());
    const double zeta2 = 1.6449340668482264;
    const ErrorReport n3 =
        lattice::wce_unshifted(kor, InvarianceSpec::none(1), lattice::Lattice(3, {1}), tr);
    m.feed(std::abs(n3.value - std::sqrt(2.0 * zeta2 / 9.0)) - (1e-12 + n3.tail_bound), "dual-3Z");
    const ErrorReport single =
        oracle::wce_quadratic_form(kor, InvarianceSpec::none(1), {Point{0.37}}, {1.0}, tr);
    m.feed(std::abs(single.value - std::sqrt(2.0 * zeta2)) - (1e-9 + single.tail_bound),
           "single-node");
    return m.result("degenerate-identities");
}

CheckResult check_shift_consistency() {
    Margin m;
    const Truncation tr;
    const SpaceParams p(1.0, 1.0, 1.0, DecayProfile::korobov());
    const InvarianceSpec inv = InvarianceSpec::full(2);
    const lattice::Lattice lat(5, {1, 2});
    const ErrorReport un = lattice::wce_unshifted(p, inv, lat, tr);
    const ErrorReport sh0 = lattice::wce_shifted(p, inv, lat, lattice::Shift(Point{0.0, 0.0}), tr);
    m.feed(std::abs(un.value - sh0.value) - (1e-9 + un.tail_bound + sh0.tail_bound), "delta=0");

    // Midpoint 64^2 shift grid: the mean square recovers rms^2 and the best
    // shift does at least as well as the average.
    const ErrorReport rms = lattice::rms_shifted(p, inv, lat, tr);
    const int grid = 64;
    double mean_sq = 0.0, best = 1e300;
    for (int a = 0; a < grid; ++a) {
        for (int b = 0; b < grid; ++b) {
            const lattice::Shift delta(
                Point{(a + 0.5) / static_cast<double>(grid), (b + 0.5) / static_cast<double>(grid)});
            const double e = lattice::wce_shifted(p, inv, lat, delta, tr).value;
            mean_sq += e * e;
            best = std::min(best, e);
        }
    }
    mean_sq /= static_cast<double>(grid) * static_cast<double>(grid);
    m.feed(std::abs(mean_sq - rms.value * rms.value) - 1e-3, "grid-average");
    m.feed(best - rms.value - 1e-9, "best-shift<=rms");
    return m.result("shift-consistency");
}

}  // namespace

std::vector<CheckResult> run_verification(unsigned threads) {
    (void)threads;  // checks are already seconds-scale; kept for CLI symmetry
    std::vector<CheckResult> out;
    out.push_back(check_oracle_equivalence());
    out.push_back(check_general_formula());
    out.push_back(check_bound_chain());
    out.push_back(check_average_bound());
    out.push_back(check_character_identity());
    out.push_back(check_product_bound_sides());
    out.push_back(check_cdlambda_sandwich());
    out.push_back(check_degenerate_identities());
    out.push_back(check_shift_consistency());
    return out;
}

}  // namespace permlat::verify
