// Acceptance gate: one pass/fail line per criterion, exit 1 on any failure.
// Tolerances are pinned here on purpose; loosening them is a red flag.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "permlat/bounds.hpp"
#include "permlat/lattice.hpp"
#include "permlat/oracle.hpp"
#include "permlat/series.hpp"

using namespace permlat;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// tracks the worst signed slack of a family of "x <= limit" checks;
// positive slack = violation
struct Margin {
    double worst = -1e300;
    std::string where;

    void note(double excess, const std::string& spot) {
        if (excess > worst) {
            worst = excess;
            where = spot;
        }
    }
    bool ok() const { return worst <= 0.0; }
};

void parallel_for(long long total, const std::function<void(long long)>& fn) {
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min<unsigned>(workers, 16);
    std::atomic<long long> next{0};
    std::exception_ptr first_error;
    std::mutex err_mx;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            try {
                for (long long i = next.fetch_add(1); i < total; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mx);
                if (!first_error) first_error = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

SpaceParams make(Profile prof, double alpha, double b0 = 1.0, double b1 = 1.0) {
    return {alpha, b0, b1, DecayProfile{prof}};
}

InvarianceSpec inv_of(int d, int m) {
    if (m == 0) return InvarianceSpec::none(d);
    std::vector<int> idx;
    for (int i = 1; i <= m; ++i) idx.push_back(i);
    return {d, idx};
}

std::vector<long long> decode_z(long long idx, int d, long long n) {
    std::vector<long long> z(static_cast<std::size_t>(d));
    for (int l = d - 1; l >= 0; --l) {
        z[static_cast<std::size_t>(l)] = idx % n;
        idx /= n;
    }
    return z;
}

// ---------------------------------------------------------------------------
// 1. quoted eta* constants
// ---------------------------------------------------------------------------
Outcome criterion_constants() {
    Outcome out;
    const double sob = bounds::eta_star(make(Profile::SobolevTwoPi, 1.0), 0);
    const double growth_sob = 1.0 / std::sqrt(1.0 - sob);
    const double mix1 = bounds::eta_star(make(Profile::MixedSmoothness, 1.0), 0);
    const double mix2 = bounds::eta_star(make(Profile::MixedSmoothness, 2.0), 0);
    const double growth_mix2 = 1.0 / std::sqrt(1.0 - mix2);

    out.pass = std::abs(growth_sob - 1.044465936) <= 1e-8 &&
               std::abs(mix1 - 2.15335) <= 1e-4 && std::abs(mix2 - 0.613674) <= 1e-5 &&
               std::abs(growth_mix2 - 1.60888) <= 1e-4;
    out.detail = fmt("sobolev growth %.10f, mixed a=1 eta %.6f, mixed a=2 eta %.7f growth %.6f",
                     growth_sob, mix1, mix2, growth_mix2);
    return out;
}

// ---------------------------------------------------------------------------
// 2. smoothness threshold roots
// ---------------------------------------------------------------------------
Outcome criterion_roots() {
    Outcome out;
    const double sob = bounds::alpha_star(make(Profile::SobolevTwoPi, 1.0));
    const double mix = bounds::alpha_star(make(Profile::MixedSmoothness, 1.0));
    out.pass = std::abs(sob - 0.61769976) <= 1e-6 && std::abs(mix - 1.521196) <= 1e-5;
    out.detail = fmt("sobolev2pi %.9f, mixed %.7f", sob, mix);
    return out;
}

// ---------------------------------------------------------------------------
// 3. oracle equivalence over the exhaustive grid
// ---------------------------------------------------------------------------
Outcome criterion_oracles() {
    Outcome out;
    Margin engine_margin, general_margin, tail_margin;
    std::mutex mx;
    const long long primes[] = {2, 3, 5, 7};

    for (Profile prof : {Profile::Korobov, Profile::SobolevTwoPi}) {
        SpaceParams p = make(prof, 1.0);
        for (int d : {1, 2, 3}) {
            // box radius for the direct Fourier-side oracle: the d = 1 leg is
            // the precision leg; higher d trades box size for honest tails
            const long long H = d == 1 ? 100000 : d == 2 ? 300 : 32;
            for (int m : {0, 2, 3}) {
                if (m > d) continue;
                InvarianceSpec inv = inv_of(d, m);
                for (long long n : primes) {
                    lattice::LatticeErrors eng(p, inv, n, Truncation{});
                    long long total = 1;
                    for (int l = 0; l < d; ++l) total *= n;

                    parallel_for(total, [&](long long idx) {
                        auto z = decode_z(idx, d, n);
                        lattice::Lattice lat(n, z);
                        std::vector<Point> nodes;
                        for (long long j = 0; j < n; ++j) nodes.push_back(lat.point(j));

                        ErrorReport ew = eng.wce_unshifted(z);
                        ErrorReport qf =
                            oracle::wce_quadratic_form(p, inv, nodes, {}, Truncation{});
                        ErrorReport gen = oracle::general_error_formula(
                            p, inv, nodes, {}, Truncation{H, 1e300});

                        const std::string spot =
                            fmt("%s d=%d m=%d n=%lld idx=%lld", to_string(prof).c_str(), d,
                                m, n, idx);
                        std::lock_guard<std::mutex> lk(mx);
                        engine_margin.note(std::abs(ew.value - qf.value) -
                                               (1e-6 + ew.tail_bound + qf.tail_bound),
                                           spot);
                        tail_margin.note(ew.tail_bound + qf.tail_bound - 1e-8, spot);
                        general_margin.note(std::abs(gen.value - qf.value) -
                                                (1e-6 + gen.tail_bound + qf.tail_bound),
                                            spot);
                    });
                }
            }
        }
    }

    out.pass = engine_margin.ok() && general_margin.ok() && tail_margin.ok();
    out.detail = fmt("engine slack %.3g (%s), general slack %.3g (%s), tail slack %.3g",
                     engine_margin.worst, engine_margin.where.c_str(), general_margin.worst,
                     general_margin.where.c_str(), tail_margin.worst);
    return out;
}

// ---------------------------------------------------------------------------
// 4. bound chain on the same grid
// ---------------------------------------------------------------------------
Outcome criterion_bound_chain() {
    Outcome out;
    Margin margin;
    const long long primes[] = {2, 3, 5, 7};

    for (Profile prof : {Profile::Korobov, Profile::SobolevTwoPi}) {
        SpaceParams p = make(prof, 1.0);
        for (int d : {1, 2, 3}) {
            for (int m : {0, 2, 3}) {
                if (m > d) continue;
                InvarianceSpec inv = inv_of(d, m);
                for (long long n : primes) {
                    lattice::LatticeErrors eng(p, inv, n, Truncation{});
                    long long total = 1;
                    for (int l = 0; l < d; ++l) total *= n;

                    double min_wce = 1e300, min_rms = 1e300, tails = 0.0;
                    for (long long idx = 0; idx < total; ++idx) {
                        auto z = decode_z(idx, d, n);
                        ErrorReport w = eng.wce_unshifted(z);
                        ErrorReport r = eng.rms_shifted(z);
                        const std::string spot = fmt("%s d=%d m=%d n=%lld idx=%lld",
                                                     to_string(prof).c_str(), d, m, n, idx);
                        margin.note(r.value - w.value - (w.tail_bound + r.tail_bound + 1e-12),
                                    "rms<=wce " + spot);
                        min_wce = std::min(min_wce, w.value);
                        min_rms = std::min(min_rms, r.value);
                        tails = std::max(tails, w.tail_bound + r.tail_bound);
                    }

                    const std::string spot =
                        fmt("%s d=%d m=%d n=%lld", to_string(prof).c_str(), d, m, n);
                    auto lb = bounds::unshifted_lower_bound(p, inv, n);
                    margin.note(lb.exact - min_wce - (tails + 1e-10), "thm-lower " + spot);
                    auto rl = bounds::rmse_lower_bound(p, inv, n);
                    margin.note(rl.full - min_rms - (tails + 1e-10), "rms-lower " + spot);

                    for (double lambda : {1.0, 1.5}) {
                        auto av = lattice::average_over_z(p, inv, n, lambda, Truncation{});
                        margin.note(av.empirical_average - av.bound * (1 + 1e-9),
                                    fmt("average l=%.1f ", lambda) + spot);
                    }
                }
            }
        }
    }

    out.pass = margin.ok();
    out.detail = fmt("worst slack %.3g (%s)", margin.worst, margin.where.c_str());
    return out;
}

// ---------------------------------------------------------------------------
// 5. character identity, exact integer arithmetic
// ---------------------------------------------------------------------------
Outcome criterion_character() {
    Outcome out;
    long long checked = 0;
    for (int d : {1, 2}) {
        for (long long n : {3LL, 5LL, 7LL}) {
            Frequency h(static_cast<std::size_t>(d), -3);
            while (true) {
                bool all_zero_mod = true;
                for (long long c : h) all_zero_mod = all_zero_mod && mod_pos(c, n) == 0;
                long long expect = 1;
                for (int l = 0; l < (all_zero_mod ? d : d - 1); ++l) expect *= n;

                if (lattice::dual_indicator_count(n, h) !=
                    static_cast<unsigned long long>(expect)) {
                    out.pass = false;
                    out.detail = fmt("count mismatch at n=%lld d=%d", n, d);
                    return out;
                }
                ++checked;

                int l = d - 1;
                while (l >= 0 && ++h[static_cast<std::size_t>(l)] > 3) {
                    h[static_cast<std::size_t>(l)] = -3;
                    --l;
                }
                if (l < 0) break;
            }
        }
    }
    out.detail = fmt("%lld frequency vectors, all exact", checked);
    return out;
}

// ---------------------------------------------------------------------------
// 6. sorted-sum estimate on random admissible sequences
// ---------------------------------------------------------------------------
Outcome criterion_sorted_sum() {
    Outcome out;
    Margin margin;
    double worst_eq = 0.0;
    oracle::CounterRng rng(606);
    std::uint64_t ctr = 0;

    for (int trial = 0; trial < 100; ++trial) {
        const int len = 1 + static_cast<int>(rng.at(ctr++) % 8);
        std::vector<double> seq(static_cast<std::size_t>(len));
        double cur = 0.5 + rng.unit_at(ctr++);  // lambda_0 in [0.5, 1.5)
        for (double& v : seq) {
            v = cur;
            cur *= rng.unit_at(ctr++);  // nonincreasing, nonnegative
        }
        const int d = 1 + static_cast<int>(rng.at(ctr++) % 6);
        const int v = static_cast<int>(rng.at(ctr++) % 4);

        auto sides = bounds::lemma_bound_sides(seq, d, v);
        margin.note(sides.lhs - sides.rhs * (1 + 1e-12),
                    fmt("trial %d d=%d v=%d", trial, d, v));

        auto at0 = bounds::lemma_bound_sides(seq, d, 0);
        worst_eq = std::max(worst_eq, std::abs(at0.lhs - at0.rhs) / at0.rhs);
    }

    out.pass = margin.ok() && worst_eq <= 1e-10;
    out.detail = fmt("worst slack %.3g (%s), worst v=0 relative gap %.3g", margin.worst,
                     margin.where.c_str(), worst_eq);
    return out;
}

// ---------------------------------------------------------------------------
// 7. constant sandwich and scaling identity
// ---------------------------------------------------------------------------
Outcome criterion_sandwich() {
    Outcome out;
    Margin margin;
    SpaceParams p = make(Profile::Korobov, 2.0);

    for (int d : {1, 2, 3}) {
        for (auto inv : {InvarianceSpec::none(d), InvarianceSpec::full(d)}) {
            for (double lambda : {1.0, 1.2, 1.5}) {
                std::optional<bounds::CdLambdaAux> aux;
                if (lambda == 1.2) aux = bounds::CdLambdaAux{0.8, 1.0};
                if (lambda == 1.5) aux = bounds::CdLambdaAux{1.0, 1.0};

                const double exact = bounds::c_d_lambda_exact(p, inv, lambda);
                auto b = bounds::c_d_lambda_bounds(p, inv, lambda, aux);
                const std::string spot = fmt("d=%d m=%d lambda=%.1f", d, inv.size(), lambda);
                margin.note(b.lower - exact * (1 + 1e-10), "lower " + spot);
                if (!b.upper) {
                    margin.note(1.0, "missing upper " + spot);
                } else {
                    margin.note(exact - *b.upper * (1 + 1e-10), "upper " + spot);
                }
            }
        }
    }

    // scaling: C(beta0, beta1) = beta0^d C(1, beta1/beta0)
    double worst_scale = 0.0;
    for (int d : {1, 2, 3}) {
        for (double lambda : {1.0, 1.2, 1.5}) {
            SpaceParams scaled = make(Profile::Korobov, 2.0, 1.7, 0.9);
            SpaceParams reduced = make(Profile::Korobov, 2.0, 1.0, 0.9 / 1.7);
            const double lhs = bounds::c_d_lambda_exact(scaled, InvarianceSpec::full(d), lambda);
            const double rhs = std::pow(1.7, d) *
                               bounds::c_d_lambda_exact(reduced, InvarianceSpec::full(d), lambda);
            worst_scale = std::max(worst_scale, std::abs(lhs - rhs) / rhs);
        }
    }

    out.pass = margin.ok() && worst_scale <= 1e-10;
    out.detail = fmt("worst sandwich slack %.3g (%s), worst scaling gap %.3g", margin.worst,
                     margin.where.c_str(), worst_scale);
    return out;
}

// ---------------------------------------------------------------------------
// 8. empirical convergence rate of the exhaustive-best rms error
// ---------------------------------------------------------------------------
Outcome criterion_convergence() {
    Outcome out;
    SpaceParams p = make(Profile::SobolevTwoPi, 1.0);
    auto study = lattice::convergence_study(p, InvarianceSpec::full(2), 200,
                                            lattice::Objective::RmsShifted, Truncation{});
    out.pass = study.slope >= -1.35 && study.slope <= -0.85;
    out.detail = fmt("fitted slope %.4f over %zu primes (window [-1.35, -0.85])", study.slope,
                     study.rows.size());
    return out;
}

// ---------------------------------------------------------------------------
// 9. degenerate identities
// ---------------------------------------------------------------------------
Outcome criterion_degenerate() {
    Outcome out;
    Margin margin;

    for (Profile prof : {Profile::Korobov, Profile::SobolevTwoPi, Profile::MixedSmoothness}) {
        SpaceParams p = make(prof, 1.0, 1.2, 0.8);
        for (int d : {1, 2, 3}) {
            for (auto inv : {InvarianceSpec::none(d), InvarianceSpec::full(d)}) {
                auto rep = lattice::wce_unshifted(p, inv,
                                                  lattice::Lattice(1, std::vector<long long>(
                                                                          static_cast<std::size_t>(d), 0)),
                                                  Truncation{});
                const double expect = std::sqrt(bounds::m2_full(p, d) - std::pow(1.2, d));
                margin.note(std::abs(rep.value - expect) - (1e-10 + rep.tail_bound),
                            fmt("n=1 %s d=%d m=%d", to_string(prof).c_str(), d, inv.size()));
            }
        }
    }

    // the zero algorithm: exactly the initial error
    bool zero_exact = true;
    for (int d : {1, 2, 3}) {
        SpaceParams unit = make(Profile::Korobov, 1.0);
        auto z1 = oracle::wce_quadratic_form(unit, InvarianceSpec::full(d),
                                             {Point(static_cast<std::size_t>(d), 0.25)},
                                             {0.0}, Truncation{});
        zero_exact = zero_exact && z1.value == 1.0;

        SpaceParams wide = make(Profile::Korobov, 1.0, 1.3, 0.8);
        auto z2 = oracle::wce_quadratic_form(wide, InvarianceSpec::full(d),
                                             {Point(static_cast<std::size_t>(d), 0.25)},
                                             {0.0}, Truncation{});
        zero_exact = zero_exact && z2.value == std::sqrt(std::pow(1.3, d));
    }

    out.pass = margin.ok() && zero_exact;
    out.detail = fmt("worst n=1 slack %.3g (%s), zero-weight exact: %s", margin.worst,
                     margin.where.c_str(), zero_exact ? "yes" : "no");
    return out;
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        Outcome (*run)();
    };
    const Entry entries[] = {
        {"constant-reproduction", criterion_constants},
        {"threshold-roots", criterion_roots},
        {"oracle-equivalence", criterion_oracles},
        {"bound-chain", criterion_bound_chain},
        {"character-identity", criterion_character},
        {"sorted-sum-inequality", criterion_sorted_sum},
        {"constant-sandwich", criterion_sandwich},
        {"convergence-rate", criterion_convergence},
        {"degenerate-identities", criterion_degenerate},
    };

    bool all = true;
    int index = 0;
    for (const Entry& e : entries) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = e.run();
        } catch (const std::exception& ex) {
            r.pass = false;
            r.detail = std::string("exception: ") + ex.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %d %s (%.2f s) %s\n", r.pass ? "PASS" : "FAIL", index, e.name, secs,
                    r.detail.c_str());
        std::fflush(stdout);
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
