#include "permlat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>

#include "permlat/bounds.hpp"
#include "permlat/oracle.hpp"
#include "permlat/partitions.hpp"
#include "permlat/series.hpp"

namespace permlat::lattice {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;

unsigned resolve_threads(unsigned requested, unsigned long long total) {
    unsigned t = requested ? requested : std::thread::hardware_concurrency();
    if (t == 0) t = 1;
    if (total < t) t = static_cast<unsigned>(total ? total : 1);
    return t;
}

/// fn(begin, end, tid) over an even split of [0, total); rethrows the first
/// worker exception after joining.
void run_chunks(unsigned long long total, unsigned threads,
                const std::function<void(unsigned long long, unsigned long long, unsigned)>& fn) {
    if (threads <= 1) {
        fn(0, total, 0);
        return;
    }
    const unsigned long long chunk = (total + threads - 1) / threads;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(threads);
    for (unsigned i = 0; i < threads; ++i) {
        const unsigned long long b = static_cast<unsigned long long>(i) * chunk;
        const unsigned long long e = std::min(total, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, &errs, b, e, i] {
            try {
                fn(b, e, i);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errs)
        if (err) std::rethrow_exception(err);
}

unsigned long long candidate_count(long long n, int d) {
    long double t = 1.0L;
    for (int l = 0; l < d; ++l) {
        t *= static_cast<long double>(n);
        if (t > 1e7L) throw SearchSpaceTooLarge("lattice: n^d exceeds the 10^7 candidate guard");
    }
    return static_cast<unsigned long long>(t + 0.5L);
}

/// Base-n digits of idx, z[0] most significant, so candidate index order is
/// the lexicographic order of z.
void decode_candidate(unsigned long long idx, long long n, std::vector<long long>& z) {
    const auto un = static_cast<unsigned long long>(n);
    for (int l = static_cast<int>(z.size()) - 1; l >= 0; --l) {
        z[static_cast<std::size_t>(l)] = static_cast<long long>(idx % un);
        idx /= un;
    }
}

void require_prime_or_one(long long n, const char* what) {
    if (n < 1) throw ParameterDomain(std::string(what) + ": n must be >= 1");
    if (n > 1 && !is_prime(n)) throw ParameterDomain(std::string(what) + ": n must be prime");
}

}  // namespace

Lattice::Lattice(long long n_points, std::vector<long long> gen) : n(n_points), z(std::move(gen)) {
    require_prime_or_one(n, "Lattice");
    if (z.empty()) throw ParameterDomain("Lattice: generating vector is empty");
    for (long long c : z)
        if (c < 0 || c >= n) throw ParameterDomain("Lattice: generator entries must lie in [0, n)");
}

Point Lattice::point(long long j) const {
    if (j < 0 || j >= n) throw ParameterDomain("Lattice: node index out of range");
    Point t(z.size());
    for (std::size_t l = 0; l < z.size(); ++l)
        t[l] = static_cast<double>((z[l] * j) % n) / static_cast<double>(n);
    return t;
}

Shift::Shift(Point dlt) : delta(std::move(dlt)) {
    if (delta.empty()) throw ParameterDomain("Shift: empty shift vector");
    for (double v : delta)
        if (!(v >= 0.0) || v >= 1.0) throw ParameterDomain("Shift: entries must lie in [0, 1)");
}

bool dual_contains(const Lattice& lat, const Frequency& h) {
    if (static_cast<int>(h.size()) != lat.d())
        throw ParameterDomain("dual_contains: dimension mismatch");
    unsigned long long acc = 0;
    const auto un = static_cast<unsigned long long>(lat.n);
    for (std::size_t l = 0; l < h.size(); ++l) {
        const auto hv = static_cast<unsigned long long>(mod_pos(h[l], lat.n));
        const auto zv = static_cast<unsigned long long>(lat.z[l]);
        acc = (acc + static_cast<unsigned long long>(
                         (static_cast<unsigned __int128>(hv) * zv) % un)) %
              un;
    }
    return acc == 0;
}

LatticeErrors::LatticeErrors(const SpaceParams& params, const InvarianceSpec& inv, long long n,
                             const Truncation& trunc)
    : params_(params), inv_(inv), n_(n), tail_tol_(trunc.tail_tol) {
    require_prime_or_one(n_, "LatticeErrors");
    const int d = inv_.d;
    const int m = inv_.size();
    if (m > 12) throw TooManyPermutations("LatticeErrors: invariant block larger than 12");
    block_ = inv_.block0();

    const double eps = std::numeric_limits<double>::epsilon();
    const long long direct = std::max<long long>(trunc.box_radius, 64);
    const int pmax = std::max(m, 1);
    spec_.resize(static_cast<std::size_t>(pmax));
    line_sum_.resize(static_cast<std::size_t>(pmax));
    line_err_.resize(static_cast<std::size_t>(pmax));
    for (int p = 1; p <= pmax; ++p) {
        const series::LineClassSums cls =
            series::line_class_sums(params_, static_cast<double>(p), n_, direct);
        double s = 0.0;
        for (double a : cls.a) s += a;
        std::vector<double>& sp = spec_[static_cast<std::size_t>(p - 1)];
        sp.assign(static_cast<std::size_t>(n_), 0.0);
        for (long long t = 0; t < n_; ++t) {
            double acc = 0.0;
            for (long long c = 0; c < n_; ++c)
                acc += cls.a[static_cast<std::size_t>(c)] *
                       std::cos(kTwoPi * static_cast<double>((c * t) % n_) / static_cast<double>(n_));
            sp[static_cast<std::size_t>(t)] = acc;
        }
        line_sum_[static_cast<std::size_t>(p - 1)] = s;
        // cls.err bounds the class-sum error; the DFT adds <= 8 n eps s.
        line_err_[static_cast<std::size_t>(p - 1)] = cls.err + 8.0 * static_cast<double>(n_) * eps * s;
    }
    beta0_d_ = std::pow(params_.beta0, d);

    // z-independent squared-scale tails: every evaluation is an average of
    // products of d spectrum values, each bounded by its line sum, so the
    // certified series error inflates a product by at most prod(s+e)-prod(s).
    // The trailing terms bound floating-point accumulation.
    const double s1 = line_sum_[0];
    const double e1 = line_err_[0];
    const double bound_all = std::pow(s1, d);
    tail_wce_ = std::pow(s1 + e1, d) - bound_all +
                static_cast<double>(n_) * static_cast<double>(n_) * (d + 2.0) * eps * bound_all;

    double part_tail = 0.0;
    unsigned long long bell = 0;
    const double m_fact = static_cast<double>(factorial(m).exact);
    partitions::for_each_set_partition(m, [&](const partitions::SetPartition& pi) {
        ++bell;
        double coeff = 1.0, lo = 1.0, hi = 1.0;
        for (const auto& b : pi) {
            const auto p = b.size();
            coeff *= static_cast<double>(factorial(static_cast<int>(p) - 1).exact);
            lo *= line_sum_[p - 1];
            hi *= line_sum_[p - 1] + line_err_[p - 1];
        }
        lo *= std::pow(s1, d - m);
        hi *= std::pow(s1 + e1, d - m);
        part_tail += coeff / m_fact * (hi - lo);
    });
    tail_rms_ = part_tail +
                static_cast<double>(bell) * static_cast<double>(n_) * (d + 2.0) * eps * bound_all;
}

double LatticeErrors::wce_unshifted_sq(const std::vector<long long>& z) const {
    const int d = inv_.d;
    const int m = static_cast<int>(block_.size());
    const double* s1 = spec_[0].data();

    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<long long> zp(z), base(static_cast<std::size_t>(d)), t(static_cast<std::size_t>(d));

    double total = 0.0;
    unsigned long long nperm = 0;
    bool identity = true;
    do {
        for (int i = 0; i < m; ++i)
            zp[static_cast<std::size_t>(block_[static_cast<std::size_t>(i)])] =
                z[static_cast<std::size_t>(block_[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])])];
        if (identity) {
            // P = id collapses the (j, j') double sum through j + j' mod n.
            std::fill(t.begin(), t.end(), 0);
            double acc = 0.0;
            for (long long j = 0; j < n_; ++j) {
                double prod = 1.0;
                for (int l = 0; l < d; ++l) {
                    auto& tl = t[static_cast<std::size_t>(l)];
                    prod *= s1[tl];
                    tl += z[static_cast<std::size_t>(l)];
                    if (tl >= n_) tl -= n_;
                }
                acc += prod;
            }
            total += acc / static_cast<double>(n_);
            identity = false;
        } else {
            std::fill(base.begin(), base.end(), 0);
            double acc = 0.0;
            for (long long j = 0; j < n_; ++j) {
                t = base;
                double inner = 0.0;
                for (long long jp = 0; jp < n_; ++jp) {
                    double prod = 1.0;
                    for (int l = 0; l < d; ++l) {
                        auto& tl = t[static_cast<std::size_t>(l)];
                        prod *= s1[tl];
                        tl += zp[static_cast<std::size_t>(l)];
                        if (tl >= n_) tl -= n_;
                    }
                    inner += prod;
                }
                acc += inner;
                for (int l = 0; l < d; ++l) {
                    auto& bl = base[static_cast<std::size_t>(l)];
                    bl += z[static_cast<std::size_t>(l)];
                    if (bl >= n_) bl -= n_;
                }
            }
            total += acc / (static_cast<double>(n_) * static_cast<double>(n_));
        }
        ++nperm;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total / static_cast<double>(nperm) - beta0_d_;
}

double LatticeErrors::rms_shifted_sq(const std::vector<long long>& z) const {
    const int d = inv_.d;
    const int m = static_cast<int>(block_.size());
    const double m_fact = static_cast<double>(factorial(m).exact);

    std::vector<char> in_block(static_cast<std::size_t>(d), 0);
    for (int b : block_) in_block[static_cast<std::size_t>(b)] = 1;

    // Free coordinates contribute the same factor to every partition term.
    std::vector<double> free_prod(static_cast<std::size_t>(n_), 1.0);
    const double* s1 = spec_[0].data();
    for (int l = 0; l < d; ++l) {
        if (in_block[static_cast<std::size_t>(l)]) continue;
        long long t = 0;
        for (long long j = 0; j < n_; ++j) {
            free_prod[static_cast<std::size_t>(j)] *= s1[t];
            t += z[static_cast<std::size_t>(l)];
            if (t >= n_) t -= n_;
        }
    }

    double total = 0.0;
    std::vector<long long> zb, tb;
    std::vector<const double*> sp;
    partitions::for_each_set_partition(m, [&](const partitions::SetPartition& pi) {
        const std::size_t nb = pi.size();
        zb.assign(nb, 0);
        sp.assign(nb, nullptr);
        double coeff = 1.0;
        for (std::size_t b = 0; b < nb; ++b) {
            long long s = 0;
            for (int i : pi[b]) s += z[static_cast<std::size_t>(block_[static_cast<std::size_t>(i)])];
            zb[b] = s % n_;
            sp[b] = spec_[pi[b].size() - 1].data();
            coeff *= static_cast<double>(factorial(static_cast<int>(pi[b].size()) - 1).exact);
        }
        tb.assign(nb, 0);
        double acc = 0.0;
        for (long long j = 0; j < n_; ++j) {
            double prod = free_prod[static_cast<std::size_t>(j)];
            for (std::size_t b = 0; b < nb; ++b) {
                prod *= sp[b][tb[b]];
                tb[b] += zb[b];
                if (tb[b] >= n_) tb[b] -= n_;
            }
            acc += prod;
        }
        total += coeff * acc;
    });
    return total / (m_fact * static_cast<double>(n_)) - beta0_d_;
}

ErrorReport LatticeErrors::wce_unshifted(const std::vector<long long>& z) const {
    if (static_cast<int>(z.size()) != inv_.d)
        throw ParameterDomain("wce_unshifted: generator dimension mismatch");
    for (long long c : z)
        if (c < 0 || c >= n_) throw ParameterDomain("wce_unshifted: generator entry out of [0, n)");
    return sqrt_error_report(wce_unshifted_sq(z), tail_wce_, tail_tol_,
                             static_cast<unsigned long long>(n_), "wce_unshifted");
}

ErrorReport LatticeErrors::rms_shifted(const std::vector<long long>& z) const {
    if (static_cast<int>(z.size()) != inv_.d)
        throw ParameterDomain("rms_shifted: generator dimension mismatch");
    for (long long c : z)
        if (c < 0 || c >= n_) throw ParameterDomain("rms_shifted: generator entry out of [0, n)");
    return sqrt_error_report(rms_shifted_sq(z), tail_rms_, tail_tol_,
                             static_cast<unsigned long long>(n_), "rms_shifted");
}

ErrorReport wce_unshifted(const SpaceParams& params, const InvarianceSpec& inv,
                          const Lattice& lat, const Truncation& trunc) {
    if (lat.d() != inv.d) throw ParameterDomain("wce_unshifted: lattice dimension mismatch");
    return LatticeErrors(params, inv, lat.n, trunc).wce_unshifted(lat.z);
}

ErrorReport rms_shifted(const SpaceParams& params, const InvarianceSpec& inv,
                        const Lattice& lat, const Truncation& trunc) {
    if (lat.d() != inv.d) throw ParameterDomain("rms_shifted: lattice dimension mismatch");
    return LatticeErrors(params, inv, lat.n, trunc).rms_shifted(lat.z);
}

ErrorReport wce_shifted(const SpaceParams& params, const InvarianceSpec& inv,
                        const Lattice& lat, const Shift& shift, const Truncation& trunc) {
    if (lat.d() != inv.d) throw ParameterDomain("wce_shifted: lattice dimension mismatch");
    if (static_cast<int>(shift.delta.size()) != lat.d())
        throw ParameterDomain("wce_shifted: shift dimension mismatch");
    std::vector<Point> nodes;
    nodes.reserve(static_cast<std::size_t>(lat.n));
    for (long long j = 0; j < lat.n; ++j) {
        Point t = lat.point(j);
        for (std::size_t l = 0; l < t.size(); ++l) t[l] = frac(t[l] + shift.delta[l]);
        nodes.push_back(std::move(t));
    }
    return oracle::wce_quadratic_form(params, inv, nodes, {}, trunc);
}

std::string to_string(Objective objective) {
    return objective == Objective::UnshiftedWce ? "wce" : "rms";
}

SearchResult search(const SpaceParams& params, const InvarianceSpec& inv, long long n,
                    Objective objective, const SearchMode& mode, const Truncation& trunc,
                    unsigned threads) {
    const int d = inv.d;
    const LatticeErrors engine(params, inv, n, trunc);
    const bool rms = objective == Objective::RmsShifted;

    unsigned long long total = 0;
    if (mode.kind == SearchMode::Kind::Exhaustive) {
        total = candidate_count(n, d);
    } else {
        if (mode.count == 0) throw ParameterDomain("search: random sample needs count >= 1");
        total = mode.count;
    }

    const unsigned nthreads = resolve_threads(threads, total);
    struct Best {
        double val = std::numeric_limits<double>::infinity();
        unsigned long long idx = std::numeric_limits<unsigned long long>::max();
    };
    std::vector<Best> best(nthreads);
    const oracle::CounterRng rng(mode.seed);
    const bool random = mode.kind == SearchMode::Kind::RandomSample;

    run_chunks(total, nthreads,
               [&](unsigned long long begin, unsigned long long end, unsigned tid) {
                   std::vector<long long> z(static_cast<std::size_t>(d));
                   Best local;
                   for (unsigned long long idx = begin; idx < end; ++idx) {
                       if (random) {
                           for (int l = 0; l < d; ++l)
                               z[static_cast<std::size_t>(l)] = static_cast<long long>(
                                   rng.at(idx * static_cast<unsigned long long>(d) +
                                          static_cast<unsigned long long>(l)) %
                                   static_cast<unsigned long long>(n));
                       } else {
                           decode_candidate(idx, n, z);
                       }
                       const double v = rms ? engine.rms_shifted_sq(z) : engine.wce_unshifted_sq(z);
                       if (v < local.val) {
                           local.val = v;
                           local.idx = idx;
                       }
                   }
                   best[tid] = local;
               });

    Best global;
    for (const Best& b : best)
        if (b.val < global.val || (b.val == global.val && b.idx < global.idx)) global = b;

    SearchResult out;
    out.objective = objective;
    out.candidates_examined = total;
    out.best_z.assign(static_cast<std::size_t>(d), 0);
    if (mode.kind == SearchMode::Kind::RandomSample) {
        for (int l = 0; l < d; ++l)
            out.best_z[static_cast<std::size_t>(l)] = static_cast<long long>(
                rng.at(global.idx * static_cast<unsigned long long>(d) +
                       static_cast<unsigned long long>(l)) %
                static_cast<unsigned long long>(n));
    } else {
        decode_candidate(global.idx, n, out.best_z);
    }
    out.best_value =
        (rms ? engine.rms_shifted(out.best_z) : engine.wce_unshifted(out.best_z)).value;
    return out;
}

AverageCheck average_over_z(const SpaceParams& params, const InvarianceSpec& inv, long long n,
                            double lambda, const Truncation& trunc, unsigned threads) {
    if (!is_prime(n)) throw ParameterDomain("average_over_z: n must be prime");
    const double cd = bounds::c_d_lambda_exact(params, inv, lambda);
    const LatticeErrors engine(params, inv, n, trunc);
    const unsigned long long total = candidate_count(n, inv.d);
    const unsigned nthreads = resolve_threads(threads, total);

    std::vector<double> partial(nthreads, 0.0);
    run_chunks(total, nthreads,
               [&](unsigned long long begin, unsigned long long end, unsigned tid) {
                   std::vector<long long> z(static_cast<std::size_t>(inv.d));
                   double acc = 0.0;
                   for (unsigned long long idx = begin; idx < end; ++idx) {
                       decode_candidate(idx, n, z);
                       acc += std::pow(std::max(engine.rms_shifted_sq(z), 0.0), 1.0 / lambda);
                   }
                   partial[tid] = acc;
               });

    AverageCheck out;
    double sum = 0.0;
    for (double p : partial) sum += p;
    out.empirical_average = sum / static_cast<double>(total);
    out.bound = (1.0 + params.profile.c_r()) * std::pow(cd, 1.0 / lambda) / static_cast<double>(n);
    out.ok = out.empirical_average <= out.bound * (1.0 + 1e-9);
    return out;
}

unsigned long long dual_indicator_count(long long n, const Frequency& h) {
    if (n < 1) throw ParameterDomain("dual_indicator_count: n must be >= 1");
    const int d = static_cast<int>(h.size());
    if (d < 1) throw ParameterDomain("dual_indicator_count: empty frequency");
    const unsigned long long total = candidate_count(n, d);

    std::vector<long long> hm(h.size());
    for (std::size_t l = 0; l < h.size(); ++l) hm[l] = mod_pos(h[l], n);

    // Plain odometer count; deliberately no structure beyond integer mod.
    unsigned long long count = 0;
    std::vector<long long> z(static_cast<std::size_t>(d), 0);
    for (unsigned long long idx = 0; idx < total; ++idx) {
        decode_candidate(idx, n, z);
        long long acc = 0;
        for (int l = 0; l < d; ++l)
            acc = (acc + hm[static_cast<std::size_t>(l)] * z[static_cast<std::size_t>(l)]) % n;
        if (acc == 0) ++count;
    }
    return count;
}

std::vector<long long> primes_upto(long long limit) {
    if (limit > 100000000) throw ParameterDomain("primes_upto: limit above 10^8");
    std::vector<long long> out;
    if (limit < 2) return out;
    std::vector<char> sieve(static_cast<std::size_t>(limit) + 1, 1);
    for (long long p = 2; p <= limit; ++p) {
        if (!sieve[static_cast<std::size_t>(p)]) continue;
        out.push_back(p);
        for (long long q = p * p; q <= limit; q += p) sieve[static_cast<std::size_t>(q)] = 0;
    }
    return out;
}

ConvergenceStudy convergence_study(const SpaceParams& params, const InvarianceSpec& inv,
                                   long long max_n, Objective objective, const Truncation& trunc,
                                   unsigned threads) {
    const std::vector<long long> primes = primes_upto(max_n);
    if (primes.size() < 2)
        throw ParameterDomain("convergence_study: need at least two primes <= max_n");

    ConvergenceStudy out;
    out.rows.reserve(primes.size());
    for (long long p : primes) {
        SearchResult r = search(params, inv, p, objective, SearchMode::exhaustive(), trunc, threads);
        out.rows.push_back({p, std::move(r.best_z), r.best_value});
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    long long cnt = 0;
    for (const ConvergenceRow& row : out.rows) {
        if (!(row.best_value > 0.0)) continue;
        const double x = std::log(static_cast<double>(row.n));
        const double y = std::log(row.best_value);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    const double denom = static_cast<double>(cnt) * sxx - sx * sx;
    out.slope = (cnt >= 2 && denom > 0.0)
                    ? (static_cast<double>(cnt) * sxy - sx * sy) / denom
                    : std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace permlat::lattice
