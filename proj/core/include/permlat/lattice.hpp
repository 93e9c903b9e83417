#pragma once

#include <string>

#include "permlat/types.hpp"

namespace permlat::lattice {

/// Rank-1 lattice rule with nodes t_j = frac(j z / n), j = 0..n-1.
/// n must be prime; n = 1 is admitted as a documented degenerate used in
/// tests (single node at the origin, dual lattice = Z^d).
struct Lattice {
    long long n = 1;
    std::vector<long long> z;

    Lattice(long long n_points, std::vector<long long> gen);

    int d() const { return static_cast<int>(z.size()); }
    Point point(long long j) const;
};

/// Shift vector in [0,1)^d.
struct Shift {
    Point delta;
    explicit Shift(Point dlt);
};

/// h . z = 0 (mod n), coordinatewise reduction before accumulation.
bool dual_contains(const Lattice& lat, const Frequency& h);

/// Shared evaluation engine for all generating vectors at fixed
/// (params, inv, n).  Setup builds, for p = 1..max(#I,1), the residue-class
/// sums a_p[c] = sum_{v = c (mod n)} r1^{-1}(v)^p and their discrete cosine
/// spectra spec_p(t) = sum_c a_p[c] cos(2 pi c t / n); these reduce both
/// error formulas to O(#S n^2 d) (worst case) resp. O(Bell(#I) n d) per z
/// with certified series tails instead of box truncation.
class LatticeErrors {
public:
    LatticeErrors(const SpaceParams& params, const InvarianceSpec& inv, long long n,
                  const Truncation& trunc);

    /// Worst-case error of the unshifted rule (square root scale).
    ErrorReport wce_unshifted(const std::vector<long long>& z) const;

    /// Root mean squared worst-case error over all shifts.
    ErrorReport rms_shifted(const std::vector<long long>& z) const;

    /// Squared-error fast paths used by the exhaustive drivers.
    double wce_unshifted_sq(const std::vector<long long>& z) const;
    double rms_shifted_sq(const std::vector<long long>& z) const;

    double sq_tail_wce() const { return tail_wce_; }
    double sq_tail_rms() const { return tail_rms_; }
    long long n() const { return n_; }

private:
    SpaceParams params_;
    InvarianceSpec inv_;
    long long n_ = 1;
    std::vector<int> block_;                 // 0-based invariant positions
    std::vector<std::vector<double>> spec_;  // spec_[p-1][t]
    std::vector<double> line_sum_;           // s_p = spec_p(0)
    std::vector<double> line_err_;           // certified per-p error
    double beta0_d_ = 1.0;
    double tail_wce_ = 0.0;                  // certified squared-scale tails
    double tail_rms_ = 0.0;
    double tail_tol_ = 0.0;
};

ErrorReport wce_unshifted(const SpaceParams& params, const InvarianceSpec& inv,
                          const Lattice& lat, const Truncation& trunc);
ErrorReport rms_shifted(const SpaceParams& params, const InvarianceSpec& inv,
                        const Lattice& lat, const Truncation& trunc);

/// Worst-case error of the shifted rule Q_n(z) + delta, evaluated through the
/// oracle kernel quadratic form on the shifted nodes.
ErrorReport wce_shifted(const SpaceParams& params, const InvarianceSpec& inv,
                        const Lattice& lat, const Shift& shift, const Truncation& trunc);

enum class Objective { UnshiftedWce, RmsShifted };
std::string to_string(Objective objective);

struct SearchMode {
    enum class Kind { Exhaustive, RandomSample };
    Kind kind = Kind::Exhaustive;
    unsigned long long count = 0;  // RandomSample only
    unsigned long long seed = 0;

    static SearchMode exhaustive() { return {}; }
    static SearchMode random_sample(unsigned long long count, unsigned long long seed) {
        return {Kind::RandomSample, count, seed};
    }
};

struct SearchResult {
    std::vector<long long> best_z;
    double best_value = 0.0;
    unsigned long long candidates_examined = 0;
    Objective objective = Objective::UnshiftedWce;
};

/// Minimize the objective over generating vectors.  Exhaustive mode scans
/// Z_n^d in lexicographic order (guard n^d <= 10^7, SearchSpaceTooLarge) and
/// breaks ties toward the lexicographically smallest z; RandomSample draws
/// `count` vectors from the seeded counter generator.  Deterministic for any
/// thread count.
SearchResult search(const SpaceParams& params, const InvarianceSpec& inv, long long n,
                    Objective objective, const SearchMode& mode, const Truncation& trunc,
                    unsigned threads = 0);

/// (1/n^d) sum_z E(Q_n(z))^{2/lambda} against the existence bound
/// (1 + c_R) C_{d,lambda}^{1/lambda} / n.  Exhaustive over Z_n^d (same guard).
struct AverageCheck {
    double empirical_average = 0.0;
    double bound = 0.0;
    bool ok = false;
};
AverageCheck average_over_z(const SpaceParams& params, const InvarianceSpec& inv,
                            long long n, double lambda, const Truncation& trunc,
                            unsigned threads = 0);

/// Exact #{ z in Z_n^d : h . z = 0 (mod n) } by residue dynamic programming
/// (integer arithmetic; d from h.size()).
unsigned long long dual_indicator_count(long long n, const Frequency& h);

std::vector<long long> primes_upto(long long limit);

struct ConvergenceRow {
    long long n = 0;
    std::vector<long long> best_z;
    double best_value = 0.0;
};
struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    double slope = 0.0;  // least-squares slope of log(best_value) vs log(n)
};

/// Exhaustive-best objective value for every prime n <= max_n plus the fitted
/// log-log convergence slope.
ConvergenceStudy convergence_study(const SpaceParams& params, const InvarianceSpec& inv,
                                   long long max_n, Objective objective,
                                   const Truncation& trunc, unsigned threads = 0);

}  // namespace permlat::lattice
