#pragma once

#include <cstdint>

#include "permlat/types.hpp"

namespace permlat::oracle {

/// Deterministic counter-based generator.  Draw i is the splitmix64
/// finalizer applied to seed ^ (i * 0xD1B54A32D192ED03); there is no hidden
/// state beyond (seed, counter), so streams are random-access, reproducible
/// across platforms, and safe to split by counter range across threads.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t at(std::uint64_t counter) const;

    /// Uniform double in [0, 1) from the top 53 bits of at(counter).
    double unit_at(std::uint64_t counter) const;

    std::uint64_t next() { return at(counter_++); }
    double next_unit() { return unit_at(counter_++); }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t counter_ = 0;
};

/// Worst-case error of the rule (1/n) sum_j w_j f(t_j), n = #nodes, by the
/// kernel quadratic form
///   e^2 = beta0^d (1 - (2/n) sum_j w_j)
///         + (1/n^2) sum_{j,l} w_j w_l K_inv(t_j, t_l).
/// Weights are the unnormalized w_j; empty weights select w_j = 1, i.e. the
/// plain QMC average.  Kernel evaluations use the closed form when
/// available, otherwise a cosine series with trunc.box_radius terms and a
/// certified tail.
ErrorReport wce_quadratic_form(const SpaceParams& params, const InvarianceSpec& inv,
                               const std::vector<Point>& nodes,
                               const std::vector<double>& weights, const Truncation& trunc);

/// The same worst-case error by the dual route: direct summation of
///   e^2 = |1 - W|^2 beta0^d
///         + sum_{0 != h, |h|_inf <= H} r^{-1}(h) Re[ Phi(h) conj(PhiS(h)) ],
/// with W = (1/n) sum_j w_j, Phi(h) = (1/n) sum_j w_j e^{2 pi i h.t_j} and
/// PhiS the group average of Phi over permuted frequencies.  Weights follow
/// the same unnormalized convention as wce_quadratic_form.  H =
/// trunc.box_radius; the reported tail bound covers the omitted
/// frequencies.  Deliberately shares no code with the lattice-specific
/// engines.
ErrorReport general_error_formula(const SpaceParams& params, const InvarianceSpec& inv,
                                  const std::vector<Point>& nodes,
                                  const std::vector<double>& weights, const Truncation& trunc);

/// Plain Monte Carlo estimate of the initial-error normalizer
///   M1 = ( integral of sqrt(K_inv(x, x)) dx )^2
/// from n_samples uniform points drawn with CounterRng(seed).  std_error is
/// the delta-method standard error of the squared mean.
struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};
McEstimate m1_invariant_mc(const SpaceParams& params, const InvarianceSpec& inv,
                           std::uint64_t n_samples, std::uint64_t seed);

}  // namespace permlat::oracle
