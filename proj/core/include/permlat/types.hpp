#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace permlat {

/// Integer frequency vector h in Z^d.
using Frequency = std::vector<long long>;

/// Point in the unit cube [0,1)^d.
using Point = std::vector<double>;

// ---------------------------------------------------------------------------
// Error taxonomy.  Every failure mode raised by the library derives from
// Error so callers can trap the whole family at once.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Series parameters outside the convergence region (exponent too small).
struct DivergentSeries : Error {
  using Error::Error;
};

/// Permutation-group enumeration request beyond the supported block size.
struct TooManyPermutations : Error {
  using Error::Error;
};

/// A truncated sum whose certified tail exceeds the requested tolerance.
struct TailToleranceExceeded : Error {
  using Error::Error;
};

/// A theorem hypothesis that does not hold for the supplied parameters.
struct AssumptionViolated : Error {
  using Error::Error;
};

/// Structurally invalid parameter (wrong range, bad index set, ...).
struct ParameterDomain : Error {
  using Error::Error;
};

/// Candidate enumeration larger than the configured guard.
struct SearchSpaceTooLarge : Error {
  using Error::Error;
};

/// A squared error that came out negative by more than the certified
/// truncation tail plus rounding slack.
struct NegativeSquareBeyondTolerance : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Decay profiles.
// ---------------------------------------------------------------------------

/// The three supported growth laws R(m) for the one-dimensional weight
/// r1(h) = beta0 (h = 0) resp. beta1^{-1} R(|h|)^{2 alpha} (h != 0):
///
///   Korobov          R(m) = m
///   SobolevTwoPi     R(m) = 2 pi m
///   MixedSmoothness  R(m) = (1 + m^2)^{1/2}
enum class Profile { Korobov, SobolevTwoPi, MixedSmoothness };

struct DecayProfile {
  Profile kind = Profile::Korobov;

  /// Stability constant c_R with R(m)/c_R <= R(n m)/n <= R(m) for all n, m >= 1.
  double c_r() const {
    return kind == Profile::MixedSmoothness ? std::sqrt(2.0) : 1.0;
  }

  double R(double m) const {
    switch (kind) {
      case Profile::Korobov: return m;
      case Profile::SobolevTwoPi: return 2.0 * M_PI * m;
      case Profile::MixedSmoothness: return std::sqrt(1.0 + m * m);
    }
    return m;
  }

  /// R(m)^{-s} for m >= 1, s > 0.
  double r_pow_neg(double m, double s) const {
    switch (kind) {
      case Profile::Korobov: return std::pow(m, -s);
      case Profile::SobolevTwoPi: return std::pow(2.0 * M_PI * m, -s);
      case Profile::MixedSmoothness: return std::pow(1.0 + m * m, -0.5 * s);
    }
    return std::pow(m, -s);
  }

  static DecayProfile korobov() { return {Profile::Korobov}; }
  static DecayProfile sobolev_two_pi() { return {Profile::SobolevTwoPi}; }
  static DecayProfile mixed_smoothness() { return {Profile::MixedSmoothness}; }
};

std::string to_string(Profile kind);
std::optional<Profile> profile_from_string(const std::string& name);

// ---------------------------------------------------------------------------
// Space parameters.
// ---------------------------------------------------------------------------

/// Smoothness/weight parameters of the periodic reproducing-kernel space.
/// alpha > 1/2 guarantees that N_R(alpha) = sum_{m>=1} R(m)^{-2 alpha} is
/// finite for every supported profile; this is checked at construction.
/// beta1 = 0 is admitted as a degenerate testing configuration (the space
/// collapses to constants).
struct SpaceParams {
  double alpha = 1.0;
  double beta0 = 1.0;
  double beta1 = 1.0;
  DecayProfile profile{};

  SpaceParams() = default;
  SpaceParams(double a, double b0, double b1, DecayProfile prof);
};

// ---------------------------------------------------------------------------
// Invariance specification.
// ---------------------------------------------------------------------------

/// Subset I_d of coordinate axes (1-based, sorted, unique) on which the
/// integrands are invariant under permutation.  The acting group is the
/// symmetric group on I_d, extended by the identity elsewhere.
struct InvarianceSpec {
  int d = 1;
  std::vector<int> indices;  // sorted, unique, each in [1, d]

  InvarianceSpec() = default;
  InvarianceSpec(int dim, std::vector<int> inv);

  static InvarianceSpec full(int dim);
  static InvarianceSpec none(int dim);

  int size() const { return static_cast<int>(indices.size()); }
  bool contains(int coord_1based) const;

  /// Exact group order (#I_d)! when it fits in 64 bits (block size <= 20).
  std::optional<unsigned long long> group_size_exact() const;

  /// log((#I_d)!) via lgamma; always available.
  double group_size_log() const;

  /// 0-based positions of the invariant block, sorted.
  std::vector<int> block0() const;
};

// ---------------------------------------------------------------------------
// Truncation control and result reporting.
// ---------------------------------------------------------------------------

/// Controls truncated summation.  box_radius bounds per-coordinate frequency
/// magnitude for box/simplex enumeration and sets the direct-summation cutoff
/// before certified analytic tail completion in the one-dimensional engines.
/// Operations raise TailToleranceExceeded when their certified tail bound
/// exceeds tail_tol.
struct Truncation {
  long long box_radius = 4096;
  double tail_tol = std::numeric_limits<double>::infinity();
};

/// Value of a truncated computation together with a certified bound on the
/// omitted mass, the number of terms examined, and the magnitude clamped away
/// when a squared error came out slightly negative.
struct ErrorReport {
  double value = 0.0;
  double tail_bound = 0.0;
  unsigned long long terms = 0;
  double clamp_magnitude = 0.0;
};

// ---------------------------------------------------------------------------
// Small shared helpers.
// ---------------------------------------------------------------------------

/// Exact k! (requires k <= 20) and its logarithm.
struct FactorialValue {
  unsigned long long exact = 1;
  double log_value = 0.0;
};

FactorialValue factorial(int k);  // throws ParameterDomain for k < 0 or k > 20

/// Deterministic trial-division primality test.
bool is_prime(long long n);

/// Square root of a squared-scale quantity with certified-tail propagation.
/// Negative squares within sq_tail + 1e-10 are clamped to zero (recorded in
/// clamp_magnitude); anything more negative raises
/// NegativeSquareBeyondTolerance.  The returned tail_bound is
/// sqrt(sq + sq_tail) - sqrt(sq); raises TailToleranceExceeded past tail_tol.
ErrorReport sqrt_error_report(double sq, double sq_tail, double tail_tol,
                              unsigned long long terms, const std::string& what);

/// x mod 1 mapped into [0, 1).
inline double frac(double x) {
  double f = x - std::floor(x);
  return f < 1.0 ? f : 0.0;
}

/// Nonnegative residue of x modulo n (n >= 1).
inline long long mod_pos(long long x, long long n) {
  long long r = x % n;
  return r < 0 ? r + n : r;
}

}  // namespace permlat
