#include "permlat/types.hpp"

#include <algorithm>

namespace permlat {

std::string to_string(Profile kind) {
  switch (kind) {
    case Profile::Korobov: return "korobov";
    case Profile::SobolevTwoPi: return "sobolev2pi";
    case Profile::MixedSmoothness: return "mixed";
  }
  return "korobov";
}

std::optional<Profile> profile_from_string(const std::string& name) {
  if (name == "korobov") return Profile::Korobov;
  if (name == "sobolev2pi") return Profile::SobolevTwoPi;
  if (name == "mixed") return Profile::MixedSmoothness;
  return std::nullopt;
}

SpaceParams::SpaceParams(double a, double b0, double b1, DecayProfile prof)
    : alpha(a), beta0(b0), beta1(b1), profile(prof) {
  if (!(alpha > 0.5) || !std::isfinite(alpha)) {
    throw ParameterDomain("SpaceParams: alpha must satisfy alpha > 1/2, got " +
                          std::to_string(alpha));
  }
  if (!(beta0 > 0.0) || !std::isfinite(beta0)) {
    throw ParameterDomain("SpaceParams: beta0 must be positive");
  }
  if (!(beta1 >= 0.0) || !std::isfinite(beta1)) {
    throw ParameterDomain("SpaceParams: beta1 must be nonnegative");
  }
}

InvarianceSpec::InvarianceSpec(int dim, std::vector<int> inv)
    : d(dim), indices(std::move(inv)) {
  if (d < 1) throw ParameterDomain("InvarianceSpec: d must be >= 1");
  std::sort(indices.begin(), indices.end());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 1 || indices[i] > d) {
      throw ParameterDomain("InvarianceSpec: index out of range [1, d]");
    }
    if (i > 0 && indices[i] == indices[i - 1]) {
      throw ParameterDomain("InvarianceSpec: duplicate index");
    }
  }
}

InvarianceSpec InvarianceSpec::full(int dim) {
  std::vector<int> all(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) all[static_cast<std::size_t>(i)] = i + 1;
  return InvarianceSpec(dim, std::move(all));
}

InvarianceSpec InvarianceSpec::none(int dim) { return InvarianceSpec(dim, {}); }

bool InvarianceSpec::contains(int coord_1based) const {
  return std::binary_search(indices.begin(), indices.end(), coord_1based);
}

std::optional<unsigned long long> InvarianceSpec::group_size_exact() const {
  if (size() > 20) return std::nullopt;
  return factorial(size()).exact;
}

double InvarianceSpec::group_size_log() const {
  return std::lgamma(static_cast<double>(size()) + 1.0);
}

std::vector<int> InvarianceSpec::block0() const {
  std::vector<int> out;
  out.reserve(indices.size());
  for (int ix : indices) out.push_back(ix - 1);
  return out;
}

FactorialValue factorial(int k) {
  if (k < 0) throw ParameterDomain("factorial: negative argument");
  if (k > 20) throw ParameterDomain("factorial: exact value exceeds 64 bits");
  FactorialValue out;
  for (int i = 2; i <= k; ++i) out.exact *= static_cast<unsigned long long>(i);
  out.log_value = std::lgamma(static_cast<double>(k) + 1.0);
  return out;
}

bool is_prime(long long n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (long long p = 3; p * p <= n; p += 2)
    if (n % p == 0) return false;
  return true;
}

ErrorReport sqrt_error_report(double sq, double sq_tail, double tail_tol,
                              unsigned long long terms, const std::string& what) {
  ErrorReport out;
  out.terms = terms;
  if (sq < -(sq_tail + 1e-10))
    throw NegativeSquareBeyondTolerance(what + ": squared error " + std::to_string(sq) +
                                        " below certified tolerance");
  if (sq < 0.0) {
    out.clamp_magnitude = -sq;
    sq = 0.0;
  }
  out.value = std::sqrt(sq);
  out.tail_bound = std::sqrt(sq + sq_tail) - out.value;
  if (out.tail_bound > tail_tol)
    throw TailToleranceExceeded(what + ": tail bound exceeds tolerance");
  return out;
}

}  // namespace permlat
