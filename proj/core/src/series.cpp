#include "permlat/series.hpp"

#include <algorithm>
#include <cmath>

namespace permlat::series {

namespace {

// Euler-Maclaurin evaluation of the Hurwitz-type tail
//   H(s, a) = sum_{k >= 0} (a + k)^{-s},  s > 1, a >= 16,
// with terms through B_6 and a remainder bounded by twice the first omitted
// correction (valid because the derivatives of x^{-s} alternate in sign).
TailSum hurwitz_tail(double s, double a) {
  TailSum out;
  const double as = std::pow(a, -s);
  double v = std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * as;
  const double t1 = s / 12.0 * as / a;                                   // B_2
  const double t2 = s * (s + 1) * (s + 2) / 720.0 * as / (a * a * a);   // B_4
  const double t3 = s * (s + 1) * (s + 2) * (s + 3) * (s + 4) / 30240.0 *
                    as / (a * a * a * a * a);                            // B_6
  v += t1 - t2 + t3;
  const double t4 = s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * (s + 5) *
                    (s + 6) / 1209600.0 * as / std::pow(a, 7.0);
  out.value = v;
  out.error = 2.0 * t4;
  return out;
}

// sum_{m >= m0, m = c (mod n)} m^{-s} via the Hurwitz tail, exact arithmetic
// on the class offset.  Requires m0 >= 16 n so that a = m1/n >= 16.
TailSum power_class_tail(double s, long long m0, long long n, long long c) {
  long long m1 = m0 + mod_pos(c - m0, n);  // smallest m >= m0 with m = c (mod n)
  TailSum h = hurwitz_tail(s, static_cast<double>(m1) / static_cast<double>(n));
  const double scale = std::pow(static_cast<double>(n), -s);
  return {scale * h.value, scale * h.error};
}

// Analytic completion of sum_{m >= m0, m = c (mod n)} R(m)^{-s} for each
// profile.  For MixedSmoothness, (1+m^2)^{-s/2} = m^{-s} (1 + m^{-2})^{-s/2}
// is bracketed by the alternating binomial partial sums
//   1 - q x <= (1+x)^{-q} <= 1 - q x + q(q+1)/2 x^2,  x = m^{-2},
// which is valid term-by-term once q x < 1.
TailSum profile_class_tail(const DecayProfile& profile, double s, long long m0,
                           long long n, long long c) {
  switch (profile.kind) {
    case Profile::Korobov:
      return power_class_tail(s, m0, n, c);
    case Profile::SobolevTwoPi: {
      TailSum t = power_class_tail(s, m0, n, c);
      const double scale = std::pow(2.0 * M_PI, -s);
      return {scale * t.value, scale * t.error};
    }
    case Profile::MixedSmoothness: {
      const double q = 0.5 * s;
      const double c2 = 0.5 * q * (q + 1.0);
      TailSum z0 = power_class_tail(s, m0, n, c);
      TailSum z2 = power_class_tail(s + 2.0, m0, n, c);
      TailSum z4 = power_class_tail(s + 4.0, m0, n, c);
      TailSum out;
      out.value = z0.value - q * z2.value + 0.5 * c2 * z4.value;
      out.error = 0.5 * c2 * z4.value + z0.error + q * z2.error + c2 * z4.error;
      return out;
    }
  }
  return {};
}

long long completion_cutoff(long long m_start, long long n, long long direct_terms) {
  long long m0 = std::max<long long>({m_start, 16 * n, direct_terms, 64});
  return m0;
}

}  // namespace

TailSum r_pow_sum_class(const DecayProfile& profile, double s, long long m_start,
                        long long n, long long c, long long direct_terms) {
  if (!(s > 1.0)) {
    throw DivergentSeries("r_pow_sum_class: exponent must exceed 1, got " +
                          std::to_string(s));
  }
  if (n < 1) throw ParameterDomain("r_pow_sum_class: modulus must be >= 1");
  if (m_start < 1) m_start = 1;
  c = mod_pos(c, n);
  const long long m0 = completion_cutoff(m_start, n, direct_terms);
  TailSum out;
  long long first = m_start + mod_pos(c - m_start, n);
  for (long long m = first; m < m0; m += n) {
    out.value += profile.r_pow_neg(static_cast<double>(m), s);
  }
  TailSum tail = profile_class_tail(profile, s, m0, n, c);
  out.value += tail.value;
  out.error += tail.error;
  return out;
}

TailSum r_pow_sum(const DecayProfile& profile, double s, long long m_start,
                  long long direct_terms) {
  return r_pow_sum_class(profile, s, m_start, 1, 0, direct_terms);
}

double r_pow_tail_upper(const DecayProfile& profile, double s, long long M) {
  if (!(s > 1.0)) {
    throw DivergentSeries("r_pow_tail_upper: exponent must exceed 1");
  }
  if (M < 1) M = 1;
  const double scale =
      profile.kind == Profile::SobolevTwoPi ? 2.0 * M_PI : 1.0;  // R(m) >= scale*m
  return std::pow(scale, -s) * std::pow(static_cast<double>(M), 1.0 - s) /
         (s - 1.0);
}

TailSum n_r_certified(const SpaceParams& params, double a) {
  if (!(2.0 * a > 1.0)) {
    throw DivergentSeries("n_r: requires 2a > 1, got a = " + std::to_string(a));
  }
  return r_pow_sum(params.profile, 2.0 * a, 1);
}

double n_r(const SpaceParams& params, double a, double tol) {
  TailSum s = n_r_certified(params, a);
  if (s.error > tol) {
    throw TailToleranceExceeded("n_r: certified error " + std::to_string(s.error) +
                                " exceeds tolerance");
  }
  return s.value;
}

TailSum weight_power_line_sum(const SpaceParams& params, double p) {
  if (!(p > 0.0)) throw ParameterDomain("weight_power_line_sum: p must be > 0");
  TailSum out;
  out.value = std::pow(params.beta0, p);
  if (params.beta1 == 0.0) return out;
  TailSum nr = n_r_certified(params, params.alpha * p);
  const double b1p = std::pow(params.beta1, p);
  out.value += 2.0 * b1p * nr.value;
  out.error = 2.0 * b1p * nr.error;
  return out;
}

LineClassSums line_class_sums(const SpaceParams& params, double p, long long n,
                              long long direct_terms) {
  if (n < 1) throw ParameterDomain("line_class_sums: modulus must be >= 1");
  if (!(p > 0.0)) throw ParameterDomain("line_class_sums: p must be > 0");
  const double s = 2.0 * params.alpha * p;
  if (!(s > 1.0)) {
    throw DivergentSeries("line_class_sums: requires 2 alpha p > 1");
  }
  LineClassSums out;
  out.a.assign(static_cast<std::size_t>(n), 0.0);
  out.a[0] = std::pow(params.beta0, p);
  if (params.beta1 == 0.0) return out;
  const double b1p = std::pow(params.beta1, p);
  const long long m0 = completion_cutoff(1, n, direct_terms);
  for (long long m = 1; m < m0; ++m) {
    const double w = b1p * params.profile.r_pow_neg(static_cast<double>(m), s);
    out.a[static_cast<std::size_t>(m % n)] += w;          // +m branch
    out.a[static_cast<std::size_t>(mod_pos(-m, n))] += w;  // -m branch
  }
  for (long long c = 0; c < n; ++c) {
    TailSum pos = profile_class_tail(params.profile, s, m0, n, c);
    TailSum neg = profile_class_tail(params.profile, s, m0, n, mod_pos(-c, n));
    out.a[static_cast<std::size_t>(c)] += b1p * (pos.value + neg.value);
    out.err += b1p * (pos.error + neg.error);
  }
  return out;
}

}  // namespace permlat::series
