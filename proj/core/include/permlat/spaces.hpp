#pragma once

#include "permlat/types.hpp"

namespace permlat {

/// Inverse weight r^{-1}(h) = prod_l ( beta0 if h_l = 0, else
/// beta1 R(|h_l|)^{-2 alpha} ).  Products over more than 50 coordinates are
/// accumulated in log space to avoid premature underflow.
double weight_inv(const SpaceParams& params, const Frequency& h);

/// log r^{-1}(h); -inf when a zero factor occurs (beta1 = 0 with h_l != 0).
double log_weight_inv(const SpaceParams& params, const Frequency& h);

/// M_d(h)! = #{ P in S_d : P(h) = h } = product of factorials of the value
/// multiplicities inside the invariant block of h.
FactorialValue multiplicity_factorial(const Frequency& h, const InvarianceSpec& inv);

/// Streaming enumerator of Nabla_d intersected with the box |h_l| <= H:
/// frequency vectors whose invariant-block entries are nondecreasing.
/// Vectors are produced in lexicographic order.  Single consumer; create a
/// fresh instance (or reset) to re-enumerate.
class NablaEnumerator {
 public:
  NablaEnumerator(const InvarianceSpec& inv, long long box_radius);

  /// Writes the next vector into `out`; returns false when exhausted.
  bool next(Frequency& out);
  void reset();

  unsigned long long produced() const { return produced_; }

 private:
  InvarianceSpec inv_;
  long long h_ = 0;
  std::vector<int> block_;      // 0-based invariant positions
  std::vector<bool> in_block_;  // per coordinate
  Frequency cur_;
  bool fresh_ = true;
  bool done_ = false;
  unsigned long long produced_ = 0;

  long long lower_bound_for(int pos) const;
};

/// Streaming enumerator of the distinct images { P(h) : P in S_d } in
/// lexicographic order of the permuted invariant block.  The number of
/// distinct images times M_d(h)! equals (#I_d)!.
/// Requires #I_d <= 12 (TooManyPermutations otherwise).
class DistinctRearrangements {
 public:
  DistinctRearrangements(const Frequency& h, const InvarianceSpec& inv);

  bool next(Frequency& out);
  void reset();

 private:
  Frequency base_;
  std::vector<int> block_;
  std::vector<long long> perm_;  // current arrangement of block values
  bool fresh_ = true;
  bool done_ = false;
};

/// Materialized distinct images (convenience for small blocks).
std::vector<Frequency> distinct_rearrangements(const Frequency& h,
                                               const InvarianceSpec& inv);

}  // namespace permlat
