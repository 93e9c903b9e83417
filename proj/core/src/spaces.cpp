#include "permlat/spaces.hpp"

#include <algorithm>
#include <cmath>

namespace permlat {

namespace {

double log_factor(const SpaceParams& p, long long h) {
  if (h == 0) return std::log(p.beta0);
  if (p.beta1 == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(p.beta1) -
         2.0 * p.alpha * std::log(p.profile.R(static_cast<double>(std::llabs(h))));
}

double factor(const SpaceParams& p, long long h) {
  if (h == 0) return p.beta0;
  return p.beta1 *
         p.profile.r_pow_neg(static_cast<double>(std::llabs(h)), 2.0 * p.alpha);
}

void check_dim(const Frequency& h, const InvarianceSpec& inv, const char* who) {
  if (static_cast<int>(h.size()) != inv.d) {
    throw ParameterDomain(std::string(who) + ": frequency dimension mismatch");
  }
}

}  // namespace

double weight_inv(const SpaceParams& params, const Frequency& h) {
  if (h.size() > 50) return std::exp(log_weight_inv(params, h));
  double w = 1.0;
  for (long long hl : h) w *= factor(params, hl);
  return w;
}

double log_weight_inv(const SpaceParams& params, const Frequency& h) {
  double lw = 0.0;
  for (long long hl : h) lw += log_factor(params, hl);
  return lw;
}

FactorialValue multiplicity_factorial(const Frequency& h, const InvarianceSpec& inv) {
  check_dim(h, inv, "multiplicity_factorial");
  std::vector<long long> block;
  block.reserve(inv.indices.size());
  for (int pos : inv.block0()) block.push_back(h[static_cast<std::size_t>(pos)]);
  std::sort(block.begin(), block.end());
  FactorialValue out;
  std::size_t i = 0;
  while (i < block.size()) {
    std::size_t j = i;
    while (j < block.size() && block[j] == block[i]) ++j;
    FactorialValue f = factorial(static_cast<int>(j - i));
    out.exact *= f.exact;
    out.log_value += f.log_value;
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// NablaEnumerator
// ---------------------------------------------------------------------------

NablaEnumerator::NablaEnumerator(const InvarianceSpec& inv, long long box_radius)
    : inv_(inv), h_(box_radius) {
  if (box_radius < 0) throw ParameterDomain("NablaEnumerator: negative radius");
  block_ = inv_.block0();
  in_block_.assign(static_cast<std::size_t>(inv_.d), false);
  for (int pos : block_) in_block_[static_cast<std::size_t>(pos)] = true;
  reset();
}

void NablaEnumerator::reset() {
  cur_.assign(static_cast<std::size_t>(inv_.d), 0);
  fresh_ = true;
  done_ = false;
  produced_ = 0;
}

long long NablaEnumerator::lower_bound_for(int pos) const {
  if (!in_block_[static_cast<std::size_t>(pos)]) return -h_;
  // First block coordinate starts at -H; later ones at the previous block value.
  auto it = std::find(block_.begin(), block_.end(), pos);
  if (it == block_.begin()) return -h_;
  return cur_[static_cast<std::size_t>(*(it - 1))];
}

bool NablaEnumerator::next(Frequency& out) {
  if (done_) return false;
  if (fresh_) {
    for (int pos = 0; pos < inv_.d; ++pos) {
      cur_[static_cast<std::size_t>(pos)] = lower_bound_for(pos);
    }
    fresh_ = false;
    out = cur_;
    ++produced_;
    return true;
  }
  // Odometer increment in lexicographic order, last coordinate fastest.
  int pos = inv_.d - 1;
  while (pos >= 0) {
    if (cur_[static_cast<std::size_t>(pos)] < h_) {
      ++cur_[static_cast<std::size_t>(pos)];
      for (int q = pos + 1; q < inv_.d; ++q) {
        cur_[static_cast<std::size_t>(q)] = lower_bound_for(q);
      }
      out = cur_;
      ++produced_;
      return true;
    }
    --pos;
  }
  done_ = true;
  return false;
}

// ---------------------------------------------------------------------------
// DistinctRearrangements
// ---------------------------------------------------------------------------

DistinctRearrangements::DistinctRearrangements(const Frequency& h,
                                               const InvarianceSpec& inv) {
  check_dim(h, inv, "distinct_rearrangements");
  if (inv.size() > 12) {
    throw TooManyPermutations(
        "distinct_rearrangements: invariant block larger than 12");
  }
  base_ = h;
  block_ = inv.block0();
  perm_.reserve(block_.size());
  for (int pos : block_) perm_.push_back(h[static_cast<std::size_t>(pos)]);
  std::sort(perm_.begin(), perm_.end());
  reset();
}

void DistinctRearrangements::reset() {
  std::sort(perm_.begin(), perm_.end());
  fresh_ = true;
  done_ = false;
}

bool DistinctRearrangements::next(Frequency& out) {
  if (done_) return false;
  if (!fresh_ && !std::next_permutation(perm_.begin(), perm_.end())) {
    done_ = true;
    return false;
  }
  fresh_ = false;
  out = base_;
  for (std::size_t i = 0; i < block_.size(); ++i) {
    out[static_cast<std::size_t>(block_[i])] = perm_[i];
  }
  return true;
}

std::vector<Frequency> distinct_rearrangements(const Frequency& h,
                                               const InvarianceSpec& inv) {
  DistinctRearrangements en(h, inv);
  std::vector<Frequency> out;
  Frequency g;
  while (en.next(g)) out.push_back(g);
  return out;
}

}  // namespace permlat
