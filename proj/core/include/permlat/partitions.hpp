#pragma once

#include <functional>
#include <vector>

namespace permlat::partitions {

/// Blocks of a set partition of {0, ..., m-1}; each block sorted, blocks
/// ordered by smallest element.
using SetPartition = std::vector<std::vector<int>>;

/// Visits every set partition of {0, ..., m-1} (Bell(m) of them) in the
/// canonical restricted-growth order.  m = 0 yields the empty partition.
void for_each_set_partition(int m, const std::function<void(const SetPartition&)>& fn);

/// Visits every integer partition of m as a multiset of parts in
/// nonincreasing order.  m = 0 yields the empty partition.
void for_each_integer_partition(int m, const std::function<void(const std::vector<int>&)>& fn);

/// Number of permutations of S_m whose cycle type matches `parts`
/// (nonincreasing parts summing to m), divided by m!:
///   1 / prod_j ( j^{c_j} c_j! )  with c_j = multiplicity of part j.
double cycle_type_weight(const std::vector<int>& parts);

}  // namespace permlat::partitions
