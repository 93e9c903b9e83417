#include "permlat/partitions.hpp"

#include <algorithm>
#include <cmath>

namespace permlat::partitions {

void for_each_set_partition(int m, const std::function<void(const SetPartition&)>& fn) {
    if (m <= 0) {
        fn({});
        return;
    }
    // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
    std::vector<int> a(m, 0), mx(m, 0);
    SetPartition blocks;
    for (;;) {
        // mx[i] tracks the prefix max inclusive, so mx[m-1] + 1 blocks exist.
        blocks.assign(mx[m - 1] + 1, {});
        for (int i = 0; i < m; ++i) blocks[a[i]].push_back(i);
        fn(blocks);

        int i = m - 1;
        while (i > 0 && a[i] == mx[i - 1] + 1) --i;
        if (i == 0) break;
        ++a[i];
        mx[i] = std::max(mx[i - 1], a[i]);
        for (int j = i + 1; j < m; ++j) {
            a[j] = 0;
            mx[j] = mx[j - 1];
        }
    }
}

void for_each_integer_partition(int m, const std::function<void(const std::vector<int>&)>& fn) {
    if (m <= 0) {
        fn({});
        return;
    }
    std::vector<int> parts;
    // Recursive descent: append parts no larger than the previous one.
    std::function<void(int, int)> rec = [&](int remaining, int max_part) {
        if (remaining == 0) {
            fn(parts);
            return;
        }
        for (int p = std::min(remaining, max_part); p >= 1; --p) {
            parts.push_back(p);
            rec(remaining - p, p);
            parts.pop_back();
        }
    };
    rec(m, m);
}

double cycle_type_weight(const std::vector<int>& parts) {
    // 1 / prod_j j^{c_j} c_j!  computed in log space for safety.
    double log_denom = 0.0;
    std::size_t i = 0;
    while (i < parts.size()) {
        std::size_t j = i;
        while (j < parts.size() && parts[j] == parts[i]) ++j;
        const double cj = static_cast<double>(j - i);
        log_denom += cj * std::log(static_cast<double>(parts[i])) + std::lgamma(cj + 1.0);
        i = j;
    }
    return std::exp(-log_denom);
}

}  // namespace permlat::partitions
