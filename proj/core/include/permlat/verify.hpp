#pragma once

#include <string>
#include <vector>

namespace permlat::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // worst margin or first violation, human-readable
};

/// Cross-validation property suite: oracle equivalence on a small exhaustive
/// grid, lower/upper bound chains, the prime-character identity, truncated
/// product-sequence bound sides, the C_{d,lambda} sandwich with its scaling
/// identity, and the degenerate closed forms.  Runs in seconds; heavier
/// sweeps live in the acceptance harness.
std::vector<CheckResult> run_verification(unsigned threads = 0);

}  // namespace permlat::verify
