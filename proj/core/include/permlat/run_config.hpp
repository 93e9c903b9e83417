#pragma once

#include <limits>
#include <string>
#include <vector>

#include "permlat/types.hpp"

namespace permlat {

/// One fully specified CLI invocation.  Serializes to JSON losslessly; an
/// infinite tail_tol is encoded by omitting the key.
struct RunConfig {
    std::string subcommand;           // constants|wce|rms|search|average-check|convergence|verify
    std::string profile = "korobov";  // korobov|sobolev2pi|mixed
    double alpha = 1.0;
    double beta0 = 1.0;
    double beta1 = 1.0;
    int d = 1;
    std::vector<int> invariant;  // 1-based coordinate indices
    long long n = 1;
    std::vector<long long> z;
    std::vector<double> shift;   // optional shift for wce
    double lambda = 1.0;
    std::string objective = "rms";    // rms|wce
    std::string mode = "exhaustive";  // exhaustive|random
    unsigned long long count = 1000;  // random-mode sample size
    unsigned long long seed = 0;
    long long primes_limit = 50;  // convergence: consider primes <= this
    long long box_radius = 4096;
    double tail_tol = std::numeric_limits<double>::infinity();
    unsigned threads = 0;  // 0 = all cores
    std::string output;    // CSV destination; empty = stdout

    bool operator==(const RunConfig&) const = default;
};

std::string to_json(const RunConfig& config);
RunConfig run_config_from_json(const std::string& text);  // ParameterDomain on bad input

/// Typed views of the shared fields (ParameterDomain on bad strings/values).
SpaceParams space_params(const RunConfig& config);
InvarianceSpec invariance(const RunConfig& config);
Truncation truncation(const RunConfig& config);

}  // namespace permlat
