#include "permlat/run_config.hpp"

#include <cmath>

#include <json.hpp>

namespace permlat {

namespace {

using nlohmann::json;

template <typename T>
void load(const json& j, const char* key, T& into) {
    if (j.contains(key)) into = j.at(key).get<T>();
}

}  // namespace

std::string to_json(const RunConfig& c) {
    json j;
    j["subcommand"] = c.subcommand;
    j["profile"] = c.profile;
    j["alpha"] = c.alpha;
    j["beta0"] = c.beta0;
    j["beta1"] = c.beta1;
    j["d"] = c.d;
    j["invariant"] = c.invariant;
    j["n"] = c.n;
    j["z"] = c.z;
    j["shift"] = c.shift;
    j["lambda"] = c.lambda;
    j["objective"] = c.objective;
    j["mode"] = c.mode;
    j["count"] = c.count;
    j["seed"] = c.seed;
    j["primes_limit"] = c.primes_limit;
    j["box_radius"] = c.box_radius;
    if (std::isfinite(c.tail_tol)) j["tail_tol"] = c.tail_tol;
    j["threads"] = c.threads;
    j["output"] = c.output;
    return j.dump(2);
}

RunConfig run_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParameterDomain(std::string("config: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParameterDomain("config: top-level JSON value must be an object");
    RunConfig c;
    try {
        load(j, "subcommand", c.subcommand);
        load(j, "profile", c.profile);
        load(j, "alpha", c.alpha);
        load(j, "beta0", c.beta0);
        load(j, "beta1", c.beta1);
        load(j, "d", c.d);
        load(j, "invariant", c.invariant);
        load(j, "n", c.n);
        load(j, "z", c.z);
        load(j, "shift", c.shift);
        load(j, "lambda", c.lambda);
        load(j, "objective", c.objective);
        load(j, "mode", c.mode);
        load(j, "count", c.count);
        load(j, "seed", c.seed);
        load(j, "primes_limit", c.primes_limit);
        load(j, "box_radius", c.box_radius);
        load(j, "tail_tol", c.tail_tol);
        load(j, "threads", c.threads);
        load(j, "output", c.output);
    } catch (const json::exception& e) {
        throw ParameterDomain(std::string("config: bad field type: ") + e.what());
    }
    return c;
}

SpaceParams space_params(const RunConfig& c) {
    const auto kind = profile_from_string(c.profile);
    if (!kind) throw ParameterDomain("config: unknown profile '" + c.profile + "'");
    return SpaceParams(c.alpha, c.beta0, c.beta1, DecayProfile{*kind});
}

InvarianceSpec invariance(const RunConfig& c) { return InvarianceSpec(c.d, c.invariant); }

Truncation truncation(const RunConfig& c) {
    Truncation t;
    t.box_radius = c.box_radius;
    t.tail_tol = c.tail_tol;
    return t;
}

}  // namespace permlat
