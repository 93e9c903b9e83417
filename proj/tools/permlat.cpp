#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "permlat/bounds.hpp"
#include "permlat/lattice.hpp"
#include "permlat/run_config.hpp"
#include "permlat/series.hpp"
#include "permlat/verify.hpp"

namespace {

using namespace permlat;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char ch : cell) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

void emit_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(cells[i]);
    }
    os << '\n';
}

template <typename T>
std::string join_semi(const std::vector<T>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ';';
        if constexpr (std::is_floating_point_v<T>)
            out += g17(values[i]);
        else
            out += std::to_string(values[i]);
    }
    return out;
}

lattice::Objective objective_from_string(const std::string& name) {
    if (name == "wce") return lattice::Objective::UnshiftedWce;
    if (name == "rms") return lattice::Objective::RmsShifted;
    throw ParameterDomain("unknown objective '" + name + "' (expected wce|rms)");
}

std::vector<std::string> space_cells(const RunConfig& cfg) {
    return {cfg.profile, g17(cfg.alpha), g17(cfg.beta0), g17(cfg.beta1),
            std::to_string(cfg.d), join_semi(cfg.invariant)};
}

int run_constants(const RunConfig& cfg, std::ostream& os) {
    const SpaceParams p = space_params(cfg);
    const InvarianceSpec inv = invariance(cfg);
    const double eta0 = bounds::eta_star(p, 0);
    const int vs = bounds::v_star(p);
    const double eta = bounds::eta_star(p, vs);
    double astar = std::numeric_limits<double>::quiet_NaN();
    try {
        astar = bounds::alpha_star(p);
    } catch (const Error&) {
        // no threshold root for these parameters; report nan
    }
    os << "# schema permlat-constants-1\n";
    emit_row(os, {"profile", "alpha", "beta0", "beta1", "d", "invariant", "s_d", "m2_full",
                  "m2_invariant", "n_r", "eta_star0", "v_star", "eta_star", "growth_factor",
                  "alpha_star"});
    std::vector<std::string> row = space_cells(cfg);
    row.push_back(g17(bounds::s_d(p, inv)));
    row.push_back(g17(bounds::m2_full(p, cfg.d)));
    row.push_back(g17(bounds::m2_invariant_exact(p, inv)));
    row.push_back(g17(series::n_r(p, p.alpha)));
    row.push_back(g17(eta0));
    row.push_back(std::to_string(vs));
    row.push_back(g17(eta));
    row.push_back(g17(1.0 / std::sqrt(1.0 - eta)));
    row.push_back(g17(astar));
    emit_row(os, row);
    return 0;
}

int run_error(const RunConfig& cfg, std::ostream& os) {
    const SpaceParams p = space_params(cfg);
    const InvarianceSpec inv = invariance(cfg);
    const Truncation tr = truncation(cfg);
    const lattice::Lattice lat(cfg.n, cfg.z);
    ErrorReport rep;
    std::string kind;
    if (cfg.subcommand == "rms") {
        kind = "rms";
        rep = lattice::rms_shifted(p, inv, lat, tr);
    } else if (cfg.shift.empty()) {
        kind = "wce";
        rep = lattice::wce_unshifted(p, inv, lat, tr);
    } else {
        kind = "wce-shifted";
        rep = lattice::wce_shifted(p, inv, lat, lattice::Shift(cfg.shift), tr);
    }
    os << "# schema permlat-error-1\n";
    emit_row(os, {"kind", "profile", "alpha", "beta0", "beta1", "d", "invariant", "n", "z",
                  "shift", "value", "tail_bound", "terms", "clamp_magnitude"});
    std::vector<std::string> row = {kind};
    for (auto& c : space_cells(cfg)) row.push_back(c);
    row.push_back(std::to_string(cfg.n));
    row.push_back(join_semi(cfg.z));
    row.push_back(join_semi(cfg.shift));
    row.push_back(g17(rep.value));
    row.push_back(g17(rep.tail_bound));
    row.push_back(std::to_string(rep.terms));
    row.push_back(g17(rep.clamp_magnitude));
    emit_row(os, row);
    return 0;
}

int run_search(const RunConfig& cfg, std::ostream& os) {
    const SpaceParams p = space_params(cfg);
    const InvarianceSpec inv = invariance(cfg);
    const Truncation tr = truncation(cfg);
    lattice::SearchMode mode;
    if (cfg.mode == "exhaustive")
        mode = lattice::SearchMode::exhaustive();
    else if (cfg.mode == "random")
        mode = lattice::SearchMode::random_sample(cfg.count, cfg.seed);
    else
        throw ParameterDomain("unknown mode '" + cfg.mode + "' (expected exhaustive|random)");
    const lattice::SearchResult res = lattice::search(
        p, inv, cfg.n, objective_from_string(cfg.objective), mode, tr, cfg.threads);
    os << "# schema permlat-search-1\n";
    emit_row(os, {"objective", "mode", "profile", "alpha", "beta0", "beta1", "d", "invariant",
                  "n", "seed", "best_z", "best_value", "candidates_examined"});
    std::vector<std::string> row = {lattice::to_string(res.objective), cfg.mode};
    for (auto& c : space_cells(cfg)) row.push_back(c);
    row.push_back(std::to_string(cfg.n));
    row.push_back(std::to_string(cfg.seed));
    row.push_back(join_semi(res.best_z));
    row.push_back(g17(res.best_value));
    row.push_back(std::to_string(res.candidates_examined));
    emit_row(os, row);
    return 0;
}

int run_average_check(const RunConfig& cfg, std::ostream& os) {
    const SpaceParams p = space_params(cfg);
    const InvarianceSpec inv = invariance(cfg);
    const lattice::AverageCheck av =
        lattice::average_over_z(p, inv, cfg.n, cfg.lambda, truncation(cfg), cfg.threads);
    os << "# schema permlat-average-1\n";
    emit_row(os, {"profile", "alpha", "beta0", "beta1", "d", "invariant", "n", "lambda",
                  "empirical_average", "bound", "ok"});
    std::vector<std::string> row = space_cells(cfg);
    row.push_back(std::to_string(cfg.n));
    row.push_back(g17(cfg.lambda));
    row.push_back(g17(av.empirical_average));
    row.push_back(g17(av.bound));
    row.push_back(av.ok ? "1" : "0");
    emit_row(os, row);
    return av.ok ? 0 : 1;
}

int run_convergence(const RunConfig& cfg, std::ostream& os) {
    const SpaceParams p = space_params(cfg);
    const InvarianceSpec inv = invariance(cfg);
    const lattice::ConvergenceStudy study =
        lattice::convergence_study(p, inv, cfg.primes_limit,
                                   objective_from_string(cfg.objective), truncation(cfg),
                                   cfg.threads);
    os << "# schema permlat-convergence-1\n";
    emit_row(os, {"objective", "profile", "alpha", "beta0", "beta1", "d", "invariant", "n",
                  "best_z", "best_value"});
    for (const lattice::ConvergenceRow& r : study.rows) {
        std::vector<std::string> row = {cfg.objective};
        for (auto& c : space_cells(cfg)) row.push_back(c);
        row.push_back(std::to_string(r.n));
        row.push_back(join_semi(r.best_z));
        row.push_back(g17(r.best_value));
        emit_row(os, row);
    }
    os << "# slope " << g17(study.slope) << '\n';
    return 0;
}

int run_verify(const RunConfig& cfg, std::ostream& os) {
    const std::vector<verify::CheckResult> results = verify::run_verification(cfg.threads);
    os << "# schema permlat-verify-1\n";
    emit_row(os, {"check", "pass", "detail"});
    bool all = true;
    for (const verify::CheckResult& r : results) {
        all = all && r.pass;
        emit_row(os, {r.name, r.pass ? "1" : "0", r.detail});
    }
    return all ? 0 : 1;
}

int run(const RunConfig& cfg) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!cfg.output.empty()) {
        file.open(cfg.output);
        if (!file) throw ParameterDomain("cannot open output file '" + cfg.output + "'");
        os = &file;
    }
    if (cfg.subcommand == "constants") return run_constants(cfg, *os);
    if (cfg.subcommand == "wce" || cfg.subcommand == "rms") return run_error(cfg, *os);
    if (cfg.subcommand == "search") return run_search(cfg, *os);
    if (cfg.subcommand == "average-check") return run_average_check(cfg, *os);
    if (cfg.subcommand == "convergence") return run_convergence(cfg, *os);
    if (cfg.subcommand == "verify") return run_verify(cfg, *os);
    throw ParameterDomain("unknown subcommand '" + cfg.subcommand + "'");
}

}  // namespace

int main(int argc, char** argv) {
    // --config seeds the defaults, explicit flags override individual fields.
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc)
            config_path = argv[i + 1];
        else if (a.rfind("--config=", 0) == 0)
            config_path = a.substr(9);
    }
    RunConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "permlat: cannot read config file '" << config_path << "'\n";
            return 2;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
            cfg = permlat::run_config_from_json(buf.str());
        } catch (const permlat::Error& e) {
            std::cerr << "permlat: " << e.what() << '\n';
            return 2;
        }
    }

    CLI::App app{"rank-1 lattice rules for permutation-invariant integrands"};
    app.set_version_flag("--version", "1.0.0");
    app.require_subcommand(0, 1);

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file; explicit flags override it");
        cmd->add_option("--profile", cfg.profile, "korobov|sobolev2pi|mixed");
        cmd->add_option("--alpha", cfg.alpha, "smoothness exponent, > 1/2");
        cmd->add_option("--beta0", cfg.beta0, "weight of the constant mode");
        cmd->add_option("--beta1", cfg.beta1, "weight scale of the oscillating modes");
        cmd->add_option("--d", cfg.d, "dimension");
        cmd->add_option("--invariant", cfg.invariant, "1-based invariant coordinates, e.g. 1,2")
            ->delimiter(',');
        cmd->add_option("--box-radius", cfg.box_radius, "frequency box / series cutoff radius");
        cmd->add_option("--tail-tol", cfg.tail_tol, "fail if a certified tail exceeds this");
        cmd->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
        cmd->add_option("--output", cfg.output, "write CSV to this file instead of stdout");
        return cmd;
    };
    auto add_rule = [&](CLI::App* cmd) {
        cmd->add_option("--n", cfg.n, "number of points (prime, or 1)");
        cmd->add_option("--z", cfg.z, "generating vector, e.g. 1,2")->delimiter(',');
        return cmd;
    };

    add_common(&app);
    add_rule(&app);
    app.add_option("--shift", cfg.shift, "shift in [0,1)^d")->delimiter(',');
    app.add_option("--lambda", cfg.lambda, "existence-bound exponent in [1, 2 alpha)");
    app.add_option("--objective", cfg.objective, "wce|rms");
    app.add_option("--mode", cfg.mode, "exhaustive|random");
    app.add_option("--count", cfg.count, "random-mode candidate count");
    app.add_option("--seed", cfg.seed, "random-mode seed");
    app.add_option("--primes-upto", cfg.primes_limit, "convergence: primes up to this limit");

    add_common(app.add_subcommand("constants", "tractability constants and threshold roots"));
    auto* wce = add_rule(add_common(app.add_subcommand("wce", "worst-case error of a rule")));
    wce->add_option("--shift", cfg.shift, "shift in [0,1)^d (switches to the shifted rule)")
        ->delimiter(',');
    add_rule(add_common(app.add_subcommand("rms", "root mean squared shifted error")));
    auto* search = add_common(app.add_subcommand("search", "best generating vector"));
    search->add_option("--n", cfg.n, "number of points (prime, or 1)");
    search->add_option("--objective", cfg.objective, "wce|rms");
    search->add_option("--mode", cfg.mode, "exhaustive|random");
    search->add_option("--count", cfg.count, "random-mode candidate count");
    search->add_option("--seed", cfg.seed, "random-mode seed");
    auto* avg = add_common(app.add_subcommand("average-check", "mean error over all z vs bound"));
    avg->add_option("--n", cfg.n, "number of points (prime)");
    avg->add_option("--lambda", cfg.lambda, "existence-bound exponent in [1, 2 alpha)");
    auto* conv = add_common(app.add_subcommand("convergence", "exhaustive-best error per prime"));
    conv->add_option("--primes-upto", cfg.primes_limit, "use every prime up to this limit");
    conv->add_option("--objective", cfg.objective, "wce|rms");
    add_common(app.add_subcommand("verify", "run the cross-validation property suite"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (CLI::App* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
    if (cfg.subcommand.empty()) {
        std::cerr << app.help();
        return 2;
    }

    try {
        return run(cfg);
    } catch (const permlat::SearchSpaceTooLarge& e) {
        std::cerr << "permlat: " << e.what() << '\n';
        return 4;
    } catch (const permlat::Error& e) {
        std::cerr << "permlat: " << e.what() << '\n';
        return 3;
    }
}
