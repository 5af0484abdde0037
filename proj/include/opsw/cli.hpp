#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "opsw/enumerate.hpp"
#include "opsw/errors.hpp"
#include "opsw/experiments.hpp"
#include "opsw/format.hpp"
#include "opsw/instance.hpp"
#include "opsw/lp_format.hpp"
#include "opsw/models.hpp"
#include "opsw/solver.hpp"
#include "opsw/uncertainty.hpp"

namespace opsw::cli {

/// Bad or missing flags; maps to exit status 2.
class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string instance;
    std::optional<double> length_limit;
    std::optional<double> alpha;
    double theta = 0.0;
    std::string theta_grid;
    std::size_t scenarios = 1000;
    std::uint64_t seed = 42;
    std::string model = "static-conc";
    bool relax = false;
    std::string out = ".";
    std::uint64_t limit_nodes = 10'000'000;
    unsigned threads = 1;
    bool sample_std = false;
    std::optional<std::size_t> nodes;
    std::string path;
    std::string policy = "both";
    std::string solution;
    std::string solutions;
    std::size_t cap = 8;
    std::optional<double> big_m;
};

struct Problem {
    Instance inst;
    WeightModel weights;
    double alpha = 0.0;
};

inline Formulation parse_model(const std::string& name) {
    static const std::map<std::string, Formulation> aliases{
        {"dop", Formulation::DOP},
        {"one-stage", Formulation::OneStageRO},
        {"static-seq", Formulation::StaticSequential},
        {"static-sequential", Formulation::StaticSequential},
        {"static-conc", Formulation::StaticConcurrent},
        {"static-concurrent", Formulation::StaticConcurrent},
        {"two-stage-seq", Formulation::TwoStageSequential},
        {"two-stage-sequential", Formulation::TwoStageSequential},
        {"two-stage-conc", Formulation::TwoStageConcurrent},
        {"two-stage-concurrent", Formulation::TwoStageConcurrent},
    };
    const auto it = aliases.find(name);
    if (it == aliases.end()) throw UsageError("unknown model kind '" + name + "'");
    return it->second;
}

inline std::vector<double> parse_theta_grid(const std::string& text) {
    if (text.empty() || text == "default") return default_theta_grid();
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto v = detail::to_number(std::string(detail::trim(tok)));
        if (!v || !(*v >= 0.0 && *v <= 1.0)) throw UsageError("theta grid entries must lie in [0, 1]: '" + tok + "'");
        grid.push_back(*v);
    }
    if (grid.empty()) throw UsageError("empty theta grid");
    return grid;
}

inline Path parse_path_arg(const std::string& text) {
    Path p;
    std::string norm = text;
    std::replace(norm.begin(), norm.end(), ',', ' ');
    std::istringstream in(norm);
    std::string tok;
    while (in >> tok) {
        const auto v = detail::to_number(tok);
        if (!v || *v != static_cast<int>(*v)) throw UsageError("bad path node '" + tok + "'");
        if (*v != 0.0) p.nodes.push_back(static_cast<int>(*v));
    }
    return p;
}

inline Problem load_problem(const RunConfig& cfg) {
    if (cfg.instance.empty()) throw UsageError("--instance is required");
    Problem pr;
    std::optional<WeightModel> given;
    const std::filesystem::path file(cfg.instance);
    if (file.extension() == ".json") {
        auto li = read_instance_json(read_text_file(file));
        pr.inst = std::move(li.instance);
        given = std::move(li.weights);
        if (cfg.length_limit) pr.inst.length_limit = *cfg.length_limit;
    } else {
        if (!cfg.length_limit) throw UsageError("--L is required for score files");
        pr.inst = load_tsiligirides(cfg.instance, *cfg.length_limit);
    }
    if (cfg.nodes) {
        if (*cfg.nodes < 1) throw UsageError("--nodes must be at least 1");
        pr.inst = truncate(pr.inst, *cfg.nodes);
        if (given && given->size() > pr.inst.size()) {
            const std::size_t n = pr.inst.size();
            WeightModel cut{Matrix(n), Matrix(n)};
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    cut.dbar(i, j) = given->dbar(i, j);
                    cut.dhat(i, j) = given->dhat(i, j);
                }
            given = std::move(cut);
        }
    }
    pr.inst.validate();
    pr.weights = given ? *given : euclidean_weights(pr.inst);
    if (cfg.alpha) {
        pr.weights = apply_deviation(pr.weights, *cfg.alpha);
        pr.alpha = *cfg.alpha;
    }
    pr.weights.validate();
    return pr;
}

inline std::vector<RobustSolution> read_solutions(const std::string& file) {
    std::vector<RobustSolution> out;
    std::istringstream in(read_text_file(file));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        try {
            out.push_back(parse_solution(t));
        } catch (const ParseError& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return out;
}

/// Rebuilds a depot cycle from `x_i_j value` lines (values above 0.5 select
/// the arc; other variables and `#` comments are ignored).
inline Path path_from_arcs(std::string_view text, std::size_t node_count) {
    std::vector<int> next(node_count, -1), prev(node_count, -1);
    std::size_t arcs = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::string norm(t);
        std::replace(norm.begin(), norm.end(), '=', ' ');
        const auto fields = detail::split_ws(norm);
        if (fields.size() < 2) throw ParseError(line_no, "expected `name value`");
        const std::string& name = fields.front();
        if (name.rfind("x_", 0) != 0) continue;
        const auto value = detail::to_number(fields.back());
        if (!value) throw ParseError(line_no, "bad value for " + name);
        if (*value <= 0.5) continue;
        std::size_t i = 0, j = 0;
        char tail = 0;
        if (std::sscanf(name.c_str(), "x_%zu_%zu%c", &i, &j, &tail) != 2)
            throw ParseError(line_no, "unrecognized arc variable " + name);
        if (i >= node_count || j >= node_count || i == j)
            throw FormatError("arc " + name + " does not exist in this instance");
        if (next[i] != -1) throw FormatError("node " + std::to_string(i) + " has two outgoing arcs");
        if (prev[j] != -1) throw FormatError("node " + std::to_string(j) + " has two incoming arcs");
        next[i] = static_cast<int>(j);
        prev[j] = static_cast<int>(i);
        ++arcs;
    }
    Path p;
    if (arcs == 0) return p;
    if (next[0] == -1 || prev[0] == -1) throw FormatError("selected arcs do not leave and re-enter the depot");
    int at = next[0];
    std::size_t used = 1;
    while (at != 0) {
        if (at == -1) throw FormatError("path from the depot ends at a dead end");
        p.nodes.push_back(at);
        at = next[static_cast<std::size_t>(at)];
        ++used;
        if (used > arcs) break;
    }
    if (used != arcs) throw FormatError("selected arcs form more than one cycle (" + std::to_string(arcs - used) +
                                        " arcs off the depot cycle)");
    return p;
}

inline std::string lp_file_name(const ModelKind& kind, double alpha, double L) {
    std::string name = to_string(kind.form);
    if (kind.theta) name += "_theta" + format_number(*kind.theta);
    name += "_alpha" + format_number(alpha) + "_L" + format_number(L);
    if (kind.relaxed) name += "_relax";
    return name + ".lp";
}

inline MilpModel build_model(const Problem& pr, const ModelKind& kind, const BuildOptions& opts = {}) {
    switch (kind.form) {
        case Formulation::DOP: return build_dop(pr.inst, pr.weights);
        case Formulation::OneStageRO: return build_one_stage_ro(pr.inst, pr.weights, kind.theta_or_zero());
        case Formulation::StaticSequential:
            return build_static_sequential(pr.inst, pr.weights, kind.theta_or_zero(), kind.relaxed, opts);
        case Formulation::StaticConcurrent: return build_static_concurrent(pr.inst, pr.weights, kind.theta_or_zero());
        default: break;
    }
    throw UsageError("model kind " + to_string(kind.form) + " cannot be exported; use static-seq or static-conc");
}

inline int cmd_solve(const RunConfig& cfg, std::ostream& out) {
    const auto form = parse_model(cfg.model);
    const auto pr = load_problem(cfg);
    const BoxUncertainty u(pr.weights, cfg.theta);
    const auto sol = branch_and_bound(pr.inst, u, form, SearchLimits{cfg.limit_nodes});
    out << "seed=" << cfg.seed << "\n" << format_solution(sol) << "\n";
    return 0;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    if (cfg.policy != "both" && cfg.policy != "sequential" && cfg.policy != "concurrent")
        throw UsageError("--policy must be sequential, concurrent or both");
    const auto pr = load_problem(cfg);
    out << "seed=" << cfg.seed << " scenarios=" << cfg.scenarios << "\n";
    Path path;
    if (!cfg.path.empty()) {
        path = parse_path_arg(cfg.path);
        path.validate(pr.inst.size());
    } else {
        const BoxUncertainty u(pr.weights, cfg.theta);
        const auto sol = branch_and_bound(pr.inst, u, parse_model(cfg.model), SearchLimits{cfg.limit_nodes});
        out << format_solution(sol) << "\n";
        path = sol.path;
    }
    const ScenarioPool pool(pr.weights, cfg.scenarios, cfg.seed, cfg.threads);
    const SimulationOptions opts{cfg.threads, cfg.sample_std, false};
    for (auto policy : {Policy::Sequential, Policy::Concurrent}) {
        if (cfg.policy != "both" && cfg.policy != to_string(policy)) continue;
        const auto s = simulate(pr.inst, path, pr.weights, pool, policy, opts);
        out << "path=" << path.to_string() << " policy=" << to_string(policy) << " mean=" << format_number(s.mean)
            << " std=" << format_number(s.std) << "\n";
    }
    return 0;
}

inline int cmd_table(const RunConfig& cfg, std::ostream& out) {
    const auto pr = load_problem(cfg);
    TableConfig tc;
    tc.theta_grid = parse_theta_grid(cfg.theta_grid);
    tc.n_scenarios = cfg.scenarios;
    tc.base_seed = cfg.seed;
    tc.threads = cfg.threads;
    tc.sample_std = cfg.sample_std;
    tc.limits.max_nodes = cfg.limit_nodes;
    std::vector<RobustSolution> imported;
    if (!cfg.solutions.empty()) {
        imported = read_solutions(cfg.solutions);
        tc.imported = &imported;
    }
    const auto rows = run_table(pr.inst, pr.weights, tc);
    emit_csv(rows, cfg.out);
    out << "seed=" << cfg.seed << " scenarios=" << cfg.scenarios << " std=" << (cfg.sample_std ? "sample" : "population")
        << " out=" << (std::filesystem::path(cfg.out) / "table.csv").string() << "\n";
    out << table_csv(rows);
    return 0;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const auto pr = load_problem(cfg);
    if (pr.inst.size() > cfg.cap)
        throw UsageError("instance has " + std::to_string(pr.inst.size()) + " nodes; verification cap is " +
                         std::to_string(cfg.cap));
    VerifyOptions opts;
    opts.size_cap = cfg.cap;
    opts.build.big_m = cfg.big_m;
    const auto report = verify_equivalences(pr.inst, pr.weights, parse_theta_grid(cfg.theta_grid), opts);
    out << "seed=" << cfg.seed << "\n" << report.text();
    return report.passed() ? 0 : 1;
}

inline int cmd_export_lp(const RunConfig& cfg, std::ostream& out) {
    const auto form = parse_model(cfg.model);
    const auto pr = load_problem(cfg);
    std::vector<double> grid{cfg.theta};
    if (!cfg.theta_grid.empty()) grid = parse_theta_grid(cfg.theta_grid);
    if (!is_robust(form)) grid = {0.0};
    std::error_code ec;
    std::filesystem::create_directories(cfg.out, ec);
    if (ec) throw IoError("cannot create " + cfg.out + ": " + ec.message());
    out << "seed=" << cfg.seed << "\n";
    for (double theta : grid) {
        const auto kind = ModelKind::make(form, theta, cfg.relax);
        auto model = build_model(pr, kind, BuildOptions{cfg.big_m});
        model.set_meta("alpha", format_number(pr.alpha));
        const auto file = std::filesystem::path(cfg.out) / lp_file_name(kind, pr.alpha, pr.inst.length_limit);
        write_text_file(file, export_lp(model));
        out << file.string() << "\n";
    }
    return 0;
}

inline int cmd_import_solution(const RunConfig& cfg, std::ostream& out) {
    if (cfg.solution.empty()) throw UsageError("--solution is required");
    const auto form = parse_model(cfg.model);
    const auto pr = load_problem(cfg);
    const Path path = path_from_arcs(read_text_file(cfg.solution), pr.inst.size());
    const BoxUncertainty u(pr.weights, cfg.theta);
    RobustSolution sol;
    sol.path = path;
    sol.kind = ModelKind::make(form, cfg.theta);
    sol.objective = evaluate_objective(pr.inst, path, form, u);
    sol.optimal = true;

    const std::string store =
        cfg.solutions.empty() ? (std::filesystem::path(cfg.out) / "solutions.txt").string() : cfg.solutions;
    std::vector<RobustSolution> all;
    if (std::filesystem::exists(store)) all = read_solutions(store);
    std::erase_if(all, [&](const RobustSolution& s) { return s.kind.form == form && s.kind.theta == sol.kind.theta; });
    all.push_back(sol);
    std::string text;
    for (const auto& s : all) text += format_solution(s) + "\n";
    const auto parent = std::filesystem::path(store).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    write_text_file(store, text);
    out << "seed=" << cfg.seed << "\n" << format_solution(sol) << "\n";
    return 0;
}

/// Runs the command line `args` (without the program name). Returns the exit status.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Robust orienteering with stochastic weights: solve, simulate, tabulate, verify, export", "opsw"};
    app.set_config("--config", "", "TOML/INI file using the flag names as keys; command-line flags win");
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<double> L, alpha;
    std::optional<std::size_t> nodes;
    std::optional<double> big_m;
    app.add_option("--instance", cfg.instance, "Instance file: `x y score` lines or canonical .json");
    app.add_option("-L,--L", L, "Length budget L (length units); required for score files")->check(CLI::PositiveNumber);
    app.add_option("--alpha", alpha, "Deviation fraction: dhat = alpha * dbar (dimensionless, 0..1)")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--theta", cfg.theta, "Protection level theta (dimensionless, 0..1)")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    app.add_option("--theta-grid", cfg.theta_grid,
                   "Comma-separated theta values (dimensionless, 0..1); `default` = 0,0.1,...,1");
    app.add_option("--scenarios", cfg.scenarios, "Number of simulated scenarios (count)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "Base seed for all randomness (integer; echoed in outputs)")->capture_default_str();
    app.add_option("--model", cfg.model,
                   "Model kind: dop, one-stage, static-seq, static-conc, two-stage-seq, two-stage-conc")->capture_default_str();
    app.add_flag("--relax", cfg.relax, "Continuous layer variables in static-seq exports");
    app.add_option("--out", cfg.out, "Output directory (path)")->capture_default_str();
    app.add_option("--limit-nodes", cfg.limit_nodes, "Search node budget (count)")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--threads", cfg.threads, "Worker threads for scenario evaluation (count)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_flag("--sample-std", cfg.sample_std, "Divide by n-1 instead of n in standard deviations");
    app.add_option("--nodes", nodes, "Keep only the first N nodes of the instance, depot included (count)");
    app.add_option("--path", cfg.path, "Path to simulate as node ids, e.g. 3,1,2 (depot implicit)");
    app.add_option("--policy", cfg.policy, "Recourse policy to simulate: sequential, concurrent or both")->capture_default_str();
    app.add_option("--solution", cfg.solution, "External solver output with `x_i_j value` lines (path)");
    app.add_option("--solutions", cfg.solutions, "Stored solution records (path); import writes, table reads");
    app.add_option("--cap", cfg.cap, "Largest instance (nodes incl. depot) accepted by verify (count)")->capture_default_str();
    app.add_option("--big-m", big_m, "Override the big-M constant (length units; fault injection)");

    auto* solve = app.add_subcommand("solve", "Solve one model kind at one theta; prints the solution record");
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a path (given or solved) under the recourse policies");
    auto* table = app.add_subcommand("table", "Theta sweep of one-stage and two-stage solutions; writes CSV tables");
    auto* verify = app.add_subcommand("verify", "Check the static/two-stage equivalences by enumeration");
    auto* export_lp_cmd = app.add_subcommand("export-lp", "Write LP files for the requested kind and theta values");
    auto* import = app.add_subcommand("import-solution", "Import an external solver's arcs as a stored solution");

    std::vector<std::string> storage{"opsw"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : storage) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    cfg.length_limit = L;
    cfg.alpha = alpha;
    cfg.nodes = nodes;
    cfg.big_m = big_m;

    try {
        if (solve->parsed()) return cmd_solve(cfg, out);
        if (simulate_cmd->parsed()) return cmd_simulate(cfg, out);
        if (table->parsed()) return cmd_table(cfg, out);
        if (verify->parsed()) return cmd_verify(cfg, out);
        if (export_lp_cmd->parsed()) return cmd_export_lp(cfg, out);
        if (import->parsed()) return cmd_import_solution(cfg, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const FeasibilityError& e) {
        err << "error: " << e.what() << " [constraint " << e.constraint() << "]\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace opsw::cli
