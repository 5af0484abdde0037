#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "opsw/enumerate.hpp"
#include "opsw/errors.hpp"
#include "opsw/format.hpp"
#include "opsw/instance.hpp"
#include "opsw/models.hpp"
#include "opsw/recourse.hpp"
#include "opsw/solver.hpp"
#include "opsw/uncertainty.hpp"

namespace opsw {

enum class Policy { Sequential, Concurrent };

inline std::string to_string(Policy p) { return p == Policy::Sequential ? "sequential" : "concurrent"; }

/// Pairwise (cascade) summation; the result depends only on the values and
/// their order, never on how the work was scheduled.
inline double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

/// Runs f(i) for i in [0, n) on up to `threads` workers (static striping).
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, n);
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += workers) f(i);
        });
}

/// Scenarios 0..n-1 of the stream rooted at `base_seed`.
class ScenarioPool {
public:
    ScenarioPool(const WeightModel& w, std::size_t n, std::uint64_t base_seed, unsigned threads = 1)
        : seed_(base_seed), scenarios_(n) {
        if (n == 0) throw DomainError("scenario count must be at least 1");
        parallel_for(n, threads, [&](std::size_t i) {
            scenarios_[i] = sample_scenario(w, base_seed, static_cast<std::int64_t>(i));
        });
    }

    std::size_t size() const noexcept { return scenarios_.size(); }
    std::uint64_t seed() const noexcept { return seed_; }
    const Scenario& operator[](std::size_t i) const { return scenarios_[i]; }
    const std::vector<Scenario>& scenarios() const noexcept { return scenarios_; }

private:
    std::uint64_t seed_;
    std::vector<Scenario> scenarios_;
};

struct SimulationOptions {
    unsigned threads = 1;
    bool sample_std = false;  // divide by n-1 instead of n
    bool keep_objectives = false;
};

struct SimulationSummary {
    std::size_t n_scenarios = 0;
    double mean = 0.0;
    double std = 0.0;
    std::vector<double> per_scenario_objectives;
};

inline SimulationSummary summarize(std::vector<double> objectives, bool sample_std, bool keep) {
    SimulationSummary s;
    s.n_scenarios = objectives.size();
    const auto n = static_cast<double>(objectives.size());
    s.mean = pairwise_sum(objectives) / n;
    std::vector<double> sq(objectives.size());
    for (std::size_t i = 0; i < objectives.size(); ++i) sq[i] = (objectives[i] - s.mean) * (objectives[i] - s.mean);
    const double denom = sample_std && objectives.size() > 1 ? n - 1.0 : n;
    s.std = std::sqrt(pairwise_sum(sq) / denom);
    if (keep) s.per_scenario_objectives = std::move(objectives);
    return s;
}

/// Score minus recourse loss of `path` in every pool scenario.
inline SimulationSummary simulate(const Instance& inst, const Path& path, const WeightModel& w,
                                  const ScenarioPool& pool, Policy policy, const SimulationOptions& opts = {}) {
    path.validate(inst.size());
    const auto scores = inst.scores();
    const double score = path.score(scores);
    std::vector<double> objectives(pool.size());
    parallel_for(pool.size(), opts.threads, [&](std::size_t i) {
        const auto& d = pool[i].d;
        const auto out = policy == Policy::Sequential
                             ? sequential_recourse(path, d, w.dbar, scores, inst.length_limit)
                             : concurrent_recourse(path, d, w.dbar, scores, inst.length_limit);
        objectives[i] = score - out.loss;
    });
    return summarize(std::move(objectives), opts.sample_std, opts.keep_objectives);
}

inline SimulationSummary simulate(const Instance& inst, const Path& path, const WeightModel& w, std::size_t n,
                                  std::uint64_t base_seed, Policy policy, const SimulationOptions& opts = {}) {
    const ScenarioPool pool(w, n, base_seed, opts.threads);
    return simulate(inst, path, w, pool, policy, opts);
}

/// Theta grid 0, 0.1, ..., 1.
inline std::vector<double> default_theta_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
    return grid;
}

struct TableCell {
    double obj = 0.0;
    double seq_mean = 0.0;
    double seq_std = 0.0;
    double conc_mean = 0.0;
    double conc_std = 0.0;

    bool operator==(const TableCell&) const = default;
};

struct TableRow {
    double theta = 0.0;
    TableCell one_stage;
    TableCell two_stage;
    bool one_stage_optimal = true;
    bool two_stage_optimal = true;

    bool operator==(const TableRow&) const = default;
};

struct TableConfig {
    std::vector<double> theta_grid = default_theta_grid();
    std::size_t n_scenarios = 1000;
    std::uint64_t base_seed = 42;
    unsigned threads = 1;
    bool sample_std = false;
    SearchLimits limits;
    /// When set, solutions are taken from here (matched on kind and theta)
    /// instead of the built-in search.
    const std::vector<RobustSolution>* imported = nullptr;
};

namespace detail {

inline RobustSolution table_solution(const Instance& inst, const BoxUncertainty& u, Formulation form,
                                     const TableConfig& cfg) {
    if (!cfg.imported) return branch_and_bound(inst, u, form, cfg.limits);
    for (const auto& s : *cfg.imported) {
        if (s.kind.form != form || !s.kind.theta || *s.kind.theta != u.theta()) continue;
        RobustSolution out = s;
        out.objective = evaluate_objective(inst, s.path, form, u);
        return out;
    }
    throw DomainError("no imported " + to_string(form) + " solution for theta=" + format_number(u.theta()));
}

inline TableCell table_cell(const Instance& inst, const WeightModel& w, const ScenarioPool& pool,
                            const RobustSolution& sol, const TableConfig& cfg) {
    const SimulationOptions opts{cfg.threads, cfg.sample_std, false};
    const auto seq = simulate(inst, sol.path, w, pool, Policy::Sequential, opts);
    const auto conc = simulate(inst, sol.path, w, pool, Policy::Concurrent, opts);
    return {sol.objective, seq.mean, seq.std, conc.mean, conc.std};
}

}  // namespace detail

/// One row per theta: the one-stage RO and Static-Concurrent solutions, each
/// simulated under both recourse policies against one shared scenario pool.
inline std::vector<TableRow> run_table(const Instance& inst, const WeightModel& w, const TableConfig& cfg) {
    const ScenarioPool pool(w, cfg.n_scenarios, cfg.base_seed, cfg.threads);
    std::vector<TableRow> rows;
    for (double theta : cfg.theta_grid) {
        const BoxUncertainty u(w, theta);
        const auto one = detail::table_solution(inst, u, Formulation::OneStageRO, cfg);
        const auto two = detail::table_solution(inst, u, Formulation::StaticConcurrent, cfg);
        TableRow row;
        row.theta = theta;
        row.one_stage = detail::table_cell(inst, w, pool, one, cfg);
        row.two_stage = detail::table_cell(inst, w, pool, two, cfg);
        row.one_stage_optimal = one.optimal;
        row.two_stage_optimal = two.optimal;
        rows.push_back(row);
    }
    return rows;
}

inline constexpr std::string_view kTableHeader =
    "theta,one_stage_obj,one_stage_seq_mean,one_stage_seq_std,one_stage_conc_mean,one_stage_conc_std,"
    "two_stage_obj,two_stage_seq_mean,two_stage_seq_std,two_stage_conc_mean,two_stage_conc_std,"
    "one_stage_optimal,two_stage_optimal";

/// Wide table with two decimals per statistic.
inline std::string table_csv(const std::vector<TableRow>& rows) {
    std::string out(kTableHeader);
    out += '\n';
    auto cell = [&](const TableCell& c) {
        for (double v : {c.obj, c.seq_mean, c.seq_std, c.conc_mean, c.conc_std}) out += "," + format_fixed2(v);
    };
    for (const auto& r : rows) {
        out += format_fixed2(r.theta);
        cell(r.one_stage);
        cell(r.two_stage);
        out += r.one_stage_optimal ? ",true" : ",false";
        out += r.two_stage_optimal ? ",true" : ",false";
        out += '\n';
    }
    return out;
}

inline constexpr std::string_view kLongHeader = "theta,model,policy,stat,value";

/// Long form (theta, model, policy, stat, value) at full precision.
inline std::string table_long_csv(const std::vector<TableRow>& rows) {
    std::string out(kLongHeader);
    out += '\n';
    for (const auto& r : rows) {
        const std::string th = format_number(r.theta);
        for (int m = 0; m < 2; ++m) {
            const auto& c = m == 0 ? r.one_stage : r.two_stage;
            const std::string model = m == 0 ? "one-stage" : "two-stage";
            const bool optimal = m == 0 ? r.one_stage_optimal : r.two_stage_optimal;
            auto line = [&](const char* policy, const char* stat, double v) {
                out += th + "," + model + "," + policy + "," + stat + "," + format_number(v) + "\n";
            };
            line("robust", "obj", c.obj);
            line("robust", "optimal", optimal ? 1.0 : 0.0);
            line("sequential", "mean", c.seq_mean);
            line("sequential", "std", c.seq_std);
            line("concurrent", "mean", c.conc_mean);
            line("concurrent", "std", c.conc_std);
        }
    }
    return out;
}

namespace detail {

inline std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline double csv_number(const std::string& tok, std::size_t line) {
    const auto v = to_number(tok);
    if (!v) throw ParseError(line, "bad number " + tok);
    return *v;
}

}  // namespace detail

inline std::vector<TableRow> parse_table_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::vector<TableRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line != kTableHeader) throw ParseError(1, "unexpected table header");
            continue;
        }
        if (line.empty()) continue;
        const auto f = detail::split_csv(line);
        if (f.size() != 13) throw ParseError(line_no, "expected 13 fields");
        TableRow r;
        r.theta = detail::csv_number(f[0], line_no);
        auto cell = [&](std::size_t at, TableCell& c) {
            c.obj = detail::csv_number(f[at], line_no);
            c.seq_mean = detail::csv_number(f[at + 1], line_no);
            c.seq_std = detail::csv_number(f[at + 2], line_no);
            c.conc_mean = detail::csv_number(f[at + 3], line_no);
            c.conc_std = detail::csv_number(f[at + 4], line_no);
        };
        cell(1, r.one_stage);
        cell(6, r.two_stage);
        for (std::size_t k : {11u, 12u})
            if (f[k] != "true" && f[k] != "false") throw ParseError(line_no, "optimal flag must be true or false");
        r.one_stage_optimal = f[11] == "true";
        r.two_stage_optimal = f[12] == "true";
        rows.push_back(r);
    }
    if (line_no == 0) throw ParseError(0, "empty table");
    return rows;
}

inline std::vector<TableRow> parse_table_long_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::vector<TableRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line != kLongHeader) throw ParseError(1, "unexpected long-table header");
            continue;
        }
        if (line.empty()) continue;
        const auto f = detail::split_csv(line);
        if (f.size() != 5) throw ParseError(line_no, "expected 5 fields");
        const double theta = detail::csv_number(f[0], line_no);
        if (rows.empty() || rows.back().theta != theta) rows.push_back(TableRow{theta, {}, {}, true, true});
        auto& r = rows.back();
        const bool one = f[1] == "one-stage";
        if (!one && f[1] != "two-stage") throw ParseError(line_no, "unknown model " + f[1]);
        auto& c = one ? r.one_stage : r.two_stage;
        const double v = detail::csv_number(f[4], line_no);
        const std::string key = f[2] + "/" + f[3];
        if (key == "robust/obj") c.obj = v;
        else if (key == "robust/optimal") (one ? r.one_stage_optimal : r.two_stage_optimal) = v != 0.0;
        else if (key == "sequential/mean") c.seq_mean = v;
        else if (key == "sequential/std") c.seq_std = v;
        else if (key == "concurrent/mean") c.conc_mean = v;
        else if (key == "concurrent/std") c.conc_std = v;
        else throw ParseError(line_no, "unknown statistic " + key);
    }
    return rows;
}

inline void write_text_file(const std::filesystem::path& file, std::string_view text) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + file.string());
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + file.string());
}

inline std::string read_text_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes table.csv and table_long.csv into `dir` (created if missing).
inline void emit_csv(const std::vector<TableRow>& rows, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    write_text_file(dir / "table.csv", table_csv(rows));
    write_text_file(dir / "table_long.csv", table_long_csv(rows));
}

// ---------------------------------------------------------------------------
// Equivalence verification

struct VerifyOptions {
    std::size_t size_cap = 8;
    /// Largest |N+| for which the full static models are enumerated per path;
    /// above it the static recourse part is solved via the compact recourse
    /// models at d^u.
    std::size_t full_model_cap = 6;
    bool check_relaxed = true;
    BuildOptions build;  // big-M override for fault injection
};

struct VerifyWitness {
    Path path;
    std::string lhs_name, rhs_name;
    double lhs = 0.0, rhs = 0.0;  // NaN marks an infeasible MILP
};

struct ThetaCheck {
    double theta = 0.0;
    std::size_t feasible_paths = 0;
    double two_stage_seq = 0.0, two_stage_conc = 0.0;
    double static_seq = 0.0, static_conc = 0.0;
    std::optional<double> static_seq_relaxed;
    std::optional<double> dop;  // theta = 0 only
    double max_discrepancy = 0.0;
    std::optional<VerifyWitness> witness;

    bool passed() const { return max_discrepancy == 0.0; }
};

struct VerifyReport {
    std::vector<ThetaCheck> checks;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed()) return false;
        return true;
    }

    double max_discrepancy() const {
        double d = 0.0;
        for (const auto& c : checks) d = std::max(d, c.max_discrepancy);
        return d;
    }

    std::string text() const {
        std::ostringstream out;
        for (const auto& c : checks) {
            out << "theta=" << format_number(c.theta) << " paths=" << c.feasible_paths
                << " two-stage-seq=" << format_number(c.two_stage_seq)
                << " two-stage-conc=" << format_number(c.two_stage_conc)
                << " static-seq=" << format_number(c.static_seq) << " static-conc=" << format_number(c.static_conc);
            if (c.static_seq_relaxed) out << " static-seq-relaxed=" << format_number(*c.static_seq_relaxed);
            if (c.dop) out << " dop=" << format_number(*c.dop);
            out << " discrepancy=" << format_number(c.max_discrepancy) << (c.passed() ? " PASS" : " FAIL") << "\n";
            if (c.witness) {
                const auto& w = *c.witness;
                out << "  witness path=" << w.path.to_string() << " " << w.lhs_name << "=" << format_number(w.lhs)
                    << " " << w.rhs_name << "=" << (std::isnan(w.rhs) ? std::string("infeasible") : format_number(w.rhs))
                    << "\n";
            }
        }
        out << "result=" << (passed() ? "PASS" : "FAIL") << " max_discrepancy=" << format_number(max_discrepancy())
            << "\n";
        return out.str();
    }
};

namespace detail {

inline void record(ThetaCheck& c, const Path& p, const char* lhs_name, double lhs, const char* rhs_name,
                   std::optional<double> rhs) {
    const double diff = rhs ? std::abs(lhs - *rhs) : std::numeric_limits<double>::infinity();
    if (diff > c.max_discrepancy || (diff > 0.0 && !c.witness)) {
        c.max_discrepancy = std::max(c.max_discrepancy, diff);
        c.witness = VerifyWitness{p, lhs_name, rhs_name, lhs, rhs.value_or(std::nan(""))};
    }
}

inline std::optional<double> fixed_path_optimum(const MilpModel& m, const Instance& inst, const Path& p) {
    const auto bounds = first_stage_bounds(m, inst, p);
    const auto res = enumerate_milp(m, EnumerationOptions{24, &bounds});
    if (!res.feasible) return std::nullopt;
    return res.objective;
}

}  // namespace detail

/// Checks that the static and two-stage models agree path by path and that
/// their optima coincide for every theta (and match the DOP at theta = 0).
inline VerifyReport verify_equivalences(const Instance& inst, const WeightModel& w,
                                        const std::vector<double>& theta_grid, const VerifyOptions& opts = {}) {
    if (inst.size() > opts.size_cap)
        throw CapacityError("instance has " + std::to_string(inst.size()) + " nodes, verification cap is " +
                            std::to_string(opts.size_cap));
    const auto paths = enumerate_paths(inst.size());
    const auto scores = inst.scores();
    const bool full = inst.size() <= opts.full_model_cap && inst.customers() > 0;
    VerifyReport report;
    for (double theta : theta_grid) {
        const BoxUncertainty u(w, theta);
        const Scenario du = worst_case_weights(u);
        ThetaCheck c;
        c.theta = theta;
        std::optional<MilpModel> sseq, sconc, srel;
        if (full) {
            sseq = build_static_sequential(inst, w, theta, false, opts.build);
            sconc = build_static_concurrent(inst, w, theta);
            if (opts.check_relaxed) srel = build_static_sequential(inst, w, theta, true, opts.build);
        }
        if (opts.check_relaxed) c.static_seq_relaxed = 0.0;
        for (const auto& p : paths) {
            if (!first_stage_feasible(inst, p, Formulation::TwoStageSequential, u)) continue;
            ++c.feasible_paths;
            const double ts = evaluate_objective(inst, p, Formulation::TwoStageSequential, u);
            const double tc = evaluate_objective(inst, p, Formulation::TwoStageConcurrent, u);
            std::optional<double> ss, sc, sr;
            if (full) {
                ss = detail::fixed_path_optimum(*sseq, inst, p);
                sc = detail::fixed_path_optimum(*sconc, inst, p);
                if (srel) sr = detail::fixed_path_optimum(*srel, inst, p);
            } else {
                const double score = p.score(scores);
                if (p.empty()) {
                    ss = sc = sr = score;
                } else {
                    const auto rs = enumerate_milp(build_recourse_sequential(inst, p, du, w, opts.build));
                    const auto rc = enumerate_milp(build_recourse_concurrent(inst, p, du, w));
                    if (rs.feasible) ss = score + rs.objective;
                    if (rc.feasible) sc = score + rc.objective;
                    sr = ss;
                }
            }
            detail::record(c, p, "two-stage-seq", ts, "static-seq", ss);
            detail::record(c, p, "two-stage-conc", tc, "static-conc", sc);
            if (opts.check_relaxed) detail::record(c, p, "static-seq", ss.value_or(ts), "static-seq-relaxed", sr);
            c.two_stage_seq = std::max(c.two_stage_seq, ts);
            c.two_stage_conc = std::max(c.two_stage_conc, tc);
            c.static_seq = std::max(c.static_seq, ss.value_or(c.static_seq));
            c.static_conc = std::max(c.static_conc, sc.value_or(c.static_conc));
            if (sr) c.static_seq_relaxed = std::max(*c.static_seq_relaxed, *sr);
        }
        const Path none;
        auto optimum_gap = [&](const char* a, double va, const char* b, double vb) {
            if (va != vb) detail::record(c, none, a, va, b, vb);
        };
        optimum_gap("two-stage-seq*", c.two_stage_seq, "two-stage-conc*", c.two_stage_conc);
        optimum_gap("static-seq*", c.static_seq, "static-conc*", c.static_conc);
        optimum_gap("two-stage-seq*", c.two_stage_seq, "static-seq*", c.static_seq);
        if (c.static_seq_relaxed) optimum_gap("static-seq*", c.static_seq, "static-seq-relaxed*", *c.static_seq_relaxed);
        if (theta == 0.0) {
            double dop = 0.0;
            for (const auto& p : paths)
                if (p.tour_length(w.dbar) <= inst.length_limit) dop = std::max(dop, p.score(scores));
            c.dop = dop;
            optimum_gap("two-stage-seq*", c.two_stage_seq, "dop*", dop);
        }
        report.checks.push_back(std::move(c));
    }
    return report;
}

}  // namespace opsw
