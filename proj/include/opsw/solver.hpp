#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "opsw/errors.hpp"
#include "opsw/format.hpp"
#include "opsw/instance.hpp"
#include "opsw/models.hpp"
#include "opsw/recourse.hpp"
#include "opsw/uncertainty.hpp"

namespace opsw {

/// Weights of the first-stage length constraint and the name of that row.
struct FirstStageMeasure {
    Matrix weights;
    std::string constraint;
};

/// DOP: dbar. One-stage RO: dbar + theta*dhat. Static and two-stage kinds: the
/// optimistic dbar - dhat.
inline FirstStageMeasure first_stage_measure(Formulation form, const BoxUncertainty& u) {
    switch (form) {
        case Formulation::DOP: return {u.model().dbar, "length"};
        case Formulation::OneStageRO: return {worst_case_weights(u).d, "length"};
        case Formulation::StaticSequential:
        case Formulation::StaticConcurrent:
        case Formulation::TwoStageSequential:
        case Formulation::TwoStageConcurrent: return {optimistic_weights(u.model()).d, "length_optimistic"};
        default: break;
    }
    throw DomainError("formulation " + to_string(form) + " has no first stage");
}

/// Objective of a fixed first-stage path. Recourse kinds add the recourse value
/// at the box maximum d^u (recourse loss is nondecreasing in every weight, so
/// the inner minimum over the box is attained there). Static kinds share the
/// value of their two-stage counterparts.
inline double evaluate_objective(const Instance& inst, const Path& path, Formulation form, const BoxUncertainty& u) {
    path.validate(inst.size());
    if (u.model().size() != inst.size()) throw DomainError("weight model does not match the instance size");
    const auto fs = first_stage_measure(form, u);
    const double length = path.tour_length(fs.weights);
    if (length > inst.length_limit)
        throw FeasibilityError(fs.constraint, "path " + path.to_string() + " violates " + fs.constraint + " (" +
                                                  format_number(length) + " > " + format_number(inst.length_limit) +
                                                  ")");
    const auto scores = inst.scores();
    const double score = path.score(scores);
    if (!has_recourse(form)) return score;
    const Matrix du = worst_case_weights(u).d;
    const auto outcome = uses_concurrent_recourse(form)
                             ? concurrent_recourse(path, du, u.model().dbar, scores, inst.length_limit)
                             : sequential_recourse(path, du, u.model().dbar, scores, inst.length_limit);
    return score - outcome.loss;
}

inline bool first_stage_feasible(const Instance& inst, const Path& path, Formulation form, const BoxUncertainty& u) {
    return path.tour_length(first_stage_measure(form, u).weights) <= inst.length_limit;
}

struct RobustSolution {
    Path path;
    ModelKind kind;
    double objective = 0.0;
    bool optimal = false;
    std::uint64_t nodes_explored = 0;

    bool operator==(const RobustSolution&) const = default;
};

struct SearchLimits {
    std::uint64_t max_nodes = 10'000'000;
};

namespace detail {

class PathSearch {
public:
    PathSearch(const Instance& inst, const BoxUncertainty& u, Formulation form, const SearchLimits& limits)
        : inst_(inst),
          u_(u),
          form_(form),
          limits_(limits),
          fs_(first_stage_measure(form, u).weights),
          du_(worst_case_weights(u).d),
          scores_(inst.scores()) {
        const double slack = 1e-9 * std::max(1.0, inst.length_limit);
        metric_ = fs_.satisfies_triangle_inequality(slack);
        if (has_recourse(form))
            metric_ = metric_ && du_.satisfies_triangle_inequality(slack) &&
                      u.model().dbar.satisfies_triangle_inequality(slack);
        const std::size_t n = inst.size();
        for (std::size_t v = 1; v < n; ++v) order_.push_back(v);
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            if (scores_[a] != scores_[b]) return scores_[a] > scores_[b];
            return a < b;
        });
        visited_.assign(n, 0);
    }

    RobustSolution run() {
        best_path_.nodes.clear();
        best_ = 0.0;
        complete_ = true;
        expand(0.0, 0.0, 0.0);
        RobustSolution out;
        out.path = best_path_;
        out.kind = ModelKind::make(form_, u_.theta());
        out.objective = best_;
        out.optimal = complete_;
        out.nodes_explored = nodes_;
        return out;
    }

private:
    // fs_len: first-stage prefix length; du_len: prefix at d^u; score: prefix score
    void expand(double fs_len, double du_len, double score) {
        if (nodes_ >= limits_.max_nodes) {
            complete_ = false;
            return;
        }
        ++nodes_;
        const std::size_t last = cur_.empty() ? 0 : node(cur_.nodes.back());
        const double L = inst_.length_limit;
        const bool recourse = has_recourse(form_);
        bool stop_children = false;

        if (!cur_.empty()) {
            if (fs_len + fs_(last, 0) <= L) {
                double value = score;
                if (recourse) {
                    const auto outcome = uses_concurrent_recourse(form_)
                                             ? concurrent_recourse(cur_, du_, u_.model().dbar, scores_, L)
                                             : sequential_recourse(cur_, du_, u_.model().dbar, scores_, L);
                    value -= outcome.loss;
                    // Every extension keeps this value and sorts after this path.
                    if (outcome.loss > 0.0 && (metric_ || !uses_concurrent_recourse(form_))) stop_children = true;
                }
                if (value > best_ || (value == best_ && cur_ < best_path_)) {
                    best_ = value;
                    best_path_ = cur_;
                }
            } else if (metric_) {
                return;
            }
        }
        if (stop_children) return;

        double bound = score;
        for (std::size_t v : order_)
            if (!visited_[v] && reachable(v, last, fs_len, du_len)) bound += scores_[v];
        if (bound < best_ || (bound == best_ && best_path_ < cur_)) return;

        for (std::size_t v : order_) {
            if (visited_[v]) continue;
            // An unreachable node is lost in every extension, which then scores
            // no more than one of its own (lexicographically smaller) prefixes.
            if (!reachable(v, last, fs_len, du_len)) continue;
            visited_[v] = 1;
            cur_.nodes.push_back(static_cast<int>(v));
            expand(fs_len + fs_(last, v), du_len + du_(last, v), score + scores_[v]);
            cur_.nodes.pop_back();
            visited_[v] = 0;
            if (nodes_ >= limits_.max_nodes) {
                complete_ = false;
                return;
            }
        }
    }

    bool reachable(std::size_t v, std::size_t last, double fs_len, double du_len) const {
        if (!metric_) return true;
        const double L = inst_.length_limit;
        if (fs_len + fs_(last, v) + fs_(v, 0) > L) return false;
        if (has_recourse(form_) && du_len + du_(last, v) + u_.model().dbar(v, 0) > L) return false;
        return true;
    }

    const Instance& inst_;
    const BoxUncertainty& u_;
    Formulation form_;
    SearchLimits limits_;
    Matrix fs_, du_;
    std::vector<double> scores_;
    std::vector<std::size_t> order_;
    std::vector<char> visited_;
    bool metric_ = false;
    Path cur_;
    Path best_path_;
    double best_ = 0.0;
    bool complete_ = true;
    std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Depth-first search over depot-rooted simple paths. Ties go to the
/// lexicographically smallest node sequence.
inline RobustSolution branch_and_bound(const Instance& inst, const BoxUncertainty& u, Formulation form,
                                       const SearchLimits& limits = {}) {
    if (u.model().size() != inst.size()) throw DomainError("weight model does not match the instance size");
    (void)first_stage_measure(form, u);
    return detail::PathSearch(inst, u, form, limits).run();
}

/// Every simple path over the customers (including the empty one), in
/// lexicographic order.
inline std::vector<Path> enumerate_paths(std::size_t node_count) {
    std::vector<Path> out;
    Path cur;
    std::vector<char> used(node_count, 0);
    auto rec = [&](auto&& self) -> void {
        out.push_back(cur);
        for (std::size_t v = 1; v < node_count; ++v) {
            if (used[v]) continue;
            used[v] = 1;
            cur.nodes.push_back(static_cast<int>(v));
            self(self);
            cur.nodes.pop_back();
            used[v] = 0;
        }
    };
    rec(rec);
    return out;
}

/// Exhaustive oracle: evaluates every first-stage feasible simple path.
inline RobustSolution solve_exhaustive(const Instance& inst, const BoxUncertainty& u, Formulation form) {
    RobustSolution best;
    best.kind = ModelKind::make(form, u.theta());
    best.optimal = true;
    for (const auto& p : enumerate_paths(inst.size())) {
        ++best.nodes_explored;
        if (!first_stage_feasible(inst, p, form, u)) continue;
        const double v = evaluate_objective(inst, p, form, u);
        if (v > best.objective || (v == best.objective && p < best.path)) {
            best.objective = v;
            best.path = p;
        }
    }
    return best;
}

/// One-line record: `kind=static-conc theta=0.5 objective=660 optimal=true explored=812 path=3,7,1`.
inline std::string format_solution(const RobustSolution& s) {
    std::string out = "kind=" + to_string(s.kind.form);
    if (s.kind.theta) out += " theta=" + format_number(*s.kind.theta);
    if (s.kind.relaxed) out += " relax=true";
    out += " objective=" + format_number(s.objective);
    out += std::string(" optimal=") + (s.optimal ? "true" : "false");
    out += " explored=" + std::to_string(s.nodes_explored);
    out += " path=";
    for (std::size_t k = 0; k < s.path.size(); ++k) {
        if (k) out += ',';
        out += std::to_string(s.path[k]);
    }
    return out;
}

inline RobustSolution parse_solution(std::string_view line) {
    RobustSolution s;
    std::optional<Formulation> form;
    std::optional<double> theta;
    bool relaxed = false;
    std::istringstream in{std::string(line)};
    std::string field;
    auto number = [](const std::string& key, const std::string& v) {
        const auto d = detail::to_number(v);
        if (!d) throw ParseError(0, "bad value for " + key + ": " + v);
        return *d;
    };
    while (in >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ParseError(0, "expected key=value, got " + field);
        const std::string key = field.substr(0, eq), value = field.substr(eq + 1);
        if (key == "kind") {
            form = parse_formulation(value);
            if (!form) throw ParseError(0, "unknown model kind " + value);
        } else if (key == "theta") {
            theta = number(key, value);
        } else if (key == "relax") {
            relaxed = value == "true";
        } else if (key == "objective") {
            s.objective = number(key, value);
        } else if (key == "optimal") {
            if (value != "true" && value != "false") throw ParseError(0, "optimal must be true or false");
            s.optimal = value == "true";
        } else if (key == "explored") {
            s.nodes_explored = static_cast<std::uint64_t>(number(key, value));
        } else if (key == "path") {
            std::istringstream ps(value);
            std::string tok;
            while (std::getline(ps, tok, ',')) {
                const auto v = detail::to_number(tok);
                if (!v || *v != static_cast<int>(*v)) throw ParseError(0, "bad path node " + tok);
                s.path.nodes.push_back(static_cast<int>(*v));
            }
        }
    }
    if (!form) throw ParseError(0, "solution record lacks kind=");
    if (is_robust(*form) && !theta) throw ParseError(0, "robust solution record lacks theta=");
    s.kind = ModelKind::make(*form, theta.value_or(0.0), relaxed);
    return s;
}

}  // namespace opsw
