#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "opsw/errors.hpp"
#include "opsw/instance.hpp"
#include "opsw/matrix.hpp"

namespace opsw {

/// Depot-rooted simple path v_1..v_n; the depot v_0 is implicit at both ends.
struct Path {
    std::vector<int> nodes;

    std::size_t size() const noexcept { return nodes.size(); }
    bool empty() const noexcept { return nodes.empty(); }
    int operator[](std::size_t k) const { return nodes[k]; }

    auto operator<=>(const Path&) const = default;

    /// Throws DomainError for repeats, depot visits or ids outside [1, node_count).
    void validate(std::size_t node_count) const {
        std::vector<char> seen(node_count, 0);
        for (int v : nodes) {
            if (v <= 0 || static_cast<std::size_t>(v) >= node_count)
                throw DomainError("path node " + std::to_string(v) + " is not a customer id");
            if (seen[static_cast<std::size_t>(v)]++)
                throw DomainError("path visits node " + std::to_string(v) + " twice");
        }
    }

    double score(std::span<const double> scores) const {
        double total = 0.0;
        for (int v : nodes) total += scores[static_cast<std::size_t>(v)];
        return total;
    }

    /// Closed-tour length under `w` (depot -> v_1 -> ... -> v_n -> depot).
    double tour_length(const Matrix& w) const {
        double len = 0.0;
        int prev = 0;
        for (int v : nodes) {
            len += w(static_cast<std::size_t>(prev), static_cast<std::size_t>(v));
            prev = v;
        }
        return len + w(static_cast<std::size_t>(prev), 0);
    }

    std::string to_string() const {
        std::ostringstream out;
        out << '0';
        for (int v : nodes) out << ' ' << v;
        out << " 0";
        return out.str();
    }
};

/// Result of the abort-and-return recourse on one path and one realization.
struct RecourseOutcome {
    std::size_t last_reached = 0;  // index into the path, 0 = depot only
    double loss = 0.0;

    double objective() const noexcept { return loss == 0.0 ? 0.0 : -loss; }

    bool operator==(const RecourseOutcome&) const = default;
};

namespace detail {

inline std::size_t node(int v) { return static_cast<std::size_t>(v); }

/// Sum of scores of path positions first..n (1-based), accumulated in path order.
inline double suffix_score(const Path& path, std::span<const double> scores, std::size_t first) {
    double loss = 0.0;
    for (std::size_t k = first; k <= path.size(); ++k) loss += scores[node(path[k - 1])];
    return loss;
}

}  // namespace detail

/// Forward checking (sequential realization). Walks the path and aborts before
/// the first node k whose realized prefix length plus expected return exceeds L.
inline RecourseOutcome sequential_recourse(const Path& path, const Matrix& realized,
                                           const Matrix& expected, std::span<const double> scores,
                                           double length_limit) {
    double dist = 0.0;
    std::size_t prev = 0;
    for (std::size_t k = 1; k <= path.size(); ++k) {
        const std::size_t v = detail::node(path[k - 1]);
        dist += realized(prev, v);
        const double length = dist + expected(v, 0);
        if (length > length_limit) return {k - 1, detail::suffix_score(path, scores, k)};
        prev = v;
    }
    return {path.size(), 0.0};
}

/// Backward checking (concurrent realization). Keeps the longest prefix whose
/// realized length plus expected return fits; cancels everything when none does.
inline RecourseOutcome concurrent_recourse(const Path& path, const Matrix& realized,
                                           const Matrix& expected, std::span<const double> scores,
                                           double length_limit) {
    const std::size_t n = path.size();
    std::vector<double> prefix(n + 1, 0.0);
    std::size_t prev = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        const std::size_t v = detail::node(path[k - 1]);
        prefix[k] = prefix[k - 1] + realized(prev, v);
        prev = v;
    }
    for (std::size_t k = n; k >= 1; --k) {
        const double length = prefix[k] + expected(detail::node(path[k - 1]), 0);
        if (length <= length_limit) return {k, detail::suffix_score(path, scores, k + 1)};
    }
    return {0, detail::suffix_score(path, scores, 1)};
}

/// Oracle for the concurrent recourse: tries every cut position and keeps the
/// feasible one with the least loss (largest position on ties).
inline RecourseOutcome brute_force_cut(const Path& path, const Matrix& realized,
                                       const Matrix& expected, std::span<const double> scores,
                                       double length_limit) {
    const std::size_t n = path.size();
    RecourseOutcome best{0, detail::suffix_score(path, scores, 1)};
    double dist = 0.0;
    std::size_t prev = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        const std::size_t v = detail::node(path[k - 1]);
        dist += realized(prev, v);
        prev = v;
        if (dist + expected(v, 0) > length_limit) continue;
        const double loss = detail::suffix_score(path, scores, k + 1);
        if (loss <= best.loss) best = {k, loss};
    }
    return best;
}

/// Oracle for the sequential recourse: simulates the vehicle move by move,
/// checking the remaining budget before committing to each arc.
inline RecourseOutcome step_executor(const Path& path, const Matrix& realized,
                                     const Matrix& expected, std::span<const double> scores,
                                     double length_limit) {
    double consumed = 0.0;
    std::size_t at = 0;
    std::size_t reached = 0;
    for (int next : path.nodes) {
        const std::size_t v = detail::node(next);
        const double after_move = consumed + realized(at, v);
        if (after_move + expected(v, 0) > length_limit) break;
        consumed = after_move;
        at = v;
        ++reached;
    }
    double lost = 0.0;
    for (std::size_t k = reached + 1; k <= path.size(); ++k) lost += scores[detail::node(path[k - 1])];
    return {reached, lost};
}

inline RecourseOutcome sequential_recourse(const Instance& inst, const Path& path,
                                           const Matrix& realized, const Matrix& expected) {
    const auto s = inst.scores();
    return sequential_recourse(path, realized, expected, s, inst.length_limit);
}

inline RecourseOutcome concurrent_recourse(const Instance& inst, const Path& path,
                                           const Matrix& realized, const Matrix& expected) {
    const auto s = inst.scores();
    return concurrent_recourse(path, realized, expected, s, inst.length_limit);
}

}  // namespace opsw
