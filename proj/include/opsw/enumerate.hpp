#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "opsw/errors.hpp"
#include "opsw/milp.hpp"
#include "opsw/simplex.hpp"

namespace opsw {

struct EnumerationOptions {
    std::size_t max_binaries = 24;
    /// Replaces the model's variable bounds when set (size must match).
    const std::vector<std::pair<double, double>>* bounds = nullptr;
};

struct EnumerationResult {
    bool feasible = false;
    double objective = 0.0;
    std::vector<double> assignment;
    std::size_t free_binaries = 0;  // binaries left after presolve
    std::uint64_t leaves = 0;
};

namespace detail {

/// Exhaustive 0/1 search for small models. A presolve pass (activity-based
/// bound tightening, redundant-row removal and dual fixing) runs first; only the
/// binaries it leaves free count against the cap. Continuous variables left
/// free at a leaf are settled by a dense LP.
class Enumerator {
public:
    Enumerator(const MilpModel& m, const EnumerationOptions& opts) : m_(m), opts_(opts) {
        const std::size_t n = m.variable_count();
        lo_.resize(n);
        hi_.resize(n);
        for (std::size_t v = 0; v < n; ++v) {
            lo_[v] = m.variables()[v].lo;
            hi_[v] = m.variables()[v].hi;
        }
        if (opts.bounds) {
            if (opts.bounds->size() != n) throw DomainError("bounds override does not match the model");
            for (std::size_t v = 0; v < n; ++v) std::tie(lo_[v], hi_[v]) = (*opts.bounds)[v];
        }
        for (std::size_t v = 0; v < n; ++v)
            if (!std::isfinite(lo_[v]) || !std::isfinite(hi_[v]))
                throw FormatError("enumeration needs finite bounds on " + m.variables()[v].name);
        cost_.assign(n, 0.0);
        for (const auto& t : m.objective()) cost_[t.var] += t.coeff;
        active_.assign(m.constraint_count(), 1);
        cols_.resize(n);
        for (std::size_t r = 0; r < m.constraint_count(); ++r)
            for (const auto& t : m.constraints()[r].terms) cols_[t.var].push_back({r, t.coeff});
    }

    EnumerationResult run() {
        EnumerationResult out;
        for (std::size_t v = 0; v < lo_.size(); ++v)
            if (lo_[v] > hi_[v]) return out;
        if (!presolve()) return out;

        for (std::size_t v = 0; v < lo_.size(); ++v) {
            if (lo_[v] == hi_[v]) continue;
            if (m_.variables()[v].kind == VarKind::Binary) free_bin_.push_back(v);
            else free_cont_.push_back(v);
        }
        out.free_binaries = free_bin_.size();
        if (free_bin_.size() > opts_.max_binaries)
            throw CapacityError(std::to_string(free_bin_.size()) + " free binaries exceed the cap of " +
                                std::to_string(opts_.max_binaries));

        const std::size_t rows = m_.constraint_count();
        mn_.assign(rows, 0.0);
        mx_.assign(rows, 0.0);
        for (std::size_t r = 0; r < rows; ++r)
            if (active_[r]) std::tie(mn_[r], mx_[r]) = row_range(r);
        ub_ = 0.0;
        for (std::size_t v = 0; v < lo_.size(); ++v) ub_ += std::max(cost_[v] * lo_[v], cost_[v] * hi_[v]);

        dfs(0);
        out.leaves = leaves_;
        if (!found_) return out;
        out.feasible = true;
        out.objective = best_;
        out.assignment = std::move(best_x_);
        return out;
    }

private:
    static constexpr double kBoundEps = 1e-9;

    std::pair<double, double> row_range(std::size_t r) const {
        double mn = 0.0, mx = 0.0;
        for (const auto& t : m_.constraints()[r].terms) {
            const double a = t.coeff * lo_[t.var], b = t.coeff * hi_[t.var];
            mn += std::min(a, b);
            mx += std::max(a, b);
        }
        return {mn, mx};
    }

    bool violated(std::size_t r, double mn, double mx) const {
        const auto& c = m_.constraints()[r];
        const double tol = row_tolerance(c.rhs);
        if (c.sense != Sense::GreaterEqual && mn > c.rhs + tol) return true;
        if (c.sense != Sense::LessEqual && mx < c.rhs - tol) return true;
        return false;
    }

    bool redundant(std::size_t r, double mn, double mx) const {
        const auto& c = m_.constraints()[r];
        const double tol = row_tolerance(c.rhs);
        const bool le_ok = c.sense == Sense::GreaterEqual || mx <= c.rhs + tol;
        const bool ge_ok = c.sense == Sense::LessEqual || mn >= c.rhs - tol;
        return le_ok && ge_ok;
    }

    bool binary(std::size_t v) const { return m_.variables()[v].kind == VarKind::Binary; }

    // Returns -1 on empty domain, 1 when the bound moved, 0 otherwise.
    int tighten_hi(std::size_t v, double limit) {
        if (binary(v)) {
            if (hi_[v] == 1.0 && limit < 1.0 - kBoundEps) {
                if (lo_[v] == 1.0) return -1;
                hi_[v] = 0.0;
                return 1;
            }
            return 0;
        }
        if (limit < lo_[v] - kBoundEps * std::max(1.0, std::abs(lo_[v]))) return -1;
        if (limit < hi_[v] - 1e-7 * std::max(1.0, std::abs(hi_[v]))) {
            hi_[v] = std::max(limit, lo_[v]);
            return 1;
        }
        return 0;
    }

    int tighten_lo(std::size_t v, double limit) {
        if (binary(v)) {
            if (lo_[v] == 0.0 && limit > kBoundEps) {
                if (hi_[v] == 0.0) return -1;
                lo_[v] = 1.0;
                return 1;
            }
            return 0;
        }
        if (limit > hi_[v] + kBoundEps * std::max(1.0, std::abs(hi_[v]))) return -1;
        if (limit > lo_[v] + 1e-7 * std::max(1.0, std::abs(lo_[v]))) {
            lo_[v] = std::min(limit, hi_[v]);
            return 1;
        }
        return 0;
    }

    bool presolve() {
        const std::size_t n = lo_.size();
        std::vector<char> up(n), down(n);
        for (int pass = 0; pass < 500; ++pass) {
            bool changed = false;
            for (std::size_t r = 0; r < m_.constraint_count(); ++r) {
                if (!active_[r]) continue;
                const auto& c = m_.constraints()[r];
                const double tol = row_tolerance(c.rhs);
                auto [mn, mx] = row_range(r);
                if (violated(r, mn, mx)) return false;
                if (redundant(r, mn, mx)) {
                    active_[r] = 0;
                    changed = true;
                    continue;
                }
                for (const auto& t : c.terms) {
                    const std::size_t v = t.var;
                    const double a = t.coeff;
                    if (lo_[v] == hi_[v] || a == 0.0) continue;
                    const double cmin = std::min(a * lo_[v], a * hi_[v]);
                    const double cmax = std::max(a * lo_[v], a * hi_[v]);
                    int moved = 0;
                    if (c.sense != Sense::GreaterEqual) {
                        // Binaries absorb the row tolerance; continuous bounds stay exact.
                        const double slack = binary(v) ? tol : 0.0;
                        const double limit = (c.rhs + slack - (mn - cmin)) / a;
                        const int res = a > 0 ? tighten_hi(v, limit) : tighten_lo(v, limit);
                        if (res < 0) return false;
                        moved |= res;
                    }
                    if (c.sense != Sense::LessEqual && lo_[v] != hi_[v]) {
                        const double slack = binary(v) ? tol : 0.0;
                        const double limit = (c.rhs - slack - (mx - cmax)) / a;
                        const int res = a > 0 ? tighten_lo(v, limit) : tighten_hi(v, limit);
                        if (res < 0) return false;
                        moved |= res;
                    }
                    if (moved) {
                        changed = true;
                        std::tie(mn, mx) = row_range(r);
                    }
                }
            }

            std::fill(up.begin(), up.end(), 0);
            std::fill(down.begin(), down.end(), 0);
            for (std::size_t r = 0; r < m_.constraint_count(); ++r) {
                if (!active_[r]) continue;
                const auto& c = m_.constraints()[r];
                for (const auto& t : c.terms) {
                    if (t.coeff == 0.0) continue;
                    const bool pos = t.coeff > 0.0;
                    if (c.sense != Sense::GreaterEqual) (pos ? up : down)[t.var] = 1;
                    if (c.sense != Sense::LessEqual) (pos ? down : up)[t.var] = 1;
                }
            }
            for (std::size_t v = 0; v < n; ++v) {
                if (lo_[v] == hi_[v]) continue;
                if (cost_[v] <= 0.0 && !down[v]) {
                    hi_[v] = lo_[v];
                    changed = true;
                } else if (cost_[v] >= 0.0 && !up[v]) {
                    lo_[v] = hi_[v];
                    changed = true;
                }
            }
            if (!changed) break;
        }
        for (std::size_t r = 0; r < m_.constraint_count(); ++r)
            if (active_[r]) {
                auto [mn, mx] = row_range(r);
                if (violated(r, mn, mx)) return false;
            }
        return true;
    }

    bool fix(std::size_t v, double val, std::vector<std::pair<std::size_t, std::pair<double, double>>>& undo) {
        bool ok = true;
        for (const auto& [r, a] : cols_[v]) {
            if (!active_[r]) continue;
            undo.push_back({r, {mn_[r], mx_[r]}});
            const double old_min = std::min(a * lo_[v], a * hi_[v]);
            const double old_max = std::max(a * lo_[v], a * hi_[v]);
            mn_[r] += a * val - old_min;
            mx_[r] += a * val - old_max;
            if (violated(r, mn_[r], mx_[r])) ok = false;
        }
        return ok;
    }

    void dfs(std::size_t depth) {
        if (found_ && ub_ <= best_) return;
        if (depth == free_bin_.size()) {
            leaf();
            return;
        }
        const std::size_t v = free_bin_[depth];
        const double first = cost_[v] > 0.0 ? 1.0 : 0.0;
        for (double val : {first, 1.0 - first}) {
            std::vector<std::pair<std::size_t, std::pair<double, double>>> undo;
            const bool ok = fix(v, val, undo);
            const double saved_ub = ub_;
            const double old_lo = lo_[v], old_hi = hi_[v];
            ub_ += cost_[v] * val - std::max(cost_[v] * lo_[v], cost_[v] * hi_[v]);
            lo_[v] = hi_[v] = val;
            if (ok) dfs(depth + 1);
            lo_[v] = old_lo;
            hi_[v] = old_hi;
            ub_ = saved_ub;
            for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
                mn_[it->first] = it->second.first;
                mx_[it->first] = it->second.second;
            }
        }
    }

    void leaf() {
        ++leaves_;
        std::vector<double> x = lo_;
        double value = 0.0;
        if (!free_cont_.empty()) {
            std::vector<std::size_t> pos(lo_.size(), static_cast<std::size_t>(-1));
            LpProblem lp;
            for (std::size_t v : free_cont_) pos[v] = lp.add_variable(lo_[v], hi_[v], cost_[v]);
            for (std::size_t r = 0; r < m_.constraint_count(); ++r) {
                if (!active_[r]) continue;
                const auto& c = m_.constraints()[r];
                LpProblem::Row row{{}, c.sense, c.rhs};
                for (const auto& t : c.terms) {
                    if (pos[t.var] != static_cast<std::size_t>(-1)) row.terms.push_back({pos[t.var], t.coeff});
                    else row.rhs -= t.coeff * lo_[t.var];
                }
                if (!row.terms.empty()) lp.rows.push_back(std::move(row));
            }
            const auto res = solve_lp(lp);
            if (res.status != LpResult::Status::Optimal) return;
            for (std::size_t k = 0; k < free_cont_.size(); ++k) x[free_cont_[k]] = res.x[k];
        }
        value = m_.objective_value(x);
        if (!found_ || value > best_) {
            found_ = true;
            best_ = value;
            best_x_ = std::move(x);
        }
    }

    const MilpModel& m_;
    EnumerationOptions opts_;
    std::vector<double> lo_, hi_, cost_;
    std::vector<char> active_;
    std::vector<std::vector<std::pair<std::size_t, double>>> cols_;
    std::vector<std::size_t> free_bin_, free_cont_;
    std::vector<double> mn_, mx_;
    double ub_ = 0.0;
    bool found_ = false;
    double best_ = 0.0;
    std::vector<double> best_x_;
    std::uint64_t leaves_ = 0;
};

}  // namespace detail

/// Best objective of `m` over all binary assignments. Throws CapacityError when
/// more than `max_binaries` binaries remain free after presolve.
inline EnumerationResult enumerate_milp(const MilpModel& m, const EnumerationOptions& opts = {}) {
    return detail::Enumerator(m, opts).run();
}

inline EnumerationResult enumerate_milp(const MilpModel& m, std::size_t max_binaries) {
    return enumerate_milp(m, EnumerationOptions{max_binaries, nullptr});
}

}  // namespace opsw
