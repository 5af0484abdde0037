#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "opsw/milp.hpp"

namespace opsw {

/// Small dense LP: maximize c.x subject to rows and lo <= x <= hi (finite lo).
struct LpProblem {
    struct Row {
        std::vector<std::pair<std::size_t, double>> terms;
        Sense sense = Sense::LessEqual;
        double rhs = 0.0;
    };

    std::vector<double> lo, hi, cost;
    std::vector<Row> rows;

    std::size_t add_variable(double l, double h, double c) {
        lo.push_back(l);
        hi.push_back(h);
        cost.push_back(c);
        return lo.size() - 1;
    }
};

struct LpResult {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status = Status::Infeasible;
    double value = 0.0;
    std::vector<double> x;
};

namespace detail {

/// Two-phase primal simplex on a dense tableau with Bland's rule.
class DenseSimplex {
public:
    static constexpr double eps = 1e-9;

    LpResult solve(const LpProblem& lp) {
        const std::size_t n = lp.lo.size();
        // Shift x = lo + x' and add finite upper bounds as rows.
        struct StdRow {
            std::vector<double> a;
            Sense sense;
            double b;
        };
        std::vector<StdRow> rows;
        for (const auto& r : lp.rows) {
            StdRow s{std::vector<double>(n, 0.0), r.sense, r.rhs};
            for (auto [j, a] : r.terms) {
                s.a[j] += a;
                s.b -= a * lp.lo[j];
            }
            rows.push_back(std::move(s));
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (lp.hi[j] == std::numeric_limits<double>::infinity()) continue;
            StdRow s{std::vector<double>(n, 0.0), Sense::LessEqual, lp.hi[j] - lp.lo[j]};
            s.a[j] = 1.0;
            rows.push_back(std::move(s));
        }
        for (auto& r : rows)
            if (r.b < 0.0) {
                for (auto& v : r.a) v = -v;
                r.b = -r.b;
                if (r.sense == Sense::LessEqual) r.sense = Sense::GreaterEqual;
                else if (r.sense == Sense::GreaterEqual) r.sense = Sense::LessEqual;
            }

        m_ = rows.size();
        std::size_t slack = 0, art = 0;
        for (const auto& r : rows) {
            if (r.sense != Sense::Equal) ++slack;
            if (r.sense != Sense::LessEqual) ++art;
        }
        n_struct_ = n;
        first_art_ = n + slack;
        cols_ = n + slack + art;
        tab_.assign(m_ * (cols_ + 1), 0.0);
        basis_.assign(m_, 0);
        barred_.assign(cols_, 0);

        std::size_t s_col = n, a_col = first_art_;
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n; ++j) at(i, j) = rows[i].a[j];
            rhs(i) = rows[i].b;
            if (rows[i].sense == Sense::LessEqual) {
                at(i, s_col) = 1.0;
                basis_[i] = s_col++;
            } else {
                if (rows[i].sense == Sense::GreaterEqual) at(i, s_col++) = -1.0;
                at(i, a_col) = 1.0;
                basis_[i] = a_col++;
            }
        }

        // Phase 1: maximize -sum(artificials).
        std::vector<double> phase1(cols_, 0.0);
        for (std::size_t j = first_art_; j < cols_; ++j) phase1[j] = -1.0;
        if (art > 0) {
            run(phase1);
            double infeas = 0.0;
            for (std::size_t i = 0; i < m_; ++i)
                if (basis_[i] >= first_art_) infeas += rhs(i);
            if (infeas > 1e-7) return {LpResult::Status::Infeasible, 0.0, {}};
            // Drive zero-level artificials out of the basis where possible.
            for (std::size_t i = 0; i < m_; ++i) {
                if (basis_[i] < first_art_) continue;
                for (std::size_t j = 0; j < first_art_; ++j)
                    if (std::abs(at(i, j)) > eps) {
                        pivot(i, j);
                        break;
                    }
            }
            for (std::size_t j = first_art_; j < cols_; ++j) barred_[j] = 1;
        }

        std::vector<double> phase2(cols_, 0.0);
        for (std::size_t j = 0; j < n; ++j) phase2[j] = lp.cost[j];
        if (!run(phase2)) return {LpResult::Status::Unbounded, 0.0, {}};

        LpResult out{LpResult::Status::Optimal, 0.0, lp.lo};
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n) out.x[basis_[i]] = lp.lo[basis_[i]] + rhs(i);
        for (std::size_t j = 0; j < n; ++j) {
            out.x[j] = std::min(std::max(out.x[j], lp.lo[j]), lp.hi[j]);
            out.value += lp.cost[j] * out.x[j];
        }
        return out;
    }

private:
    double& at(std::size_t i, std::size_t j) { return tab_[i * (cols_ + 1) + j]; }
    double& rhs(std::size_t i) { return tab_[i * (cols_ + 1) + cols_]; }

    void pivot(std::size_t r, std::size_t c) {
        const double p = at(r, c);
        for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        basis_[r] = c;
    }

    /// Returns false when unbounded.
    bool run(const std::vector<double>& cost) {
        for (std::size_t iter = 0; iter < 50000; ++iter) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < cols_ && enter == cols_; ++j) {
                if (barred_[j]) continue;
                double rc = cost[j];
                for (std::size_t i = 0; i < m_; ++i) rc -= cost[basis_[i]] * at(i, j);
                if (rc > eps) enter = j;
            }
            if (enter == cols_) return true;
            std::size_t leave = m_;
            double best = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a <= eps) continue;
                const double ratio = rhs(i) / a;
                if (leave == m_ || ratio < best - eps || (ratio <= best + eps && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m_) return false;
            pivot(leave, enter);
        }
        return true;
    }

    std::size_t m_ = 0, cols_ = 0, n_struct_ = 0, first_art_ = 0;
    std::vector<double> tab_;
    std::vector<std::size_t> basis_;
    std::vector<char> barred_;
};

}  // namespace detail

inline LpResult solve_lp(const LpProblem& lp) { return detail::DenseSimplex{}.solve(lp); }

}  // namespace opsw
