#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "opsw/errors.hpp"

namespace opsw {

enum class VarKind { Binary, Continuous };
enum class Sense { LessEqual, Equal, GreaterEqual };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lo = 0.0;
    double hi = 0.0;

    bool operator==(const Variable&) const = default;
};

struct Term {
    std::size_t var = 0;
    double coeff = 0.0;

    bool operator==(const Term&) const = default;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;

    bool operator==(const Constraint&) const = default;
};

/// Relative tolerance used when checking row feasibility of an assignment.
inline constexpr double kRowTolerance = 1e-9;

inline double row_tolerance(double rhs) { return kRowTolerance * std::max(1.0, std::abs(rhs)); }

/// Generic linear model, always maximized.
class MilpModel {
public:
    using Metadata = std::vector<std::pair<std::string, std::string>>;

    std::size_t add_variable(std::string name, VarKind kind, double lo, double hi) {
        if (index_.count(name)) throw FormatError("duplicate variable " + name);
        if (kind == VarKind::Binary && (lo < 0.0 || hi > 1.0))
            throw FormatError("binary variable " + name + " needs bounds within [0, 1]");
        index_.emplace(name, vars_.size());
        vars_.push_back({std::move(name), kind, lo, hi});
        return vars_.size() - 1;
    }

    std::size_t add_binary(std::string name) { return add_variable(std::move(name), VarKind::Binary, 0.0, 1.0); }

    void add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs) {
        for (const auto& t : terms)
            if (t.var >= vars_.size()) throw FormatError("constraint " + name + " references an undeclared variable");
        rows_.push_back({std::move(name), std::move(terms), sense, rhs});
    }

    void set_objective(std::vector<Term> terms) {
        for (const auto& t : terms)
            if (t.var >= vars_.size()) throw FormatError("objective references an undeclared variable");
        objective_ = std::move(terms);
    }

    void set_meta(const std::string& key, std::string value) {
        for (auto& [k, v] : meta_)
            if (k == key) {
                v = std::move(value);
                return;
            }
        meta_.emplace_back(key, std::move(value));
    }

    std::optional<std::string> meta(const std::string& key) const {
        for (const auto& [k, v] : meta_)
            if (k == key) return v;
        return std::nullopt;
    }

    const std::vector<Variable>& variables() const noexcept { return vars_; }
    const std::vector<Constraint>& constraints() const noexcept { return rows_; }
    const std::vector<Term>& objective() const noexcept { return objective_; }
    const Metadata& metadata() const noexcept { return meta_; }

    std::size_t variable_count() const noexcept { return vars_.size(); }
    std::size_t constraint_count() const noexcept { return rows_.size(); }

    std::size_t binary_count() const {
        std::size_t n = 0;
        for (const auto& v : vars_) n += v.kind == VarKind::Binary;
        return n;
    }

    std::optional<std::size_t> find(const std::string& name) const {
        const auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t at(const std::string& name) const {
        const auto idx = find(name);
        if (!idx) throw FormatError("unknown variable " + name);
        return *idx;
    }

    const Constraint* constraint(const std::string& name) const {
        for (const auto& c : rows_)
            if (c.name == name) return &c;
        return nullptr;
    }

    void set_bounds(std::size_t var, double lo, double hi) {
        vars_.at(var).lo = lo;
        vars_.at(var).hi = hi;
    }

    double objective_value(const std::vector<double>& x) const {
        double total = 0.0;
        for (const auto& t : objective_) total += t.coeff * x[t.var];
        return total;
    }

    static double activity(const Constraint& c, const std::vector<double>& x) {
        double total = 0.0;
        for (const auto& t : c.terms) total += t.coeff * x[t.var];
        return total;
    }

    static bool satisfied(const Constraint& c, double lhs) {
        const double tol = row_tolerance(c.rhs);
        switch (c.sense) {
            case Sense::LessEqual: return lhs <= c.rhs + tol;
            case Sense::GreaterEqual: return lhs >= c.rhs - tol;
            case Sense::Equal: return std::abs(lhs - c.rhs) <= tol;
        }
        return false;
    }

    /// Name of the first violated bound, integrality or row; empty when feasible.
    std::optional<std::string> first_violation(const std::vector<double>& x) const {
        if (x.size() != vars_.size()) return std::string("assignment size");
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            const auto& v = vars_[i];
            if (x[i] < v.lo - kRowTolerance || x[i] > v.hi + kRowTolerance) return "bounds of " + v.name;
            if (v.kind == VarKind::Binary && x[i] != 0.0 && x[i] != 1.0) return "integrality of " + v.name;
        }
        for (const auto& c : rows_)
            if (!satisfied(c, activity(c, x))) return c.name;
        return std::nullopt;
    }

    bool operator==(const MilpModel& o) const {
        return vars_ == o.vars_ && rows_ == o.rows_ && objective_ == o.objective_;
    }

private:
    std::vector<Variable> vars_;
    std::vector<Constraint> rows_;
    std::vector<Term> objective_;
    Metadata meta_;
    std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace opsw
