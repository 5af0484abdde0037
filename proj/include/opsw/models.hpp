#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opsw/errors.hpp"
#include "opsw/format.hpp"
#include "opsw/instance.hpp"
#include "opsw/milp.hpp"
#include "opsw/recourse.hpp"
#include "opsw/uncertainty.hpp"

namespace opsw {

enum class Formulation {
    DOP,
    OneStageRO,
    StaticSequential,
    StaticConcurrent,
    TwoStageSequential,
    TwoStageConcurrent,
    RecourseSequential,
    RecourseConcurrent,
};

inline constexpr bool is_robust(Formulation f) {
    return f == Formulation::OneStageRO || f == Formulation::StaticSequential ||
           f == Formulation::StaticConcurrent || f == Formulation::TwoStageSequential ||
           f == Formulation::TwoStageConcurrent;
}

/// Two-stage and static kinds share the optimistic first-stage length constraint
/// and price recourse at the worst case of the box.
inline constexpr bool has_recourse(Formulation f) {
    return f == Formulation::StaticSequential || f == Formulation::StaticConcurrent ||
           f == Formulation::TwoStageSequential || f == Formulation::TwoStageConcurrent;
}

inline constexpr bool uses_concurrent_recourse(Formulation f) {
    return f == Formulation::StaticConcurrent || f == Formulation::TwoStageConcurrent ||
           f == Formulation::RecourseConcurrent;
}

inline std::string to_string(Formulation f) {
    switch (f) {
        case Formulation::DOP: return "dop";
        case Formulation::OneStageRO: return "one-stage";
        case Formulation::StaticSequential: return "static-seq";
        case Formulation::StaticConcurrent: return "static-conc";
        case Formulation::TwoStageSequential: return "two-stage-seq";
        case Formulation::TwoStageConcurrent: return "two-stage-conc";
        case Formulation::RecourseSequential: return "recourse-seq";
        case Formulation::RecourseConcurrent: return "recourse-conc";
    }
    return "?";
}

inline std::optional<Formulation> parse_formulation(std::string_view s) {
    for (auto f : {Formulation::DOP, Formulation::OneStageRO, Formulation::StaticSequential,
                   Formulation::StaticConcurrent, Formulation::TwoStageSequential,
                   Formulation::TwoStageConcurrent, Formulation::RecourseSequential,
                   Formulation::RecourseConcurrent})
        if (to_string(f) == s) return f;
    return std::nullopt;
}

/// Formulation plus its protection level; theta is present iff the formulation is robust.
struct ModelKind {
    Formulation form = Formulation::DOP;
    std::optional<double> theta;
    bool relaxed = false;

    static ModelKind make(Formulation f, double theta = 0.0, bool relaxed = false) {
        if (!is_robust(f)) return {f, std::nullopt, false};
        if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("theta must lie in [0, 1]");
        return {f, theta, relaxed && f == Formulation::StaticSequential};
    }

    double theta_or_zero() const { return theta.value_or(0.0); }

    bool operator==(const ModelKind&) const = default;
};

struct BuildOptions {
    /// Replaces the computed big-M (fault-injection tests only).
    std::optional<double> big_m;
};

namespace detail {

inline std::string vname(std::string_view prefix, std::size_t a) {
    return std::string(prefix) + "_" + std::to_string(a);
}
inline std::string vname(std::string_view prefix, std::size_t a, std::size_t b) {
    return vname(prefix, a) + "_" + std::to_string(b);
}
inline std::string vname(std::string_view prefix, std::size_t a, std::size_t b, std::size_t c) {
    return vname(prefix, a, b) + "_" + std::to_string(c);
}

/// Index of the arc variables x_ij and the MTZ positions u_i of a tour model.
struct TourVars {
    std::size_t nodes = 0;  // |N+|
    std::vector<std::size_t> x;  // nodes*nodes, npos on the diagonal
    std::vector<std::size_t> u;  // per node, npos for the depot

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t arc(std::size_t i, std::size_t j) const { return x[i * nodes + j]; }
};

inline void stamp(MilpModel& m, const ModelKind& kind, const Instance& inst, const WeightModel* w) {
    m.set_meta("kind", to_string(kind.form));
    if (kind.theta) m.set_meta("theta", format_number(*kind.theta));
    if (kind.form == Formulation::StaticSequential) m.set_meta("relax", kind.relaxed ? "true" : "false");
    m.set_meta("L", format_number(inst.length_limit));
    m.set_meta("instance", instance_hash(inst, w));
}

/// Adds x_ij, u_i and the routing rows shared by every first-stage model:
/// depot degree, flow conservation with at-most-one visit, MTZ ordering.
inline TourVars add_tour_structure(MilpModel& m, const Instance& inst) {
    TourVars tv;
    tv.nodes = inst.size();
    const std::size_t n_plus = tv.nodes;
    const std::size_t n = inst.customers();
    tv.x.assign(n_plus * n_plus, TourVars::npos);
    tv.u.assign(n_plus, TourVars::npos);
    if (n == 0) return tv;

    for (std::size_t i = 0; i < n_plus; ++i)
        for (std::size_t j = 0; j < n_plus; ++j)
            if (i != j) tv.x[i * n_plus + j] = m.add_binary(vname("x", i, j));
    for (std::size_t i = 1; i < n_plus; ++i)
        tv.u[i] = m.add_variable(vname("u", i), VarKind::Continuous, 1.0, static_cast<double>(n));

    // Depot degree: at most one departure and one return (empty tour allowed).
    std::vector<Term> out, in;
    for (std::size_t j = 1; j < n_plus; ++j) {
        out.push_back({tv.arc(0, j), 1.0});
        in.push_back({tv.arc(j, 0), 1.0});
    }
    m.add_constraint("depot_out", out, Sense::LessEqual, 1.0);
    m.add_constraint("depot_in", in, Sense::LessEqual, 1.0);

    for (std::size_t j = 1; j < n_plus; ++j) {
        std::vector<Term> flow, visit;
        for (std::size_t i = 0; i < n_plus; ++i)
            if (i != j) {
                flow.push_back({tv.arc(i, j), 1.0});
                visit.push_back({tv.arc(i, j), 1.0});
            }
        for (std::size_t k = 0; k < n_plus; ++k)
            if (k != j) flow.push_back({tv.arc(j, k), -1.0});
        m.add_constraint(vname("flow", j), flow, Sense::Equal, 0.0);
        m.add_constraint(vname("visit", j), visit, Sense::LessEqual, 1.0);
    }

    // u_i - u_j + 1 <= (1 - x_ij)|N|  <=>  u_i - u_j + |N| x_ij <= |N| - 1
    const double big = static_cast<double>(n);
    for (std::size_t i = 1; i < n_plus; ++i)
        for (std::size_t j = 1; j < n_plus; ++j)
            if (i != j)
                m.add_constraint(vname("mtz", i, j),
                                 {{tv.u[i], 1.0}, {tv.u[j], -1.0}, {tv.arc(i, j), big}},
                                 Sense::LessEqual, big - 1.0);
    return tv;
}

/// Sum over i in N of s_i * (sum_j x_ij): collected score.
inline std::vector<Term> score_terms(const TourVars& tv, const Instance& inst) {
    std::vector<Term> terms;
    for (std::size_t i = 1; i < tv.nodes; ++i) {
        if (inst.score(i) == 0.0) continue;
        for (std::size_t j = 0; j < tv.nodes; ++j)
            if (i != j) terms.push_back({tv.arc(i, j), inst.score(i)});
    }
    return terms;
}

inline std::vector<Term> length_terms(const TourVars& tv, const Matrix& w) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < tv.nodes; ++i)
        for (std::size_t j = 0; j < tv.nodes; ++j)
            if (i != j && w(i, j) != 0.0) terms.push_back({tv.arc(i, j), w(i, j)});
    return terms;
}

inline void require_shape(const Instance& inst, const Matrix& w) {
    if (w.size() != inst.size()) throw DomainError("weight matrix does not match the instance size");
}

/// Upper bound on any left-hand side of the reachability rows.
inline double default_big_m(const WeightModel& w, const Matrix* realized = nullptr) {
    double total = 0.0;
    double max_return = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (i == j) continue;
            double arc = w.dbar(i, j) + w.dhat(i, j);
            if (realized) arc = std::max(arc, (*realized)(i, j));
            total += arc;
        }
        max_return = std::max(max_return, w.dbar(i, 0));
    }
    return total + max_return;
}

}  // namespace detail

/// Deterministic OP with arc weights `w`: max collected score subject to tour
/// length, depot degree, flow conservation and MTZ subtour elimination.
inline MilpModel build_dop(const Instance& inst, const Matrix& w) {
    detail::require_shape(inst, w);
    MilpModel m;
    const auto tv = detail::add_tour_structure(m, inst);
    detail::stamp(m, ModelKind::make(Formulation::DOP), inst, nullptr);
    if (inst.customers() == 0) return m;
    m.add_constraint("length", detail::length_terms(tv, w), Sense::LessEqual, inst.length_limit);
    m.set_objective(detail::score_terms(tv, inst));
    return m;
}

inline MilpModel build_dop(const Instance& inst, const WeightModel& w) { return build_dop(inst, w.dbar); }
inline MilpModel build_dop(const Instance& inst, const Scenario& s) { return build_dop(inst, s.d); }

/// One-stage robust OP. The length row must hold for every d in U; since
/// x >= 0 the maximum over the box is attained at dbar + theta*dhat.
inline MilpModel build_one_stage_ro(const Instance& inst, const WeightModel& w, double theta) {
    const BoxUncertainty u(w, theta);
    auto m = build_dop(inst, worst_case_weights(u).d);
    detail::stamp(m, ModelKind::make(Formulation::OneStageRO, theta), inst, &w);
    return m;
}

/// Static robust model with concurrent recourse. Cancelled arcs y_ij form a
/// path suffix ending at the depot. The robust length row is stated at
/// dbar + theta*dhat: its uncertain coefficients multiply x_ij - y_ij >= 0.
inline MilpModel build_static_concurrent(const Instance& inst, const WeightModel& w, double theta) {
    detail::require_shape(inst, w.dbar);
    const BoxUncertainty u(w, theta);
    const Matrix du = worst_case_weights(u).d;
    const Matrix dopt = optimistic_weights(w).d;

    MilpModel m;
    const auto tv = detail::add_tour_structure(m, inst);
    detail::stamp(m, ModelKind::make(Formulation::StaticConcurrent, theta), inst, &w);
    if (inst.customers() == 0) return m;
    const std::size_t np = inst.size();

    m.add_constraint("length_optimistic", detail::length_terms(tv, dopt), Sense::LessEqual, inst.length_limit);

    std::vector<std::size_t> y(np * np, detail::TourVars::npos);
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < np; ++j)
            if (i != j) y[i * np + j] = m.add_binary(detail::vname("yij", i, j));

    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < np; ++j)
            if (i != j)
                m.add_constraint(detail::vname("cancel", i, j), {{y[i * np + j], 1.0}, {tv.arc(i, j), -1.0}},
                                 Sense::LessEqual, 0.0);

    for (std::size_t j = 1; j < np; ++j) {
        std::vector<Term> terms;
        for (std::size_t i = 0; i < np; ++i)
            if (i != j) terms.push_back({y[i * np + j], 1.0});
        for (std::size_t k = 0; k < np; ++k)
            if (k != j) terms.push_back({y[j * np + k], -1.0});
        m.add_constraint(detail::vname("cutflow", j), terms, Sense::LessEqual, 0.0);
    }

    // sum du x - sum du y + sum_j (out_y(j) - in_y(j)) dbar_j0 <= L
    auto row = detail::length_terms(tv, du);
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < np; ++j) {
            if (i == j) continue;
            double coeff = -du(i, j);
            if (i != 0) coeff += w.dbar(i, 0);
            if (j != 0) coeff -= w.dbar(j, 0);
            if (coeff != 0.0) row.push_back({y[i * np + j], coeff});
        }
    m.add_constraint("recourse_length", row, Sense::LessEqual, inst.length_limit);

    auto obj = detail::score_terms(tv, inst);
    for (std::size_t j = 1; j < np; ++j) {
        if (inst.score(j) == 0.0) continue;
        for (std::size_t i = 0; i < np; ++i)
            if (i != j) obj.push_back({y[i * np + j], -inst.score(j)});
    }
    m.set_objective(obj);
    return m;
}

/// Static robust model with sequential recourse. x_ijk marks arc (i,j) as the
/// k-th arc, z_K marks the K-th node unreachable, y_i marks node i lost. The
/// reachability rows are stated at dbar + theta*dhat since x_ijk >= 0. With
/// `relax` the x_ijk and y_i become continuous in [0, 1].
inline MilpModel build_static_sequential(const Instance& inst, const WeightModel& w, double theta,
                                         bool relax, const BuildOptions& opts = {}) {
    detail::require_shape(inst, w.dbar);
    const BoxUncertainty u(w, theta);
    const Matrix du = worst_case_weights(u).d;
    const Matrix dopt = optimistic_weights(w).d;

    MilpModel m;
    const auto tv = detail::add_tour_structure(m, inst);
    detail::stamp(m, ModelKind::make(Formulation::StaticSequential, theta, relax), inst, &w);
    if (inst.customers() == 0) return m;
    const std::size_t np = inst.size();
    const std::size_t n = inst.customers();
    const double big_m = opts.big_m.value_or(detail::default_big_m(w));
    const VarKind layer_kind = relax ? VarKind::Continuous : VarKind::Binary;

    m.add_constraint("length_optimistic", detail::length_terms(tv, dopt), Sense::LessEqual, inst.length_limit);

    // xk[(k-1)][i][j] for j in N, i in N+ \ {j}
    auto xk_at = [np](std::size_t i, std::size_t j, std::size_t k) { return ((k - 1) * np + i) * np + j; };
    std::vector<std::size_t> xk(n * np * np, detail::TourVars::npos);
    for (std::size_t k = 1; k <= n; ++k)
        for (std::size_t i = 0; i < np; ++i)
            for (std::size_t j = 1; j < np; ++j)
                if (i != j) xk[xk_at(i, j, k)] = m.add_variable(detail::vname("xk", i, j, k), layer_kind, 0.0, 1.0);
    std::vector<std::size_t> y(np, detail::TourVars::npos), z(n + 1, detail::TourVars::npos);
    for (std::size_t i = 1; i < np; ++i) y[i] = m.add_variable(detail::vname("y", i), layer_kind, 0.0, 1.0);
    for (std::size_t k = 1; k <= n; ++k) z[k] = m.add_binary(detail::vname("z", k));

    for (std::size_t j = 1; j < np; ++j)
        m.add_constraint(detail::vname("first_arc", j), {{xk[xk_at(0, j, 1)], 1.0}, {tv.arc(0, j), -1.0}},
                         Sense::GreaterEqual, 0.0);

    // x_ijk >= x_ij + sum_l x_li(k-1) - 1, i,j in N, k >= 2
    for (std::size_t k = 2; k <= n; ++k)
        for (std::size_t i = 1; i < np; ++i)
            for (std::size_t j = 1; j < np; ++j) {
                if (i == j) continue;
                std::vector<Term> terms{{xk[xk_at(i, j, k)], 1.0}, {tv.arc(i, j), -1.0}};
                for (std::size_t l = 0; l < np; ++l)
                    if (l != i) terms.push_back({xk[xk_at(l, i, k - 1)], -1.0});
                m.add_constraint(detail::vname("order", i, j, k), terms, Sense::GreaterEqual, -1.0);
            }

    for (std::size_t K = 1; K <= n; ++K) {
        std::vector<Term> terms;
        for (std::size_t k = 1; k <= K; ++k)
            for (std::size_t i = 0; i < np; ++i)
                for (std::size_t j = 1; j < np; ++j) {
                    if (i == j) continue;
                    double coeff = du(i, j);
                    if (k == K) coeff += w.dbar(j, 0);
                    if (coeff != 0.0) terms.push_back({xk[xk_at(i, j, k)], coeff});
                }
        terms.push_back({z[K], -big_m});
        m.add_constraint(detail::vname("reach", K), terms, Sense::LessEqual, inst.length_limit);
    }

    for (std::size_t k = 2; k <= n; ++k)
        m.add_constraint(detail::vname("zmono", k), {{z[k], 1.0}, {z[k - 1], -1.0}}, Sense::GreaterEqual, 0.0);

    for (std::size_t j = 1; j < np; ++j)
        for (std::size_t k = 1; k <= n; ++k) {
            std::vector<Term> terms{{y[j], 1.0}};
            for (std::size_t i = 0; i < np; ++i)
                if (i != j) terms.push_back({xk[xk_at(i, j, k)], -1.0});
            terms.push_back({z[k], -1.0});
            m.add_constraint(detail::vname("lost", j, k), terms, Sense::GreaterEqual, -1.0);
        }

    auto obj = detail::score_terms(tv, inst);
    for (std::size_t i = 1; i < np; ++i)
        if (inst.score(i) != 0.0) obj.push_back({y[i], -inst.score(i)});
    m.set_objective(obj);
    return m;
}

/// Sequential recourse problem for a fixed first-stage path and realization.
/// Only the path's arcs carry layer variables (layers 1..n); all other x_ijk
/// are zero at an optimum because they only add to the reachability rows.
inline MilpModel build_recourse_sequential(const Instance& inst, const Path& path, const Scenario& s,
                                           const WeightModel& w, const BuildOptions& opts = {}) {
    if (path.empty()) throw DomainError("recourse model needs a nonempty path");
    path.validate(inst.size());
    detail::require_shape(inst, s.d);
    const std::size_t p = path.size();
    const double big_m = opts.big_m.value_or(detail::default_big_m(w, &s.d));

    MilpModel m;
    detail::stamp(m, ModelKind::make(Formulation::RecourseSequential), inst, &w);
    m.set_meta("path", path.to_string());

    // arc m (1-based) enters path node v_m from v_{m-1}
    auto from = [&](std::size_t a) { return a == 1 ? std::size_t{0} : detail::node(path[a - 2]); };
    auto to = [&](std::size_t a) { return detail::node(path[a - 1]); };
    std::vector<std::size_t> xk((p + 1) * (p + 1));
    for (std::size_t k = 1; k <= p; ++k)
        for (std::size_t a = 1; a <= p; ++a) xk[k * (p + 1) + a] = m.add_binary(detail::vname("xk", from(a), to(a), k));
    std::vector<std::size_t> y(p + 1), z(p + 1);
    for (std::size_t a = 1; a <= p; ++a) y[a] = m.add_binary(detail::vname("y", to(a)));
    for (std::size_t k = 1; k <= p; ++k) z[k] = m.add_binary(detail::vname("z", k));
    auto X = [&](std::size_t a, std::size_t k) { return xk[k * (p + 1) + a]; };

    m.add_constraint(detail::vname("first_arc", to(1)), {{X(1, 1), 1.0}}, Sense::GreaterEqual, 1.0);
    for (std::size_t k = 2; k <= p; ++k)
        for (std::size_t a = 2; a <= p; ++a)
            m.add_constraint(detail::vname("order", from(a), to(a), k), {{X(a, k), 1.0}, {X(a - 1, k - 1), -1.0}},
                             Sense::GreaterEqual, 0.0);
    for (std::size_t K = 1; K <= p; ++K) {
        std::vector<Term> terms;
        for (std::size_t k = 1; k <= K; ++k)
            for (std::size_t a = 1; a <= p; ++a) {
                double coeff = s.d(from(a), to(a));
                if (k == K) coeff += w.dbar(to(a), 0);
                if (coeff != 0.0) terms.push_back({X(a, k), coeff});
            }
        terms.push_back({z[K], -big_m});
        m.add_constraint(detail::vname("reach", K), terms, Sense::LessEqual, inst.length_limit);
    }
    for (std::size_t k = 2; k <= p; ++k)
        m.add_constraint(detail::vname("zmono", k), {{z[k], 1.0}, {z[k - 1], -1.0}}, Sense::GreaterEqual, 0.0);
    for (std::size_t a = 1; a <= p; ++a)
        for (std::size_t k = 1; k <= p; ++k)
            m.add_constraint(detail::vname("lost", to(a), k), {{y[a], 1.0}, {X(a, k), -1.0}, {z[k], -1.0}},
                             Sense::GreaterEqual, -1.0);

    std::vector<Term> obj;
    for (std::size_t a = 1; a <= p; ++a)
        if (inst.score(to(a)) != 0.0) obj.push_back({y[a], -inst.score(to(a))});
    m.set_objective(obj);
    return m;
}

/// Concurrent recourse problem for a fixed first-stage path and realization.
/// y is declared on the n+1 path arcs only; y_ij <= x_ij = 0 elsewhere.
inline MilpModel build_recourse_concurrent(const Instance& inst, const Path& path, const Scenario& s,
                                           const WeightModel& w) {
    if (path.empty()) throw DomainError("recourse model needs a nonempty path");
    path.validate(inst.size());
    detail::require_shape(inst, s.d);
    const std::size_t p = path.size();

    MilpModel m;
    detail::stamp(m, ModelKind::make(Formulation::RecourseConcurrent), inst, &w);
    m.set_meta("path", path.to_string());

    // arc a = 0..p runs from v_a to v_{a+1}, with v_0 = v_{p+1} = depot
    auto at = [&](std::size_t k) { return (k == 0 || k == p + 1) ? std::size_t{0} : detail::node(path[k - 1]); };
    std::vector<std::size_t> y(p + 1);
    for (std::size_t a = 0; a <= p; ++a) y[a] = m.add_binary(detail::vname("yij", at(a), at(a + 1)));

    for (std::size_t k = 1; k <= p; ++k)
        m.add_constraint(detail::vname("cutflow", at(k)), {{y[k - 1], 1.0}, {y[k], -1.0}}, Sense::LessEqual, 0.0);

    // The closing arc is never realized (safety stock): it is priced at dbar.
    auto weight = [&](std::size_t i, std::size_t j) { return j == 0 ? w.dbar(i, 0) : s.d(i, j); };
    double fixed_length = 0.0;
    std::vector<Term> row;
    for (std::size_t a = 0; a <= p; ++a) {
        const std::size_t i = at(a), j = at(a + 1);
        fixed_length += weight(i, j);
        double coeff = -weight(i, j);
        if (i != 0) coeff += w.dbar(i, 0);
        if (j != 0) coeff -= w.dbar(j, 0);
        if (coeff != 0.0) row.push_back({y[a], coeff});
    }
    m.add_constraint("recourse_length", row, Sense::LessEqual, inst.length_limit - fixed_length);

    std::vector<Term> obj;
    for (std::size_t a = 0; a < p; ++a)
        if (inst.score(at(a + 1)) != 0.0) obj.push_back({y[a], -inst.score(at(a + 1))});
    m.set_objective(obj);
    return m;
}

/// Variable bounds of a first-stage model (DOP, one-stage or static) with x
/// fixed to the path's arcs and u fixed to visit positions; other variables
/// keep their declared bounds.
inline std::vector<std::pair<double, double>> first_stage_bounds(const MilpModel& model, const Instance& inst,
                                                                 const Path& path) {
    path.validate(inst.size());
    std::vector<std::pair<double, double>> bounds;
    bounds.reserve(model.variable_count());
    for (const auto& v : model.variables()) bounds.emplace_back(v.lo, v.hi);
    const std::size_t np = inst.size();
    if (np < 2) return bounds;
    std::vector<char> on_arc(np * np, 0);
    int prev = 0;
    for (int v : path.nodes) {
        on_arc[detail::node(prev) * np + detail::node(v)] = 1;
        prev = v;
    }
    if (!path.empty()) on_arc[detail::node(prev) * np] = 1;
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < np; ++j) {
            if (i == j) continue;
            const double v = on_arc[i * np + j] ? 1.0 : 0.0;
            bounds[model.at(detail::vname("x", i, j))] = {v, v};
        }
    for (std::size_t k = 0; k < path.size(); ++k) {
        const auto pos = static_cast<double>(k + 1);
        bounds[model.at(detail::vname("u", detail::node(path[k])))] = {pos, pos};
    }
    return bounds;
}

inline MilpModel fix_first_stage(const MilpModel& model, const Instance& inst, const Path& path) {
    MilpModel out = model;
    const auto bounds = first_stage_bounds(model, inst, path);
    for (std::size_t v = 0; v < bounds.size(); ++v) out.set_bounds(v, bounds[v].first, bounds[v].second);
    return out;
}

}  // namespace opsw
