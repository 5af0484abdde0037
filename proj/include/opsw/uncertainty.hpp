#pragma once

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>

#include "opsw/errors.hpp"
#include "opsw/instance.hpp"
#include "opsw/matrix.hpp"
#include "opsw/rng.hpp"

namespace opsw {

/// One realized weight matrix.
struct Scenario {
    Matrix d;
    std::int64_t seed_tag = -1;
};

/// Box uncertainty set U = { dbar + zeta .* dhat : |zeta|_inf <= theta }.
///
/// Holds a reference to the weight model; the model must outlive the set.
class BoxUncertainty {
public:
    BoxUncertainty(const WeightModel& model, double theta) : model_(&model), theta_(theta) {
        if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("theta must lie in [0, 1]");
    }

    const WeightModel& model() const noexcept { return *model_; }
    double theta() const noexcept { return theta_; }

    double upper(std::size_t i, std::size_t j) const {
        return model_->dbar(i, j) + theta_ * model_->dhat(i, j);
    }
    double lower(std::size_t i, std::size_t j) const {
        return model_->dbar(i, j) - theta_ * model_->dhat(i, j);
    }

private:
    const WeightModel* model_;
    double theta_;
};

/// Element-wise maximum of U: dbar + theta * dhat.
inline Scenario worst_case_weights(const BoxUncertainty& u) {
    const std::size_t n = u.model().size();
    Scenario s{Matrix(n), -1};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s.d(i, j) = u.upper(i, j);
    return s;
}

/// dbar - dhat with the full deviation (not theta-scaled).
inline Scenario optimistic_weights(const WeightModel& model) {
    const std::size_t n = model.size();
    Scenario s{Matrix(n), -1};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s.d(i, j) = model.dbar(i, j) - model.dhat(i, j);
    return s;
}

/// Scenario `index` of the pool rooted at `base_seed`: each arc i<j is drawn
/// uniformly on [dbar-dhat, dbar+dhat] and mirrored to (j,i).
inline Scenario sample_scenario(const WeightModel& model, std::uint64_t base_seed, std::int64_t index) {
    if (index < 0) throw DomainError("scenario index must be nonnegative");
    const std::size_t n = model.size();
    CounterRng rng(base_seed, static_cast<std::uint64_t>(index));
    Scenario s{Matrix(n), index};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double zeta = rng.symmetric();
            const double d = model.dbar(i, j) + zeta * model.dhat(i, j);
            s.d(i, j) = d;
            s.d(j, i) = d;
        }
    }
    return s;
}

/// Uniform member of U (zeta uniform on [-theta, theta] per arc, symmetric).
inline Scenario sample_member(const BoxUncertainty& u, std::uint64_t base_seed, std::int64_t index) {
    const auto& model = u.model();
    const std::size_t n = model.size();
    CounterRng rng(base_seed ^ 0x5EED0FB0C5ULL, static_cast<std::uint64_t>(index));
    Scenario s{Matrix(n), index};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double zeta = u.theta() * rng.symmetric();
            const double d = model.dbar(i, j) + zeta * model.dhat(i, j);
            s.d(i, j) = d;
            s.d(j, i) = d;
        }
    }
    return s;
}

/// Membership test against the computed box endpoints.
inline bool contains(const BoxUncertainty& u, const Scenario& s) {
    const std::size_t n = u.model().size();
    if (s.d.size() != n) throw DomainError("scenario shape does not match the weight model");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (s.d(i, j) < u.lower(i, j) || s.d(i, j) > u.upper(i, j)) return false;
    return true;
}

/// CSV with header `i,j,d` and one row per off-diagonal arc, full precision.
inline std::string scenario_to_csv(const Scenario& s) {
    std::string out = "i,j,d\n";
    char buf[64];
    for (std::size_t i = 0; i < s.d.size(); ++i) {
        for (std::size_t j = 0; j < s.d.size(); ++j) {
            if (i == j) continue;
            std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g\n", i, j, s.d(i, j));
            out += buf;
        }
    }
    return out;
}

inline Scenario scenario_from_csv(std::string_view text, std::size_t nodes) {
    Scenario s{Matrix(nodes), -1};
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = detail::trim(line);
        if (t.empty() || (line_no == 1 && t == "i,j,d")) continue;
        std::size_t i = 0, j = 0;
        double d = 0.0;
        char tail = 0;
        if (std::sscanf(std::string(t).c_str(), "%zu,%zu,%lf%c", &i, &j, &d, &tail) != 3)
            throw ParseError(line_no, "expected i,j,d");
        if (i >= nodes || j >= nodes) throw ParseError(line_no, "node index out of range");
        s.d(i, j) = d;
    }
    return s;
}

}  // namespace opsw
