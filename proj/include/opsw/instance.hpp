#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "opsw/errors.hpp"
#include "opsw/matrix.hpp"
#include "opsw/rng.hpp"

namespace opsw {

struct Node {
    double x = 0.0;
    double y = 0.0;
    double score = 0.0;

    bool operator==(const Node&) const = default;
};

/// Orienteering instance. Node 0 is the depot and always has score 0.
struct Instance {
    std::vector<Node> nodes;
    double length_limit = 0.0;
    std::vector<std::string> warnings;

    std::size_t size() const noexcept { return nodes.size(); }
    /// Number of scoring nodes |N|.
    std::size_t customers() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
    double score(std::size_t i) const { return nodes[i].score; }

    std::vector<double> scores() const {
        std::vector<double> s;
        s.reserve(nodes.size());
        for (const auto& n : nodes) s.push_back(n.score);
        return s;
    }

    double total_score() const {
        double total = 0.0;
        for (const auto& n : nodes) total += n.score;
        return total;
    }

    /// Throws DomainError when an invariant does not hold.
    void validate() const {
        if (nodes.empty()) throw DomainError("instance has no nodes");
        if (!(length_limit > 0.0)) throw DomainError("length limit must be positive");
        if (nodes[0].score != 0.0) throw DomainError("depot score must be 0");
        for (const auto& n : nodes)
            if (!(n.score >= 0.0)) throw DomainError("scores must be nonnegative");
    }
};

/// Expected arc weights and their maximum deviations over N+ x N+.
struct WeightModel {
    Matrix dbar;
    Matrix dhat;

    std::size_t size() const noexcept { return dbar.size(); }

    void validate() const {
        if (dbar.size() != dhat.size()) throw DomainError("dbar/dhat shape mismatch");
        for (std::size_t i = 0; i < size(); ++i) {
            if (dbar(i, i) != 0.0 || dhat(i, i) != 0.0) throw DomainError("nonzero weight diagonal");
            for (std::size_t j = 0; j < size(); ++j) {
                if (i == j) continue;
                if (!(dhat(i, j) >= 0.0) || dhat(i, j) > dbar(i, j))
                    throw DomainError("deviation outside [0, dbar] on arc (" + std::to_string(i) +
                                      "," + std::to_string(j) + ")");
            }
        }
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline std::optional<double> to_number(const std::string& tok) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size() || !std::isfinite(v)) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

/// Parses a Tsiligirides-style score file: one `x y score` triple per line,
/// first triple is the start point (kept as depot, score forced to 0), second
/// is the end point (dropped). Blank lines and `#` comments are skipped. An
/// optional leading two-field line (`Tmax P`) is ignored.
inline Instance parse_tsiligirides(std::string_view text, double length_limit) {
    if (!(length_limit > 0.0)) throw DomainError("length limit must be positive");

    Instance inst;
    inst.length_limit = length_limit;

    std::size_t line_no = 0;
    std::size_t triples = 0;
    bool seen_data = false;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;

        const auto fields = detail::split_ws(line);
        std::vector<double> values;
        for (const auto& f : fields) {
            const auto v = detail::to_number(f);
            if (!v) throw ParseError(line_no, "non-numeric field '" + f + "'");
            values.push_back(*v);
        }
        if (!seen_data && values.size() == 2) {
            inst.warnings.push_back("ignored header line " + std::to_string(line_no));
            seen_data = true;
            continue;
        }
        seen_data = true;
        if (values.size() != 3)
            throw ParseError(line_no, "expected 3 fields (x y score), got " + std::to_string(values.size()));
        if (values[2] < 0.0) throw ParseError(line_no, "negative score");

        ++triples;
        if (triples == 2) continue;  // end point
        Node node{values[0], values[1], values[2]};
        if (triples == 1 && node.score != 0.0) {
            inst.warnings.push_back("depot score " + fields[2] + " forced to 0");
            node.score = 0.0;
        }
        inst.nodes.push_back(node);
    }
    if (triples < 2) throw FormatError("instance needs a start and an end point line");
    return inst;
}

inline Instance load_tsiligirides(const std::string& path, double length_limit) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open instance file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_tsiligirides(buf.str(), length_limit);
}

/// Expected weights are Euclidean distances; deviations are zero.
inline WeightModel euclidean_weights(const Instance& inst) {
    const std::size_t n = inst.size();
    WeightModel w{Matrix(n), Matrix(n)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = inst.nodes[i].x - inst.nodes[j].x;
            const double dy = inst.nodes[i].y - inst.nodes[j].y;
            const double d = std::sqrt(dx * dx + dy * dy);
            w.dbar(i, j) = d;
            w.dbar(j, i) = d;
        }
    }
    return w;
}

/// Copy of `model` with dhat = alpha * dbar.
inline WeightModel apply_deviation(const WeightModel& model, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw DomainError("deviation fraction alpha must lie in [0, 1]");
    WeightModel out{model.dbar, Matrix(model.size())};
    for (std::size_t i = 0; i < model.size(); ++i)
        for (std::size_t j = 0; j < model.size(); ++j) out.dhat(i, j) = alpha * model.dbar(i, j);
    return out;
}

/// First `count` nodes (depot included) of an instance.
inline Instance truncate(const Instance& inst, std::size_t count) {
    Instance out = inst;
    if (count < out.nodes.size()) out.nodes.resize(count);
    return out;
}

/// Seeded Euclidean instance on [0, extent]^2 with integer scores in
/// [1, max_score]; depot at the centre.
inline Instance make_random_instance(std::uint64_t seed, std::size_t count, double length_limit,
                                     double extent = 10.0, int max_score = 9) {
    CounterRng rng(seed, 0x1257A11CE);
    Instance inst;
    inst.length_limit = length_limit;
    inst.nodes.push_back({extent / 2, extent / 2, 0.0});
    for (std::size_t i = 1; i < count; ++i) {
        const double x = extent * rng.uniform();
        const double y = extent * rng.uniform();
        const double s = 1.0 + static_cast<double>(rng.below(static_cast<std::uint64_t>(max_score)));
        inst.nodes.push_back({x, y, s});
    }
    return inst;
}

// Canonical JSON form:
//   {"format":"opsw-instance","version":1,"length_limit":L,
//    "nodes":[[x,y,score],...], "dbar":[[...],...], "dhat":[[...],...]}
// `dbar`/`dhat` are optional; when absent, weights are Euclidean with zero deviation.

inline nlohmann::ordered_json to_json(const Instance& inst, const WeightModel* weights = nullptr) {
    nlohmann::ordered_json j;
    j["format"] = "opsw-instance";
    j["version"] = 1;
    j["length_limit"] = inst.length_limit;
    auto nodes = nlohmann::ordered_json::array();
    for (const auto& n : inst.nodes) nodes.push_back({n.x, n.y, n.score});
    j["nodes"] = std::move(nodes);
    if (weights) {
        auto dump = [](const Matrix& m) {
            auto rows = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < m.size(); ++i) {
                auto row = nlohmann::ordered_json::array();
                for (std::size_t k = 0; k < m.size(); ++k) row.push_back(m(i, k));
                rows.push_back(std::move(row));
            }
            return rows;
        };
        j["dbar"] = dump(weights->dbar);
        j["dhat"] = dump(weights->dhat);
    }
    return j;
}

inline std::string write_instance_json(const Instance& inst, const WeightModel* weights = nullptr) {
    return to_json(inst, weights).dump(1) + "\n";
}

struct LoadedInstance {
    Instance instance;
    std::optional<WeightModel> weights;
};

inline LoadedInstance read_instance_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, std::string("invalid instance JSON: ") + e.what());
    }
    if (j.value("format", "") != "opsw-instance") throw FormatError("not an opsw-instance document");

    LoadedInstance out;
    out.instance.length_limit = j.at("length_limit").get<double>();
    for (const auto& n : j.at("nodes")) {
        if (!n.is_array() || n.size() != 3) throw FormatError("node entries must be [x, y, score]");
        out.instance.nodes.push_back({n[0].get<double>(), n[1].get<double>(), n[2].get<double>()});
    }
    out.instance.validate();
    if (j.contains("dbar")) {
        auto load = [&](const nlohmann::json& rows) {
            const std::size_t n = out.instance.size();
            if (rows.size() != n) throw FormatError("weight matrix must be |N+| x |N+|");
            Matrix m(n);
            for (std::size_t i = 0; i < n; ++i) {
                if (rows[i].size() != n) throw FormatError("weight matrix must be |N+| x |N+|");
                for (std::size_t k = 0; k < n; ++k) m(i, k) = rows[i][k].get<double>();
            }
            return m;
        };
        WeightModel w{load(j.at("dbar")),
                      j.contains("dhat") ? load(j.at("dhat")) : Matrix(out.instance.size())};
        w.validate();
        out.weights = std::move(w);
    }
    return out;
}

/// Stable 64-bit fingerprint of the canonical JSON form, hex encoded.
inline std::string instance_hash(const Instance& inst, const WeightModel* weights = nullptr) {
    const auto h = detail::fnv1a(to_json(inst, weights).dump());
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) out[static_cast<std::size_t>(15 - i)] = digits[(h >> (4 * i)) & 0xF];
    return out;
}

}  // namespace opsw
