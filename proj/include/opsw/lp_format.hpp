#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "opsw/errors.hpp"
#include "opsw/format.hpp"
#include "opsw/milp.hpp"

// LP text layout written and read here:
//
//   \ key: value            metadata, one comment line per entry
//   Maximize
//    obj: 10 x_0_1 + 10 x_1_0
//   Subject To
//    length: 4 x_0_1 + 4 x_1_0 <= 10
//   Bounds
//    1 <= u_1 <= 1          continuous variables always, binaries only when not [0, 1]
//    u_2 = 3                fixed bounds
//   Binaries
//    x_0_1 x_1_0
//   End
//
// Bounds and Binaries list variables in order of first appearance (objective,
// then rows, then declaration order), which makes export -> parse -> export
// byte-identical.

namespace opsw {

namespace detail {

inline constexpr std::size_t kLpLineWidth = 80;

inline std::string lp_bound(double v) {
    if (v == std::numeric_limits<double>::infinity()) return "+inf";
    if (v == -std::numeric_limits<double>::infinity()) return "-inf";
    return format_number(v);
}

class LpLineWriter {
public:
    explicit LpLineWriter(std::string& out) : out_(out) {}

    void start(const std::string& head) {
        out_ += head;
        width_ = head.size();
    }
    void token(const std::string& tok) {
        if (width_ + 1 + tok.size() > kLpLineWidth && width_ > 4) {
            out_ += "\n   ";
            width_ = 3;
        }
        out_ += ' ';
        out_ += tok;
        width_ += tok.size() + 1;
    }
    void end() { out_ += '\n'; }

private:
    std::string& out_;
    std::size_t width_ = 0;
};

inline void write_terms(LpLineWriter& w, const MilpModel& m, const std::vector<Term>& terms) {
    bool first = true;
    for (const auto& t : terms) {
        if (t.coeff == 0.0) continue;
        const auto& name = m.variables()[t.var].name;
        if (first) {
            w.token(format_number(t.coeff) + " " + name);
        } else {
            w.token(t.coeff < 0 ? "-" : "+");
            w.token(format_number(std::abs(t.coeff)) + " " + name);
        }
        first = false;
    }
    if (first) w.token("0 " + m.variables().front().name);
}

inline const char* sense_token(Sense s) {
    switch (s) {
        case Sense::LessEqual: return "<=";
        case Sense::GreaterEqual: return ">=";
        case Sense::Equal: return "=";
    }
    return "?";
}

}  // namespace detail

/// Serializes a model as LP text. Throws FormatError for a model without variables.
inline std::string export_lp(const MilpModel& m) {
    if (m.variable_count() == 0) throw FormatError("cannot export a model without variables");
    std::string out;
    for (const auto& [k, v] : m.metadata()) out += "\\ " + k + ": " + v + "\n";

    detail::LpLineWriter w(out);
    out += "Maximize\n";
    w.start(" obj:");
    detail::write_terms(w, m, m.objective());
    w.end();

    out += "Subject To\n";
    for (const auto& c : m.constraints()) {
        w.start(" " + c.name + ":");
        detail::write_terms(w, m, c.terms);
        w.token(detail::sense_token(c.sense));
        w.token(format_number(c.rhs));
        w.end();
    }

    std::vector<std::size_t> order;
    std::vector<char> seen(m.variable_count(), 0);
    auto visit = [&](const std::vector<Term>& terms, bool placeholder) {
        bool any = false;
        for (const auto& t : terms)
            if (t.coeff != 0.0) {
                any = true;
                if (!seen[t.var]++) order.push_back(t.var);
            }
        if (!any && placeholder && !seen[0]++) order.push_back(0);
    };
    visit(m.objective(), true);
    for (const auto& c : m.constraints()) visit(c.terms, true);
    for (std::size_t v = 0; v < m.variable_count(); ++v)
        if (!seen[v]++) order.push_back(v);

    out += "Bounds\n";
    for (std::size_t v : order) {
        const auto& var = m.variables()[v];
        if (var.kind == VarKind::Binary && var.lo == 0.0 && var.hi == 1.0) continue;
        if (var.lo == var.hi) out += " " + var.name + " = " + format_number(var.lo) + "\n";
        else if (std::isinf(var.lo) && std::isinf(var.hi) && var.lo < 0 && var.hi > 0) out += " " + var.name + " free\n";
        else out += " " + detail::lp_bound(var.lo) + " <= " + var.name + " <= " + detail::lp_bound(var.hi) + "\n";
    }

    out += "Binaries\n";
    w.start("");
    bool any_binary = false;
    for (std::size_t v : order)
        if (m.variables()[v].kind == VarKind::Binary) {
            w.token(m.variables()[v].name);
            any_binary = true;
        }
    if (any_binary) w.end();
    out += "End\n";
    return out;
}

namespace detail {

struct LpToken {
    std::string text;
    std::size_t line;
};

inline std::optional<double> lp_number(const std::string& t) {
    if (t == "+inf" || t == "inf" || t == "+infinity" || t == "infinity") return std::numeric_limits<double>::infinity();
    if (t == "-inf" || t == "-infinity") return -std::numeric_limits<double>::infinity();
    if (t.empty() || !(std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '-' || t[0] == '+' || t[0] == '.'))
        return std::nullopt;
    std::size_t used = 0;
    try {
        const double v = std::stod(t, &used);
        if (used == t.size()) return v;
    } catch (const std::exception&) {
    }
    return std::nullopt;
}

inline bool is_sense(const std::string& t) { return t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">" || t == "=<" || t == "=>"; }

inline Sense to_sense(const std::string& t) {
    if (t == "<=" || t == "<" || t == "=<") return Sense::LessEqual;
    if (t == ">=" || t == ">" || t == "=>") return Sense::GreaterEqual;
    return Sense::Equal;
}

inline std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

class LpReader {
public:
    MilpModel read(std::string_view text) {
        enum class Section { None, Objective, Rows, Bounds, Binaries, End };
        Section section = Section::None;
        std::vector<LpToken> objective, rows;
        std::vector<std::vector<LpToken>> bound_lines;
        std::vector<LpToken> binaries;

        std::istringstream in{std::string(text)};
        std::string raw;
        std::size_t line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            std::string_view line = raw;
            if (const auto pos = line.find('\\'); pos != std::string_view::npos) {
                const auto comment = line.substr(pos + 1);
                if (pos == 0) read_meta(comment);
                line = line.substr(0, pos);
            }
            const auto toks = split(line, line_no);
            if (toks.empty()) continue;
            const std::string head = lower(toks[0].text);
            const std::string head2 = toks.size() > 1 ? lower(toks[1].text) : "";
            if (toks.size() == 1 && (head == "maximize" || head == "maximum" || head == "max")) {
                section = Section::Objective;
                continue;
            }
            if (toks.size() == 1 && (head == "minimize" || head == "minimum" || head == "min"))
                throw ParseError(line_no, "only maximization models are supported");
            if ((head == "subject" && head2 == "to" && toks.size() == 2) ||
                (toks.size() == 1 && (head == "st" || head == "s.t." || head == "such"))) {
                section = Section::Rows;
                continue;
            }
            if (toks.size() == 1 && (head == "bounds" || head == "bound")) {
                section = Section::Bounds;
                continue;
            }
            if (toks.size() == 1 && (head == "binaries" || head == "binary" || head == "bin")) {
                section = Section::Binaries;
                continue;
            }
            if (toks.size() == 1 && (head == "generals" || head == "general" || head == "semi-continuous"))
                throw ParseError(line_no, "section " + toks[0].text + " is not supported");
            if (toks.size() == 1 && head == "end") {
                section = Section::End;
                continue;
            }
            switch (section) {
                case Section::None: throw ParseError(line_no, "content before the objective section");
                case Section::Objective: objective.insert(objective.end(), toks.begin(), toks.end()); break;
                case Section::Rows: rows.insert(rows.end(), toks.begin(), toks.end()); break;
                case Section::Bounds: bound_lines.push_back(toks); break;
                case Section::Binaries: binaries.insert(binaries.end(), toks.begin(), toks.end()); break;
                case Section::End: throw ParseError(line_no, "content after End");
            }
        }
        if (section != Section::End) throw ParseError(line_no, "missing End");

        std::size_t pos = 0;
        if (!objective.empty()) {
            if (objective[0].text.back() == ':') ++pos;
            obj_ = terms(objective, pos, objective.size());
        }

        pos = 0;
        while (pos < rows.size()) {
            const auto& name_tok = rows[pos];
            if (name_tok.text.size() < 2 || name_tok.text.back() != ':')
                throw ParseError(name_tok.line, "expected a constraint name");
            std::string name = name_tok.text.substr(0, name_tok.text.size() - 1);
            ++pos;
            std::size_t end = pos;
            while (end < rows.size() && !is_sense(rows[end].text)) ++end;
            if (end + 1 >= rows.size()) throw ParseError(name_tok.line, "constraint " + name + " lacks a sense and rhs");
            Row row{std::move(name), terms(rows, pos, end), to_sense(rows[end].text), 0.0};
            const auto rhs = lp_number(rows[end + 1].text);
            if (!rhs) throw ParseError(rows[end + 1].line, "bad right-hand side " + rows[end + 1].text);
            row.rhs = *rhs;
            rows_.push_back(std::move(row));
            pos = end + 2;
        }

        for (const auto& line : bound_lines) read_bound(line);
        for (const auto& t : binaries) binary_.at(var(t.text)) = 1;
        return build();
    }

private:
    struct Row {
        std::string name;
        std::vector<Term> terms;
        Sense sense;
        double rhs;
    };

    void read_meta(std::string_view comment) {
        const auto t = trim_view(comment);
        const auto colon = t.find(": ");
        if (colon == std::string_view::npos) return;
        meta_.emplace_back(std::string(t.substr(0, colon)), std::string(t.substr(colon + 2)));
    }

    static std::string_view trim_view(std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    }

    static std::vector<LpToken> split(std::string_view line, std::size_t line_no) {
        std::vector<LpToken> out;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            if (j > i) out.push_back({std::string(line.substr(i, j - i)), line_no});
            i = j;
        }
        return out;
    }

    std::size_t var(const std::string& name) {
        const auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        index_.emplace(name, names_.size());
        names_.push_back(name);
        lo_.push_back(0.0);
        hi_.push_back(std::numeric_limits<double>::infinity());
        bounded_.push_back(0);
        binary_.push_back(0);
        return names_.size() - 1;
    }

    std::vector<Term> terms(const std::vector<LpToken>& toks, std::size_t begin, std::size_t end) {
        std::vector<Term> out;
        double sign = 1.0;
        std::optional<double> coeff;
        for (std::size_t i = begin; i < end; ++i) {
            const auto& t = toks[i].text;
            if (t == "+" || t == "-") {
                if (coeff) throw ParseError(toks[i].line, "dangling coefficient");
                if (t == "-") sign = -sign;
                continue;
            }
            if (const auto num = lp_number(t)) {
                if (coeff) throw ParseError(toks[i].line, "two coefficients in a row");
                coeff = *num;
                continue;
            }
            const double c = sign * coeff.value_or(1.0);
            const std::size_t v = var(t);
            if (c != 0.0) out.push_back({v, c});
            sign = 1.0;
            coeff.reset();
        }
        if (coeff) throw ParseError(toks.empty() ? 0 : toks[end - 1].line, "coefficient without a variable");
        return out;
    }

    void read_bound(const std::vector<LpToken>& toks) {
        const std::size_t line = toks[0].line;
        auto num = [&](const LpToken& t) {
            const auto v = lp_number(t.text);
            if (!v) throw ParseError(line, "bad bound " + t.text);
            return *v;
        };
        auto set = [&](const std::string& name, std::optional<double> lo, std::optional<double> hi) {
            const std::size_t v = var(name);
            if (lo) lo_[v] = *lo;
            if (hi) hi_[v] = *hi;
            bounded_[v] = 1;
        };
        if (toks.size() == 2 && lower(toks[1].text) == "free") {
            set(toks[0].text, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
        } else if (toks.size() == 5 && is_sense(toks[1].text) && is_sense(toks[3].text)) {
            set(toks[2].text, num(toks[0]), num(toks[4]));
        } else if (toks.size() == 3 && is_sense(toks[1].text)) {
            const bool name_first = !lp_number(toks[0].text).has_value();
            const std::string& name = name_first ? toks[0].text : toks[2].text;
            const double value = num(name_first ? toks[2] : toks[0]);
            Sense s = to_sense(toks[1].text);
            if (!name_first && s != Sense::Equal) s = s == Sense::LessEqual ? Sense::GreaterEqual : Sense::LessEqual;
            if (s == Sense::Equal) set(name, value, value);
            else if (s == Sense::LessEqual) set(name, std::nullopt, value);
            else set(name, value, std::nullopt);
        } else {
            throw ParseError(line, "unrecognized bound");
        }
    }

    MilpModel build() {
        MilpModel m;
        for (const auto& [k, v] : meta_) m.set_meta(k, v);
        for (std::size_t v = 0; v < names_.size(); ++v) {
            if (binary_[v]) {
                const double lo = bounded_[v] ? lo_[v] : 0.0;
                const double hi = bounded_[v] ? std::min(hi_[v], 1.0) : 1.0;
                m.add_variable(names_[v], VarKind::Binary, lo, hi);
            } else {
                m.add_variable(names_[v], VarKind::Continuous, lo_[v], hi_[v]);
            }
        }
        m.set_objective(obj_);
        for (auto& r : rows_) m.add_constraint(std::move(r.name), std::move(r.terms), r.sense, r.rhs);
        return m;
    }

    MilpModel::Metadata meta_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> names_;
    std::vector<double> lo_, hi_;
    std::vector<char> bounded_, binary_;
    std::vector<Term> obj_;
    std::vector<Row> rows_;
};

}  // namespace detail

/// Reads LP text produced by export_lp (and the common subset of the format).
inline MilpModel parse_lp(std::string_view text) { return detail::LpReader{}.read(text); }

}  // namespace opsw
