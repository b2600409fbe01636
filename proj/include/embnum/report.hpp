#pragma once

#include "embnum/bound.hpp"
#include "embnum/obstruct.hpp"
#include "embnum/propagate.hpp"

#include <nlohmann/json.hpp>

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace embnum {

enum class OutputFormat { Text, Json, Csv };

inline OutputFormat output_format_from_string(const std::string& s) {
    if (s == "text") return OutputFormat::Text;
    if (s == "json") return OutputFormat::Json;
    if (s == "csv") return OutputFormat::Csv;
    throw std::invalid_argument("unknown output format: " + s);
}

/// One reported result: a manifold, its bound interval, provenance, and any
/// extra named invariants.  exact implies lower == upper.
struct OutputRecord {
    std::string manifold;
    Int lower = 0;
    std::optional<Int> upper;
    bool exact = false;
    Assumption assumption = Assumption::Unconditional;
    std::vector<std::string> citations;
    std::vector<std::pair<std::string, std::string>> extras;
    std::vector<std::string> trace;

    static OutputRecord from_bounds(std::string name, const BoundSet& bs) {
        OutputRecord r;
        r.manifold = std::move(name);
        r.lower = bs.lower();
        r.upper = bs.upper();
        r.exact = bs.exact();
        r.assumption = bs.assumption();
        r.citations = bs.citations();
        return r;
    }
};

inline nlohmann::json record_to_json(const OutputRecord& r) {
    nlohmann::json j{{"manifold", r.manifold},
                     {"lower", r.lower},
                     {"exact", r.exact},
                     {"assumption", to_string(r.assumption)},
                     {"citations", r.citations}};
    if (r.upper) j["upper"] = *r.upper;
    else j["upper"] = nullptr;
    for (const auto& [k, v] : r.extras) j[k] = v;
    if (!r.trace.empty()) j["trace"] = r.trace;
    return j;
}

inline void print_record_text(std::ostream& os, const OutputRecord& r) {
    os << r.manifold << ": eps ";
    if (r.exact) os << "= " << r.lower;
    else if (r.upper) os << "in [" << r.lower << ", " << *r.upper << "]";
    else os << ">= " << r.lower;
    os << "  [" << to_string(r.assumption) << "]\n";
    for (const auto& [k, v] : r.extras) os << "  " << k << ": " << v << "\n";
    for (const auto& c : r.citations) os << "  - " << c << "\n";
    for (const auto& t : r.trace) os << "  | " << t << "\n";
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += "\"";
    return out;
}

inline void print_record_csv(std::ostream& os, const OutputRecord& r, bool header) {
    if (header) os << "manifold,lower,upper,exact,assumption\n";
    os << csv_quote(r.manifold) << "," << r.lower << ",";
    if (r.upper) os << *r.upper;
    os << "," << (r.exact ? "true" : "false") << "," << to_string(r.assumption) << "\n";
}

inline void print_records(std::ostream& os, const std::vector<OutputRecord>& rs, OutputFormat f) {
    switch (f) {
        case OutputFormat::Text:
            for (const auto& r : rs) print_record_text(os, r);
            break;
        case OutputFormat::Json: {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& r : rs) j.push_back(record_to_json(r));
            os << j.dump(2) << "\n";
            break;
        }
        case OutputFormat::Csv:
            for (size_t i = 0; i < rs.size(); ++i) print_record_csv(os, rs[i], i == 0);
            break;
    }
}

// ---------------------------------------------------------------------------
// tables

inline void print_table(std::ostream& os, const std::vector<TableCell>& cells, TableKind kind,
                        OutputFormat f, bool with_provenance) {
    const char* label = kind == TableKind::Figure1 ? "eps(L(n,1))" : "eps(L_n)";
    switch (f) {
        case OutputFormat::Csv: {
            os << "n";
            for (const auto& c : cells) os << "," << c.n;
            os << "\n" << label;
            for (const auto& c : cells) os << "," << c.value;
            os << "\n";
            break;
        }
        case OutputFormat::Json: {
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& c : cells)
                rows.push_back({{"n", c.n},
                                {"value", c.value},
                                {"assumption", to_string(c.assumption)},
                                {"lower_rule", c.lower_rule},
                                {"upper_rule", c.upper_rule},
                                {"upper_from_registry", c.upper_from_registry},
                                {"lower_from_registry", c.lower_from_registry}});
            os << nlohmann::json{{"table", kind == TableKind::Figure1 ? "figure1" : "small-ln"},
                                 {"rows", rows}}
                      .dump(2)
               << "\n";
            break;
        }
        case OutputFormat::Text: {
            os << std::setw(12) << "n";
            for (const auto& c : cells) os << std::setw(4) << c.n;
            os << "\n" << std::setw(12) << label;
            for (const auto& c : cells) os << std::setw(4) << c.value;
            os << "\n";
            if (with_provenance) {
                for (const auto& c : cells) {
                    os << "  n=" << c.n << ": lower via " << c.lower_rule << ", upper via "
                       << c.upper_rule;
                    if (c.upper_from_registry) os << " (registry fact)";
                    os << "\n";
                }
            }
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// search trace rendering

inline std::vector<std::string> render_trace(const SearchTrace& t) {
    std::vector<std::string> out;
    for (const auto& level : t.levels) {
        std::ostringstream os;
        os << "m = " << level.m << ": " << (level.feasible ? "feasible" : "infeasible");
        if (level.witness) {
            os << " with (b2(U), sigma(U)) = (" << level.witness->b_u << ", " << level.witness->s_u
               << ")";
            if (!level.witness->u_class.empty())
                os << ", U = " << level.witness->u_class << ", V = " << level.witness->v_class;
        }
        if (!level.note.empty()) os << "; " << level.note;
        out.push_back(os.str());
        for (const auto& rej : level.rejects) {
            std::ostringstream ro;
            ro << "  m = " << level.m << ", b2(U) = " << rej.b_u;
            if (rej.s_u) ro << ", sigma(U) = " << *rej.s_u;
            ro << ": " << rej.reason;
            out.push_back(ro.str());
        }
    }
    return out;
}

} // namespace embnum
