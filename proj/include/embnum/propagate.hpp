#pragma once

#include "embnum/bound.hpp"
#include "embnum/kirby.hpp"
#include "embnum/manifolds.hpp"
#include "embnum/obstruct.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace embnum {

/// A registered fact about eps(L_n), n indexing the family L(n, n-1) with the
/// chain-plumbing spin structure.  PaperConstruction facts are the cited
/// handle-calculus results the library cannot re-derive and must name their
/// source.
struct Fact {
    Int n = 2;
    Direction dir = Direction::Upper;
    Int value = 0;
    Assumption assumption = Assumption::PaperConstruction;
    std::string citation;

    void validate() const {
        if (n < 2) throw std::invalid_argument("Fact: index n must be >= 2");
        if (value < 0) throw std::invalid_argument("Fact: value must be >= 0");
        if (assumption == Assumption::PaperConstruction && citation.empty())
            throw std::invalid_argument("Fact: construction facts must carry a citation");
    }
};

inline Direction direction_from_string(const std::string& s) {
    if (s == "lower") return Direction::Lower;
    if (s == "upper") return Direction::Upper;
    if (s == "exact") return Direction::Exact;
    throw std::invalid_argument("unknown direction: " + s);
}

inline Assumption assumption_from_string(const std::string& s) {
    if (s == "Unconditional") return Assumption::Unconditional;
    if (s == "PaperConstruction") return Assumption::PaperConstruction;
    if (s == "Assumes11_8") return Assumption::Assumes11_8;
    throw std::invalid_argument("unknown assumption tag: " + s);
}

inline std::vector<Fact> facts_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("facts registry: expected a JSON array");
    std::vector<Fact> out;
    for (const auto& e : j) {
        if (!e.is_object()) throw std::invalid_argument("facts registry: entries must be objects");
        for (const char* key : {"n", "direction", "value", "assumption", "citation"})
            if (!e.contains(key))
                throw std::invalid_argument(std::string("facts registry: entry missing \"") + key + "\"");
        Fact f;
        f.n = e.at("n").get<Int>();
        f.dir = direction_from_string(e.at("direction").get<std::string>());
        f.value = e.at("value").get<Int>();
        f.assumption = assumption_from_string(e.at("assumption").get<std::string>());
        f.citation = e.at("citation").get<std::string>();
        f.validate();
        out.push_back(std::move(f));
    }
    return out;
}

inline nlohmann::json facts_to_json(const std::vector<Fact>& facts) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& f : facts)
        j.push_back({{"n", f.n},
                     {"direction", to_string(f.dir)},
                     {"value", f.value},
                     {"assumption", to_string(f.assumption)},
                     {"citation", f.citation}});
    return j;
}

/// The bundled registry: the two construction uppers that the tables need
/// and that no in-library rule derives.
inline std::vector<Fact> default_registry() {
    return {
        Fact{17, Direction::Upper, 6, Assumption::PaperConstruction,
             "the length-16 chain of -2-spheres embeds in the K3 surface with complement "
             "a single 0-handle and six even-framed 2-handles"},
        Fact{19, Direction::Upper, 4, Assumption::PaperConstruction,
             "the length-18 chain of -2-spheres embeds in a homotopy K3 (double cover of CP^2 "
             "branched over a smoothed sextic) with complement four even-framed 2-handles"},
    };
}

// ---------------------------------------------------------------------------
// ledger

/// One tightening step: which rule produced the value from which indices.
struct Derivation {
    std::string rule;
    std::vector<Int> inputs;
    Int value = 0;
    Assumption assumption = Assumption::Unconditional;
    std::string detail;
};

struct LedgerCell {
    Int lower = 0;
    std::optional<Int> upper;
    std::vector<Derivation> lower_chain;
    std::vector<Derivation> upper_chain;
};

class ContradictionError : public std::runtime_error {
public:
    ContradictionError(Int n, std::string chain)
        : std::runtime_error("bound contradiction at n = " + std::to_string(n) + ":\n" + chain),
          n_(n), chain_(std::move(chain)) {}
    Int index() const { return n_; }
    const std::string& chain() const { return chain_; }

private:
    Int n_;
    std::string chain_;
};

/// Interval ledger for eps(L_n), n = 2..n_max, with provenance per
/// tightening.  All rules narrow intervals, so a fixpoint exists and is
/// independent of application order.
class BoundLedger {
public:
    BoundLedger(Int n_max, Mode mode) : n_max_(n_max), mode_(mode) {
        if (n_max < 2) throw std::invalid_argument("BoundLedger: n_max must be >= 2");
        cells_.resize(static_cast<size_t>(n_max - 1));
    }

    Int n_max() const { return n_max_; }
    Mode mode() const { return mode_; }

    const LedgerCell& cell(Int n) const { return cells_.at(index(n)); }
    Int lower(Int n) const { return cell(n).lower; }
    std::optional<Int> upper(Int n) const { return cell(n).upper; }
    bool exact(Int n) const { return cell(n).upper && *cell(n).upper == cell(n).lower; }

    bool tighten_lower(Int n, Derivation d) {
        LedgerCell& c = cells_.at(index(n));
        if (d.value <= c.lower) return false;
        c.lower_chain.push_back(d);
        c.lower = d.value;
        if (c.upper && c.lower > *c.upper) throw ContradictionError(n, describe(n));
        return true;
    }

    bool tighten_upper(Int n, Derivation d) {
        LedgerCell& c = cells_.at(index(n));
        if (c.upper && d.value >= *c.upper) return false;
        c.upper_chain.push_back(d);
        c.upper = d.value;
        if (c.lower > *c.upper) throw ContradictionError(n, describe(n));
        return true;
    }

    /// Text form of the full derivation history at n.
    std::string describe(Int n) const {
        const LedgerCell& c = cell(n);
        std::ostringstream os;
        os << "eps(L_" << n << ") in [" << c.lower << ", ";
        if (c.upper) os << *c.upper; else os << "inf";
        os << "]\n";
        auto dump = [&](const char* side, const std::vector<Derivation>& chain) {
            for (const auto& d : chain) {
                os << "  " << side << " " << d.value << " via " << d.rule;
                if (!d.inputs.empty()) {
                    os << "(";
                    for (size_t i = 0; i < d.inputs.size(); ++i)
                        os << (i ? ", " : "") << "n=" << d.inputs[i];
                    os << ")";
                }
                if (!d.detail.empty()) os << ": " << d.detail;
                os << "\n";
            }
        };
        dump("lower", c.lower_chain);
        dump("upper", c.upper_chain);
        return os.str();
    }

private:
    size_t index(Int n) const {
        if (n < 2 || n > n_max_) throw std::out_of_range("BoundLedger: index out of range");
        return static_cast<size_t>(n - 2);
    }

    Int n_max_;
    Mode mode_;
    std::vector<LedgerCell> cells_;
};

// ---------------------------------------------------------------------------
// seeding

/// Machine-derivable seeds for every n plus the registered facts:
/// uppers from the blown-up chain presentation, lowers from the splitting
/// search against the chain plumbing filling (b2, sigma) = (n-1, 1-n) with
/// its Rokhlin residue and the branched-cover b2 parity.
inline BoundLedger seed_ledger(Int n_max, Mode mode,
                               const std::vector<Fact>& facts = default_registry()) {
    BoundLedger ledger(n_max, mode);
    for (Int n = 2; n <= n_max; ++n) {
        ChainUpperBound cu = chain_upper_bound(n, n - 1);
        Derivation du;
        du.rule = "chain-presentation";
        du.value = cu.min_even_components;
        du.assumption = Assumption::Unconditional;
        du.detail = "even-framed presentation from the -2-chain of length " + std::to_string(n - 1);
        ledger.tighten_upper(n, du);

        SplitConstraints c;
        c.fillings = {SpinFilling(n - 1, 1 - n)};
        c.mu = rokhlin_mu(c.fillings.front());
        c.b2_parity = spin_filling_b2_parity(branched_link_components(LensSpace(n, n - 1)));
        c.mode = mode;
        Derivation dl;
        dl.rule = "splitting-search";
        dl.value = min_embedding_lower(c);
        dl.assumption = mode == Mode::Assume11_8 ? Assumption::Assumes11_8 : Assumption::Unconditional;
        {
            std::ostringstream os;
            os << "Rokhlin residue " << *c.mu << " mod 16, filling (" << n - 1 << ", " << 1 - n
               << "), b2 parity " << *c.b2_parity << ", " << to_string(mode) << " bound";
            dl.detail = os.str();
        }
        ledger.tighten_lower(n, dl);
    }
    for (const auto& f : facts) {
        f.validate();
        if (f.n > n_max) continue;
        Derivation d;
        d.rule = "registry";
        d.value = f.value;
        d.assumption = f.assumption;
        d.detail = f.citation;
        if (f.dir != Direction::Upper) ledger.tighten_lower(f.n, d);
        if (f.dir != Direction::Lower) ledger.tighten_upper(f.n, d);
    }
    return ledger;
}

// ---------------------------------------------------------------------------
// propagation rules

enum class Rule { UpperStepPrev, UpperStepNext, UpperSubadd, LowerStepPrev, LowerStepNext };

inline const char* to_string(Rule r) {
    switch (r) {
        case Rule::UpperStepPrev: return "upper-step-prev";
        case Rule::UpperStepNext: return "upper-step-next";
        case Rule::UpperSubadd: return "upper-subadditivity";
        case Rule::LowerStepPrev: return "lower-step-prev";
        case Rule::LowerStepNext: return "lower-step-next";
    }
    return "?";
}

/// Applies one rule at one index; returns whether the interval tightened.
/// Rules: eps(L_{m+n}) <= eps(L_m) + eps(L_n) + 1 and
/// eps(L_{n-1}) - 1 <= eps(L_n) <= eps(L_{n-1}) + 1.
inline bool apply_rule(BoundLedger& ledger, Rule rule, Int n) {
    const Int n_max = ledger.n_max();
    if (n < 2 || n > n_max) return false;
    auto assumption_of = [&](std::initializer_list<Int> idx, bool upper_side) {
        Assumption a = Assumption::Unconditional;
        for (Int i : idx) {
            const auto& chain = upper_side ? ledger.cell(i).upper_chain : ledger.cell(i).lower_chain;
            if (!chain.empty() && static_cast<int>(chain.back().assumption) > static_cast<int>(a))
                a = chain.back().assumption;
        }
        return a;
    };
    switch (rule) {
        case Rule::UpperStepPrev: {
            if (n - 1 < 2 || !ledger.upper(n - 1)) return false;
            Derivation d{to_string(rule), {n - 1}, *ledger.upper(n - 1) + 1,
                         assumption_of({n - 1}, true), ""};
            return ledger.tighten_upper(n, d);
        }
        case Rule::UpperStepNext: {
            if (n + 1 > n_max || !ledger.upper(n + 1)) return false;
            Derivation d{to_string(rule), {n + 1}, *ledger.upper(n + 1) + 1,
                         assumption_of({n + 1}, true), ""};
            return ledger.tighten_upper(n, d);
        }
        case Rule::UpperSubadd: {
            bool changed = false;
            for (Int m = 2; m <= n - 2; ++m) {
                if (!ledger.upper(m) || !ledger.upper(n - m)) continue;
                Derivation d{to_string(rule), {m, n - m}, *ledger.upper(m) + *ledger.upper(n - m) + 1,
                             assumption_of({m, n - m}, true), ""};
                changed = ledger.tighten_upper(n, d) || changed;
            }
            return changed;
        }
        case Rule::LowerStepPrev: {
            if (n - 1 < 2) return false;
            Derivation d{to_string(rule), {n - 1}, ledger.lower(n - 1) - 1,
                         assumption_of({n - 1}, false), ""};
            return ledger.tighten_lower(n, d);
        }
        case Rule::LowerStepNext: {
            if (n + 1 > n_max) return false;
            Derivation d{to_string(rule), {n + 1}, ledger.lower(n + 1) - 1,
                         assumption_of({n + 1}, false), ""};
            return ledger.tighten_lower(n, d);
        }
    }
    return false;
}

/// Runs all rules to the unique fixpoint.  Throws ContradictionError when a
/// registered fact clashes with a derived bound.
inline BoundLedger propagate(BoundLedger ledger) {
    const Rule rules[] = {Rule::UpperStepPrev, Rule::UpperStepNext, Rule::UpperSubadd,
                          Rule::LowerStepPrev, Rule::LowerStepNext};
    bool changed = true;
    while (changed) {
        changed = false;
        for (Int n = 2; n <= ledger.n_max(); ++n)
            for (Rule r : rules)
                changed = apply_rule(ledger, r, n) || changed;
    }
    return ledger;
}

// ---------------------------------------------------------------------------
// the limit eps_L = lim eps(L_n)/n

struct EpsilonLBounds {
    BigRat lower = 0;
    BigRat upper = 0;
    Int upper_witness = 0; // n achieving min (upper(n) + 1) / n
    Assumption lower_assumption = Assumption::Unconditional;
};

/// eps_L >= 1/9 (10/8 bound), >= 3/19 assuming 11/8; eps_L <= (eps(L_n)+1)/n
/// for every n, by iterated subadditivity and Fekete's lemma.
inline EpsilonLBounds epsilon_L_bounds(const BoundLedger& ledger, Mode mode) {
    EpsilonLBounds out;
    switch (mode) {
        case Mode::Furuta10_8:
            out.lower = BigRat(1, 9);
            out.lower_assumption = Assumption::Unconditional;
            break;
        case Mode::Assume11_8:
            out.lower = BigRat(3, 19);
            out.lower_assumption = Assumption::Assumes11_8;
            break;
        case Mode::RokhlinOnly:
            out.lower = 0;
            break;
    }
    bool have = false;
    for (Int n = 2; n <= ledger.n_max(); ++n) {
        if (!ledger.upper(n)) continue;
        BigRat cand(*ledger.upper(n) + 1, n);
        if (!have || cand < out.upper) {
            out.upper = cand;
            out.upper_witness = n;
            have = true;
        }
    }
    if (!have) throw std::invalid_argument("epsilon_L_bounds: ledger carries no upper bounds");
    return out;
}

// ---------------------------------------------------------------------------
// tables

enum class TableKind { Figure1, SmallLn };

struct TableCell {
    Int n = 0;          // table key: L(n,1) for Figure1, L_n for SmallLn
    Int value = 0;      // exact embedding number
    Assumption assumption = Assumption::Unconditional;
    std::string lower_rule;
    std::string upper_rule;
    bool upper_from_registry = false;
    bool lower_from_registry = false;
};

/// Emits a fully determined table; refuses when any requested cell is still a
/// strict interval.  Figure1 rows are eps(L(n,1)) for odd n, equal to
/// eps(L_n) because orientation reversal preserves the embedding number.
inline std::vector<TableCell> emit_table(const BoundLedger& ledger, TableKind kind) {
    std::vector<Int> keys;
    if (kind == TableKind::Figure1) {
        for (Int n = 3; n <= std::min<Int>(19, ledger.n_max()); n += 2) keys.push_back(n);
    } else {
        for (Int n = 2; n <= std::min<Int>(19, ledger.n_max()); ++n) keys.push_back(n);
    }
    std::vector<TableCell> out;
    for (Int n : keys) {
        if (!ledger.exact(n)) {
            std::ostringstream os;
            os << "emit_table: eps(L_" << n << ") is not pinned to a single value: [" << ledger.lower(n)
               << ", ";
            if (ledger.upper(n)) os << *ledger.upper(n); else os << "inf";
            os << "]";
            throw std::runtime_error(os.str());
        }
        const LedgerCell& c = ledger.cell(n);
        TableCell cell;
        cell.n = n;
        cell.value = c.lower;
        cell.lower_rule = c.lower_chain.empty() ? "" : c.lower_chain.back().rule;
        cell.upper_rule = c.upper_chain.empty() ? "" : c.upper_chain.back().rule;
        cell.lower_from_registry = cell.lower_rule == "registry";
        cell.upper_from_registry = cell.upper_rule == "registry";
        Assumption a = Assumption::Unconditional;
        if (!c.lower_chain.empty()) a = std::max(a, c.lower_chain.back().assumption);
        if (!c.upper_chain.empty()) a = std::max(a, c.upper_chain.back().assumption);
        cell.assumption = a;
        out.push_back(std::move(cell));
    }
    return out;
}

} // namespace embnum
