#pragma once

#include "embnum/bound.hpp"
#include "embnum/quadform.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace embnum {

enum class Mode { Furuta10_8, Assume11_8, RokhlinOnly };

inline const char* to_string(Mode m) {
    switch (m) {
        case Mode::Furuta10_8: return "10/8";
        case Mode::Assume11_8: return "11/8";
        case Mode::RokhlinOnly: return "Rokhlin";
    }
    return "?";
}

/// (b2, sigma) of a spin 4-manifold filling, oriented so its boundary is the
/// 3-manifold under study.
struct SpinFilling {
    Int b2 = 0;
    Int sigma = 0;

    SpinFilling() = default;
    SpinFilling(Int b2_, Int sigma_) : b2(b2_), sigma(sigma_) {
        if (b2 < 0) throw std::invalid_argument("SpinFilling: b2 must be >= 0");
        if (sigma > b2 || sigma < -b2)
            throw std::invalid_argument("SpinFilling: |sigma| must be <= b2");
        if (mod_floor(b2 - sigma, 2) != 0)
            throw std::invalid_argument("SpinFilling: b2 and sigma must agree mod 2");
    }
};

/// Signature mod 16 of the filling: the Rokhlin invariant of its spin
/// boundary.  Well-definedness across fillings is Rokhlin's theorem and is
/// the caller's certificate, not re-proved here.
inline Int rokhlin_mu(const SpinFilling& f) { return mod_floor(f.sigma, 16); }

/// Whether a closed spin 4-manifold with these invariants passes the selected
/// inequality.  Furuta's bound 8 b2 >= 10 |sigma| + 16 is applied only when
/// sigma != 0; the 11/8 mode additionally requires 8 b2 >= 11 |sigma|.
inline bool closed_spin_ok(Int b2, Int sigma, Mode mode) {
    if (mod_floor(sigma, 16) != 0)
        throw std::invalid_argument("closed_spin_ok: closed spin signature must be 0 mod 16");
    Int a = sigma < 0 ? -sigma : sigma;
    if (b2 < a) throw std::invalid_argument("closed_spin_ok: b2 < |sigma|");
    if (mode == Mode::RokhlinOnly) return true;
    if (sigma != 0 && 8 * b2 < 10 * a + 16) return false;
    if (mode == Mode::Assume11_8 && 8 * b2 < 11 * a) return false;
    return true;
}

/// Feasibility inputs for splitting #_m S2 x S2 along the 3-manifold into two
/// spin pieces U and V.
struct SplitConstraints {
    std::optional<Int> mu;             // Rokhlin residue mod 16, if known
    std::vector<SpinFilling> fillings; // known spin fillings of the 3-manifold
    bool zhs = false;                  // integral homology sphere: pieces are even unimodular
    bool forbid_definite = false;      // no nonzero-rank definite spin filling (e.g. d = 0)
    std::optional<Int> b2_parity;      // forced parity of b2 of every spin filling
    Mode mode = Mode::Furuta10_8;

    void validate() const {
        if (mu && (*mu < 0 || *mu >= 16))
            throw std::invalid_argument("SplitConstraints: mu must be a residue in [0, 16)");
        if (b2_parity && *b2_parity != 0 && *b2_parity != 1)
            throw std::invalid_argument("SplitConstraints: b2_parity must be 0 or 1");
        for (const auto& f : fillings) {
            if (mu && mod_floor(f.sigma - *mu, 16) != 0)
                throw std::invalid_argument("SplitConstraints: filling signature is not congruent to mu mod 16");
            if (!fillings.empty() && mod_floor(f.sigma - fillings.front().sigma, 16) != 0)
                throw std::invalid_argument("SplitConstraints: fillings disagree mod 16");
            if (b2_parity && mod_floor(f.b2, 2) != *b2_parity)
                throw std::invalid_argument("SplitConstraints: filling b2 violates the parity constraint");
        }
        if (zhs && mu && *mu % 8 != 0)
            throw std::invalid_argument("SplitConstraints: an integral homology sphere has mu = 0 or 8");
        if (zhs && b2_parity && *b2_parity == 1)
            throw std::invalid_argument("SplitConstraints: zhs forces even b2 of spin fillings");
    }

    /// Residue class of sigma(U) mod 16: mu if given, otherwise forced by the
    /// fillings through Rokhlin's theorem.
    std::optional<Int> effective_mu() const {
        if (mu) return mu;
        if (!fillings.empty()) return mod_floor(fillings.front().sigma, 16);
        return std::nullopt;
    }
};

// ---------------------------------------------------------------------------
// search with optional trace

struct SplitWitness {
    Int m = 0;
    Int b_u = 0;
    Int s_u = 0;
    std::string u_class; // even unimodular class names when zhs
    std::string v_class;
};

struct CandidateReject {
    Int b_u = 0;
    std::optional<Int> s_u;
    std::string reason;
};

struct LevelTrace {
    Int m = 0;
    bool feasible = false;
    std::optional<SplitWitness> witness;
    std::vector<CandidateReject> rejects;
    Int candidates = 0; // (b_u, s_u) pairs examined
    std::string note;
};

struct SearchTrace {
    std::vector<LevelTrace> levels;
};

namespace detail {
constexpr Int kTraceRejectCap = 64;

inline bool split_feasible_impl(Int m, const SplitConstraints& c, LevelTrace* trace) {
    const auto effmu = c.effective_mu();
    for (Int b_u = 0; b_u <= 2 * m; ++b_u) {
        const Int b_v = 2 * m - b_u;
        if (c.b2_parity &&
            (mod_floor(b_u, 2) != *c.b2_parity || mod_floor(b_v, 2) != *c.b2_parity)) {
            continue;
        }
        const Int lim = std::min(b_u, b_v);
        Int s_u = -lim, step = 1;
        if (effmu) {
            s_u = -lim + mod_floor(*effmu + lim, 16);
            step = 16;
        }
        for (; s_u <= lim; s_u += step) {
            const Int s_v = -s_u;
            if (trace) ++trace->candidates;
            std::string reason;
            std::string u_class, v_class;
            if (c.zhs) {
                if (!even_unimodular_exists(b_u, s_u))
                    reason = "no even unimodular form with (rank, sigma) = (" +
                             std::to_string(b_u) + ", " + std::to_string(s_u) + ") for U";
                else if (!even_unimodular_exists(b_v, s_v))
                    reason = "no even unimodular form with (rank, sigma) = (" +
                             std::to_string(b_v) + ", " + std::to_string(s_v) + ") for V";
                else {
                    u_class = even_unimodular_name(b_u, s_u);
                    v_class = even_unimodular_name(b_v, s_v);
                }
            }
            if (reason.empty() && c.forbid_definite) {
                auto definite = [](Int b, Int s) { return b > 0 && (s == b || s == -b); };
                if (definite(b_u, s_u) || definite(b_v, s_v)) {
                    std::ostringstream os;
                    if (c.zhs) os << "U = " << u_class << ", V = " << v_class << ": ";
                    os << "nonzero definite spin piece excluded (vanishing correction term)";
                    reason = os.str();
                }
            }
            if (reason.empty()) {
                for (const auto& f : c.fillings) {
                    // X1 = filling glued to V, X2 = reversed filling glued to U
                    const Int sig1 = f.sigma + s_v;
                    const Int sig2 = -f.sigma + s_u;
                    if (mod_floor(sig1, 16) != 0 || mod_floor(sig2, 16) != 0) {
                        reason = "closed signature not 0 mod 16 against filling (" +
                                 std::to_string(f.b2) + ", " + std::to_string(f.sigma) + ")";
                        break;
                    }
                    if (!closed_spin_ok(f.b2 + b_v, sig1, c.mode)) {
                        std::ostringstream os;
                        os << "filling (" << f.b2 << ", " << f.sigma << ") + V gives closed spin ("
                           << f.b2 + b_v << ", " << sig1 << ") violating the " << to_string(c.mode)
                           << " bound";
                        reason = os.str();
                        break;
                    }
                    if (!closed_spin_ok(f.b2 + b_u, sig2, c.mode)) {
                        std::ostringstream os;
                        os << "reversed filling (" << f.b2 << ", " << -f.sigma
                           << ") + U gives closed spin (" << f.b2 + b_u << ", " << sig2
                           << ") violating the " << to_string(c.mode) << " bound";
                        reason = os.str();
                        break;
                    }
                }
            }
            if (reason.empty()) {
                if (trace) {
                    trace->feasible = true;
                    trace->witness = SplitWitness{m, b_u, s_u, u_class, v_class};
                }
                return true;
            }
            if (trace && static_cast<Int>(trace->rejects.size()) < kTraceRejectCap)
                trace->rejects.push_back(CandidateReject{b_u, s_u, std::move(reason)});
        }
    }
    if (trace && trace->candidates == 0)
        trace->note = "no (b_u, s_u) with |sigma| <= min(b_u, b_v) in the required residue class";
    return false;
}
} // namespace detail

/// Whether #_m S2 x S2 can be split along the 3-manifold compatibly with all
/// constraints.  Monotone in m.
inline bool split_feasible(Int m, const SplitConstraints& c) {
    if (m < 0) return false;
    c.validate();
    return detail::split_feasible_impl(m, c, nullptr);
}

/// Least m such that the splitting is feasible; this is a lower bound for the
/// embedding number.  Exhaustive integer search, no heuristics.
inline Int min_embedding_lower(const SplitConstraints& c, SearchTrace* trace = nullptr) {
    c.validate();
    Int cap = 128;
    for (const auto& f : c.fillings) cap += 2 * (f.b2 + (f.sigma < 0 ? -f.sigma : f.sigma));
    for (Int m = 0; m <= cap; ++m) {
        LevelTrace level;
        level.m = m;
        bool ok = detail::split_feasible_impl(m, c, trace ? &level : nullptr);
        if (trace) trace->levels.push_back(std::move(level));
        if (ok) return m;
    }
    throw std::runtime_error("min_embedding_lower: constraints admit no splitting within the search cap");
}

/// Closed-form lower bound for a 3-manifold bounding a negative definite spin
/// 4-manifold with b2 = b0: ceil((b0 + 8) / 9) under the 10/8 bound,
/// ceil(3 b0 / 19) assuming 11/8.
inline Int definite_lower_closed_form(Int b0, Mode mode) {
    if (b0 <= 0) throw std::invalid_argument("definite_lower_closed_form: b0 must be >= 1");
    switch (mode) {
        case Mode::Furuta10_8: return ceil_div(b0 + 8, 9);
        case Mode::Assume11_8: return ceil_div(3 * b0, 19);
        case Mode::RokhlinOnly: break;
    }
    throw std::invalid_argument("definite_lower_closed_form: no closed form in Rokhlin-only mode");
}

/// Parity of b2 of any spin filling of the branched double cover of an
/// ell-component link with nonzero determinant: (ell + 1) mod 2.
inline Int spin_filling_b2_parity(Int link_components) {
    if (link_components <= 0)
        throw std::invalid_argument("spin_filling_b2_parity: need at least one component");
    return mod_floor(link_components + 1, 2);
}

} // namespace embnum
