#pragma once

#include "embnum/arith.hpp"

#include <optional>
#include <string>
#include <vector>

namespace embnum {

enum class Direction { Lower, Upper, Exact };

/// How a bound was obtained.  Assumes11_8 marks results conditional on the
/// 11/8-Conjecture; PaperConstruction marks cited handle-calculus facts that
/// the library does not re-derive.
enum class Assumption { Unconditional, PaperConstruction, Assumes11_8 };

inline const char* to_string(Direction d) {
    switch (d) {
        case Direction::Lower: return "lower";
        case Direction::Upper: return "upper";
        case Direction::Exact: return "exact";
    }
    return "?";
}

inline const char* to_string(Assumption a) {
    switch (a) {
        case Assumption::Unconditional: return "Unconditional";
        case Assumption::PaperConstruction: return "PaperConstruction";
        case Assumption::Assumes11_8: return "Assumes11_8";
    }
    return "?";
}

/// One directed bound on an embedding number, with provenance.
struct Bound {
    Direction dir = Direction::Lower;
    Int value = 0;
    Assumption assumption = Assumption::Unconditional;
    std::string citation;

    static Bound lower(Int v, Assumption a, std::string cite) {
        return Bound{Direction::Lower, v, a, std::move(cite)};
    }
    static Bound upper(Int v, Assumption a, std::string cite) {
        return Bound{Direction::Upper, v, a, std::move(cite)};
    }
    static Bound exact(Int v, Assumption a, std::string cite) {
        return Bound{Direction::Exact, v, a, std::move(cite)};
    }
};

/// A collection of bounds on one embedding number.  The effective interval is
/// the intersection of all parts; the parts keep their own citations.
class BoundSet {
public:
    BoundSet() = default;

    void add(Bound b) { parts_.push_back(std::move(b)); }

    const std::vector<Bound>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }

    /// Best lower bound (>= 0 always: an embedding number is nonnegative).
    Int lower() const {
        Int best = 0;
        for (const auto& b : parts_)
            if (b.dir != Direction::Upper && b.value > best) best = b.value;
        return best;
    }

    std::optional<Int> upper() const {
        std::optional<Int> best;
        for (const auto& b : parts_)
            if (b.dir != Direction::Lower && (!best || b.value < *best)) best = b.value;
        return best;
    }

    bool exact() const {
        auto u = upper();
        return u && *u == lower();
    }

    /// Weakest hypothesis among the bounds that achieve the current interval;
    /// conditional results never masquerade as unconditional.
    Assumption assumption() const {
        Assumption a = Assumption::Unconditional;
        auto u = upper();
        for (const auto& b : parts_) {
            bool binding = (b.dir != Direction::Upper && b.value == lower()) ||
                           (b.dir != Direction::Lower && u && b.value == *u);
            if (binding && static_cast<int>(b.assumption) > static_cast<int>(a))
                a = b.assumption;
        }
        return a;
    }

    std::vector<std::string> citations() const {
        std::vector<std::string> out;
        for (const auto& b : parts_)
            if (!b.citation.empty()) out.push_back(b.citation);
        return out;
    }

private:
    std::vector<Bound> parts_;
};

} // namespace embnum
