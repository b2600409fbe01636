#pragma once

#include "embnum/bound.hpp"
#include "embnum/kirby.hpp"
#include "embnum/obstruct.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>
#include <string>

namespace embnum {

/// L(p, q): -p/q surgery on the unknot, p >= 2, 0 < q < p, gcd(p, q) = 1.
/// q is normalized mod p at construction.
struct LensSpace {
    Int p = 2;
    Int q = 1;

    LensSpace(Int p_, Int q_) : p(p_) {
        if (p < 2) throw std::invalid_argument("LensSpace: p must be >= 2");
        q = mod_floor(q_, p);
        if (q == 0 || gcd_ll(p, q) != 1)
            throw std::invalid_argument("LensSpace: q must be invertible mod p");
    }

    LensSpace reverse() const { return LensSpace(p, p - q); }

    /// Orientation-preserving diffeomorphism test: same q or q q' = 1 mod p.
    bool is_diffeomorphic(const LensSpace& o) const {
        return p == o.p && (q == o.q || mod_floor(q * o.q, p) == 1);
    }

    std::string name() const {
        return "L(" + std::to_string(p) + "," + std::to_string(q) + ")";
    }
};

/// Number of components of the 2-bridge link branched over by L(p, q):
/// a knot for odd p, a 2-component link for even p.
inline Int branched_link_components(const LensSpace& l) { return l.p % 2 == 1 ? 1 : 2; }

/// No lens space embeds smoothly in S^4, so the embedding number is >= 1.
inline Bound lens_basic_lower(const LensSpace&) {
    return Bound::lower(1, Assumption::Unconditional,
                        "no lens space embeds smoothly in S^4 (H_1 is cyclic, never G + G)");
}

// ---------------------------------------------------------------------------
// Brieskorn spheres

/// Sigma(p, q, r) with pairwise coprime p, q, r >= 2, stored sorted.
struct Brieskorn {
    Int p = 2, q = 3, r = 5;

    Brieskorn(Int p_, Int q_, Int r_) {
        std::array<Int, 3> v{p_, q_, r_};
        std::sort(v.begin(), v.end());
        p = v[0]; q = v[1]; r = v[2];
        if (p < 2) throw std::invalid_argument("Brieskorn: parameters must be >= 2");
        if (gcd_ll(p, q) != 1 || gcd_ll(p, r) != 1 || gcd_ll(q, r) != 1)
            throw std::invalid_argument("Brieskorn: parameters must be pairwise coprime");
    }

    std::string name() const {
        return "Sigma(" + std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(r) + ")";
    }
};

/// Milnor fiber invariants: b2 = (p-1)(q-1)(r-1) even-framed 2-handles, and
/// the signature by the Brieskorn lattice point count: over 0 < i < p,
/// 0 < j < q, 0 < k < r, the fraction s = i/p + j/q + k/r contributes +1 when
/// s mod 2 lies in (0, 1) and -1 when in (1, 2).  For pairwise coprime
/// parameters s is never an integer, so the count is exact.
inline SpinFilling milnor_fiber(const Brieskorn& b) {
    const Int p = b.p, q = b.q, r = b.r;
    const Int d = p * q * r;
    Int sig = 0;
    for (Int i = 1; i < p; ++i)
        for (Int j = 1; j < q; ++j)
            for (Int k = 1; k < r; ++k) {
                const Int num = i * q * r + j * p * r + k * p * q; // s = num / d in (0, 3)
                sig += (num < d || num > 2 * d) ? 1 : -1;
            }
    return SpinFilling((p - 1) * (q - 1) * (r - 1), sig);
}

inline Int brieskorn_mu(const Brieskorn& b) { return rokhlin_mu(milnor_fiber(b)); }

namespace detail {
/// Sigma(p, p+1, p(p+1)n + 1) with p even and n odd admits an even surgery
/// presentation with (p+1)^2 + 1 components.
inline std::optional<Int> even_p_family_upper(const Brieskorn& b) {
    const Int base = b.p * (b.p + 1);
    if (b.p % 2 != 0 || b.q != b.p + 1) return std::nullopt;
    if ((b.r - 1) % base != 0) return std::nullopt;
    const Int n = (b.r - 1) / base;
    if (n < 1 || n % 2 == 0) return std::nullopt;
    return (b.p + 1) * (b.p + 1) + 1;
}

/// Sigma(p, q, pqn +- 1) with n even is -1/n surgery on a torus knot, which
/// has a two-component even surgery presentation.
inline bool torus_surgery_even_n(const Brieskorn& b) {
    const Int base = b.p * b.q;
    for (Int off : {-1, 1}) {
        if ((b.r - off) % base != 0) continue;
        const Int n = (b.r - off) / base;
        if (n >= 2 && n % 2 == 0) return true;
    }
    return false;
}
} // namespace detail

/// Upper bounds from the known even presentations plus the lower bound from
/// the Rokhlin / splitting search.  d_zero supplies the cited vanishing of
/// the correction term, which excludes nonzero definite spin fillings.
inline BoundSet brieskorn_bounds(const Brieskorn& b, Mode mode, bool d_zero = false,
                                 SearchTrace* trace = nullptr) {
    BoundSet out;
    const SpinFilling mf = milnor_fiber(b);
    out.add(Bound::upper(mf.b2, Assumption::Unconditional,
                         "double of the Milnor fiber: even 2-handlebody with (p-1)(q-1)(r-1) handles"));
    if (auto u = detail::even_p_family_upper(b))
        out.add(Bound::upper(*u, Assumption::Unconditional,
                             "blow-up/blow-down of the -1/n torus knot surgery diagram, (p+1)^2 + 1 even components"));
    if (detail::torus_surgery_even_n(b))
        out.add(Bound::upper(2, Assumption::Unconditional,
                             "-1/n surgery on a torus knot with n even: two-component even presentation"));

    SplitConstraints c;
    c.mu = brieskorn_mu(b);
    c.zhs = true;
    c.forbid_definite = d_zero;
    c.mode = mode;
    Int lo = min_embedding_lower(c, trace);
    std::ostringstream cite;
    cite << "splitting search: Rokhlin residue " << *c.mu << " mod 16, even unimodular pieces, "
         << to_string(mode) << " bound";
    if (d_zero) cite << ", no nonzero definite spin filling (d = 0)";
    out.add(Bound::lower(lo, mode == Mode::Assume11_8 ? Assumption::Assumes11_8 : Assumption::Unconditional,
                         cite.str()));
    return out;
}

/// Exact value 2 for odd, pairwise coprime parameters of absolute value > 1
/// with pq + pr + qr = -1 (Fintushel-Stern: no integral homology ball), or
/// not-applicable when the identity fails.
inline std::optional<Bound> fintushel_stern_exact_two(Int p, Int q, Int r) {
    for (Int v : {p, q, r}) {
        if (v % 2 == 0) throw std::invalid_argument("fintushel_stern_exact_two: parameters must be odd");
        if (v == 1 || v == -1 || v == 0)
            throw std::invalid_argument("fintushel_stern_exact_two: parameters must have absolute value > 1");
    }
    auto a = [](Int v) { return v < 0 ? -v : v; };
    if (gcd_ll(a(p), a(q)) != 1 || gcd_ll(a(p), a(r)) != 1 || gcd_ll(a(q), a(r)) != 1)
        throw std::invalid_argument("fintushel_stern_exact_two: parameters must be pairwise coprime");
    if (p * q + p * r + q * r != -1) return std::nullopt;
    return Bound::exact(2, Assumption::Unconditional,
                        "Fintushel-Stern: bounds no integral homology ball; "
                        "slam dunk gives a two-component even presentation");
}

/// Unbounded lower bounds for the Tange families: each member bounds a spin
/// definite 4-manifold with b2 = 8n.
inline Bound tange_lower(Int n, Mode mode) {
    if (n < 1) throw std::invalid_argument("tange_lower: n must be >= 1");
    return Bound::lower(definite_lower_closed_form(8 * n, mode),
                        mode == Mode::Assume11_8 ? Assumption::Assumes11_8 : Assumption::Unconditional,
                        "spin definite filling with b2 = 8n (Tange)");
}

// ---------------------------------------------------------------------------
// surgery on knots

/// Knot-independent bounds for S^3_{p/q}(K).  The slope is normalized to
/// q >= 0.  Degenerate slopes (p = 0, or |p| = 1 with odd q) carry no
/// knot-independent bound and return a note only.
inline BoundSet surgery_eps_bounds(Int p, Int q) {
    if (q < 0) { q = -q; p = -p; }
    const Int ap = p < 0 ? -p : p;
    if (q == 0) {
        if (ap != 1) throw std::invalid_argument("surgery_eps_bounds: slope p/0 requires p = +-1");
        BoundSet out;
        out.add(Bound::exact(0, Assumption::Unconditional, "infinity surgery is S^3, which bounds B^4"));
        return out;
    }
    if (gcd_ll(ap, q) != 1) throw std::invalid_argument("surgery_eps_bounds: p and q must be coprime");

    BoundSet out;
    if (ap > 1)
        out.add(Bound::lower(1, Assumption::Unconditional,
                             "H_1 = Z/p with |p| > 1 is never G + G, so no embedding in S^4"));
    if (q == 1 && p != 0 && p % 2 == 0)
        out.add(Bound::upper(1, Assumption::Unconditional,
                             "even integer surgery bounds an even 2-handlebody with one 2-handle"));
    if (q == 1 && ap > 1 && ap % 2 == 1 && !is_perfect_square(ap))
        out.add(Bound::lower(2, Assumption::Unconditional,
                             "|H_1| odd and not a square: bounds no rational ball, "
                             "so no embedding in S^2 x S^2"));
    if (ap == 1 && q % 2 == 0)
        out.add(Bound::upper(2, Assumption::Unconditional,
                             "reverse slam dunk: two-component even surgery presentation"));
    if (out.empty())
        out.add(Bound::lower(0, Assumption::Unconditional,
                             "no knot-independent bound for this slope"));
    return out;
}

/// Branched double cover of a knot: eps <= 2 min(genus, unknotting number).
inline Bound dbc_upper(Int genus, Int unknotting) {
    if (genus < 0 || unknotting < 0) throw std::invalid_argument("dbc_upper: invariants must be >= 0");
    const Int m = std::min(genus, unknotting);
    return Bound::upper(2 * m, Assumption::Unconditional,
                        "branched double cover of B^4 over a pushed-in surface: "
                        "even 2-handlebody with 2m handles");
}

// ---------------------------------------------------------------------------
// connected sums

/// eps(M # N) <= eps(M) + eps(N): embed disjointly, then tube.
inline BoundSet connected_sum_upper(const BoundSet& a, const BoundSet& b) {
    BoundSet out;
    auto ua = a.upper(), ub = b.upper();
    if (ua && ub) {
        Assumption as = std::max(a.assumption(), b.assumption());
        out.add(Bound::upper(*ua + *ub, as, "ambient connected sum of disjoint embeddings"));
    }
    return out;
}

/// eps(M) = eps(reversed M): every embedding of M is one of -M.
inline BoundSet reverse_orientation(const BoundSet& a) { return a; }

/// eps(M # -M) <= eps(M): the boundary of a collar of punctured M.
inline BoundSet punctured_double_upper(const BoundSet& a) {
    BoundSet out;
    if (auto u = a.upper())
        out.add(Bound::upper(*u, a.assumption(), "boundary of a collar neighborhood of punctured M"));
    return out;
}

} // namespace embnum
