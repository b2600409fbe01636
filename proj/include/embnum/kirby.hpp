#pragma once

#include "embnum/bound.hpp"
#include "embnum/quadform.hpp"

#include <algorithm>
#include <vector>

namespace embnum {

/// Negative continued fraction [a_1, ..., a_n]^- with every a_i >= 2,
/// the canonical expansion p/q = a_1 - 1/(a_2 - 1/(...)).
struct NegCF {
    std::vector<Int> terms;

    explicit NegCF(std::vector<Int> t) : terms(std::move(t)) {
        if (terms.empty()) throw std::invalid_argument("NegCF: empty expansion");
        for (Int a : terms)
            if (a < 2) throw std::invalid_argument("NegCF: every coefficient must be >= 2");
    }

    Int length() const { return static_cast<Int>(terms.size()); }
};

/// Canonical expansion of p/q with 0 < q < p, gcd(p,q) = 1.
inline NegCF neg_cf(Int p, Int q) {
    if (p <= 1) throw std::invalid_argument("neg_cf: p must be > 1");
    if (q <= 0 || q >= p) throw std::invalid_argument("neg_cf: need 0 < q < p");
    if (gcd_ll(p, q) != 1) throw std::invalid_argument("neg_cf: p and q must be coprime");
    std::vector<Int> out;
    while (q > 0) {
        Int a = ceil_div(p, q);
        out.push_back(a);
        Int next_q = a * q - p;
        p = q;
        q = next_q;
    }
    return NegCF(std::move(out));
}

/// Evaluates the continued fraction back to p/q in lowest terms.
inline std::pair<Int, Int> cf_to_fraction(const NegCF& cf) {
    Int num = cf.terms.back(), den = 1;
    for (auto it = cf.terms.rbegin() + 1; it != cf.terms.rend(); ++it) {
        Int new_num = *it * num - den;
        den = num;
        num = new_num;
    }
    return {num, den};
}

/// Linking matrix of the linear plumbing: -a_i on the diagonal, 1 on the
/// off-diagonals.  Negative definite with |det| = p.
inline QuadraticForm linking_matrix(const NegCF& cf) {
    return chain_form(cf.terms);
}

/// Indicator vector of a characteristic sublink: solutions of
/// Q x = diag(Q) over GF(2).
struct CharSublink {
    std::vector<int> on; // 0/1 per component

    Int weight() const {
        Int w = 0;
        for (int b : on) w += b;
        return w;
    }
    bool is_zero() const { return weight() == 0; }
    bool operator==(const CharSublink& o) const { return on == o.on; }
    bool operator<(const CharSublink& o) const { return on < o.on; }
};

inline bool is_characteristic(const QuadraticForm& q, const CharSublink& x) {
    const Int n = q.rank();
    if (static_cast<Int>(x.on.size()) != n) return false;
    for (Int i = 0; i < n; ++i) {
        Int s = 0;
        for (Int j = 0; j < n; ++j) s += q(i, j) * x.on[static_cast<size_t>(j)];
        if (mod_floor(s - q(i, i), 2) != 0) return false;
    }
    return true;
}

/// All GF(2) solutions of Q x = diag(Q), in lexicographic order.  Empty when
/// the system is inconsistent (never the case for linking matrices of closed
/// 3-manifolds).  When det(Q) is odd the solution is unique.
inline std::vector<CharSublink> characteristic_sublinks(const QuadraticForm& q) {
    const Int n = q.rank();
    // augmented system over GF(2)
    std::vector<std::vector<int>> m(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n + 1)));
    for (Int i = 0; i < n; ++i) {
        for (Int j = 0; j < n; ++j) m[static_cast<size_t>(i)][static_cast<size_t>(j)] = static_cast<int>(mod_floor(q(i, j), 2));
        m[static_cast<size_t>(i)][static_cast<size_t>(n)] = static_cast<int>(mod_floor(q(i, i), 2));
    }
    std::vector<Int> pivot_col;
    Int r = 0;
    for (Int c = 0; c < n && r < n; ++c) {
        Int pr = -1;
        for (Int i = r; i < n; ++i)
            if (m[static_cast<size_t>(i)][static_cast<size_t>(c)]) { pr = i; break; }
        if (pr < 0) continue;
        std::swap(m[static_cast<size_t>(r)], m[static_cast<size_t>(pr)]);
        for (Int i = 0; i < n; ++i) {
            if (i == r || !m[static_cast<size_t>(i)][static_cast<size_t>(c)]) continue;
            for (Int j = c; j <= n; ++j)
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] ^= m[static_cast<size_t>(r)][static_cast<size_t>(j)];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (Int i = r; i < n; ++i)
        if (m[static_cast<size_t>(i)][static_cast<size_t>(n)]) return {};

    std::vector<Int> free_cols;
    for (Int c = 0; c < n; ++c)
        if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end())
            free_cols.push_back(c);

    std::vector<CharSublink> sols;
    const Int k = static_cast<Int>(free_cols.size());
    for (Int mask = 0; mask < (Int{1} << k); ++mask) {
        CharSublink x{std::vector<int>(static_cast<size_t>(n), 0)};
        for (Int t = 0; t < k; ++t)
            x.on[static_cast<size_t>(free_cols[static_cast<size_t>(t)])] = static_cast<int>((mask >> t) & 1);
        for (Int i = 0; i < r; ++i) {
            int v = m[static_cast<size_t>(i)][static_cast<size_t>(n)];
            for (Int c : free_cols) v ^= m[static_cast<size_t>(i)][static_cast<size_t>(c)] & x.on[static_cast<size_t>(c)];
            x.on[static_cast<size_t>(pivot_col[static_cast<size_t>(i)])] = v;
        }
        sols.push_back(std::move(x));
    }
    std::sort(sols.begin(), sols.end());
    return sols;
}

/// Number of components after blowing up each characteristic component
/// a_i - 1 times and blowing it down:  l'' = n + sum_{i in I'}(a_i - 1) - l'.
/// This is the size of an even-framed surgery presentation, so the boundary
/// embeds in the connected sum of l'' copies of S2 x S2.
inline Int even_framing_count(const NegCF& cf, const CharSublink& x) {
    QuadraticForm q = linking_matrix(cf);
    if (!is_characteristic(q, x))
        throw std::invalid_argument("even_framing_count: x is not a characteristic sublink");
    Int out = cf.length();
    for (Int i = 0; i < cf.length(); ++i)
        if (x.on[static_cast<size_t>(i)]) out += cf.terms[static_cast<size_t>(i)] - 2;
    return out;
}

// ---------------------------------------------------------------------------
// congruence moves on linking matrices

/// Appends a component with framing sign (+1 or -1) and the given linking
/// numbers.  Purely a matrix operation; boundary-preserving sequences are the
/// caller's business.
inline QuadraticForm blow_up(const QuadraticForm& q, Int sign, const std::vector<Int>& link) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("blow_up: sign must be +1 or -1");
    const Int n = q.rank();
    if (static_cast<Int>(link.size()) != n)
        throw std::invalid_argument("blow_up: link vector has wrong length");
    std::vector<Int> flat(static_cast<size_t>((n + 1) * (n + 1)));
    for (Int i = 0; i < n; ++i) {
        for (Int j = 0; j < n; ++j) flat[static_cast<size_t>(i * (n + 1) + j)] = q(i, j);
        flat[static_cast<size_t>(i * (n + 1) + n)] = link[static_cast<size_t>(i)];
        flat[static_cast<size_t>(n * (n + 1) + i)] = link[static_cast<size_t>(i)];
    }
    flat[static_cast<size_t>(n * (n + 1) + n)] = sign;
    return unchecked_form(n + 1, std::move(flat));
}

/// Removes component k with framing e = +-1, sliding everything off it:
/// Q'[i][j] = Q[i][j] - e Q[i][k] Q[j][k].  Then det(Q) = e det(Q') and
/// signature(Q) = signature(Q') + e.
inline QuadraticForm blow_down(const QuadraticForm& q, Int k) {
    const Int n = q.rank();
    if (k < 0 || k >= n) throw std::invalid_argument("blow_down: index out of range");
    const Int eps = q(k, k);
    if (eps != 1 && eps != -1)
        throw std::invalid_argument("blow_down: component framing must be +1 or -1");
    std::vector<Int> flat;
    flat.reserve(static_cast<size_t>((n - 1) * (n - 1)));
    for (Int i = 0; i < n; ++i) {
        if (i == k) continue;
        for (Int j = 0; j < n; ++j) {
            if (j == k) continue;
            flat.push_back(q(i, j) - eps * q(i, k) * q(j, k));
        }
    }
    return unchecked_form(n - 1, std::move(flat));
}

/// Handle slide of component i over component k (basis change e_i += s e_k);
/// preserves the boundary and the determinant.
inline QuadraticForm handle_slide(const QuadraticForm& q, Int i, Int k, Int s) {
    const Int n = q.rank();
    if (i == k || i < 0 || k < 0 || i >= n || k >= n)
        throw std::invalid_argument("handle_slide: bad indices");
    if (s != 1 && s != -1) throw std::invalid_argument("handle_slide: s must be +1 or -1");
    auto rows = q.rows();
    for (Int j = 0; j < n; ++j) rows[static_cast<size_t>(i)][static_cast<size_t>(j)] += s * rows[static_cast<size_t>(k)][static_cast<size_t>(j)];
    for (Int j = 0; j < n; ++j) rows[static_cast<size_t>(j)][static_cast<size_t>(i)] += s * rows[static_cast<size_t>(j)][static_cast<size_t>(k)];
    return QuadraticForm(rows);
}

/// Runs the blow-up / blow-down procedure on the canonical chain of (p, q)
/// for the characteristic sublink x.  Each characteristic component absorbs
/// a_i - 1 new +1-framed unknots by handle slides and is then blown down.
/// The result has even diagonal, l'' components and |det| = p.
inline QuadraticForm even_chain_presentation(Int p, Int q, const CharSublink& x) {
    NegCF cf = neg_cf(p, q);
    QuadraticForm a = linking_matrix(cf);
    if (!is_characteristic(a, x))
        throw std::invalid_argument("even_chain_presentation: x is not characteristic for the chain");

    std::vector<Int> chars;
    for (Int i = 0; i < cf.length(); ++i)
        if (x.on[static_cast<size_t>(i)]) chars.push_back(i);
    // descending order keeps earlier chain indices stable across blow-downs
    for (auto it = chars.rbegin(); it != chars.rend(); ++it) {
        const Int i = *it;
        const Int times = cf.terms[static_cast<size_t>(i)] - 1;
        for (Int t = 0; t < times; ++t) {
            a = blow_up(a, +1, std::vector<Int>(static_cast<size_t>(a.rank()), 0));
            a = handle_slide(a, i, a.rank() - 1, +1);
        }
        a = blow_down(a, i); // framing reached -1
    }
    return a;
}

// ---------------------------------------------------------------------------
// chain upper bound

struct ChainSolution {
    CharSublink sublink;
    Int even_components; // l'' for this characteristic sublink
    bool plumbing_spin;  // the x = 0 solution of an even chain
};

/// Upper bound on the embedding number of the lens space L(p, q) from the
/// canonical chain: minimum of l'' over all characteristic sublinks.  When
/// det is even the distinct solutions correspond to distinct spin structures
/// on the boundary, and the per-solution counts are reported alongside the
/// minimum.
struct ChainUpperBound {
    Int p = 0, q = 0;
    std::vector<ChainSolution> solutions; // lexicographic order of sublinks
    Int min_even_components = 0;

    Bound bound() const {
        return Bound::upper(min_even_components, Assumption::Unconditional,
                            "even-framed surgery presentation from the blown-up chain");
    }
};

inline ChainUpperBound chain_upper_bound(Int p, Int q) {
    NegCF cf = neg_cf(p, q);
    QuadraticForm a = linking_matrix(cf);
    ChainUpperBound out;
    out.p = p;
    out.q = q;
    for (const CharSublink& x : characteristic_sublinks(a)) {
        ChainSolution s;
        s.even_components = even_framing_count(cf, x);
        s.plumbing_spin = x.is_zero();
        s.sublink = x;
        out.solutions.push_back(std::move(s));
    }
    out.min_even_components = out.solutions.front().even_components;
    for (const auto& s : out.solutions)
        out.min_even_components = std::min(out.min_even_components, s.even_components);
    return out;
}

} // namespace embnum
