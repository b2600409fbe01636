#pragma once

#include "embnum/arith.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace embnum {

/// Symmetric bilinear form over the integers, stored as a dense Gram matrix.
/// The zero-dimensional form is valid (rank 0, determinant 1, signature 0).
class QuadraticForm {
public:
    QuadraticForm() : n_(0) {}

    explicit QuadraticForm(std::vector<std::vector<Int>> rows) {
        n_ = static_cast<Int>(rows.size());
        entries_.reserve(static_cast<size_t>(n_ * n_));
        for (const auto& row : rows) {
            if (static_cast<Int>(row.size()) != n_)
                throw std::invalid_argument("QuadraticForm: matrix is not square");
            entries_.insert(entries_.end(), row.begin(), row.end());
        }
        for (Int i = 0; i < n_; ++i)
            for (Int j = i + 1; j < n_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) {
                    std::ostringstream os;
                    os << "QuadraticForm: not symmetric at (" << i << "," << j << "): "
                       << (*this)(i, j) << " vs " << (*this)(j, i);
                    throw std::invalid_argument(os.str());
                }
    }

    static QuadraticForm empty() { return QuadraticForm(); }

    /// Dimension of the form (number of rows).
    Int rank() const { return n_; }

    Int operator()(Int i, Int j) const { return entries_[static_cast<size_t>(i * n_ + j)]; }

    std::vector<std::vector<Int>> rows() const {
        std::vector<std::vector<Int>> out(static_cast<size_t>(n_));
        for (Int i = 0; i < n_; ++i) {
            out[static_cast<size_t>(i)].assign(entries_.begin() + i * n_,
                                               entries_.begin() + (i + 1) * n_);
        }
        return out;
    }

    bool operator==(const QuadraticForm& o) const {
        return n_ == o.n_ && entries_ == o.entries_;
    }
    bool operator!=(const QuadraticForm& o) const { return !(*this == o); }

private:
    friend QuadraticForm unchecked_form(Int n, std::vector<Int> flat);
    Int n_;
    std::vector<Int> entries_;
};

/// Internal: build a form from flat storage that is already known symmetric.
inline QuadraticForm unchecked_form(Int n, std::vector<Int> flat) {
    QuadraticForm q;
    q.n_ = n;
    q.entries_ = std::move(flat);
    return q;
}

// ---------------------------------------------------------------------------
// standard lattices

/// Gram matrix of the negative definite E8 lattice: -2 on the diagonal,
/// the usual E8 tree adjacency (A7 chain with the eighth node attached to
/// the fifth chain node).  det = 1, signature = -8.
inline QuadraticForm e8_form() {
    std::vector<std::vector<Int>> m(8, std::vector<Int>(8, 0));
    for (int i = 0; i < 8; ++i) m[i][i] = -2;
    const int edges[7][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {4, 7}};
    for (auto& e : edges) m[e[0]][e[1]] = m[e[1]][e[0]] = 1;
    return QuadraticForm(m);
}

/// The hyperbolic plane [[0,1],[1,0]].
inline QuadraticForm hyperbolic_form() {
    return QuadraticForm({{0, 1}, {1, 0}});
}

/// Tridiagonal form of a linear chain of unknots with framings -a_i.
inline QuadraticForm chain_form(const std::vector<Int>& a) {
    Int n = static_cast<Int>(a.size());
    std::vector<std::vector<Int>> m(static_cast<size_t>(n), std::vector<Int>(static_cast<size_t>(n), 0));
    for (Int i = 0; i < n; ++i) {
        m[static_cast<size_t>(i)][static_cast<size_t>(i)] = -a[static_cast<size_t>(i)];
        if (i + 1 < n) {
            m[static_cast<size_t>(i)][static_cast<size_t>(i + 1)] = 1;
            m[static_cast<size_t>(i + 1)][static_cast<size_t>(i)] = 1;
        }
    }
    return QuadraticForm(m);
}

/// Chain of k spheres of self-intersection -2.
inline QuadraticForm minus_two_chain(Int k) {
    return chain_form(std::vector<Int>(static_cast<size_t>(k), 2));
}

// ---------------------------------------------------------------------------
// exact invariants

/// Exact determinant by fraction-free (Bareiss) elimination with row pivoting.
inline BigInt determinant(const QuadraticForm& q) {
    const Int n = q.rank();
    if (n == 0) return 1;
    std::vector<std::vector<BigInt>> m(static_cast<size_t>(n), std::vector<BigInt>(static_cast<size_t>(n)));
    for (Int i = 0; i < n; ++i)
        for (Int j = 0; j < n; ++j) m[static_cast<size_t>(i)][static_cast<size_t>(j)] = q(i, j);

    BigInt prev = 1;
    int sign = 1;
    for (Int k = 0; k + 1 < n; ++k) {
        if (m[static_cast<size_t>(k)][static_cast<size_t>(k)] == 0) {
            Int piv = -1;
            for (Int i = k + 1; i < n; ++i)
                if (m[static_cast<size_t>(i)][static_cast<size_t>(k)] != 0) { piv = i; break; }
            if (piv < 0) return 0;
            std::swap(m[static_cast<size_t>(k)], m[static_cast<size_t>(piv)]);
            sign = -sign;
        }
        const BigInt p = m[static_cast<size_t>(k)][static_cast<size_t>(k)];
        for (Int i = k + 1; i < n; ++i) {
            auto& row = m[static_cast<size_t>(i)];
            const auto& prow = m[static_cast<size_t>(k)];
            const BigInt e = row[static_cast<size_t>(k)];
            // every entry below the pivot row rescales by p/prev, eliminator
            // entry or not; all divisions are exact (entries stay minors)
            if (e == 0) {
                for (Int j = k + 1; j < n; ++j) {
                    BigInt& x = row[static_cast<size_t>(j)];
                    if (x != 0) x = x * p / prev;
                }
            } else {
                for (Int j = k + 1; j < n; ++j) {
                    BigInt& x = row[static_cast<size_t>(j)];
                    x = (x * p - e * prow[static_cast<size_t>(j)]) / prev;
                }
                row[static_cast<size_t>(k)] = 0;
            }
        }
        prev = p;
    }
    BigInt d = m[static_cast<size_t>(n - 1)][static_cast<size_t>(n - 1)];
    return sign > 0 ? d : -d;
}

/// Exact signature: number of positive minus number of negative eigenvalues,
/// computed by symmetric congruence diagonalization over the rationals.
/// Degenerate directions contribute zero.
inline Int signature(const QuadraticForm& q) {
    const Int n = q.rank();
    std::vector<std::vector<BigRat>> m(static_cast<size_t>(n), std::vector<BigRat>(static_cast<size_t>(n)));
    for (Int i = 0; i < n; ++i)
        for (Int j = 0; j < n; ++j) m[static_cast<size_t>(i)][static_cast<size_t>(j)] = q(i, j);

    auto swap_basis = [&](Int a, Int b) {
        for (Int j = 0; j < n; ++j) std::swap(m[static_cast<size_t>(a)][static_cast<size_t>(j)], m[static_cast<size_t>(b)][static_cast<size_t>(j)]);
        for (Int i = 0; i < n; ++i) std::swap(m[static_cast<size_t>(i)][static_cast<size_t>(a)], m[static_cast<size_t>(i)][static_cast<size_t>(b)]);
    };

    Int pos = 0, neg = 0;
    for (Int k = 0; k < n; ++k) {
        if (m[static_cast<size_t>(k)][static_cast<size_t>(k)] == 0) {
            Int diag = -1, off = -1;
            for (Int i = k + 1; i < n; ++i) {
                if (diag < 0 && m[static_cast<size_t>(i)][static_cast<size_t>(i)] != 0) diag = i;
                if (off < 0 && m[static_cast<size_t>(i)][static_cast<size_t>(k)] != 0) off = i;
            }
            if (diag >= 0) {
                swap_basis(k, diag);
            } else if (off >= 0) {
                // all remaining diagonal entries vanish: e_k += e_off makes
                // the pivot 2*m[k][off] != 0
                for (Int j = 0; j < n; ++j) m[static_cast<size_t>(k)][static_cast<size_t>(j)] += m[static_cast<size_t>(off)][static_cast<size_t>(j)];
                for (Int i = 0; i < n; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(k)] += m[static_cast<size_t>(i)][static_cast<size_t>(off)];
            } else {
                continue; // zero row: null direction
            }
        }
        const BigRat p = m[static_cast<size_t>(k)][static_cast<size_t>(k)];
        if (p > 0) ++pos; else ++neg;
        for (Int i = k + 1; i < n; ++i) {
            if (m[static_cast<size_t>(i)][static_cast<size_t>(k)] == 0) continue;
            BigRat f = m[static_cast<size_t>(i)][static_cast<size_t>(k)] / p;
            for (Int j = k; j < n; ++j) m[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * m[static_cast<size_t>(k)][static_cast<size_t>(j)];
            for (Int j = k; j < n; ++j) m[static_cast<size_t>(j)][static_cast<size_t>(i)] -= f * m[static_cast<size_t>(j)][static_cast<size_t>(k)];
        }
    }
    return pos - neg;
}

inline bool is_even(const QuadraticForm& q) {
    for (Int i = 0; i < q.rank(); ++i)
        if (q(i, i) % 2 != 0) return false;
    return true;
}

inline bool is_unimodular(const QuadraticForm& q) {
    BigInt d = determinant(q);
    return d == 1 || d == -1;
}

enum class Definiteness { NegativeDefinite, PositiveDefinite, Indefinite, ZeroRank };

inline const char* to_string(Definiteness d) {
    switch (d) {
        case Definiteness::NegativeDefinite: return "negative definite";
        case Definiteness::PositiveDefinite: return "positive definite";
        case Definiteness::Indefinite: return "indefinite";
        case Definiteness::ZeroRank: return "zero rank";
    }
    return "?";
}

/// Classifies by signature against rank.  Degenerate forms are rejected:
/// constructors accept them, classification does not.
inline Definiteness definiteness(const QuadraticForm& q) {
    if (q.rank() == 0) return Definiteness::ZeroRank;
    if (determinant(q) == 0)
        throw std::invalid_argument("definiteness: degenerate form (det = 0)");
    Int s = signature(q);
    if (s == q.rank()) return Definiteness::PositiveDefinite;
    if (s == -q.rank()) return Definiteness::NegativeDefinite;
    return Definiteness::Indefinite;
}

// ---------------------------------------------------------------------------
// assembly

inline QuadraticForm direct_sum(const QuadraticForm& a, const QuadraticForm& b) {
    const Int n = a.rank(), m = b.rank();
    std::vector<Int> flat(static_cast<size_t>((n + m) * (n + m)), 0);
    for (Int i = 0; i < n; ++i)
        for (Int j = 0; j < n; ++j) flat[static_cast<size_t>(i * (n + m) + j)] = a(i, j);
    for (Int i = 0; i < m; ++i)
        for (Int j = 0; j < m; ++j) flat[static_cast<size_t>((n + i) * (n + m) + (n + j))] = b(i, j);
    return unchecked_form(n + m, std::move(flat));
}

/// k disjoint copies of q, as one block-diagonal form.  k = 0 gives the empty form.
inline QuadraticForm scaled_copies(const QuadraticForm& q, Int k) {
    if (k < 0) throw std::invalid_argument("scaled_copies: k must be >= 0");
    QuadraticForm out = QuadraticForm::empty();
    for (Int i = 0; i < k; ++i) out = direct_sum(out, q);
    return out;
}

/// Orientation reversal: flips the sign of every entry.
inline QuadraticForm negate(const QuadraticForm& q) {
    const Int n = q.rank();
    std::vector<Int> flat(static_cast<size_t>(n * n));
    for (Int i = 0; i < n; ++i)
        for (Int j = 0; j < n; ++j) flat[static_cast<size_t>(i * n + j)] = -q(i, j);
    return unchecked_form(n, std::move(flat));
}

// ---------------------------------------------------------------------------
// even unimodular forms by (rank, signature)

/// Whether an even unimodular symmetric form with the given rank and
/// signature exists.  Definite even unimodular forms exist only in ranks
/// divisible by 8; indefinite ones are a E8 + b H, so rank and signature
/// must agree mod 2 and the signature must be a multiple of 8.
inline bool even_unimodular_exists(Int rank, Int sig) {
    if (rank < 0) return false;
    if (rank == 0) return sig == 0;
    if (sig % 8 != 0) return false;
    Int a = sig < 0 ? -sig : sig;
    if (a > rank) return false;
    if ((rank - a) % 2 != 0) return false;
    if (rank == a) return rank % 8 == 0;
    return true;
}

/// Decomposition a E8 + b H of an indefinite even unimodular form.
/// a = sig / (-8) under the negative definite E8 convention; a < 0 means |a|
/// positive definite E8 blocks.  b >= 1.
struct EvenIndefiniteClass {
    Int e8_blocks;
    Int h_blocks;
};

inline EvenIndefiniteClass classify_indefinite_even(Int rank, Int sig) {
    if (!even_unimodular_exists(rank, sig))
        throw std::invalid_argument("classify_indefinite_even: no even unimodular form with this rank and signature");
    Int a = sig < 0 ? -sig : sig;
    if (rank == a && rank > 0)
        throw std::invalid_argument("classify_indefinite_even: form is definite");
    EvenIndefiniteClass c;
    c.e8_blocks = sig / -8;
    c.h_blocks = (rank - 8 * (c.e8_blocks < 0 ? -c.e8_blocks : c.e8_blocks)) / 2;
    return c;
}

/// Human-readable name of the even unimodular class with these invariants,
/// e.g. "E8", "(-E8) + H", "2E8 + 3H", "0".
inline std::string even_unimodular_name(Int rank, Int sig) {
    if (!even_unimodular_exists(rank, sig)) return "(none)";
    if (rank == 0) return "0";
    Int a = sig / -8; // a < 0 means |a| positive definite E8 blocks
    Int abs_a = a < 0 ? -a : a;
    Int b = (rank - 8 * abs_a) / 2;
    std::ostringstream os;
    if (a != 0) {
        if (abs_a != 1) os << abs_a;
        os << (a > 0 ? "E8" : "(-E8)");
    }
    if (b != 0) {
        if (a != 0) os << " + ";
        if (b != 1) os << b;
        os << "H";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// JSON ingestion: {"n": <int>, "rows": [[...], ...]}

inline QuadraticForm form_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("rows"))
        throw std::invalid_argument("matrix json: expected object with \"n\" and \"rows\"");
    Int n = j.at("n").get<Int>();
    if (n < 0) throw std::invalid_argument("matrix json: n must be >= 0");
    auto rows = j.at("rows").get<std::vector<std::vector<Int>>>();
    if (static_cast<Int>(rows.size()) != n)
        throw std::invalid_argument("matrix json: row count does not match n");
    for (const auto& r : rows)
        if (static_cast<Int>(r.size()) != n)
            throw std::invalid_argument("matrix json: row length does not match n");
    return QuadraticForm(rows); // symmetry check with a descriptive error
}

inline nlohmann::json form_to_json(const QuadraticForm& q) {
    return nlohmann::json{{"n", q.rank()}, {"rows", q.rows()}};
}

inline QuadraticForm load_form_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
    nlohmann::json j;
    in >> j;
    return form_from_json(j);
}

} // namespace embnum
