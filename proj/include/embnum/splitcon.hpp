#pragma once

#include "embnum/bound.hpp"
#include "embnum/obstruct.hpp"
#include "embnum/quadform.hpp"

#include <sstream>
#include <string>

namespace embnum {

/// The 6 x 6 chain of -2-spheres: negative definite, even, det 7.  Doubling
/// the corresponding linear plumbing yields the connected sum of six copies
/// of S2 x S2, which is what lets a 6H block be traded for (Q, I; I, 0).
inline QuadraticForm q6() { return minus_two_chain(6); }

struct FormSummary {
    Int rank = 0;
    Int sigma = 0;
    BigInt det = 1;
};

/// Outcome of one splitting construction: the definite piece U, the rank of
/// the complementary piece V, and the resulting embedding number bounds.
struct SplitReport {
    std::string family;
    Int n = 1;
    FormSummary u_form;
    Int v_rank = 0;
    BoundSet eps;
};

namespace detail {
inline void check(bool ok, const std::string& what) {
    if (!ok) throw std::logic_error("split construction invariant failed: " + what);
}
} // namespace detail

/// Splits the connected sum of 2n K3 surfaces along a Z/2-homology sphere:
/// U_n carries 4n E8 + n Q (negative definite, rank 38n, det 7^n), V_n is
/// positive definite of rank 6n.  Doubling reversed V_n embeds the boundary
/// in #_{6n} S2 x S2; the splitting search gives the matching lower bound,
/// exactly under the 11/8 hypothesis.
inline SplitReport yn_construction(Int n, Mode mode = Mode::Assume11_8,
                                   SearchTrace* trace = nullptr) {
    if (n < 1) throw std::invalid_argument("yn_construction: n must be >= 1");

    QuadraticForm u = direct_sum(scaled_copies(e8_form(), 4 * n), scaled_copies(q6(), n));
    SplitReport rep;
    rep.family = "Y_n";
    rep.n = n;
    rep.u_form.rank = u.rank();
    rep.u_form.sigma = signature(u);
    rep.u_form.det = determinant(u);
    rep.v_rank = 6 * n;

    BigInt det_expect = 1;
    for (Int i = 0; i < n; ++i) det_expect *= 7;
    detail::check(rep.u_form.rank == 38 * n, "rank(U) = 38n");
    detail::check(rep.u_form.sigma == -38 * n, "sigma(U) = -38n");
    detail::check(rep.u_form.det == det_expect || rep.u_form.det == -det_expect, "|det(U)| = 7^n");
    detail::check(is_even(u), "U is even");
    // ambient accounting: 4n E8 + 6n H has rank 44n and signature -32n
    const Int ambient_rank = 4 * n * e8_form().rank() + 6 * n * hyperbolic_form().rank();
    const Int ambient_sig = 4 * n * signature(e8_form()) + 6 * n * signature(hyperbolic_form());
    detail::check(ambient_rank == 44 * n && rep.u_form.rank + rep.v_rank == ambient_rank,
                  "rank accounting against 4n E8 + 6n H");
    detail::check(ambient_sig == -32 * n && rep.u_form.sigma + rep.v_rank == ambient_sig,
                  "Novikov accounting: sigma(U) + sigma(V) = -32n");

    std::ostringstream upper_cite;
    upper_cite << "double of the reversed positive definite piece: spin 2-handlebody of rank " << 6 * n;
    rep.eps.add(Bound::upper(6 * n, Assumption::Unconditional, upper_cite.str()));

    SplitConstraints c;
    c.fillings = {SpinFilling(38 * n, -38 * n)};
    c.mu = rokhlin_mu(c.fillings.front());
    c.mode = mode;
    Int lo = min_embedding_lower(c, trace);
    std::ostringstream lower_cite;
    lower_cite << "splitting search against the definite filling (b2, sigma) = (" << 38 * n << ", "
               << -38 * n << "), " << to_string(mode) << " bound";
    rep.eps.add(Bound::lower(lo, mode == Mode::Assume11_8 ? Assumption::Assumes11_8 : Assumption::Unconditional,
                             lower_cite.str()));
    return rep;
}

/// Splits the connected sum of 8n K3 surfaces along an integral homology
/// sphere: the intersection form 16n E8 + 24n H is isomorphic to
/// 19n E8 + 3n (-E8), so Z_n bounds negative definite spin pieces of ranks
/// 152n and 24n.  The embedding number is 24n under the 11/8 hypothesis.
inline SplitReport zn_construction(Int n, Mode mode = Mode::Assume11_8,
                                   SearchTrace* trace = nullptr) {
    if (n < 1) throw std::invalid_argument("zn_construction: n must be >= 1");

    const Int e8_rank = e8_form().rank();
    const Int e8_sig = signature(e8_form());
    const Int h_rank = hyperbolic_form().rank();
    const Int h_sig = signature(hyperbolic_form());

    // forms-level identity: 16n E8 + 24n H and 19n E8 + 3n (-E8) share rank
    // and signature (176n, -128n); this is an invariant check, not an isometry
    const Int left_rank = 16 * n * e8_rank + 24 * n * h_rank;
    const Int left_sig = 16 * n * e8_sig + 24 * n * h_sig;
    const Int right_rank = 19 * n * e8_rank + 3 * n * e8_rank;
    const Int right_sig = 19 * n * e8_sig - 3 * n * e8_sig;
    detail::check(left_rank == 176 * n && right_rank == left_rank, "rank identity 176n");
    detail::check(left_sig == -128 * n && right_sig == left_sig, "signature identity -128n");

    SplitReport rep;
    rep.family = "Z_n";
    rep.n = n;
    rep.u_form.rank = 152 * n;  // 19n E8, negative definite
    rep.u_form.sigma = -152 * n;
    rep.u_form.det = 1;
    rep.v_rank = 24 * n;        // 3n (-E8); reversed it is a definite spin filling

    std::ostringstream upper_cite;
    upper_cite << "double of the reversed rank-" << 24 * n << " definite piece";
    rep.eps.add(Bound::upper(24 * n, Assumption::Unconditional, upper_cite.str()));

    SplitConstraints c;
    c.fillings = {SpinFilling(152 * n, -152 * n), SpinFilling(24 * n, -24 * n)};
    c.mu = rokhlin_mu(c.fillings.front());
    c.zhs = true;
    c.mode = mode;
    Int lo = min_embedding_lower(c, trace);
    std::ostringstream lower_cite;
    lower_cite << "splitting search against definite fillings of ranks " << 152 * n << " and "
               << 24 * n << ", even unimodular pieces, " << to_string(mode) << " bound";
    rep.eps.add(Bound::lower(lo, mode == Mode::Assume11_8 ? Assumption::Assumes11_8 : Assumption::Unconditional,
                             lower_cite.str()));
    return rep;
}

} // namespace embnum
