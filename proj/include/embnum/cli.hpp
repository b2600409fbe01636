#pragma once

#include "embnum/kirby.hpp"
#include "embnum/manifolds.hpp"
#include "embnum/propagate.hpp"
#include "embnum/report.hpp"
#include "embnum/splitcon.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace embnum::cli {

struct GlobalOptions {
    bool assume_11_8 = false;
    std::string format = "text";
    bool trace = false;
    std::string facts_path;

    Mode mode() const { return assume_11_8 ? Mode::Assume11_8 : Mode::Furuta10_8; }
    OutputFormat output_format() const { return output_format_from_string(format); }

    std::vector<Fact> registry() const {
        if (facts_path.empty()) return default_registry();
        std::ifstream in(facts_path);
        if (!in) throw std::invalid_argument("cannot open facts registry: " + facts_path);
        nlohmann::json j;
        in >> j;
        return facts_from_json(j);
    }
};

namespace detail {

inline Int mod_inverse(Int a, Int p) {
    Int t = 0, new_t = 1, r = p, new_r = mod_floor(a, p);
    while (new_r != 0) {
        Int q = r / new_r;
        t -= q * new_t; std::swap(t, new_t);
        r -= q * new_r; std::swap(r, new_r);
    }
    return mod_floor(t, p);
}

/// Representatives of q under orientation reversal and the q -> q^{-1}
/// diffeomorphism; the embedding number is constant on the orbit.
inline std::set<Int> lens_q_orbit(Int p, Int q) {
    Int inv = mod_inverse(q, p);
    return {q, p - q, inv, p - inv};
}

inline BoundSet lens_bounds(const LensSpace& l, Mode mode) {
    BoundSet bs;
    bs.add(lens_basic_lower(l));
    for (Int qq : lens_q_orbit(l.p, l.q)) {
        ChainUpperBound cu = chain_upper_bound(l.p, qq);
        std::ostringstream cite;
        cite << "even presentation from the chain of L(" << l.p << "," << qq << ")";
        bs.add(Bound::upper(cu.min_even_components, Assumption::Unconditional, cite.str()));
        if (qq == 1) {
            // L(p,1) is -p surgery on the unknot
            BoundSet surg = surgery_eps_bounds(-l.p, 1);
            for (const auto& b : surg.parts()) bs.add(b);
        }
        if (l.p % 2 == 1) {
            // unique spin structure: an even chain is a spin filling usable
            // for the splitting search
            NegCF cf = neg_cf(l.p, qq);
            bool even_chain = std::all_of(cf.terms.begin(), cf.terms.end(),
                                          [](Int a) { return a % 2 == 0; });
            if (even_chain) {
                SplitConstraints c;
                c.fillings = {SpinFilling(cf.length(), -cf.length())};
                c.mu = rokhlin_mu(c.fillings.front());
                c.b2_parity = spin_filling_b2_parity(branched_link_components(l));
                c.mode = mode;
                std::ostringstream lc;
                lc << "splitting search against the even chain of L(" << l.p << "," << qq
                   << "), Rokhlin residue " << *c.mu << " mod 16";
                bs.add(Bound::lower(min_embedding_lower(c),
                                    mode == Mode::Assume11_8 ? Assumption::Assumes11_8
                                                             : Assumption::Unconditional,
                                    lc.str()));
            }
        }
    }
    return bs;
}

inline std::string bigint_str(const BigInt& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

inline std::string rat_str(const BigRat& v) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(v);
    if (boost::multiprecision::denominator(v) != 1)
        os << "/" << boost::multiprecision::denominator(v);
    return os.str();
}

} // namespace detail

/// Runs the command line tool.  Returns 0 on success, 2 on invalid input and
/// 3 when the facts registry contradicts a derived bound.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"embedding numbers of 3-manifolds in connected sums of S2 x S2"};
    app.name("embnum");
    GlobalOptions opt;
    app.add_flag("--assume-11-8", opt.assume_11_8,
                 "apply the 11/8 inequality in addition to the 10/8 bound (results tagged conditional)");
    app.add_option("--format", opt.format, "output format: text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_flag("--trace", opt.trace, "include derivation traces in the output");
    app.add_option("--facts", opt.facts_path, "path to a facts registry JSON file");
    app.require_subcommand(1);
    app.fallthrough(true); // global flags may follow the subcommand

    std::function<void()> action;

    // lens P Q
    auto* lens = app.add_subcommand("lens", "bounds for the lens space L(p,q)");
    auto lens_p = std::make_shared<Int>(0);
    auto lens_q = std::make_shared<Int>(0);
    lens->add_option("p", *lens_p, "order of H_1")->required();
    lens->add_option("q", *lens_q, "surgery parameter")->required();
    lens->callback([&, lens_p, lens_q] {
        action = [&opt, &out, lens_p, lens_q] {
            LensSpace l(*lens_p, *lens_q);
            OutputRecord r = OutputRecord::from_bounds(l.name(), detail::lens_bounds(l, opt.mode()));
            if (l.p % 2 == 0)
                r.extras.emplace_back("note",
                                      "value for the manifold itself; the spin-refined quantity for the "
                                      "chain plumbing spin structure is tracked by lens-table");
            print_records(out, {r}, opt.output_format());
        };
    });

    // lens-table --max N
    auto* lens_table = app.add_subcommand("lens-table", "bounds for the family L_n = L(n, n-1)");
    auto lt_max = std::make_shared<Int>(19);
    lens_table->add_option("--max", *lt_max, "largest index n")->required();
    lens_table->callback([&, lt_max] {
        action = [&opt, &out, lt_max] {
            BoundLedger ledger = propagate(seed_ledger(*lt_max, opt.mode(), opt.registry()));
            std::vector<OutputRecord> rows;
            for (Int n = 2; n <= *lt_max; ++n) {
                OutputRecord r;
                r.manifold = "L_" + std::to_string(n);
                r.lower = ledger.lower(n);
                r.upper = ledger.upper(n);
                r.exact = ledger.exact(n);
                const auto& cell = ledger.cell(n);
                Assumption a = Assumption::Unconditional;
                if (!cell.lower_chain.empty()) a = std::max(a, cell.lower_chain.back().assumption);
                if (!cell.upper_chain.empty()) a = std::max(a, cell.upper_chain.back().assumption);
                r.assumption = a;
                if (n % 2 == 0)
                    r.extras.emplace_back("note", "spin-refined: the spin structure bounding the chain "
                                                  "plumbing; eps(L(" + std::to_string(n) + ",1)) = 1");
                if (opt.trace) {
                    std::istringstream is(ledger.describe(n));
                    for (std::string line; std::getline(is, line);) r.trace.push_back(line);
                }
                rows.push_back(std::move(r));
            }
            print_records(out, rows, opt.output_format());
        };
    });

    // brieskorn P Q R [--d-zero]
    auto* brie = app.add_subcommand("brieskorn", "bounds for the Brieskorn sphere Sigma(p,q,r)");
    auto bp = std::make_shared<Int>(0);
    auto bq = std::make_shared<Int>(0);
    auto br = std::make_shared<Int>(0);
    auto d_zero = std::make_shared<bool>(false);
    brie->add_option("p", *bp)->required();
    brie->add_option("q", *bq)->required();
    brie->add_option("r", *br)->required();
    brie->add_flag("--d-zero", *d_zero,
                   "assert the vanishing of the Heegaard Floer correction term (excludes nonzero "
                   "definite spin fillings)");
    brie->callback([&, bp, bq, br, d_zero] {
        action = [&opt, &out, bp, bq, br, d_zero] {
            Brieskorn b(*bp, *bq, *br);
            SearchTrace trace;
            BoundSet bs = brieskorn_bounds(b, opt.mode(), *d_zero, opt.trace ? &trace : nullptr);
            if (b.p % 2 == 1 && b.q % 2 == 1 && b.r % 2 == 1) {
                // try the signed pq + pr + qr = -1 criterion
                for (int mask = 0; mask < 8; ++mask) {
                    Int sgn_p = (mask & 1) ? -b.p : b.p;
                    Int sgn_q = (mask & 2) ? -b.q : b.q;
                    Int sgn_r = (mask & 4) ? -b.r : b.r;
                    if (auto fs = fintushel_stern_exact_two(sgn_p, sgn_q, sgn_r)) {
                        bs.add(*fs);
                        break;
                    }
                }
            }
            OutputRecord r = OutputRecord::from_bounds(b.name(), bs);
            SpinFilling mf = milnor_fiber(b);
            r.extras.emplace_back("milnor_fiber_b2", std::to_string(mf.b2));
            r.extras.emplace_back("milnor_fiber_sigma", std::to_string(mf.sigma));
            r.extras.emplace_back("rokhlin_mu", std::to_string(rokhlin_mu(mf)));
            if (*d_zero) {
                const Int base = 6;
                if (b.p == 2 && b.q == 3 && (b.r - 1) % base == 0)
                    r.citations.push_back("d(Sigma(2,3,6n+1)) = 0 (Ozsvath-Szabo correction term)");
                else
                    r.citations.push_back("caller-supplied vanishing of the correction term");
            }
            if (opt.trace) r.trace = render_trace(trace);
            print_records(out, {r}, opt.output_format());
        };
    });

    // surgery P Q
    auto* surg = app.add_subcommand("surgery", "knot-independent bounds for S^3_{p/q}(K)");
    auto sp = std::make_shared<Int>(0);
    auto sq = std::make_shared<Int>(0);
    surg->add_option("p", *sp)->required();
    surg->add_option("q", *sq)->required();
    surg->callback([&, sp, sq] {
        action = [&out, &opt, sp, sq] {
            std::string name = "S^3_{" + std::to_string(*sp) + "/" + std::to_string(*sq) + "}(K)";
            print_records(out, {OutputRecord::from_bounds(name, surgery_eps_bounds(*sp, *sq))},
                          opt.output_format());
        };
    });

    // dbc --genus G --unknotting U
    auto* dbc = app.add_subcommand("dbc", "branched double cover upper bound from genus and unknotting number");
    auto genus = std::make_shared<Int>(0);
    auto unknot = std::make_shared<Int>(0);
    dbc->add_option("--genus", *genus, "Seifert genus")->required();
    dbc->add_option("--unknotting", *unknot, "unknotting number")->required();
    dbc->callback([&, genus, unknot] {
        action = [&out, &opt, genus, unknot] {
            BoundSet bs;
            bs.add(dbc_upper(*genus, *unknot));
            print_records(out, {OutputRecord::from_bounds("Sigma(K)", bs)}, opt.output_format());
        };
    });

    // split yn N | zn N
    auto* split = app.add_subcommand("split", "exact families from splittings of connected sums of K3 surfaces");
    auto family = std::make_shared<std::string>();
    auto split_n = std::make_shared<Int>(1);
    split->add_option("family", *family, "yn or zn")->required()->check(CLI::IsMember({"yn", "zn"}));
    split->add_option("n", *split_n, "family index")->required();
    split->callback([&, family, split_n] {
        action = [&opt, &out, family, split_n] {
            SearchTrace trace;
            SplitReport rep = (*family == "yn")
                                  ? yn_construction(*split_n, opt.mode(), opt.trace ? &trace : nullptr)
                                  : zn_construction(*split_n, opt.mode(), opt.trace ? &trace : nullptr);
            std::string name = (*family == "yn" ? "Y_" : "Z_") + std::to_string(*split_n);
            OutputRecord r = OutputRecord::from_bounds(name, rep.eps);
            r.extras.emplace_back("u_rank", std::to_string(rep.u_form.rank));
            r.extras.emplace_back("u_sigma", std::to_string(rep.u_form.sigma));
            r.extras.emplace_back("u_det", detail::bigint_str(rep.u_form.det));
            r.extras.emplace_back("v_rank", std::to_string(rep.v_rank));
            if (opt.trace) r.trace = render_trace(trace);
            print_records(out, {r}, opt.output_format());
        };
    });

    // form --file PATH
    auto* form = app.add_subcommand("form", "invariants of a symmetric integer matrix from a JSON file");
    auto form_path = std::make_shared<std::string>();
    form->add_option("--file", *form_path, "matrix file: {\"n\": ..., \"rows\": [[...], ...]}")->required();
    form->callback([&, form_path] {
        action = [&opt, &out, form_path] {
            QuadraticForm q = load_form_file(*form_path);
            BigInt det = determinant(q);
            nlohmann::json j{{"file", *form_path},
                             {"rank", q.rank()},
                             {"signature", signature(q)},
                             {"determinant", detail::bigint_str(det)},
                             {"even", is_even(q)},
                             {"unimodular", det == 1 || det == -1}};
            j["definiteness"] = (q.rank() > 0 && det == 0) ? "degenerate" : to_string(definiteness(q));
            switch (opt.output_format()) {
                case OutputFormat::Json:
                    out << j.dump(2) << "\n";
                    break;
                case OutputFormat::Csv:
                    out << "rank,signature,determinant,even,unimodular,definiteness\n"
                        << j["rank"] << "," << j["signature"] << "," << detail::bigint_str(det) << ","
                        << (j["even"].get<bool>() ? "true" : "false") << ","
                        << (j["unimodular"].get<bool>() ? "true" : "false") << ","
                        << j["definiteness"].get<std::string>() << "\n";
                    break;
                case OutputFormat::Text:
                    out << *form_path << ": rank " << q.rank() << ", signature " << signature(q)
                        << ", det " << det << (j["even"].get<bool>() ? ", even" : ", odd")
                        << (j["unimodular"].get<bool>() ? ", unimodular" : "") << ", "
                        << j["definiteness"].get<std::string>() << "\n";
                    break;
            }
        };
    });

    // table figure1 | small-ln
    auto* table = app.add_subcommand("table", "reproduce the L_n tables");
    auto which = std::make_shared<std::string>();
    table->add_option("which", *which, "figure1 or small-ln")->required()
        ->check(CLI::IsMember({"figure1", "small-ln"}));
    table->callback([&, which] {
        action = [&opt, &out, which] {
            BoundLedger ledger = propagate(seed_ledger(19, opt.mode(), opt.registry()));
            TableKind kind = *which == "figure1" ? TableKind::Figure1 : TableKind::SmallLn;
            print_table(out, emit_table(ledger, kind), kind, opt.output_format(), opt.trace);
        };
    });

    // limit
    auto* limit = app.add_subcommand("limit", "bounds for the limit eps_L = lim eps(L_n)/n");
    limit->callback([&] {
        action = [&opt, &out] {
            BoundLedger ledger = propagate(seed_ledger(19, opt.mode(), opt.registry()));
            EpsilonLBounds b = epsilon_L_bounds(ledger, opt.mode());
            switch (opt.output_format()) {
                case OutputFormat::Json:
                    out << nlohmann::json{{"lower", detail::rat_str(b.lower)},
                                          {"upper", detail::rat_str(b.upper)},
                                          {"upper_witness", b.upper_witness},
                                          {"lower_assumption", to_string(b.lower_assumption)}}
                               .dump(2)
                        << "\n";
                    break;
                case OutputFormat::Csv:
                    out << "lower,upper,upper_witness,lower_assumption\n"
                        << detail::rat_str(b.lower) << "," << detail::rat_str(b.upper) << ","
                        << b.upper_witness << "," << to_string(b.lower_assumption) << "\n";
                    break;
                case OutputFormat::Text:
                    out << "eps_L in [" << detail::rat_str(b.lower) << ", " << detail::rat_str(b.upper)
                        << "]  (upper from n = " << b.upper_witness << ", lower "
                        << to_string(b.lower_assumption) << ")\n";
                    break;
            }
        };
    });

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
        if (action) action();
        return 0;
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    } catch (const ContradictionError& e) {
        err << "registry contradiction: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace embnum::cli
