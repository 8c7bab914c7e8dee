// Command-line surface: invariants, components, table, tree, invert-tree,
// lct, jets, count-points, verify. Kept in a header so the test suite can
// drive commands in-process.
#pragma once

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jetbranch/classifier.hpp"
#include "jetbranch/countpoints.hpp"
#include "jetbranch/jets.hpp"
#include "jetbranch/newton.hpp"
#include "jetbranch/numeric.hpp"
#include "jetbranch/parser.hpp"
#include "jetbranch/semigroup.hpp"
#include "jetbranch/tree.hpp"

namespace jetbranch::cli {

constexpr int exit_ok = 0;
constexpr int exit_mismatch = 1;
constexpr int exit_validation = 2;
constexpr int exit_depth = 3;
constexpr int exit_internal = 4;

inline int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case Error::Kind::validation:
        case Error::Kind::malformed: return exit_validation;
        case Error::Kind::depth:
        case Error::Kind::budget: return exit_depth;
        case Error::Kind::mismatch: return exit_mismatch;
        case Error::Kind::internal: return exit_internal;
    }
    return exit_internal;
}

namespace detail {

struct InputOpts {
    std::string semigroup;
    std::string charseq;
    std::string curve;
};

inline void add_input_options(CLI::App* cmd, InputOpts& io) {
    auto* grp = cmd->add_option_group("input", "exactly one input kind");
    grp->add_option("--semigroup", io.semigroup, "semigroup generators, e.g. 4,6,15");
    grp->add_option("--charseq", io.charseq, "characteristic sequence, e.g. 4;6,9");
    grp->add_option("--curve", io.curve, "defining polynomial in x, y");
    grp->require_option(1);
}

inline SemigroupInvariants resolve_invariants(const InputOpts& io) {
    if (!io.semigroup.empty())
        return derive_invariants(puiseux_from_semigroup(parse_semigroup(io.semigroup)));
    if (!io.charseq.empty()) return derive_invariants(parse_charseq(io.charseq));
    NewtonForm nf = newton_form(parse_curve(io.curve));
    if (nf.e1 != 1)
        throw Error(Error::Kind::validation,
                    "a curve determines beta0 and beta1 only; this curve has e1 = " + nf.e1.get_str() +
                        " > 1, so pass --charseq with the full characteristic sequence");
    CharacteristicSequence cs;
    cs.beta0 = nf.beta0;
    cs.betas = {nf.beta1};
    return derive_invariants(cs);
}

struct Sink {
    std::ostream* stream;
    std::ofstream file;

    explicit Sink(std::ostream& fallback, const std::string& path) {
        if (path.empty()) {
            stream = &fallback;
        } else {
            file.open(path);
            if (!file) throw Error(Error::Kind::validation, "cannot open output file " + path);
            stream = &file;
        }
    }
    std::ostream& out() { return *stream; }
};

inline std::vector<Int> parse_primes(const std::string& text) {
    auto ps = parse_semigroup(text);
    for (const Int& p : ps)
        if (!is_prime(p))
            throw Error(Error::Kind::validation, "--primes: " + p.get_str() + " is not prime");
    return ps;
}

inline nlohmann::json invariants_json(const SemigroupInvariants& inv) {
    nlohmann::json j;
    j["beta_bar"] = nlohmann::json::array();
    for (const Int& b : inv.beta_bar) j["beta_bar"].push_back(to_ll(b));
    j["e"] = nlohmann::json::array();
    for (const Int& e : inv.e) j["e"].push_back(to_ll(e));
    j["n"] = nlohmann::json::array();
    for (const Int& n : inv.n) j["n"].push_back(to_ll(n));
    j["m"] = nlohmann::json::array();
    for (const Int& m : inv.m_seq) j["m"].push_back(to_ll(m));
    j["q0"] = to_ll(inv.q0);
    j["lcm01"] = to_ll(inv.lcm01);
    j["genus"] = inv.genus();
    return j;
}

inline nlohmann::json component_json(const ComponentDescriptor& d) {
    nlohmann::json c;
    c["kind"] = std::string(1, kind_letter(d.label.kind));
    if (d.label.kind != ComponentKind::boundary) c["kappa"] = d.label.kappa;
    if (d.label.kind == ComponentKind::type_v) c["j"] = d.label.j;
    if (d.label.kind == ComponentKind::boundary) {
        c["q"] = d.label.q;
        c["coincides_next_contact"] = d.coincides_boundary;
    }
    c["contact"] = to_ll(d.contact);
    c["contact_exact"] = d.contact_exact;
    c["codim"] = to_ll(d.codim);
    c["dim"] = to_ll(d.dim);
    return c;
}

inline nlohmann::json fiber_json(const FiberSummary& fs) {
    nlohmann::json j;
    j["m"] = fs.m;
    j["q"] = fs.q;
    j["count"] = fs.count;
    j["fiber_codim"] = to_ll(fs.fiber_codim);
    j["components"] = nlohmann::json::array();
    for (const auto& d : fs.components) j["components"].push_back(component_json(d));
    return j;
}

inline std::string labels_field(const FiberSummary& fs) {
    std::string s;
    for (size_t i = 0; i < fs.components.size(); ++i) {
        if (i) s += "|";
        s += fs.components[i].label.str();
    }
    return s;
}

inline void print_fiber_text(std::ostream& os, const FiberSummary& fs) {
    os << "m=" << fs.m << " q=" << fs.q << " N=" << fs.count << " fiber_codim=" << fs.fiber_codim
       << "\n";
    for (const auto& d : fs.components) {
        os << "  " << d.label.str() << " contact" << (d.contact_exact ? "=" : ">") << d.contact
           << " codim=" << d.codim << " dim=" << d.dim;
        if (d.coincides_boundary) os << " (closure of the next contact class)";
        os << "\n";
    }
}

// Rough node-count forecast for one fiber_point_count run, used by verify to
// honor the evaluation budget up front. Margin of 4 over the survivor model.
inline Int estimated_count_nodes(const SemigroupInvariants& inv, Level m, const Int& p) {
    long mu = to_ll(inv.beta_bar[0]);
    Int total = 0;
    for (Level d = 1; d <= m; ++d) {
        Level reach_prev = std::min<Level>(m, d - 1 + mu - 1);
        if (d > 1 && reach_prev >= m) break;
        Int killed = reach_prev >= 1 ? boundary_codim(inv, reach_prev) - 2 : Int(0);
        Int expo = 2 * Int(d - 1) - killed + 2;
        if (expo < 0) expo = 0;
        total += pow(p, static_cast<unsigned long>(to_ll(expo)));
    }
    return 4 * total;
}

}  // namespace detail

// Runs the CLI on `args` (without argv[0]); output to `out`, diagnostics to `err`.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"jet-scheme component structure of plane branches"};
    app.require_subcommand(1);

    detail::InputOpts io;
    std::string format = "text";
    std::string output_path;
    std::string input_path;
    std::string param_text;
    std::string primes_text;
    long m_level = -1, m_max = -1, b0_datum = -1;
    long budget = 100'000'000;
    unsigned threads = 0;
    bool estimate = false;
    std::function<int()> action;

    auto add_common = [&](CLI::App* cmd, std::vector<std::string> formats) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember(formats))
            ->default_str("text");
        cmd->add_option("--output", output_path, "write to a file instead of stdout");
    };

    // invariants ---------------------------------------------------------
    auto* c_inv = app.add_subcommand("invariants", "semigroup invariants of a branch");
    detail::add_input_options(c_inv, io);
    add_common(c_inv, {"text", "json"});
    c_inv->callback([&]() {
        action = [&]() -> int {
            detail::Sink sink(out, output_path);
            if (!io.curve.empty()) {
                NewtonForm nf = newton_form(parse_curve(io.curve));
                if (nf.e1 != 1) {
                    // Curve input pins down the first exponent pair only.
                    if (format == "json") {
                        nlohmann::json j;
                        j["beta0"] = to_ll(nf.beta0);
                        j["beta1"] = to_ll(nf.beta1);
                        j["e1"] = to_ll(nf.e1);
                        j["n1"] = to_ll(nf.n1);
                        j["m1"] = to_ll(nf.m1);
                        j["c"] = nf.c.get_str();
                        j["complete"] = false;
                        sink.out() << j.dump() << "\n";
                    } else {
                        sink.out() << "beta0=" << nf.beta0 << " beta1=" << nf.beta1 << " e1=" << nf.e1
                                   << " n1=" << nf.n1 << " m1=" << nf.m1 << " c=" << nf.c << "\n"
                                   << "note: e1 > 1, deeper exponents require --charseq\n";
                    }
                    return exit_ok;
                }
            }
            SemigroupInvariants inv = detail::resolve_invariants(io);
            if (format == "json") {
                sink.out() << detail::invariants_json(inv).dump() << "\n";
            } else {
                sink.out() << "semigroup: " << join(inv.beta_bar) << "\n"
                           << "charseq:   " << puiseux_from_semigroup(inv.beta_bar).str() << "\n"
                           << "e:         " << join(inv.e) << "\n"
                           << "n:         " << join(inv.n) << "\n"
                           << "m_i:       " << join(inv.m_seq) << "\n"
                           << "q0:        " << inv.q0 << "\n"
                           << "n1*beta1:  " << inv.lcm01 << "\n";
            }
            return exit_ok;
        };
    });

    // components / table ----------------------------------------------------
    auto* c_comp = app.add_subcommand("components", "irreducible components of one jet fiber");
    detail::add_input_options(c_comp, io);
    c_comp->add_option("--m", m_level, "jet level")->required()->check(CLI::PositiveNumber);
    add_common(c_comp, {"text", "json", "csv"});
    c_comp->callback([&]() {
        action = [&]() -> int {
            SemigroupInvariants inv = detail::resolve_invariants(io);
            FiberSummary fs = classify_components(inv, m_level);
            detail::Sink sink(out, output_path);
            if (format == "json") {
                sink.out() << detail::fiber_json(fs).dump() << "\n";
            } else if (format == "csv") {
                sink.out() << "m,q,N,fiber_codim,labels\n"
                           << fs.m << "," << fs.q << "," << fs.count << "," << fs.fiber_codim << ","
                           << detail::labels_field(fs) << "\n";
            } else {
                detail::print_fiber_text(sink.out(), fs);
            }
            return exit_ok;
        };
    });

    auto* c_table = app.add_subcommand("table", "component data for all levels up to m-max");
    detail::add_input_options(c_table, io);
    c_table->add_option("--m-max", m_max, "largest jet level")->required()->check(CLI::PositiveNumber);
    add_common(c_table, {"text", "json", "csv"});
    c_table->callback([&]() {
        action = [&]() -> int {
            SemigroupInvariants inv = detail::resolve_invariants(io);
            detail::Sink sink(out, output_path);
            if (format == "json") {
                nlohmann::json rows = nlohmann::json::array();
                for (Level m = 1; m <= m_max; ++m) rows.push_back(detail::fiber_json(classify_components(inv, m)));
                sink.out() << rows.dump() << "\n";
            } else if (format == "csv") {
                sink.out() << "m,q,N,fiber_codim,labels\n";
                for (Level m = 1; m <= m_max; ++m) {
                    FiberSummary fs = classify_components(inv, m);
                    sink.out() << fs.m << "," << fs.q << "," << fs.count << "," << fs.fiber_codim << ","
                               << detail::labels_field(fs) << "\n";
                }
            } else {
                for (Level m = 1; m <= m_max; ++m) detail::print_fiber_text(sink.out(), classify_components(inv, m));
            }
            return exit_ok;
        };
    });

    // tree / invert-tree ------------------------------------------------------
    std::string tree_format = "dot";
    auto* c_tree = app.add_subcommand("tree", "component tree T_{C,0}");
    detail::add_input_options(c_tree, io);
    c_tree->add_option("--m-max", m_max, "largest jet level")->required()->check(CLI::PositiveNumber);
    c_tree->add_option("--format", tree_format, "output format")
        ->check(CLI::IsMember(std::vector<std::string>{"dot", "json"}));
    c_tree->add_option("--output", output_path, "write to a file instead of stdout");
    c_tree->callback([&]() {
        action = [&]() -> int {
            SemigroupInvariants inv = detail::resolve_invariants(io);
            ComponentTree t = build_tree(inv, m_max);
            detail::Sink sink(out, output_path);
            sink.out() << export_tree(t, tree_format);
            return exit_ok;
        };
    });

    auto* c_invert = app.add_subcommand("invert-tree", "recover the semigroup from a tree");
    c_invert->add_option("--input", input_path, "tree JSON file")->required();
    c_invert->add_option("--b0-datum", b0_datum,
                         "max{m : codim(B_m) = 2}; harvested from codims when omitted");
    add_common(c_invert, {"text", "json"});
    c_invert->callback([&]() {
        action = [&]() -> int {
            std::ifstream in(input_path);
            if (!in) throw Error(Error::Kind::validation, "cannot open " + input_path);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw Error(Error::Kind::malformed, std::string("tree JSON: ") + e.what());
            }
            ComponentTree t = tree_from_json(j);
            std::vector<Int> bb = invert_tree(t, b0_datum);
            detail::Sink sink(out, output_path);
            if (format == "json") {
                nlohmann::json r;
                r["beta_bar"] = nlohmann::json::array();
                for (const Int& b : bb) r["beta_bar"].push_back(to_ll(b));
                r["round_trip"] = "verified";
                sink.out() << r.dump() << "\n";
            } else {
                sink.out() << join(bb) << "\n"
                           << "round-trip: verified against the rebuilt tree\n";
            }
            return exit_ok;
        };
    });

    // lct ---------------------------------------------------------------------
    auto* c_lct = app.add_subcommand("lct", "log-canonical threshold via jet codimensions");
    detail::add_input_options(c_lct, io);
    c_lct->add_option("--m-max", m_max, "search depth (default 2*n1*beta1)");
    add_common(c_lct, {"text", "json"});
    c_lct->callback([&]() {
        action = [&]() -> int {
            SemigroupInvariants inv = detail::resolve_invariants(io);
            Level depth = m_max > 0 ? m_max : 2 * to_ll(inv.lcm01);
            LctMinimum lm = lct_minimum(inv, depth);
            detail::Sink sink(out, output_path);
            if (format == "json") {
                nlohmann::json j;
                j["lct"] = lm.value.get_str();
                j["argmin"] = lm.argmin;
                sink.out() << j.dump() << "\n";
            } else {
                sink.out() << "min codim(C_m^0)/(m+1) = " << lm.value << " first attained at m = "
                           << lm.argmin << "\n";
            }
            return exit_ok;
        };
    });

    // jets ---------------------------------------------------------------------
    std::string curve_text;
    auto* c_jets = app.add_subcommand("jets", "jet equations F^(j) of a curve");
    c_jets->add_option("--curve", curve_text, "defining polynomial in x, y")->required();
    c_jets->add_option("--m", m_level, "jet level")->required()->check(CLI::NonNegativeNumber);
    add_common(c_jets, {"text", "json"});
    c_jets->callback([&]() {
        action = [&]() -> int {
            Poly f = parse_curve(curve_text);
            auto F = jet_coefficients(f, m_level);
            detail::Sink sink(out, output_path);
            if (format == "json") {
                nlohmann::json j = nlohmann::json::array();
                for (size_t i = 0; i < F.size(); ++i) j.push_back(F[i].str());
                sink.out() << j.dump() << "\n";
            } else {
                for (size_t i = 0; i < F.size(); ++i)
                    sink.out() << "F(" << i << ") = " << F[i].str() << "\n";
            }
            return exit_ok;
        };
    });

    // count-points ---------------------------------------------------------------
    auto* c_count = app.add_subcommand("count-points", "finite-field points of jet fibers");
    c_count->add_option("--curve", curve_text, "defining polynomial in x, y")->required();
    c_count->add_option("--m", m_level, "jet level")->required()->check(CLI::PositiveNumber);
    c_count->add_option("--primes", primes_text, "comma-separated primes")->required();
    c_count->add_option("--budget", budget, "evaluation budget (default 1e8)");
    c_count->add_option("--threads", threads, "worker threads (default: hardware)");
    c_count->add_flag("--estimate", estimate, "fit count ~ c*p^d over the primes");
    add_common(c_count, {"text", "json"});
    c_count->callback([&]() {
        action = [&]() -> int {
            Poly f = parse_curve(curve_text);
            auto primes = detail::parse_primes(primes_text);
            detail::Sink sink(out, output_path);
            nlohmann::json j;
            j["counts"] = nlohmann::json::array();
            for (const Int& p : primes) {
                Int c = fiber_point_count(f, m_level, p, budget, threads);
                if (format == "json") {
                    j["counts"].push_back({{"p", to_ll(p)}, {"count", c.get_str()}});
                } else {
                    sink.out() << "p=" << p << " m=" << m_level << " count=" << c << "\n";
                }
            }
            if (estimate) {
                DimensionEstimate est = dimension_estimate(f, m_level, primes, budget, threads);
                if (format == "json") {
                    j["estimate"] = {{"conclusive", est.conclusive},
                                     {"raw_exponent", est.raw_exponent},
                                     {"affine_dim", est.affine_dim},
                                     {"components", est.components}};
                } else if (est.conclusive) {
                    sink.out() << "fit: count ~ " << est.components << "*p^" << est.raw_exponent
                               << " (affine dim " << est.affine_dim << ")\n";
                } else {
                    sink.out() << "fit: inconclusive\n";
                }
            }
            if (format == "json") sink.out() << j.dump() << "\n";
            return exit_ok;
        };
    });

    // verify -------------------------------------------------------------------
    std::string charseq_text;
    auto* c_verify = app.add_subcommand("verify", "closed-form predictions vs independent oracles");
    c_verify->add_option("--curve", curve_text, "defining polynomial in x, y")->required();
    c_verify->add_option("--charseq", charseq_text, "characteristic sequence (required for g >= 2)");
    c_verify->add_option("--param", param_text, "parametrization, e.g. t^4,t^6+t^9");
    c_verify->add_option("--m-max", m_max, "largest level to verify (default 2*n1*beta1)");
    c_verify->add_option("--primes", primes_text, "primes for point counting (default 2,3)");
    c_verify->add_option("--budget", budget, "evaluation budget (default 1e8)");
    c_verify->add_option("--threads", threads, "worker threads (default: hardware)");
    c_verify->add_option("--output", output_path, "write report to a file");
    c_verify->callback([&]() {
        action = [&]() -> int {
            detail::Sink sink(out, output_path);
            std::ostream& os = sink.out();
            bool all_ok = true;
            std::string first_fail;
            auto report = [&](bool ok, const std::string& name, const std::string& detail) {
                os << (ok ? "PASS " : "FAIL ") << name;
                if (!detail.empty()) os << ": " << detail;
                os << "\n";
                if (!ok && all_ok) first_fail = name + (detail.empty() ? "" : " (" + detail + ")");
                all_ok &= ok;
            };

            Poly f = parse_curve(curve_text);
            NewtonForm nf;
            try {
                nf = newton_form(f);
                report(true, "normal-form",
                       "beta0=" + nf.beta0.get_str() + " beta1=" + nf.beta1.get_str() + " e1=" +
                           nf.e1.get_str() + " c=" + nf.c.get_str());
            } catch (const Error& e) {
                report(false, "normal-form", e.what());
                os << "verification failed: " << first_fail << "\n";
                return exit_mismatch;
            }

            CharacteristicSequence cs;
            if (!charseq_text.empty()) {
                cs = parse_charseq(charseq_text);
            } else if (nf.e1 == 1) {
                cs.beta0 = nf.beta0;
                cs.betas = {nf.beta1};
            } else {
                throw Error(Error::Kind::validation,
                            "verify: this curve has e1 > 1; pass --charseq with the full "
                            "characteristic sequence");
            }
            SemigroupInvariants inv = derive_invariants(cs);
            report(cs.beta0 == nf.beta0 && cs.beta(1) == nf.beta1, "charseq-consistency",
                   "curve gives (" + nf.beta0.get_str() + ";" + nf.beta1.get_str() + ",...), charseq is " +
                       cs.str());

            if (!param_text.empty()) {
                Parametrization par = parse_parametrization(param_text);
                OrdT on_curve = ord_t(f, par);
                report(!on_curve.is_finite(), "param-on-curve",
                       "ord_t f(x(t),y(t)) = " + on_curve.str());
                OrdT ox = ord_t(Poly::variable(var_x()), par);
                OrdT oy = ord_t(Poly::variable(var_y()), par);
                report(ox.is_finite() && ox.value == inv.beta_bar[0], "param-ord-x",
                       "ord_t x = " + ox.str() + ", beta_bar_0 = " + inv.beta_bar[0].get_str());
                report(oy.is_finite() && oy.value == inv.beta_bar[1], "param-ord-y",
                       "ord_t y = " + oy.str() + ", beta_bar_1 = " + inv.beta_bar[1].get_str());
            }

            {  // Derivation identity j! F^(j) = f^(j) up to m = 8.
                const Level md = 8;
                auto F = jet_coefficients(f, md);
                auto fd = jet_derivation(f, md);
                bool ok = true;
                std::string det;
                Rat fact = 1;
                for (Level j = 0; j <= md && ok; ++j) {
                    if (j > 0) fact *= Rat(Int(j));
                    Poly lhs = F[static_cast<size_t>(j)];
                    lhs *= fact;
                    if (!(lhs == fd[static_cast<size_t>(j)])) {
                        ok = false;
                        det = "j = " + std::to_string(j);
                    }
                }
                report(ok, "derivation-identity", ok ? "j <= 8" : det);
            }

            Level cap = std::min<Level>(m_max > 0 ? m_max : 2 * to_ll(inv.lcm01), 2 * to_ll(inv.lcm01));
            {
                bool ok = true;
                std::string det = "m <= " + std::to_string(cap);
                for (Level m = 1; m <= cap && ok; ++m) {
                    ReducedFiberCheck rc = reduced_fiber_check(f, m);
                    if (!rc.pass) {
                        ok = false;
                        det = "m = " + std::to_string(m) + ": " + rc.failure;
                    }
                }
                report(ok, "reduced-fiber", det);
            }

            {  // Point counts against the classifier.
                std::vector<Int> primes =
                    primes_text.empty() ? std::vector<Int>{2, 3} : detail::parse_primes(primes_text);
                // Beyond n1*beta1 the codimension formulas govern the mod-p
                // fiber only away from the bad primes: p must not divide any
                // characteristic datum or the binomial coefficient, or the
                // contact strata degenerate (wild ramification).
                auto good_prime = [&](const Int& p) {
                    for (const Int& b : inv.beta_bar)
                        if (divides(p, b)) return false;
                    for (int i = 1; i <= cs.genus(); ++i)
                        if (divides(p, cs.beta(i))) return false;
                    return !divides(p, nf.c.get_num()) && !divides(p, nf.c.get_den());
                };
                Level top = m_max > 0 ? m_max : 2 * to_ll(inv.lcm01);
                Level delta = to_ll(inv.lcm01);
                int ran = 0, skipped = 0;
                bool ok = true;
                std::string det;
                for (Level m = 1; m <= top && ok; ++m) {
                    std::vector<Int> feasible;
                    for (const Int& p : primes) {
                        if (m >= delta && !good_prime(p)) continue;
                        if (divides(p, nf.c.get_num())) continue;  // corner term would die mod p
                        if (detail::estimated_count_nodes(inv, m, p) <= Int(budget)) feasible.push_back(p);
                    }
                    skipped += static_cast<int>(primes.size() - feasible.size());
                    if (feasible.empty()) continue;
                    if (m < delta) {
                        Int expo = 2 * Int(m) - floor_div(Int(m), inv.beta_bar[0]) -
                                   floor_div(Int(m), inv.beta_bar[1]);
                        for (const Int& p : feasible) {
                            Int expect = pow(p, static_cast<unsigned long>(to_ll(expo)));
                            Int got;
                            try {
                                got = fiber_point_count(f, m, p, budget, threads);
                            } catch (const Error& e) {
                                if (e.kind() == Error::Kind::budget) {
                                    ++skipped;
                                    continue;
                                }
                                throw;
                            }
                            ++ran;
                            if (got != expect) {
                                ok = false;
                                det = "m=" + std::to_string(m) + " p=" + p.get_str() + ": count " +
                                      got.get_str() + " != " + expect.get_str();
                                break;
                            }
                        }
                    } else {
                        FiberSummary fs = classify_components(inv, m);
                        long top_components = 0;
                        for (const auto& d : fs.components)
                            if (d.codim == fs.fiber_codim) ++top_components;
                        long want_dim = to_ll(2 * (Int(m) + 1) - fs.fiber_codim) - 2;
                        DimensionEstimate est;
                        try {
                            est = dimension_estimate(f, m, feasible, budget, threads);
                        } catch (const Error& e) {
                            if (e.kind() == Error::Kind::budget) {
                                ++skipped;
                                continue;
                            }
                            throw;
                        }
                        ran += static_cast<int>(feasible.size());
                        if (!est.conclusive) continue;
                        if (est.affine_dim != want_dim || est.components != top_components) {
                            ok = false;
                            det = "m=" + std::to_string(m) + ": estimated (dim, components) = (" +
                                  std::to_string(est.affine_dim) + ", " + std::to_string(est.components) +
                                  "), classifier predicts (" + std::to_string(want_dim) + ", " +
                                  std::to_string(top_components) + ")";
                        }
                    }
                }
                if (ok)
                    det = std::to_string(ran) + " comparisons, " + std::to_string(skipped) +
                          " skipped (budget or bad prime)";
                report(ok, "point-counts", det);
            }

            {  // log-canonical minimum.
                Level depth = std::max<Level>(m_max > 0 ? m_max : 2 * to_ll(inv.lcm01),
                                              to_ll(inv.lcm01) - 1);
                bool ok = true;
                std::string det;
                try {
                    LctMinimum lm = lct_minimum(inv, depth);
                    det = "lct = " + lm.value.get_str() + " at m = " + std::to_string(lm.argmin);
                } catch (const Error& e) {
                    ok = false;
                    det = e.what();
                }
                report(ok, "lct-minimum", det);
            }

            if (!all_ok) {
                os << "verification failed: " << first_fail << "\n";
                return exit_mismatch;
            }
            os << "all checks passed\n";
            return exit_ok;
        };
    });

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
        return action ? action() : exit_ok;
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

}  // namespace jetbranch::cli
