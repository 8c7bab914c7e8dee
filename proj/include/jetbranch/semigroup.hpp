// Characteristic sequences, branch semigroups and the contact/intersection
// formulas. Everything here is pure arithmetic on immutable values.
#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "jetbranch/numeric.hpp"

namespace jetbranch {

// Puiseux data (beta0; beta_1,...,beta_g) of a singular branch.
struct CharacteristicSequence {
    Int beta0;
    std::vector<Int> betas;  // beta_1 < ... < beta_g

    int genus() const { return static_cast<int>(betas.size()); }

    // beta_i with beta_0 = beta0; i in [0, g].
    const Int& beta(int i) const { return i == 0 ? beta0 : betas[static_cast<size_t>(i - 1)]; }

    bool operator==(const CharacteristicSequence& o) const = default;

    // Canonical text form "4;6,9".
    std::string str() const { return beta0.get_str() + ";" + join(betas); }
};

// Semigroup generators and the derived constants every formula reads from.
struct SemigroupInvariants {
    std::vector<Int> beta_bar;  // beta_bar_0..beta_bar_g
    std::vector<Int> e;         // e_0..e_g, strictly decreasing, e_g = 1
    std::vector<Int> n;         // n_1..n_g  (n[i-1] holds n_i)
    std::vector<Int> m_seq;     // m_1..m_g  (m_seq[i-1] holds m_i)
    Int q0;                     // threshold index; 0 when g = 1
    Int lcm01;                  // n_1 * beta_bar_1 = lcm(beta_bar_0, beta_bar_1)

    int genus() const { return static_cast<int>(beta_bar.size()) - 1; }

    const Int& beta0() const { return beta_bar[0]; }
    const Int& beta1() const { return beta_bar[1]; }
    const Int& e1() const { return e[1]; }
    const Int& n1() const { return n[0]; }
    const Int& m1() const { return m_seq[0]; }

    // n_a * n_{a+1} * ... * n_b, empty product = 1.
    Int n_product(int a, int b) const {
        Int r = 1;
        for (int l = a; l <= b; ++l) r *= n[static_cast<size_t>(l - 1)];
        return r;
    }

    std::string str() const { return join(beta_bar); }
};

namespace detail {

inline std::vector<Int> gcd_chain(const Int& b0, const std::vector<Int>& rest) {
    std::vector<Int> e{b0};
    for (const Int& b : rest) e.push_back(gcd(e.back(), b));
    return e;
}

}  // namespace detail

// Throws Error(validation) naming the first failed invariant.
inline void validate(const CharacteristicSequence& cs) {
    if (cs.beta0 < 2)
        throw Error(Error::Kind::validation,
                    "characteristic sequence: beta0 must be >= 2 (smooth branches are rejected), got " +
                        cs.beta0.get_str());
    if (cs.betas.empty())
        throw Error(Error::Kind::validation,
                    "characteristic sequence: at least one Puiseux exponent is required (g >= 1)");
    Int prev = cs.beta0;
    for (const Int& b : cs.betas) {
        if (b <= prev)
            throw Error(Error::Kind::validation,
                        "characteristic sequence: exponents must be strictly increasing, " +
                            b.get_str() + " after " + prev.get_str());
        prev = b;
    }
    auto e = detail::gcd_chain(cs.beta0, cs.betas);
    for (size_t i = 1; i < e.size(); ++i)
        if (e[i] >= e[i - 1])
            throw Error(Error::Kind::validation,
                        "characteristic sequence: gcd chain must strictly decrease at beta_" +
                            std::to_string(i) + " = " + cs.betas[i - 1].get_str());
    if (e.back() != 1)
        throw Error(Error::Kind::validation,
                    "characteristic sequence: gcd chain must end at 1, got e_g = " + e.back().get_str());
}

// Minimal semigroup generators beta_bar plus e_i, n_i, m_i and q0 derived
// from the characteristic sequence.
inline SemigroupInvariants derive_invariants(const CharacteristicSequence& cs) {
    validate(cs);
    const int g = cs.genus();

    SemigroupInvariants inv;
    inv.e = detail::gcd_chain(cs.beta0, cs.betas);
    for (int i = 1; i <= g; ++i) {
        inv.n.push_back(exact_div(inv.e[static_cast<size_t>(i - 1)], inv.e[static_cast<size_t>(i)]));
        inv.m_seq.push_back(exact_div(cs.beta(i), inv.e[static_cast<size_t>(i)]));
    }

    inv.beta_bar.resize(static_cast<size_t>(g) + 1);
    inv.beta_bar[0] = cs.beta0;
    if (g >= 1) inv.beta_bar[1] = cs.betas[0];
    for (int i = 2; i <= g; ++i) {
        Int acc = cs.beta(i);
        for (int k = 1; k <= i - 1; ++k)
            acc += exact_div(inv.e[static_cast<size_t>(k - 1)] - inv.e[static_cast<size_t>(k)],
                             inv.e[static_cast<size_t>(i - 1)]) *
                   cs.beta(k);
        inv.beta_bar[static_cast<size_t>(i)] = acc;
    }

    // Cross-check against the recursion beta_bar_{i+1} = n_i beta_bar_i + beta_{i+1} - beta_i.
    for (int i = 1; i <= g - 1; ++i) {
        Int rhs = inv.n[static_cast<size_t>(i - 1)] * inv.beta_bar[static_cast<size_t>(i)] +
                  cs.beta(i + 1) - cs.beta(i);
        if (rhs != inv.beta_bar[static_cast<size_t>(i + 1)])
            throw Error(Error::Kind::internal,
                        "semigroup recursion cross-check failed at index " + std::to_string(i + 1));
    }
    for (int i = 1; i <= g - 1; ++i)
        if (inv.n[static_cast<size_t>(i - 1)] * inv.beta_bar[static_cast<size_t>(i)] >=
            inv.beta_bar[static_cast<size_t>(i + 1)])
            throw Error(Error::Kind::internal,
                        "derived semigroup violates n_i*beta_bar_i < beta_bar_{i+1} at i = " +
                            std::to_string(i));

    inv.lcm01 = inv.n1() * inv.beta_bar[1];
    if (g >= 2) {
        Int step = inv.beta_bar[2] - inv.lcm01;  // positive by the check above
        inv.q0 = ceil_div(inv.e[1], step) - 1;
        if (inv.q0 < 0 || inv.q0 >= inv.n[1])
            throw Error(Error::Kind::internal, "q0 out of range [0, n_2)");
    } else {
        inv.q0 = 0;
    }
    return inv;
}

// The inverse derivation: characteristic sequence from the generators.
// Throws Error(validation) naming the failed minimal-generation condition.
inline CharacteristicSequence puiseux_from_semigroup(const std::vector<Int>& beta_bar) {
    if (beta_bar.size() < 2)
        throw Error(Error::Kind::validation,
                    "semigroup: at least two generators are required (singular branch)");
    if (beta_bar[0] < 2)
        throw Error(Error::Kind::validation,
                    "semigroup: beta_bar_0 must be >= 2, got " + beta_bar[0].get_str());
    if (beta_bar[1] <= beta_bar[0])
        throw Error(Error::Kind::validation, "semigroup: beta_bar_1 must exceed beta_bar_0");
    const int g = static_cast<int>(beta_bar.size()) - 1;
    std::vector<Int> e{beta_bar[0]};
    for (int i = 1; i <= g; ++i) {
        e.push_back(gcd(e.back(), beta_bar[static_cast<size_t>(i)]));
        if (e[static_cast<size_t>(i)] >= e[static_cast<size_t>(i - 1)])
            throw Error(Error::Kind::validation,
                        "semigroup: gcd chain must strictly decrease at generator " +
                            beta_bar[static_cast<size_t>(i)].get_str());
    }
    if (e.back() != 1)
        throw Error(Error::Kind::validation,
                    "semigroup: gcd of all generators must be 1, got " + e.back().get_str());
    for (int i = 1; i <= g - 1; ++i) {
        Int ni = exact_div(e[static_cast<size_t>(i - 1)], e[static_cast<size_t>(i)]);
        Int lhs = ni * beta_bar[static_cast<size_t>(i)];
        if (lhs >= beta_bar[static_cast<size_t>(i + 1)])
            throw Error(Error::Kind::validation,
                        "semigroup: violates n_" + std::to_string(i) + "*beta_bar_" + std::to_string(i) +
                            " < beta_bar_" + std::to_string(i + 1) + " (" + lhs.get_str() + " >= " +
                            beta_bar[static_cast<size_t>(i + 1)].get_str() + ")");
    }

    CharacteristicSequence cs;
    cs.beta0 = beta_bar[0];
    cs.betas.push_back(beta_bar[1]);
    for (int i = 2; i <= g; ++i) {
        Int acc = beta_bar[static_cast<size_t>(i)];
        for (int k = 1; k <= i - 1; ++k)
            acc -= exact_div(e[static_cast<size_t>(k - 1)] - e[static_cast<size_t>(k)],
                             e[static_cast<size_t>(i - 1)]) *
                   cs.beta(k);
        cs.betas.push_back(acc);
    }
    validate(cs);
    return cs;
}

// Intersection number (f,h)_0 from the multiplicity p of h and the
// contact order o = o_f(h). The index i is the smallest one with
// o <= beta_i/beta0 (beta_{g+1} = +infinity).
inline Int intersection_via_contact(const CharacteristicSequence& cs, const Int& p, const Rat& o) {
    validate(cs);
    if (p < 1) throw Error(Error::Kind::validation, "contact: multiplicity p must be positive");
    if (o <= 0) throw Error(Error::Kind::validation, "contact: contact order must be positive");
    const int g = cs.genus();
    auto e = detail::gcd_chain(cs.beta0, cs.betas);

    int i = g + 1;
    for (int cand = 1; cand <= g; ++cand) {
        if (o <= ratio(cs.beta(cand), cs.beta0)) {
            i = cand;
            break;
        }
    }
    Rat sum = 0;
    for (int k = 1; k <= i - 1; ++k)
        sum += ratio(e[static_cast<size_t>(k - 1)] - e[static_cast<size_t>(k)], cs.beta0) * Rat(cs.beta(k));
    Rat value = Rat(p) * (sum + Rat(e[static_cast<size_t>(i - 1)]) * o);
    if (!is_integer(value))
        throw Error(Error::Kind::validation,
                    "contact: (p, o) = (" + p.get_str() + ", " + o.get_str() +
                        ") gives non-integral intersection number " + value.get_str());
    return value.get_num();
}

// The contact order realizing intersection number v at
// multiplicity p, if attainable.
inline Rat contact_from_intersection(const CharacteristicSequence& cs, const Int& p, const Int& v) {
    validate(cs);
    if (p < 1) throw Error(Error::Kind::validation, "contact: multiplicity p must be positive");
    if (v < 1) throw Error(Error::Kind::validation, "contact: intersection number must be positive");
    const int g = cs.genus();
    auto e = detail::gcd_chain(cs.beta0, cs.betas);

    Rat sum = 0;
    for (int i = 1; i <= g + 1; ++i) {
        Rat o = (ratio(v, p) - sum) / Rat(e[static_cast<size_t>(i - 1)]);
        bool above_prev = (i == 1) ? (o > 0) : (o > ratio(cs.beta(i - 1), cs.beta0));
        bool below_cur = (i == g + 1) || (o <= ratio(cs.beta(i), cs.beta0));
        if (above_prev && below_cur) {
            // Attainable contacts in this window are the characteristic value
            // beta_i/beta0 itself, orders on the y-side exponent lattice
            // (multiples of e_{i-1} in t), or orders on the comparison
            // branch's own 1/p lattice.
            bool characteristic = i <= g && o == ratio(cs.beta(i), cs.beta0);
            bool y_lattice = is_integer(o * ratio(cs.beta0, e[static_cast<size_t>(i - 1)]));
            bool p_lattice = is_integer(o * Rat(p));
            if (characteristic || y_lattice || p_lattice) return o;
            break;
        }
        if (i <= g)
            sum += ratio(e[static_cast<size_t>(i - 1)] - e[static_cast<size_t>(i)], cs.beta0) *
                   Rat(cs.beta(i));
    }
    throw Error(Error::Kind::validation,
                "contact: intersection number " + v.get_str() + " is not attainable at multiplicity " +
                    p.get_str());
}

// Membership v in <gens> for a numerical semigroup, via minimal values per
// residue class mod the smallest generator.
inline bool semigroup_contains(const std::vector<Int>& gens, const Int& v) {
    if (v == 0) return true;
    if (v < 0 || gens.empty()) return false;
    Int g0 = gens[0];
    for (const Int& g : gens)
        if (g > 0 && g < g0) g0 = g;
    if (g0 <= 0) return false;
    unsigned long mod = static_cast<unsigned long>(to_ll(g0));
    const Int inf = v + 1;
    std::vector<Int> best(mod, inf);
    best[0] = 0;
    // Bellman-Ford style relaxation over residues; mod is small in practice.
    for (bool changed = true; changed;) {
        changed = false;
        for (unsigned long r = 0; r < mod; ++r) {
            if (best[r] > v) continue;
            for (const Int& g : gens) {
                if (g <= 0) continue;
                Int cand = best[r] + g;
                unsigned long r2 = static_cast<unsigned long>(to_ll(cand % g0));
                if (cand < best[r2]) {
                    best[r2] = cand;
                    changed = true;
                }
            }
        }
    }
    unsigned long rv = static_cast<unsigned long>(to_ll(v % g0));
    return best[rv] <= v;
}

// ---- text forms ------------------------------------------------------------
//
// Semigroup: "4,6,15".  Characteristic sequence: "4;6,9".  Whitespace-lenient.

namespace detail {

inline std::vector<Int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<Int> out;
    std::string cur;
    auto flush = [&]() {
        if (cur.empty())
            throw Error(Error::Kind::validation, what + ": empty entry in \"" + text + "\"");
        try {
            out.emplace_back(cur);
        } catch (const std::invalid_argument&) {
            throw Error(Error::Kind::validation, what + ": \"" + cur + "\" is not an integer");
        }
        cur.clear();
    };
    for (char ch : text) {
        if (ch == ' ' || ch == '\t') continue;
        if (ch == ',') {
            flush();
        } else {
            cur += ch;
        }
    }
    flush();
    return out;
}

}  // namespace detail

inline std::vector<Int> parse_semigroup(const std::string& text) {
    return detail::parse_int_list(text, "semigroup");
}

inline CharacteristicSequence parse_charseq(const std::string& text) {
    auto semi = text.find(';');
    if (semi == std::string::npos)
        throw Error(Error::Kind::validation,
                    "characteristic sequence: expected \"beta0;beta1,...\" with a semicolon, got \"" +
                        text + "\"");
    CharacteristicSequence cs;
    auto head = detail::parse_int_list(text.substr(0, semi), "characteristic sequence");
    if (head.size() != 1)
        throw Error(Error::Kind::validation,
                    "characteristic sequence: exactly one multiplicity before the semicolon");
    cs.beta0 = head[0];
    cs.betas = detail::parse_int_list(text.substr(semi + 1), "characteristic sequence");
    return cs;
}

}  // namespace jetbranch
