// Shared helpers for the test suites: deterministic RNG and random generators
// for valid semigroups and small integer curves.
#pragma once

#include <random>
#include <vector>

#include "jetbranch/numeric.hpp"
#include "jetbranch/polynomial.hpp"
#include "jetbranch/semigroup.hpp"

namespace jbtest {

using jetbranch::Int;
using jetbranch::Poly;

inline std::mt19937_64 make_rng(unsigned long seed) { return std::mt19937_64(seed); }

// A random valid semigroup (beta_bar_0, ..., beta_bar_g): strictly decreasing
// gcd chain ending at 1 and n_i*beta_bar_i < beta_bar_{i+1}.
inline std::vector<Int> random_semigroup(std::mt19937_64& rng, int max_g = 3, long b0_max = 30,
                                         long entry_max = 400) {
    auto pick = [&](long lo, long hi) {
        return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
    };
    while (true) {
        int g = static_cast<int>(pick(1, max_g));
        std::vector<long> n(static_cast<size_t>(g));
        long b0 = 1;
        bool ok = true;
        for (int i = 0; i < g && ok; ++i) {
            n[static_cast<size_t>(i)] = pick(2, 4);
            b0 *= n[static_cast<size_t>(i)];
            ok = b0 <= b0_max;
        }
        if (!ok) continue;
        std::vector<long> e(static_cast<size_t>(g) + 1, 1);
        for (int i = g - 1; i >= 0; --i)
            e[static_cast<size_t>(i)] = e[static_cast<size_t>(i) + 1] * n[static_cast<size_t>(i)];
        // e[0] = b0, e[i] = n_{i+1}...n_g.

        std::vector<Int> bb{Int(b0)};
        long m1_hi = entry_max / e[1];
        if (m1_hi <= n[0] + 1) continue;
        long m1 = 0;
        for (int tries = 0; tries < 64; ++tries) {
            long cand = pick(n[0] + 1, m1_hi);
            if (std::gcd(cand, n[0]) == 1) {
                m1 = cand;
                break;
            }
        }
        if (!m1) continue;
        bb.push_back(Int(m1 * e[1]));

        bool built = true;
        for (int i = 2; i <= g && built; ++i) {
            long ei = e[static_cast<size_t>(i)];
            long ni = n[static_cast<size_t>(i - 1)];
            long lo = jetbranch::to_ll(bb.back()) * n[static_cast<size_t>(i - 2)] / ei + 1;
            long hi = entry_max / ei;
            built = false;
            for (int tries = 0; tries < 64 && !built; ++tries) {
                if (lo > hi) break;
                long t = pick(lo, hi);
                if (t * ei <= jetbranch::to_ll(bb.back()) * n[static_cast<size_t>(i - 2)]) continue;
                if (std::gcd(t, ni) != 1) continue;
                bb.push_back(Int(t * ei));
                built = true;
            }
        }
        if (!built) continue;
        return bb;
    }
}

// Random integer-coefficient bivariate polynomial with at most `max_terms`
// terms of total degree <= `max_deg`.
inline Poly random_curve_poly(std::mt19937_64& rng, int max_terms = 6, int max_deg = 6) {
    using namespace jetbranch;
    Poly f;
    int terms = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_terms));
    for (int t = 0; t < terms; ++t) {
        int a = static_cast<int>(rng() % static_cast<unsigned>(max_deg + 1));
        int b = static_cast<int>(rng() % static_cast<unsigned>(max_deg + 1 - a));
        long c = static_cast<long>(rng() % 19) - 9;
        if (c == 0) c = 1;
        f += Poly::term(Monomial::var(var_x(), a) * Monomial::var(var_y(), b), Rat(c));
    }
    return f;
}

}  // namespace jbtest
