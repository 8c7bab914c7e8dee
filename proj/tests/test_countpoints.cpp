#include <doctest.h>

#include <map>
#include <vector>

#include "jetbranch/countpoints.hpp"
#include "jetbranch/jets.hpp"
#include "test_util.hpp"

using namespace jetbranch;

namespace {

long mod_value(const Rat& c, long p) {
    Int num = c.get_num() % p;
    if (num < 0) num += p;
    Int den = c.get_den() % p;
    long d = to_ll(den), result = to_ll(num);
    // den is never divisible by p in these tests.
    long dinv = 1;
    for (long e = p - 2; e > 0; e >>= 1) {
        if (e & 1) dinv = dinv * d % p;
        d = d * d % p;
    }
    return result * dinv % p;
}

long eval_mod_p(const Poly& f, const std::map<VarId, long>& vals, long p) {
    long acc = 0;
    for (const auto& [mono, coeff] : f.terms()) {
        long term = mod_value(coeff, p);
        for (const auto& [v, e] : mono.factors) {
            auto it = vals.find(v);
            long base = it == vals.end() ? 0 : it->second;
            for (int k = 0; k < e; ++k) term = term * base % p;
        }
        acc = (acc + term) % p;
    }
    return acc;
}

// Independent oracle: enumerate every assignment of (x0^(1..m), x1^(1..m))
// and test the symbolic jet equations directly.
std::vector<std::vector<long>> naive_solutions(const Poly& f, Level m, long p) {
    auto F = jet_coefficients(f, m);
    std::vector<std::vector<long>> sols;
    size_t vars = 2 * static_cast<size_t>(m);
    std::vector<long> a(vars, 0);
    while (true) {
        std::map<VarId, long> vals;
        vals[jet_var(0, 0)] = 0;
        vals[jet_var(1, 0)] = 0;
        for (Level i = 1; i <= m; ++i) {
            vals[jet_var(0, static_cast<int>(i))] = a[static_cast<size_t>(i - 1)];
            vals[jet_var(1, static_cast<int>(i))] = a[static_cast<size_t>(m + i - 1)];
        }
        bool ok = true;
        for (Level j = 1; j <= m && ok; ++j) ok = eval_mod_p(F[static_cast<size_t>(j)], vals, p) == 0;
        if (ok) sols.push_back(a);
        size_t pos = 0;
        while (pos < vars && ++a[pos] == p) a[pos++] = 0;
        if (pos == vars) break;
    }
    return sols;
}

}  // namespace

TEST_CASE("fiber_point_count examples") {
    CHECK(fiber_point_count(parse_curve("y^2-x^3"), 2, 5) == 125);
    CHECK(fiber_point_count(parse_curve("y^2-x^3"), 1, 7) == 49);
    // Multiplicity 4 > 3 leaves no constraints at level 3.
    CHECK(fiber_point_count(parse_curve("(y^2-x^3)^2-4*x^6*y-x^9"), 3, 3) == 729);
}

TEST_CASE("pruned enumeration agrees with the naive oracle") {
    for (long p : {2, 3}) {
        for (Level m = 1; m <= 3; ++m) {
            Poly cusp = parse_curve("y^2-x^3");
            CHECK(fiber_point_count(cusp, m, Int(p)) ==
                  Int(static_cast<long>(naive_solutions(cusp, m, p).size())));
            Poly other = parse_curve("y^3-x^4");
            CHECK(fiber_point_count(other, m, Int(p)) ==
                  Int(static_cast<long>(naive_solutions(other, m, p).size())));
        }
    }
    Poly cusp = parse_curve("y^2-x^3");
    CHECK(fiber_point_count(cusp, 4, 3) == Int(static_cast<long>(naive_solutions(cusp, 4, 3).size())));
}

TEST_CASE("exact power law below n1*beta1") {
    for (auto curve : {"y^2-x^3", "(y^2-x^3)^2-4*x^6*y-x^9"}) {
        Poly f = parse_curve(curve);
        NewtonForm nf = newton_form(f);
        Level delta = to_ll(nf.n1 * nf.beta1);
        for (Int p : {Int(2), Int(3)}) {
            Level top = std::min<Level>(delta - 1, p == 2 ? 11 : 8);
            for (Level m = 1; m <= top; ++m) {
                Int expo = 2 * Int(m) - floor_div(Int(m), nf.beta0) - floor_div(Int(m), nf.beta1);
                CHECK(fiber_point_count(f, m, p) == pow(p, static_cast<unsigned long>(to_ll(expo))));
            }
        }
    }
}

TEST_CASE("at m = n1*beta1 the binomial adds its p points") {
    // The reduced fiber is a coordinate space times the binomial curve, so the
    // count is p^(2m - codim + 2) exactly.
    Poly cusp = parse_curve("y^2-x^3");
    CHECK(fiber_point_count(cusp, 6, 3) == pow(Int(3), 8));  // codim 6 at m = 6
    CHECK(fiber_point_count(cusp, 6, 2) == pow(Int(2), 8));
    Poly quartic = parse_curve("(y^2-x^3)^2-4*x^6*y-x^9");
    CHECK(fiber_point_count(quartic, 12, 2) == pow(Int(2), 20));  // codim 6 at m = 12
}

TEST_CASE("point counts are invariant under the jet scaling action") {
    // (a_i, b_i) -> (lambda^i a_i, lambda^i b_i) permutes the solution set.
    const long p = 5;
    Poly f = parse_curve("y^2-x^3");
    auto sols = naive_solutions(f, 3, p);
    std::map<std::vector<long>, bool> index;
    for (const auto& s : sols) index[s] = true;
    for (long lambda = 2; lambda < p; ++lambda) {
        for (const auto& s : sols) {
            std::vector<long> scaled(s.size());
            long pw = 1;
            for (Level i = 1; i <= 3; ++i) {
                pw = pw * lambda % p;
                scaled[static_cast<size_t>(i - 1)] = s[static_cast<size_t>(i - 1)] * pw % p;
                scaled[static_cast<size_t>(3 + i - 1)] = s[static_cast<size_t>(3 + i - 1)] * pw % p;
            }
            CHECK(index.count(scaled));
        }
    }
}

TEST_CASE("threaded and serial counts agree") {
    Poly f = parse_curve("y^2-x^3");
    CHECK(fiber_point_count(f, 5, 5, 100'000'000, 1) == fiber_point_count(f, 5, 5, 100'000'000, 2));
}

TEST_CASE("budget and validation errors") {
    Poly f = parse_curve("y^2-x^3");
    try {
        fiber_point_count(f, 6, 7, 50);
        FAIL("expected budget error");
    } catch (const Error& e) {
        CHECK(e.kind() == Error::Kind::budget);
    }
    CHECK_THROWS_AS(fiber_point_count(f, 2, 4), Error);  // not prime

    Poly half = Poly::term(Monomial::var(var_y(), 2), ratio(1, 3)) -
                Poly::term(Monomial::var(var_x(), 3), Rat(1));
    CHECK_THROWS_AS(fiber_point_count(half, 2, 3), Error);  // p divides a denominator
    CHECK(fiber_point_count(half, 2, 5) == 125);            // fine away from 3
}

TEST_CASE("dimension_estimate on exact power laws") {
    DimensionEstimate est = dimension_estimate(parse_curve("y^2-x^3"), 2, {Int(3), Int(5)});
    CHECK(est.conclusive);
    CHECK(est.raw_exponent == 3);
    CHECK(est.affine_dim == 1);
    CHECK(est.components == 1);
    for (const auto& s : est.evidence) CHECK(s.residual == 0);

    est = dimension_estimate(parse_curve("(y^2-x^3)^2-4*x^6*y-x^9"), 3, {Int(3), Int(5)});
    CHECK(est.conclusive);
    CHECK(est.raw_exponent == 6);
    CHECK(est.components == 1);
}

TEST_CASE("dimension_estimate sees both components of the cusp at level 7") {
    DimensionEstimate est = dimension_estimate(parse_curve("y^2-x^3"), 7, {Int(5)});
    CHECK(est.conclusive);
    CHECK(est.affine_dim == 7);
    CHECK(est.raw_exponent == 9);
    CHECK(est.components == 2);
}
