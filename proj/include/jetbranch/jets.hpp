// Jet equations two ways (coefficient extraction by truncated composition,
// and the derivation D), the ord_t oracle on parametrizations, and the
// symbolic reduced-fiber checks of the normal form.
#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "jetbranch/newton.hpp"
#include "jetbranch/numeric.hpp"
#include "jetbranch/parser.hpp"
#include "jetbranch/polynomial.hpp"

namespace jetbranch {

namespace detail {

// Truncated series with polynomial coefficients, length m+1.
using PolySeries = std::vector<Poly>;

inline PolySeries series_mul(const PolySeries& a, const PolySeries& b, size_t len,
                             size_t term_budget) {
    PolySeries r(len);
    size_t total = 0;
    for (size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size() && i + j < len; ++j) {
            if (b[j].is_zero()) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    for (const Poly& p : r) total += p.term_count();
    if (total > term_budget)
        throw Error(Error::Kind::budget,
                    "symbolic budget exceeded: jet equations grew past " +
                        std::to_string(term_budget) + " terms");
    return r;
}

// f(X(t), Y(t)) mod t^(m+1) by Horner in y over cached x powers.
inline PolySeries compose_bivariate(const Poly& f, const PolySeries& X, const PolySeries& Y,
                                    size_t len, size_t term_budget = 2'000'000) {
    auto support = bivariate_support(f);
    int dx = 0, dy = 0;
    for (const auto& t : support) {
        dx = std::max(dx, t.a);
        dy = std::max(dy, t.b);
    }
    std::vector<PolySeries> xpow(static_cast<size_t>(dx) + 1);
    xpow[0] = PolySeries(len);
    xpow[0][0] = Poly(1);
    for (int a = 1; a <= dx; ++a)
        xpow[static_cast<size_t>(a)] = series_mul(xpow[static_cast<size_t>(a - 1)], X, len, term_budget);

    // Rows A_b(x) = sum_a c_ab x^a, then Horner in y.
    std::vector<PolySeries> rows(static_cast<size_t>(dy) + 1);
    for (auto& row : rows) row.assign(len, Poly());
    for (const auto& t : support) {
        const PolySeries& xa = xpow[static_cast<size_t>(t.a)];
        PolySeries& row = rows[static_cast<size_t>(t.b)];
        for (size_t i = 0; i < len; ++i)
            if (!xa[i].is_zero()) row[i] += xa[i] * t.coeff;
    }
    PolySeries acc = rows[static_cast<size_t>(dy)];
    for (int b = dy - 1; b >= 0; --b) {
        acc = series_mul(acc, Y, len, term_budget);
        for (size_t i = 0; i < len; ++i) acc[i] += rows[static_cast<size_t>(b)][i];
    }
    return acc;
}

inline PolySeries jet_substitution(int axis, int from_order, Level m) {
    PolySeries s(static_cast<size_t>(m) + 1);
    for (Level i = std::max<Level>(from_order, 0); i <= m; ++i)
        s[static_cast<size_t>(i)] = Poly::variable(jet_var(axis, static_cast<int>(i)));
    return s;
}

}  // namespace detail

// F^(0..m): coefficients of t^j in f(sum x0^(i) t^i, sum x1^(i) t^i).
inline std::vector<Poly> jet_coefficients(const Poly& f, Level m) {
    if (m < 0) throw Error(Error::Kind::validation, "jet_coefficients: m must be >= 0");
    size_t len = static_cast<size_t>(m) + 1;
    return detail::compose_bivariate(f, detail::jet_substitution(0, 0, m),
                                     detail::jet_substitution(1, 0, m), len);
}

// Same, with x0^(i) for i < from_x and x1^(i) for i < from_y already set to 0.
inline std::vector<Poly> jet_coefficients_reduced(const Poly& f, Level m, Level from_x, Level from_y) {
    if (m < 0) throw Error(Error::Kind::validation, "jet_coefficients: m must be >= 0");
    size_t len = static_cast<size_t>(m) + 1;
    return detail::compose_bivariate(f, detail::jet_substitution(0, static_cast<int>(from_x), m),
                                     detail::jet_substitution(1, static_cast<int>(from_y), m), len);
}

// f^(0..m) with f^(0) = f(x0^(0), x1^(0)) and f^(j) = D(f^(j-1)).
inline std::vector<Poly> jet_derivation(const Poly& f, Level m) {
    if (m < 0) throw Error(Error::Kind::validation, "jet_derivation: m must be >= 0");
    if (!f.is_bivariate())
        throw Error(Error::Kind::validation, "jet_derivation: expected a polynomial in x, y");
    std::vector<Poly> out;
    out.reserve(static_cast<size_t>(m) + 1);
    out.push_back(f.rename_vars([](VarId v) { return jet_var(var_axis(v), 0); }));
    for (Level j = 1; j <= m; ++j) out.push_back(out.back().derivation(static_cast<int>(m)));
    return out;
}

// ---- ord_t oracle ------------------------------------------------------------

struct OrdT {
    enum class Kind { finite, infinite, at_least };
    Kind kind = Kind::finite;
    Int value;  // the order, or the truncation bound for at_least

    bool is_finite() const { return kind == Kind::finite; }
    std::string str() const {
        switch (kind) {
            case Kind::finite: return value.get_str();
            case Kind::infinite: return "+inf";
            case Kind::at_least: return ">=" + value.get_str();
        }
        return "?";
    }
};

// Order of vanishing of h(x(t), y(t)). Exact parametrizations give an exact
// answer (including +inf); truncated ones degrade to a lower bound.
inline OrdT ord_t(const Poly& h, const Parametrization& par) {
    auto support = bivariate_support(h);
    int dx = 0, dy = 0;
    for (const auto& t : support) {
        dx = std::max(dx, t.a);
        dy = std::max(dy, t.b);
    }
    size_t len;
    if (par.exact) {
        size_t lx = par.x.empty() ? 1 : par.x.size();
        size_t ly = par.y.empty() ? 1 : par.y.size();
        len = static_cast<size_t>(dx) * (lx - 1) + static_cast<size_t>(dy) * (ly - 1) + 1;
    } else {
        len = static_cast<size_t>(par.trunc);
    }

    using Series = std::vector<Rat>;
    auto mul = [&](const Series& a, const Series& b) {
        Series r(len);
        for (size_t i = 0; i < a.size() && i < len; ++i) {
            if (a[i] == 0) continue;
            for (size_t j = 0; j < b.size() && i + j < len; ++j) r[i + j] += a[i] * b[j];
        }
        return r;
    };
    std::vector<Series> xpow(static_cast<size_t>(dx) + 1);
    xpow[0] = Series(len);
    xpow[0][0] = 1;
    for (int a = 1; a <= dx; ++a) xpow[static_cast<size_t>(a)] = mul(xpow[static_cast<size_t>(a - 1)], par.x);
    std::vector<Series> rows(static_cast<size_t>(dy) + 1, Series(len));
    for (const auto& t : support) {
        const Series& xa = xpow[static_cast<size_t>(t.a)];
        Series& row = rows[static_cast<size_t>(t.b)];
        for (size_t i = 0; i < len; ++i) row[i] += xa[i] * t.coeff;
    }
    Series acc = rows[static_cast<size_t>(dy)];
    for (int b = dy - 1; b >= 0; --b) {
        acc = mul(acc, par.y);
        for (size_t i = 0; i < len; ++i) acc[i] += rows[static_cast<size_t>(b)][i];
    }

    OrdT r;
    for (size_t i = 0; i < len; ++i) {
        if (acc[i] != 0) {
            r.kind = OrdT::Kind::finite;
            r.value = Int(static_cast<long>(i));
            return r;
        }
    }
    if (par.exact) {
        r.kind = OrdT::Kind::infinite;
    } else {
        r.kind = OrdT::Kind::at_least;
        r.value = Int(par.trunc);
    }
    return r;
}

// ---- reduced fiber checks ------------------------------------------------------

struct ReducedFiberCheck {
    Level m = 0;
    bool survivor_case = false;   // m is a multiple of n1*beta1
    bool pass = false;
    Level zeroed_x = 0;           // x0^(0..zeroed_x-1) forced to vanish
    Level zeroed_y = 0;
    std::vector<std::string> lines;
    std::string failure;          // first violated equation, when pass is false
};

// After zeroing the contact variables every F^(j), j <= m
// vanishes, except that at m = K*n1*beta1 the survivor must be exactly
// ((x1^(K m1))^n1 - c (x0^(K n1))^m1)^e1.
inline ReducedFiberCheck reduced_fiber_check(const Poly& f, Level m, Level max_level = 4096) {
    if (m < 1) throw Error(Error::Kind::validation, "reduced_fiber_check: m must be >= 1");
    if (m > max_level)
        throw Error(Error::Kind::budget,
                    "reduced_fiber_check: m exceeds the symbolic budget " + std::to_string(max_level));
    NewtonForm nf = newton_form(f);
    long n1 = to_ll(nf.n1), m1 = to_ll(nf.m1), e1 = to_ll(nf.e1);
    long period = n1 * to_ll(nf.beta1);

    ReducedFiberCheck rep;
    rep.m = m;
    long k = (m - 1) / period;  // m = k*period + i with 1 <= i <= period
    long i = m - k * period;
    rep.survivor_case = (i == period);

    Level from_x, from_y;
    if (rep.survivor_case) {
        from_x = (k + 1) * n1;   // x0^(0..(k+1)n1-1) = 0
        from_y = (k + 1) * m1;
    } else {
        from_x = k * n1 + i / to_ll(nf.beta1) + 1;
        from_y = k * m1 + i / to_ll(nf.beta0) + 1;
    }
    rep.zeroed_x = from_x;
    rep.zeroed_y = from_y;
    rep.lines.push_back("zeroed x0^(0.." + std::to_string(from_x - 1) + "), x1^(0.." +
                        std::to_string(from_y - 1) + ")");

    auto F = jet_coefficients_reduced(f, m, from_x, from_y);
    Level upper = rep.survivor_case ? m - 1 : m;
    for (Level j = 0; j <= upper; ++j) {
        if (!F[static_cast<size_t>(j)].is_zero()) {
            rep.pass = false;
            rep.failure = "F^(" + std::to_string(j) + ") does not vanish: " +
                          F[static_cast<size_t>(j)].str();
            return rep;
        }
    }
    rep.lines.push_back("F^(0.." + std::to_string(upper) + ") vanish");

    if (rep.survivor_case) {
        Poly expected = (Poly::variable(jet_var(1, static_cast<int>((k + 1) * m1)))
                             .pow(static_cast<int>(n1)) -
                         Poly::variable(jet_var(0, static_cast<int>((k + 1) * n1)))
                             .pow(static_cast<int>(m1)) *
                             nf.c)
                            .pow(static_cast<int>(e1));
        if (F[static_cast<size_t>(m)] != expected) {
            rep.pass = false;
            rep.failure = "survivor F^(" + std::to_string(m) + ") = " +
                          F[static_cast<size_t>(m)].str() + ", expected " + expected.str();
            return rep;
        }
        rep.lines.push_back("survivor F^(" + std::to_string(m) + ") = " + expected.str());
    }
    rep.pass = true;
    return rep;
}

}  // namespace jetbranch
