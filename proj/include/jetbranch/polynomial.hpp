// Sparse exact-coefficient polynomials in the curve variables x, y and the
// jet variables x_i^(j). One representation serves both: the curve variables
// are the order -1 slots of each axis.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "jetbranch/numeric.hpp"

namespace jetbranch {

// Variable id packs (order, axis); sorting by id sorts by order then axis.
using VarId = std::uint32_t;

inline VarId make_var(int axis, int order) {
    return (static_cast<VarId>(order + 1) << 1) | static_cast<VarId>(axis);
}
inline VarId var_x() { return make_var(0, -1); }
inline VarId var_y() { return make_var(1, -1); }
inline VarId jet_var(int axis, int order) { return make_var(axis, order); }
inline int var_axis(VarId v) { return static_cast<int>(v & 1u); }
inline int var_order(VarId v) { return static_cast<int>(v >> 1) - 1; }

inline std::string var_name(VarId v) {
    int axis = var_axis(v), order = var_order(v);
    if (order < 0) return axis == 0 ? "x" : "y";
    return (axis == 0 ? "x0(" : "x1(") + std::to_string(order) + ")";
}

// Sorted (variable, exponent) pairs, no zero exponents.
struct Monomial {
    std::vector<std::pair<VarId, int>> factors;

    bool operator==(const Monomial& o) const = default;
    bool operator<(const Monomial& o) const { return factors < o.factors; }

    int total_degree() const {
        int d = 0;
        for (auto& [v, e] : factors) d += e;
        return d;
    }

    int degree_of(VarId v) const {
        for (auto& [w, e] : factors)
            if (w == v) return e;
        return 0;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        r.factors.reserve(factors.size() + o.factors.size());
        size_t i = 0, j = 0;
        while (i < factors.size() && j < o.factors.size()) {
            if (factors[i].first == o.factors[j].first) {
                r.factors.emplace_back(factors[i].first, factors[i].second + o.factors[j].second);
                ++i, ++j;
            } else if (factors[i].first < o.factors[j].first) {
                r.factors.push_back(factors[i++]);
            } else {
                r.factors.push_back(o.factors[j++]);
            }
        }
        for (; i < factors.size(); ++i) r.factors.push_back(factors[i]);
        for (; j < o.factors.size(); ++j) r.factors.push_back(o.factors[j]);
        return r;
    }

    static Monomial unit() { return {}; }
    static Monomial var(VarId v, int e = 1) {
        Monomial m;
        if (e != 0) m.factors.emplace_back(v, e);
        return m;
    }

    std::string str() const {
        if (factors.empty()) return "1";
        std::string s;
        for (size_t i = 0; i < factors.size(); ++i) {
            if (i) s += "*";
            s += var_name(factors[i].first);
            if (factors[i].second != 1) s += "^" + std::to_string(factors[i].second);
        }
        return s;
    }
};

class Poly {
public:
    Poly() = default;
    explicit Poly(const Rat& c) {
        if (c != 0) terms_[Monomial::unit()] = c;
    }
    explicit Poly(long c) : Poly(Rat(c)) {}

    static Poly variable(VarId v) {
        Poly p;
        p.terms_[Monomial::var(v)] = 1;
        return p;
    }
    static Poly term(const Monomial& m, const Rat& c) {
        Poly p;
        if (c != 0) p.terms_[m] = c;
        return p;
    }

    const std::map<Monomial, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    void add_term(const Monomial& m, const Rat& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    Poly operator-() const {
        Poly r(*this);
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly& operator*=(const Rat& c) {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, cc] : terms_) cc *= c;
        return *this;
    }
    friend Poly operator*(Poly a, const Rat& c) { return a *= c; }

    Poly pow(int e) const {
        if (e < 0) throw Error(Error::Kind::validation, "polynomial: negative exponent");
        Poly r(1);
        Poly base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base = (e >>= 1) ? base * base : base;
        }
        return r;
    }

    bool operator==(const Poly& o) const { return terms_ == o.terms_; }

    int total_degree() const {
        int d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.total_degree());
        return d;
    }

    int degree_of(VarId v) const {
        int d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.degree_of(v));
        return d;
    }

    bool is_bivariate() const {
        for (auto& [m, c] : terms_)
            for (auto& [v, e] : m.factors)
                if (var_order(v) >= 0) return false;
        return true;
    }

    Rat coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    // Kills every term that contains a variable selected by `zeroed`.
    template <typename Pred>
    Poly substitute_zero(Pred zeroed) const {
        Poly r;
        for (auto& [m, c] : terms_) {
            bool dies = false;
            for (auto& [v, e] : m.factors)
                if (zeroed(v)) {
                    dies = true;
                    break;
                }
            if (!dies) r.terms_[m] = c;
        }
        return r;
    }

    // Substitutes each variable by another variable (used for x -> x0(0)).
    template <typename Map>
    Poly rename_vars(Map f) const {
        Poly r;
        for (auto& [m, c] : terms_) {
            Monomial nm;
            for (auto& [v, e] : m.factors) nm = nm * Monomial::var(f(v), e);
            r.add_term(nm, c);
        }
        return r;
    }

    // The derivation D with D(x_i^(j)) = (j+1) x_i^(j+1) for j < cap and
    // D(x_i^(cap)) = 0; curve variables are not differentiated.
    Poly derivation(int cap) const {
        Poly r;
        for (auto& [m, c] : terms_) {
            for (size_t k = 0; k < m.factors.size(); ++k) {
                auto [v, e] = m.factors[k];
                int order = var_order(v);
                if (order < 0 || order >= cap) continue;
                Monomial nm;
                for (size_t l = 0; l < m.factors.size(); ++l) {
                    auto [w, ew] = m.factors[l];
                    if (l == k) ew -= 1;
                    if (ew != 0) nm = nm * Monomial::var(w, ew);
                }
                nm = nm * Monomial::var(jet_var(var_axis(v), order + 1));
                r.add_term(nm, c * Rat(e) * Rat(order + 1));
            }
        }
        return r;
    }

    // Graded order, top degree first, for deterministic display.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::vector<std::pair<const Monomial*, const Rat*>> view;
        view.reserve(terms_.size());
        for (auto& [m, c] : terms_) view.emplace_back(&m, &c);
        std::stable_sort(view.begin(), view.end(), [](auto& a, auto& b) {
            int da = a.first->total_degree(), db = b.first->total_degree();
            if (da != db) return da > db;
            return *a.first < *b.first;
        });
        std::string s;
        for (size_t i = 0; i < view.size(); ++i) {
            const Rat& c = *view[i].second;
            bool neg = c < 0;
            Rat a = neg ? Rat(-c) : c;
            if (i == 0)
                s += neg ? "-" : "";
            else
                s += neg ? " - " : " + ";
            bool unit_mono = view[i].first->factors.empty();
            if (a != 1 || unit_mono) {
                s += a.get_str();
                if (!unit_mono) s += "*";
            }
            if (!unit_mono) s += view[i].first->str();
        }
        return s;
    }

private:
    std::map<Monomial, Rat> terms_;
};

// Bivariate support as (a, b, coefficient) triples with x^a y^b.
struct BivariateTerm {
    int a = 0;
    int b = 0;
    Rat coeff;
};

inline std::vector<BivariateTerm> bivariate_support(const Poly& f) {
    if (!f.is_bivariate())
        throw Error(Error::Kind::validation, "expected a polynomial in x, y only");
    std::vector<BivariateTerm> out;
    for (auto& [m, c] : f.terms()) {
        BivariateTerm t;
        t.coeff = c;
        for (auto& [v, e] : m.factors) (var_axis(v) == 0 ? t.a : t.b) = e;
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace jetbranch
