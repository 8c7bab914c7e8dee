// Closed-form classification of the irreducible components of the jet-scheme
// fibers C_m^0 over the singular point: labels, emptiness, codimensions,
// counts, the fiber codimension, the log-canonical minimum and the dimension
// lines. Levels are machine integers; all formula arithmetic stays exact.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "jetbranch/numeric.hpp"
#include "jetbranch/semigroup.hpp"

namespace jetbranch {

enum class ComponentKind { boundary, type_i, type_v };

inline char kind_letter(ComponentKind k) {
    switch (k) {
        case ComponentKind::boundary: return 'B';
        case ComponentKind::type_i: return 'I';
        case ComponentKind::type_v: return 'V';
    }
    return '?';
}

struct ComponentLabel {
    ComponentKind kind = ComponentKind::boundary;
    long kappa = 0;  // type I and V
    int j = 0;            // type V only, 2 <= j <= g
    long q = 0;      // boundary only

    bool operator==(const ComponentLabel& o) const = default;

    // Sort key (kind, j, kappa/q); boundary sorts first within a level.
    bool operator<(const ComponentLabel& o) const {
        auto rank = [](ComponentKind k) { return k == ComponentKind::boundary ? 0 : (k == ComponentKind::type_i ? 1 : 2); };
        if (rank(kind) != rank(o.kind)) return rank(kind) < rank(o.kind);
        if (j != o.j) return j < o.j;
        long a = kind == ComponentKind::boundary ? q : kappa;
        long b = o.kind == ComponentKind::boundary ? o.q : o.kappa;
        return a < b;
    }

    std::string str() const {
        switch (kind) {
            case ComponentKind::boundary: return "B[q=" + std::to_string(q) + "]";
            case ComponentKind::type_i: return "I[kappa=" + std::to_string(kappa) + "]";
            case ComponentKind::type_v:
                return "V[j=" + std::to_string(j) + ",kappa=" + std::to_string(kappa) + "]";
        }
        return "?";
    }
};

struct ComponentDescriptor {
    ComponentLabel label;
    Level m = 0;
    Int contact;               // exact order for I/V, strict lower bound for B
    bool contact_exact = true;
    Int codim;
    Int dim;                   // 2(m+1) - codim
    bool coincides_boundary = false;  // B at levels where it equals cl(C^{q+1})
};

struct FiberSummary {
    Level m = 0;
    long q = 0;
    std::vector<ComponentDescriptor> components;
    long count = 0;
    Int fiber_codim;
};

struct Stratum {
    int j = 0;          // 2..g+1; g+1 means type I
    long kappa = 0;
};

// j = max{ l in [2, g+1] : n_2...n_{l-1} | k }, kappa = k / (n_2...n_{j-1}).
inline Stratum stratum_of_k(const SemigroupInvariants& inv, long k) {
    if (k < 1) throw Error(Error::Kind::validation, "stratum_of_k: k must be positive");
    const int g = inv.genus();
    int j = 2;
    Int prod = 1;
    for (int l = 3; l <= g + 1; ++l) {
        prod *= inv.n[static_cast<size_t>(l - 2)];  // n_{l-1}
        if (divides(prod, Int(k)))
            j = l;
        else
            break;
    }
    Stratum s;
    s.j = j;
    s.kappa = to_ll(exact_div(Int(k), inv.n_product(2, j - 1)));
    return s;
}

// A type-V contact class dies once m reaches kappa * beta_bar_j; type I persists.
inline bool is_empty_component(const SemigroupInvariants& inv, long k, Level m) {
    Stratum s = stratum_of_k(inv, k);
    if (s.j == inv.genus() + 1) return false;
    return Int(m) >= Int(s.kappa) * inv.beta_bar[static_cast<size_t>(s.j)];
}

namespace detail {

// Stratum index i for C_m^k: the unique i with
//   kappa * n_i...n_{j-1} * beta_bar_i <= m < kappa * n_{i+1}...n_{j-1} * beta_bar_{i+1}
// (upper bound absent for j = g+1, i = g).
inline int codim_stratum_index(const SemigroupInvariants& inv, const Stratum& s, Level m) {
    const int g = inv.genus();
    const int imax = (s.j == g + 1) ? g : s.j - 1;
    for (int i = 1; i <= imax; ++i) {
        Int lower = Int(s.kappa) * inv.n_product(i, s.j - 1) * inv.beta_bar[static_cast<size_t>(i)];
        if (Int(m) < lower) continue;
        if (i == imax) {
            if (s.j == g + 1) return i;  // unbounded above
            Int upper = Int(s.kappa) * inv.beta_bar[static_cast<size_t>(s.j)];
            if (Int(m) < upper) return i;
        } else {
            Int upper = Int(s.kappa) * inv.n_product(i + 1, s.j - 1) *
                        inv.beta_bar[static_cast<size_t>(i + 1)];
            if (Int(m) < upper) return i;
        }
    }
    throw Error(Error::Kind::internal, "codim_stratum_index: no stratum window contains m");
}

}  // namespace detail

// Codimension of the contact-class component: A + floor(m / e_i) with
// A = (k/e_1)(b0 + b1 + sum_{l<i}(b_{l+1} - n_l b_l)) - (k/e_1) n_i b_i + 1.
inline Int component_codim(const SemigroupInvariants& inv, long k, Level m) {
    if (k < 1) throw Error(Error::Kind::validation, "component_codim: k must be positive");
    Int birth = Int(k) * inv.lcm01;
    if (Int(m) < birth)
        throw Error(Error::Kind::validation,
                    "component_codim: level " + std::to_string(m) + " is below the birth level " +
                        birth.get_str() + " of C^" + std::to_string(k));
    if (is_empty_component(inv, k, m))
        throw Error(Error::Kind::validation,
                    "component_codim: C^" + std::to_string(k) + " is empty at level " + std::to_string(m));

    Stratum s = stratum_of_k(inv, k);
    int i = detail::codim_stratum_index(inv, s, m);

    Rat k_over_e1 = ratio(Int(k), inv.e[1]);
    Rat acc = Rat(inv.beta_bar[0]) + Rat(inv.beta_bar[1]);
    for (int l = 1; l <= i - 1; ++l)
        acc += Rat(inv.beta_bar[static_cast<size_t>(l + 1)] -
                   inv.n[static_cast<size_t>(l - 1)] * inv.beta_bar[static_cast<size_t>(l)]);
    Rat a_rat = k_over_e1 * acc -
                k_over_e1 * Rat(inv.n[static_cast<size_t>(i - 1)] * inv.beta_bar[static_cast<size_t>(i)]) +
                1;
    if (!is_integer(a_rat))
        throw Error(Error::Kind::internal,
                    "component_codim: non-integral offset for k = " + std::to_string(k) + ", m = " +
                        std::to_string(m));
    return to_int(a_rat) + floor_div(Int(m), inv.e[static_cast<size_t>(i)]);
}

// Codimension of the high-contact component B_m.
inline Int boundary_codim(const SemigroupInvariants& inv, Level m) {
    if (m < 1) throw Error(Error::Kind::validation, "boundary_codim: level must be >= 1");
    Int q = Int(m) - inv.e[1] >= 0 ? floor_div(Int(m) - inv.e[1], inv.lcm01) : Int(0);
    Int i = Int(m) - q * inv.lcm01;
    if (i < inv.lcm01)
        return 2 + floor_div(Int(m), inv.beta_bar[0]) + floor_div(Int(m), inv.beta_bar[1]);
    bool dead_successor =
        inv.genus() >= 2 && Int(m) >= (q + 1) * inv.beta_bar[2];
    return (q + 1) * (inv.n1() + inv.m1()) + (dead_successor ? 2 : 1);
}

// The component list at level m: live contact classes plus the boundary.
inline FiberSummary classify_components(const SemigroupInvariants& inv, Level m) {
    if (m < 1) throw Error(Error::Kind::validation, "classify_components: level must be >= 1");
    FiberSummary fs;
    fs.m = m;
    Int qz = Int(m) - inv.e[1] >= 0 ? floor_div(Int(m) - inv.e[1], inv.lcm01) : Int(0);
    fs.q = to_ll(qz);

    for (long k = 1; k <= fs.q; ++k) {
        if (is_empty_component(inv, k, m)) continue;
        Stratum s = stratum_of_k(inv, k);
        ComponentDescriptor d;
        d.m = m;
        d.label.kappa = s.kappa;
        if (s.j == inv.genus() + 1) {
            d.label.kind = ComponentKind::type_i;
        } else {
            d.label.kind = ComponentKind::type_v;
            d.label.j = s.j;
        }
        d.contact = Int(k) * inv.n1();
        d.contact_exact = true;
        d.codim = component_codim(inv, k, m);
        d.dim = 2 * (Int(m) + 1) - d.codim;
        fs.components.push_back(std::move(d));
    }

    ComponentDescriptor b;
    b.m = m;
    b.label.kind = ComponentKind::boundary;
    b.label.q = fs.q;
    b.contact = qz * inv.n1();
    b.contact_exact = false;
    b.codim = boundary_codim(inv, m);
    b.dim = 2 * (Int(m) + 1) - b.codim;
    Int iwin = Int(m) - qz * inv.lcm01;
    b.coincides_boundary =
        iwin >= inv.lcm01 && !(inv.genus() >= 2 && Int(m) >= (qz + 1) * inv.beta_bar[2]);
    fs.components.push_back(std::move(b));

    std::sort(fs.components.begin(), fs.components.end(),
              [](const ComponentDescriptor& a, const ComponentDescriptor& c) { return a.label < c.label; });

    fs.count = static_cast<long>(fs.components.size());
    fs.fiber_codim = fs.components[0].codim;
    for (const auto& d : fs.components) fs.fiber_codim = std::min(fs.fiber_codim, d.codim);

    // The boundary component always attains the fiber codimension.
    Int bc = boundary_codim(inv, m);
    if (fs.fiber_codim != bc)
        throw Error(Error::Kind::internal,
                    "classify_components: boundary does not attain the minimal codimension at m = " +
                        std::to_string(m));

    // Count cross-checks against the closed form.
    if (qz >= inv.q0 + 1) {
        Int closed = qz + 1;
        for (int j = 2; j <= inv.genus(); ++j)
            closed -= floor_div(Int(m), inv.beta_bar[static_cast<size_t>(j)]) -
                      floor_div(Int(m), inv.n[static_cast<size_t>(j - 1)] *
                                            inv.beta_bar[static_cast<size_t>(j)]);
        if (closed != fs.count)
            throw Error(Error::Kind::internal,
                        "classify_components: closed-form N(m) = " + closed.get_str() +
                            " disagrees with enumerated " + std::to_string(fs.count) + " at m = " +
                            std::to_string(m));
    }
    if (Int(m) < (inv.q0 + 1) * inv.lcm01 + inv.e[1] && fs.count != 1)
        throw Error(Error::Kind::internal,
                    "classify_components: fiber should be irreducible at m = " + std::to_string(m));
    return fs;
}

struct ClosedFormCodim {
    Int value;
    bool covered;  // false when the level falls outside the closed-form case list
};

// Explicit codim(C_m^0) case list via the floor expressions. Below e_1 the
// generic tangent-space formula applies and `covered` is false.
inline ClosedFormCodim fiber_codim_closed_form(const SemigroupInvariants& inv, Level m) {
    if (m < 1) throw Error(Error::Kind::validation, "fiber_codim_closed_form: level must be >= 1");
    Int q = Int(m) - inv.e[1] >= 0 ? floor_div(Int(m) - inv.e[1], inv.lcm01) : Int(0);
    Int i = Int(m) - q * inv.lcm01;
    Int base = floor_div(Int(m), inv.beta_bar[0]) + floor_div(Int(m), inv.beta_bar[1]);
    ClosedFormCodim out;
    if (i < inv.lcm01) {
        out.value = base + 2;
        out.covered = Int(m) >= inv.e[1];
    } else {
        bool dead_successor = inv.genus() >= 2 && Int(m) >= (q + 1) * inv.beta_bar[2];
        out.value = base + (dead_successor ? 2 : 1);
        out.covered = true;
    }
    return out;
}

struct LctMinimum {
    Rat value;
    Level argmin;
};

// min_m codim(C_m^0)/(m+1) = 1/beta0 + 1/beta1, first attained at
// m = n_1*beta_bar_1 - 1.
inline LctMinimum lct_minimum(const SemigroupInvariants& inv, Level m_max) {
    Level need = to_ll(inv.lcm01 - 1);
    if (m_max < need)
        throw Error(Error::Kind::depth,
                    "lct_minimum: m_max must be at least n_1*beta_bar_1 - 1 = " + std::to_string(need));
    LctMinimum best;
    best.argmin = 1;
    best.value = ratio(boundary_codim(inv, 1), Int(2));
    for (Level m = 2; m <= m_max; ++m) {
        Rat v = ratio(boundary_codim(inv, m), Int(m) + 1);
        if (v < best.value) {
            best.value = v;
            best.argmin = m;
        }
    }
    Rat expect = ratio(Int(1), inv.beta_bar[0]) + ratio(Int(1), inv.beta_bar[1]);
    if (best.value != expect)
        throw Error(Error::Kind::internal,
                    "lct_minimum: expected " + expect.get_str() + ", computed " + best.value.get_str());
    if (Int(best.argmin) + 1 != inv.lcm01)
        throw Error(Error::Kind::internal,
                    "lct_minimum: first attainment expected at m = n_1*beta_bar_1 - 1");
    return best;
}

struct AffineLine {
    Rat slope;
    Rat intercept;

    Rat at(Level m) const { return slope * Rat(Int(m)) + intercept; }
};

// For each residue class i mod n_1*beta_bar_1 the map
// m -> dim(C_m^0) is affine beyond q0*n_1*beta_bar_1 + e_1. Lines are fitted
// from two in-class levels and verified on a third.
inline std::vector<AffineLine> dim_linear_functions(const SemigroupInvariants& inv) {
    Level period = to_ll(inv.lcm01);
    Int threshold = inv.q0 * inv.lcm01 + inv.e[1];
    std::vector<AffineLine> lines;
    lines.reserve(static_cast<size_t>(period));
    for (Level r = 0; r < period; ++r) {
        Level m1 = r;
        while (m1 < 1 || Int(m1) < threshold) m1 += period;
        Level m2 = m1 + period, m3 = m2 + period;
        auto dim_at = [&](Level m) { return Rat(2 * (Int(m) + 1) - boundary_codim(inv, m)); };
        AffineLine L;
        L.slope = (dim_at(m2) - dim_at(m1)) / Rat(Int(period));
        L.intercept = dim_at(m1) - L.slope * Rat(Int(m1));
        if (L.at(m3) != dim_at(m3))
            throw Error(Error::Kind::internal,
                        "dim_linear_functions: third level off the fitted line for residue " +
                            std::to_string(r));
        lines.push_back(std::move(L));
    }
    return lines;
}

}  // namespace jetbranch
