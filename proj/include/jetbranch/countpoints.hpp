// Finite-field oracle: exact point counts of the jet fibers over F_p by
// depth-first enumeration with incremental truncation pruning, and a count ->
// dimension fit corroborating the classifier.
#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "jetbranch/numeric.hpp"
#include "jetbranch/polynomial.hpp"

namespace jetbranch {

namespace detail {

struct ModCurve {
    std::uint64_t p = 0;
    struct Term {
        int a, b;
        std::uint64_t c;
    };
    std::vector<Term> terms;
    int dx = 0, dy = 0;
    int mult = 0;  // minimal total degree of the support
};

inline std::uint64_t mod_pow(std::uint64_t base, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    base %= p;
    while (e) {
        if (e & 1) r = r * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return r;
}

inline ModCurve reduce_mod_p(const Poly& f, const Int& p) {
    if (!is_prime(p)) throw Error(Error::Kind::validation, "count-points: " + p.get_str() + " is not prime");
    if (p > Int(1) << 20)
        throw Error(Error::Kind::validation, "count-points: primes above 2^20 are not supported");
    ModCurve mc;
    mc.p = static_cast<std::uint64_t>(to_ll(p));
    mc.mult = -1;
    for (const auto& t : bivariate_support(f)) {
        Int den = t.coeff.get_den();
        if (divides(p, den))
            throw Error(Error::Kind::validation,
                        "count-points: prime " + p.get_str() + " divides a coefficient denominator");
        Int num_mod = t.coeff.get_num() % p;
        if (num_mod < 0) num_mod += p;
        std::uint64_t c = static_cast<std::uint64_t>(to_ll(num_mod));
        Int den_mod = den % p;  // canonical denominators are positive
        std::uint64_t dinv = mod_pow(static_cast<std::uint64_t>(to_ll(den_mod)), mc.p - 2, mc.p);
        c = c * dinv % mc.p;
        if (c == 0) continue;
        mc.terms.push_back({t.a, t.b, c});
        mc.dx = std::max(mc.dx, t.a);
        mc.dy = std::max(mc.dy, t.b);
        int deg = t.a + t.b;
        if (mc.mult < 0 || deg < mc.mult) mc.mult = deg;
    }
    return mc;
}

// Coefficients of t^0..t^upto of f(x(t), y(t)); arcs have zero constant term.
inline void compose_mod_p(const ModCurve& f, const std::vector<std::uint64_t>& xs,
                          const std::vector<std::uint64_t>& ys, int upto,
                          std::vector<std::uint64_t>& out) {
    const std::uint64_t p = f.p;
    const size_t len = static_cast<size_t>(upto) + 1;
    thread_local std::vector<std::vector<std::uint64_t>> xpow;
    thread_local std::vector<std::vector<std::uint64_t>> rows;
    xpow.assign(static_cast<size_t>(f.dx) + 1, {});
    xpow[0].assign(len, 0);
    xpow[0][0] = 1 % p;
    auto mul_into = [&](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                        std::vector<std::uint64_t>& r) {
        r.assign(len, 0);
        for (size_t i = 0; i < a.size() && i < len; ++i) {
            if (!a[i]) continue;
            std::uint64_t ai = a[i];
            size_t jmax = std::min(b.size(), len - i);
            for (size_t j = 1; j < jmax; ++j)  // b[0] = 0 for arcs
                if (b[j]) r[i + j] = (r[i + j] + ai * b[j]) % p;
        }
    };
    for (int a = 1; a <= f.dx; ++a) mul_into(xpow[static_cast<size_t>(a - 1)], xs, xpow[static_cast<size_t>(a)]);
    rows.assign(static_cast<size_t>(f.dy) + 1, {});
    for (auto& row : rows) row.assign(len, 0);
    for (const auto& t : f.terms) {
        const auto& xa = xpow[static_cast<size_t>(t.a)];
        auto& row = rows[static_cast<size_t>(t.b)];
        for (size_t i = 0; i < len; ++i)
            if (xa[i]) row[i] = (row[i] + xa[i] * t.c) % p;
    }
    out = rows[static_cast<size_t>(f.dy)];
    thread_local std::vector<std::uint64_t> tmp;
    for (int b = f.dy - 1; b >= 0; --b) {
        mul_into(out, ys, tmp);
        out.swap(tmp);
        const auto& row = rows[static_cast<size_t>(b)];
        for (size_t i = 0; i < len; ++i) out[i] = (out[i] + row[i]) % p;
    }
}

struct CountContext {
    const ModCurve* f = nullptr;
    const ModCurve* fx = nullptr;  // df/dx reduced mod p
    const ModCurve* fy = nullptr;
    int m = 0;
    std::atomic<long>* nodes = nullptr;
    long budget = 0;
};

// Highest t-order constrained by the variables of order <= d.
inline int reach(const CountContext& cx, int d) {
    long t = static_cast<long>(d) + cx.f->mult - 1;
    return static_cast<int>(std::min<long>(cx.m, t));
}

inline void charge(const CountContext& cx, long amount) {
    long used = cx.nodes->fetch_add(amount, std::memory_order_relaxed) + amount;
    if (used > cx.budget)
        throw Error(Error::Kind::budget,
                    "count-points: evaluation budget " + std::to_string(cx.budget) +
                        " exceeded; rerun with a larger --budget");
}

// Counts completions of the arc prefix (xs, ys)[1..d-1]. For d >= 2 the single
// new coefficient is linear in (x_d, y_d):
//   coeff_{d+mu-1} = c0 + x_d * [t^(mu-1)] f_x(arc) + y_d * [t^(mu-1)] f_y(arc),
// so the children are solved for directly instead of sampled.
inline Int count_from_depth(const CountContext& cx, int d, std::vector<std::uint64_t>& xs,
                            std::vector<std::uint64_t>& ys) {
    const std::uint64_t p = cx.f->p;
    if (d > cx.m) return 1;
    int done = reach(cx, d - 1);
    if (done >= cx.m)
        return pow(Int(static_cast<long>(p)), 2ul * static_cast<unsigned long>(cx.m - d + 1));
    int target = reach(cx, d);
    Int total = 0;
    std::vector<std::uint64_t> coeffs;

    if (d == 1) {  // the new coefficient is the leading form, degree mu in (x_1, y_1)
        charge(cx, static_cast<long>(p * p));
        for (std::uint64_t a = 0; a < p; ++a) {
            xs[1] = a;
            for (std::uint64_t b = 0; b < p; ++b) {
                ys[1] = b;
                compose_mod_p(*cx.f, xs, ys, target, coeffs);
                bool ok = true;
                for (int j = done + 1; j <= target; ++j)
                    if (coeffs[static_cast<size_t>(j)]) {
                        ok = false;
                        break;
                    }
                if (ok) total += count_from_depth(cx, 2, xs, ys);
            }
        }
        xs[1] = 0;
        ys[1] = 0;
        return total;
    }

    charge(cx, 1);
    xs[static_cast<size_t>(d)] = 0;
    ys[static_cast<size_t>(d)] = 0;
    compose_mod_p(*cx.f, xs, ys, target, coeffs);
    std::uint64_t c0 = coeffs[static_cast<size_t>(target)];
    int grad_ord = cx.f->mult - 1;
    compose_mod_p(*cx.fx, xs, ys, grad_ord, coeffs);
    std::uint64_t alpha = coeffs[static_cast<size_t>(grad_ord)];
    compose_mod_p(*cx.fy, xs, ys, grad_ord, coeffs);
    std::uint64_t beta = coeffs[static_cast<size_t>(grad_ord)];

    if (alpha == 0 && beta == 0) {
        if (c0 != 0) return 0;
        charge(cx, static_cast<long>(p * p));
        for (std::uint64_t a = 0; a < p; ++a) {
            xs[static_cast<size_t>(d)] = a;
            for (std::uint64_t b = 0; b < p; ++b) {
                ys[static_cast<size_t>(d)] = b;
                total += count_from_depth(cx, d + 1, xs, ys);
            }
        }
    } else {
        charge(cx, static_cast<long>(p));
        if (beta != 0) {
            std::uint64_t binv = mod_pow(beta, p - 2, p);
            for (std::uint64_t a = 0; a < p; ++a) {
                xs[static_cast<size_t>(d)] = a;
                ys[static_cast<size_t>(d)] = (p - (c0 + alpha * a % p) % p) % p * binv % p;
                total += count_from_depth(cx, d + 1, xs, ys);
            }
        } else {
            std::uint64_t ainv = mod_pow(alpha, p - 2, p);
            xs[static_cast<size_t>(d)] = (p - c0) % p * ainv % p;
            for (std::uint64_t b = 0; b < p; ++b) {
                ys[static_cast<size_t>(d)] = b;
                total += count_from_depth(cx, d + 1, xs, ys);
            }
        }
    }
    xs[static_cast<size_t>(d)] = 0;
    ys[static_cast<size_t>(d)] = 0;
    return total;
}

inline ModCurve derivative_mod_p(const ModCurve& mc, bool by_x) {
    ModCurve d;
    d.p = mc.p;
    d.mult = -1;
    for (const auto& t : mc.terms) {
        int e = by_x ? t.a : t.b;
        if (e == 0) continue;
        std::uint64_t c = t.c * (static_cast<std::uint64_t>(e) % mc.p) % mc.p;
        if (c == 0) continue;
        ModCurve::Term nt{by_x ? t.a - 1 : t.a, by_x ? t.b : t.b - 1, c};
        d.terms.push_back(nt);
        d.dx = std::max(d.dx, nt.a);
        d.dy = std::max(d.dy, nt.b);
        int deg = nt.a + nt.b;
        if (d.mult < 0 || deg < d.mult) d.mult = deg;
    }
    if (d.mult < 0) d.mult = 0;
    return d;
}

}  // namespace detail

// Number of (x0^(1..m), x1^(1..m)) over F_p with F^(1..m) = 0 and the order-0
// coordinates fixed to 0. `budget` caps the number of arc evaluations.
inline Int fiber_point_count(const Poly& f, Level m, const Int& p, long budget = 100'000'000,
                             unsigned threads = 0) {
    if (m < 1) throw Error(Error::Kind::validation, "count-points: m must be >= 1");
    if (budget < 1) throw Error(Error::Kind::validation, "count-points: budget must be positive");
    detail::ModCurve mc = detail::reduce_mod_p(f, p);
    if (mc.terms.empty())  // f = 0 mod p: every arc qualifies
        return pow(Int(to_ll(p)), 2ul * static_cast<unsigned long>(m));
    if (mc.mult == 0) return 0;  // f(0,0) != 0 mod p

    detail::ModCurve fx = detail::derivative_mod_p(mc, true);
    detail::ModCurve fy = detail::derivative_mod_p(mc, false);
    std::atomic<long> nodes{0};
    detail::CountContext cx;
    cx.f = &mc;
    cx.fx = &fx;
    cx.fy = &fy;
    cx.m = static_cast<int>(m);
    cx.nodes = &nodes;
    cx.budget = budget;

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || mc.p < 3) {
        std::vector<std::uint64_t> xs(static_cast<size_t>(m) + 1, 0), ys(static_cast<size_t>(m) + 1, 0);
        return detail::count_from_depth(cx, 1, xs, ys);
    }

    // Shard the first x coordinate; partial sums are reduced deterministically.
    int done0 = detail::reach(cx, 0);
    if (done0 >= cx.m) return pow(Int(static_cast<long>(mc.p)), 2ul * static_cast<unsigned long>(m));
    int target1 = detail::reach(cx, 1);
    std::vector<Int> partial(mc.p, Int(0));
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned ti = 0; ti < threads; ++ti) {
        pool.emplace_back([&, ti]() {
            try {
                std::vector<std::uint64_t> xs(static_cast<size_t>(m) + 1, 0),
                    ys(static_cast<size_t>(m) + 1, 0);
                std::vector<std::uint64_t> coeffs;
                for (std::uint64_t a = ti; a < mc.p; a += threads) {
                    xs[1] = a;
                    Int sum = 0;
                    for (std::uint64_t b = 0; b < mc.p; ++b) {
                        ys[1] = b;
                        detail::charge(cx, 1);
                        detail::compose_mod_p(mc, xs, ys, target1, coeffs);
                        bool ok = true;
                        for (int j = done0 + 1; j <= target1; ++j)
                            if (coeffs[static_cast<size_t>(j)]) {
                                ok = false;
                                break;
                            }
                        if (ok) sum += detail::count_from_depth(cx, 2, xs, ys);
                    }
                    partial[a] = sum;
                }
            } catch (...) {
                errors[ti] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    Int total = 0;
    for (const Int& s : partial) total += s;
    return total;
}

struct DimensionEstimate {
    bool conclusive = false;
    long raw_exponent = -1;  // count ~ components * p^raw_exponent
    long affine_dim = -1;    // raw_exponent - 2 = 2(m+1) - fiber_codim - 2
    long components = 0;     // top-dimensional component count
    struct Sample {
        Int p;
        Int count;
        Rat residual;  // (count - components*p^d) / p^d
    };
    std::vector<Sample> evidence;
};

// Fits count ~ c * p^d over the supplied primes. Candidates must round to the
// same c for every prime; the smallest consistent c wins (largest d on ties).
inline DimensionEstimate dimension_estimate(const Poly& f, Level m, const std::vector<Int>& primes,
                                            long budget = 100'000'000, unsigned threads = 0) {
    if (primes.empty())
        throw Error(Error::Kind::validation, "dimension-estimate: at least one prime is required");
    DimensionEstimate est;
    std::vector<Int> counts;
    for (const Int& p : primes) {
        counts.push_back(fiber_point_count(f, m, p, budget, threads));
        est.evidence.push_back({p, counts.back(), Rat(0)});
    }
    bool all_zero = true;
    for (const Int& c : counts) all_zero &= (c == 0);
    if (all_zero) {
        est.conclusive = true;
        est.components = 0;
        return est;
    }

    long best_d = -1;
    Int best_c;
    for (long d = 2 * m; d >= 0; --d) {
        Int c_round;
        bool consistent = true;
        for (size_t i = 0; i < counts.size(); ++i) {
            Int pd = pow(primes[i], static_cast<unsigned long>(d));
            Rat ratio_i = ratio(counts[i], pd);
            Int rounded = floor_div(2 * ratio_i.get_num() + ratio_i.get_den(), 2 * ratio_i.get_den());
            if (rounded < 1 || (i > 0 && rounded != c_round)) {
                consistent = false;
                break;
            }
            if (i == 0) c_round = rounded;
            Rat dev = ratio_i - Rat(rounded);
            if (dev < 0) dev = -dev;
            if (2 * dev >= 1) {
                consistent = false;
                break;
            }
        }
        if (!consistent) continue;
        if (best_d < 0 || c_round < best_c) {
            best_d = d;
            best_c = c_round;
        }
    }
    if (best_d < 0) return est;  // inconclusive, not an error

    est.conclusive = true;
    est.raw_exponent = best_d;
    est.affine_dim = best_d - 2;
    est.components = to_ll(best_c);
    for (size_t i = 0; i < counts.size(); ++i) {
        Int pd = pow(primes[i], static_cast<unsigned long>(best_d));
        est.evidence[i].residual = ratio(counts[i] - best_c * pd, pd);
    }
    return est;
}

}  // namespace jetbranch
