// Exact arithmetic primitives shared by the whole library.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetbranch {

using Int = mpz_class;
using Rat = mpq_class;
using Level = long;

static_assert(sizeof(long) == 8, "levels are stored in 64-bit longs");

// Library-wide error with a kind that maps onto CLI exit codes.
class Error : public std::runtime_error {
public:
    enum class Kind {
        validation,  // bad user input                      -> exit 2
        depth,       // tree/budget depth insufficient      -> exit 3
        budget,      // evaluation budget exceeded          -> exit 3
        mismatch,    // verification failed                 -> exit 1
        malformed,   // inconsistent serialized artifact    -> exit 2
        internal     // invariant violation (a bug)
    };

    Error(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

inline Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// Floor division, exact for negative operands as well.
inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline bool divides(const Int& d, const Int& a) {
    return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline Int exact_div(const Int& a, const Int& d) {
    if (!divides(d, a))
        throw Error(Error::Kind::internal,
                    "non-exact division: " + a.get_str() + " / " + d.get_str());
    Int q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
    return q;
}

inline Int pow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat ratio(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int to_int(const Rat& r) {
    if (!is_integer(r))
        throw Error(Error::Kind::internal,
                    "expected integer, got " + r.get_str());
    return r.get_num();
}

inline long to_ll(const Int& v) {
    if (!v.fits_slong_p())
        throw Error(Error::Kind::validation,
                    "value out of supported range: " + v.get_str());
    return static_cast<long>(v.get_si());
}

inline bool is_prime(const Int& p) {
    return p > 1 && mpz_probab_prime_p(p.get_mpz_t(), 32) != 0;
}

inline std::string join(const std::vector<Int>& v, const char* sep = ",") {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += v[i].get_str();
    }
    return s;
}

}  // namespace jetbranch
