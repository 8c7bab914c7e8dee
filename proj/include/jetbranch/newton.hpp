// Normal-form analysis: reads beta0, beta1 off the lower Newton segment and
// verifies the boundary part is a perfect power of a coprime binomial,
//   f = (y^n1 - c x^m1)^e1 + (terms strictly above the segment).
#pragma once

#include <string>
#include <vector>

#include "jetbranch/numeric.hpp"
#include "jetbranch/polynomial.hpp"

namespace jetbranch {

struct NewtonForm {
    Int beta0;
    Int beta1;
    Int n1;
    Int m1;
    Int e1;
    Rat c;          // the binomial coefficient, nonzero
    Poly residual;  // terms with a*beta0 + b*beta1 > beta0*beta1
};

inline NewtonForm newton_form(const Poly& f) {
    auto support = bivariate_support(f);
    auto nf_error = [](const std::string& msg) {
        return Error(Error::Kind::validation, "not in normal form: " + msg);
    };
    if (support.empty()) throw nf_error("the zero polynomial defines no curve");

    long beta0 = -1, beta1 = -1;
    Rat lead_y, lead_x;
    for (const auto& t : support) {
        if (t.a == 0 && t.b == 0) throw nf_error("f(0,0) != 0");
        if (t.a == 0 && (beta0 < 0 || t.b < beta0)) {
            beta0 = t.b;
            lead_y = t.coeff;
        }
        if (t.b == 0 && (beta1 < 0 || t.a < beta1)) {
            beta1 = t.a;
            lead_x = t.coeff;
        }
    }
    if (beta0 < 0) throw nf_error("f(0,y) vanishes identically (not y-regular)");
    if (beta1 < 0) throw nf_error("f(x,0) vanishes identically (y divides f, not a branch)");
    if (beta0 < 2) throw nf_error("multiplicity beta0 must exceed 1");
    if (beta1 <= beta0) throw nf_error("beta1 must exceed beta0");
    if (lead_y != 1) throw nf_error("the coefficient of y^beta0 must be 1");

    NewtonForm nf;
    nf.beta0 = beta0;
    nf.beta1 = beta1;
    nf.e1 = gcd(nf.beta0, nf.beta1);
    nf.n1 = exact_div(nf.beta0, nf.e1);
    nf.m1 = exact_div(nf.beta1, nf.e1);
    if (nf.n1 < 2)
        throw nf_error("beta1 is a multiple of beta0, so it is not a characteristic exponent "
                       "(the curve is not a singular branch in these coordinates)");

    // c from the x^beta1 corner: its coefficient is (-c)^e1.
    long e1 = to_ll(nf.e1), n1 = to_ll(nf.n1), m1 = to_ll(nf.m1);
    if (e1 == 1) {
        nf.c = -lead_x;
    } else {
        // The s = 1 term of the binomial expansion is -e1 * c * x^m1 y^(n1(e1-1)).
        Monomial mixed = Monomial::var(var_x(), static_cast<int>(m1)) *
                         Monomial::var(var_y(), static_cast<int>(n1 * (e1 - 1)));
        nf.c = -f.coefficient(mixed) / Rat(nf.e1);
    }
    if (nf.c == 0) throw nf_error("binomial coefficient c is zero");

    Poly boundary = (Poly::variable(var_y()).pow(static_cast<int>(n1)) -
                     Poly::variable(var_x()).pow(static_cast<int>(m1)) * nf.c)
                        .pow(static_cast<int>(e1));
    nf.residual = f - boundary;
    for (const auto& t : bivariate_support(nf.residual)) {
        Int weight = Int(t.a) * nf.beta0 + Int(t.b) * nf.beta1;
        if (weight <= nf.beta0 * nf.beta1)
            throw nf_error("term x^" + std::to_string(t.a) + "*y^" + std::to_string(t.b) +
                           " lies on or below the Newton segment but does not match the binomial power");
    }
    return nf;
}

}  // namespace jetbranch
