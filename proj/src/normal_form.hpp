#pragma once

// Canonical rational-function representation used by the simplifier.
//
// A value is N / prod(P_k^m_k) where N is a Laurent polynomial over atoms with
// exponents affine in (q, r), and each P_k is a normalized sum (monic, free of
// monomial content, at least two terms) with a positive integer multiplicity.

#include "liesym/expr.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace liesym::nf {

// (a + b*q + c*r) / d with d > 0 and gcd(a, b, c, d) = 1.
struct Affine {
    std::int64_t a = 0, b = 0, c = 0, d = 1;

    static Affine of(std::int64_t v) { return Affine{v, 0, 0, 1}; }
    static Affine of(const Rational& v);
    static Affine make(__int128 a, __int128 b, __int128 c, __int128 d);

    bool is_zero() const { return a == 0 && b == 0 && c == 0; }
    bool is_rational() const { return b == 0 && c == 0; }
    bool is_integer() const { return is_rational() && d == 1; }
    bool is_one() const { return a == 1 && b == 0 && c == 0 && d == 1; }
    Rational const_part() const { return ratio(a); }
    Rational q_part() const { return ratio(b); }
    Rational r_part() const { return ratio(c); }
    Rational ratio(std::int64_t v) const {
        Rational x(static_cast<long>(v), static_cast<unsigned long>(d));
        x.canonicalize();
        return x;
    }
    std::int64_t floor_const() const;

    Affine operator+(const Affine& o) const;
    Affine operator-(const Affine& o) const;
    Affine operator-() const { return Affine{-a, -b, -c, d}; }
    // Product; throws ValueError when both factors are symbolic.
    Affine operator*(const Affine& o) const;
    bool operator==(const Affine& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
    int compare(const Affine& o) const;
    std::size_t hash() const;
};

struct Factor {
    Expr atom;
    Affine e;
};

// Factors sorted by compare(atom) ascending; no zero exponents.
using Monomial = std::vector<Factor>;

int monomial_compare(const Monomial& x, const Monomial& y);
bool monomial_equal(const Monomial& x, const Monomial& y);
std::size_t monomial_hash(const Monomial& m);

struct MonoHash {
    std::size_t operator()(const Monomial& m) const { return monomial_hash(m); }
};
struct MonoEq {
    bool operator()(const Monomial& x, const Monomial& y) const { return monomial_equal(x, y); }
};

struct Term {
    Monomial m;
    Rational c;
};

// Terms sorted by monomial descending; nonzero coefficients.
struct Poly {
    std::vector<Term> terms;

    static Poly constant(const Rational& c);
    static Poly atom(const Expr& a, const Affine& e = Affine::of(1));
    static Poly from_affine(const Affine& e);

    bool is_zero() const { return terms.empty(); }
    bool is_constant() const { return terms.empty() || (terms.size() == 1 && terms[0].m.empty()); }
    Rational constant_value() const { return terms.empty() ? Rational(0) : terms[0].c; }
    bool operator==(const Poly& o) const;
};

int poly_compare(const Poly& x, const Poly& y);
Poly poly_add(const Poly& x, const Poly& y);
Poly poly_scale(const Poly& x, const Rational& c);
Poly poly_neg(const Poly& x);
Poly poly_sub(const Poly& x, const Poly& y);
// Raw product; result may contain factors needing fixup (see RatFunc).
Poly poly_mul(const Poly& x, const Poly& y);
Poly poly_mul_term(const Poly& x, const Monomial& m, const Rational& c);
// Exact division in the Laurent ring; returns false when not divisible.
bool poly_divide(const Poly& n, const Poly& p, Poly& quotient);

struct DenFactor {
    Poly p;
    int k;
};

struct RatFunc {
    Poly num;
    std::vector<DenFactor> den;  // sorted by poly_compare

    static RatFunc constant(const Rational& c) { return RatFunc{Poly::constant(c), {}}; }
    static RatFunc from_poly(Poly p);
    bool is_zero() const { return num.is_zero(); }
    bool is_constant() const { return den.empty() && num.is_constant(); }
};

RatFunc add(const RatFunc& x, const RatFunc& y);
RatFunc sub(const RatFunc& x, const RatFunc& y);
RatFunc sum(const std::vector<RatFunc>& xs);
RatFunc mul(const RatFunc& x, const RatFunc& y);
RatFunc scale(const RatFunc& x, const Rational& c);
RatFunc inv(const RatFunc& x);
RatFunc power(const RatFunc& x, const Affine& e);

RatFunc make_exp(const RatFunc& arg);
RatFunc make_ln(const RatFunc& arg);
RatFunc make_arctan(const RatFunc& arg);

RatFunc to_nf(const Expr& e);
Expr to_tree(const RatFunc& f);
Expr poly_tree(const Poly& p);
Expr affine_tree(const Affine& e);
Affine affine_from_expr(const Expr& e);

// d/dv where v is a Symbol-kind atom (coordinate, t, u, jet or parameter).
RatFunc partial(const RatFunc& f, const Expr& v);

// Replaces atoms by rational functions. Atoms whose internals mention a replaced
// symbol are rebuilt through the tree route.
RatFunc substitute(const RatFunc& f, const std::vector<std::pair<Expr, RatFunc>>& subs);

// Visits every atom appearing in f (including nested arguments when deep is set).
void for_each_atom(const RatFunc& f, const std::function<void(const Expr&)>& fn, bool deep);

// Rewrites each numerator term through fn, which returns a replacement value.
RatFunc map_terms(const RatFunc& f, const std::function<RatFunc(const Term&)>& fn);

bool is_symbol_kind(Kind k);

}  // namespace liesym::nf
