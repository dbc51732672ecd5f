#include "normal_form.hpp"

#include "liesym/errors.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace liesym::nf {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

constexpr __int128 kMax = static_cast<__int128>(INT64_MAX);

std::int64_t narrow(__int128 v) {
    if (v > kMax || v < -kMax) throw ValueError("exponent arithmetic overflow");
    return static_cast<std::int64_t>(v);
}

const Expr& param_q() {
    static const Expr e = Expr::param("q");
    return e;
}
const Expr& param_r() {
    static const Expr e = Expr::param("r");
    return e;
}

bool is_exp_atom(const Expr& a) { return a.kind() == Kind::Apply && a.node().fn == Fn::Exp; }
bool is_ln_atom(const Expr& a) { return a.kind() == Kind::Apply && a.node().fn == Fn::Ln; }
// Bases of non-integer powers: constants and sums. Exponents are kept in [0, 1).
bool is_base_atom(const Expr& a) { return a.kind() == Kind::Const || a.kind() == Kind::Add; }

}  // namespace

bool is_symbol_kind(Kind k) {
    return k == Kind::Coord || k == Kind::Time || k == Kind::Dep || k == Kind::Jet || k == Kind::Param;
}

// ---------------------------------------------------------------- Affine

Affine Affine::make(__int128 a, __int128 b, __int128 c, __int128 d) {
    if (d == 0) throw DomainError("zero denominator in exponent");
    if (d < 0) {
        a = -a;
        b = -b;
        c = -c;
        d = -d;
    }
    __int128 g = gcd128(gcd128(a, b), gcd128(c, d));
    if (g > 1) {
        a /= g;
        b /= g;
        c /= g;
        d /= g;
    }
    return Affine{narrow(a), narrow(b), narrow(c), narrow(d)};
}

Affine Affine::of(const Rational& v) {
    if (!v.get_num().fits_slong_p() || !v.get_den().fits_slong_p()) throw ValueError("exponent too large");
    return make(v.get_num().get_si(), 0, 0, v.get_den().get_si());
}

std::int64_t Affine::floor_const() const {
    std::int64_t q = a / d;
    if ((a % d != 0) && (a < 0)) --q;
    return q;
}

Affine Affine::operator+(const Affine& o) const {
    if (d == o.d) return make(static_cast<__int128>(a) + o.a, static_cast<__int128>(b) + o.b,
                              static_cast<__int128>(c) + o.c, d);
    __int128 d1 = d, d2 = o.d;
    return make(a * d2 + o.a * d1, b * d2 + o.b * d1, c * d2 + o.c * d1, d1 * d2);
}

Affine Affine::operator-(const Affine& o) const { return *this + (-o); }

Affine Affine::operator*(const Affine& o) const {
    if (o.is_rational()) {
        __int128 k = o.a;
        return make(a * k, b * k, c * k, static_cast<__int128>(d) * o.d);
    }
    if (is_rational()) return o * *this;
    throw ValueError("exponent is not affine in q, r");
}

int Affine::compare(const Affine& o) const {
    auto cmp = [&](std::int64_t x, std::int64_t y) {
        __int128 l = static_cast<__int128>(x) * o.d, r = static_cast<__int128>(y) * d;
        return l < r ? -1 : (l > r ? 1 : 0);
    };
    int c1 = cmp(a, o.a);
    if (c1 != 0) return c1;
    c1 = cmp(b, o.b);
    if (c1 != 0) return c1;
    return cmp(c, o.c);
}

std::size_t Affine::hash() const {
    std::size_t h = static_cast<std::size_t>(a) * 1000003u;
    h ^= static_cast<std::size_t>(b) * 10007u + (h << 5);
    h ^= static_cast<std::size_t>(c) * 101u + (h << 7);
    h ^= static_cast<std::size_t>(d) + (h >> 3);
    return h;
}

// ---------------------------------------------------------------- Monomials

int monomial_compare(const Monomial& x, const Monomial& y) {
    static const Affine zero{};
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        int c;
        if (i == x.size()) c = 1;
        else if (j == y.size()) c = -1;
        else c = compare(x[i].atom, y[j].atom);
        if (c == 0) {
            int r = x[i].e.compare(y[j].e);
            if (r != 0) return r;
            ++i;
            ++j;
        } else if (c < 0) {
            return x[i].e.compare(zero);
        } else {
            return -y[j].e.compare(zero);
        }
    }
    return 0;
}

bool monomial_equal(const Monomial& x, const Monomial& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k)
        if (!(x[k].e == y[k].e) || !(x[k].atom == y[k].atom)) return false;
    return true;
}

std::size_t monomial_hash(const Monomial& m) {
    std::size_t h = 0x12345;
    for (const auto& f : m) h = h * 1000003u ^ (f.atom.hash() + 31 * f.e.hash());
    return h;
}

namespace {

bool needs_fixup(const Monomial& m) {
    for (const auto& f : m) {
        if (!is_base_atom(f.atom)) continue;
        std::int64_t fl = f.e.floor_const();
        if (fl != 0) return true;
        if (f.atom.kind() == Kind::Const && f.e.is_rational()) {
            Rational root;
            if (exact_root(f.atom.value(), static_cast<unsigned long>(f.e.d), root)) return true;
        }
    }
    return false;
}

void insert_factor(Monomial& m, Factor f) {
    auto it = std::lower_bound(m.begin(), m.end(), f.atom,
                               [](const Factor& x, const Expr& a) { return compare(x.atom, a) < 0; });
    if (it != m.end() && it->atom == f.atom) {
        it->e = it->e + f.e;
        if (it->e.is_zero()) m.erase(it);
    } else if (!f.e.is_zero()) {
        m.insert(it, std::move(f));
    }
}

// Keeps at most one exp atom, with exponent 1.
void merge_exps(Monomial& m) {
    int count = 0;
    bool unit = true;
    for (const auto& f : m) {
        if (is_exp_atom(f.atom)) {
            ++count;
            if (!f.e.is_one()) unit = false;
        }
    }
    if (count == 0 || (count == 1 && unit)) return;
    std::vector<RatFunc> parts;
    Monomial rest;
    for (const auto& f : m) {
        if (is_exp_atom(f.atom)) {
            parts.push_back(mul(to_nf(f.atom.args()[0]), RatFunc::from_poly(Poly::from_affine(f.e))));
        } else {
            rest.push_back(f);
        }
    }
    RatFunc merged = make_exp(sum(parts));
    if (!merged.den.empty() || merged.num.terms.size() != 1 || merged.num.terms[0].c != 1) return;
    for (const auto& f : merged.num.terms[0].m) insert_factor(rest, f);
    m = std::move(rest);
}

Monomial mono_mul(const Monomial& x, const Monomial& y) {
    if (x.empty()) return y;
    if (y.empty()) return x;
    Monomial out;
    out.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    bool exps = false;
    while (i < x.size() && j < y.size()) {
        int c = compare(x[i].atom, y[j].atom);
        if (c == 0) {
            Affine e = x[i].e + y[j].e;
            if (!e.is_zero()) out.push_back(Factor{x[i].atom, e});
            if (is_exp_atom(x[i].atom)) exps = true;
            ++i;
            ++j;
        } else if (c < 0) {
            out.push_back(x[i++]);
        } else {
            out.push_back(y[j++]);
        }
    }
    while (i < x.size()) out.push_back(x[i++]);
    while (j < y.size()) out.push_back(y[j++]);
    if (!exps) {
        int n = 0;
        for (const auto& f : out)
            if (is_exp_atom(f.atom)) ++n;
        exps = n > 1;
    }
    if (exps) merge_exps(out);
    return out;
}

Monomial mono_pow(const Monomial& m, const Affine& e) {
    Monomial out;
    out.reserve(m.size());
    bool exps = false;
    for (const auto& f : m) {
        Affine ne = f.e * e;
        if (ne.is_zero()) continue;
        out.push_back(Factor{f.atom, ne});
        if (is_exp_atom(f.atom)) exps = true;
    }
    if (exps) merge_exps(out);
    return out;
}

struct PolyBuilder {
    std::unordered_map<Monomial, Rational, MonoHash, MonoEq> acc;

    void add(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto it = acc.find(m);
        if (it == acc.end()) acc.emplace(m, c);
        else it->second += c;
    }
    void add(Monomial&& m, const Rational& c) {
        if (c == 0) return;
        auto it = acc.find(m);
        if (it == acc.end()) acc.emplace(std::move(m), c);
        else it->second += c;
    }
    Poly take() {
        Poly p;
        p.terms.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (c != 0) p.terms.push_back(Term{m, c});
        std::sort(p.terms.begin(), p.terms.end(),
                  [](const Term& x, const Term& y) { return monomial_compare(x.m, y.m) > 0; });
        acc.clear();
        return p;
    }
};

}  // namespace

// ---------------------------------------------------------------- Poly

Poly Poly::constant(const Rational& c) {
    Poly p;
    if (c != 0) p.terms.push_back(Term{{}, c});
    return p;
}

Poly Poly::atom(const Expr& a, const Affine& e) {
    Poly p;
    if (e.is_zero()) return constant(1);
    Monomial m{Factor{a, e}};
    if (is_exp_atom(a) && !e.is_one()) merge_exps(m);
    p.terms.push_back(Term{std::move(m), 1});
    return p;
}

Poly Poly::from_affine(const Affine& e) {
    Poly p;
    if (e.b != 0) p.terms.push_back(Term{{Factor{param_q(), Affine::of(1)}}, e.q_part()});
    if (e.c != 0) p.terms.push_back(Term{{Factor{param_r(), Affine::of(1)}}, e.r_part()});
    if (e.a != 0) p.terms.push_back(Term{{}, e.const_part()});
    return p;
}

bool Poly::operator==(const Poly& o) const {
    if (terms.size() != o.terms.size()) return false;
    for (std::size_t k = 0; k < terms.size(); ++k)
        if (terms[k].c != o.terms[k].c || !monomial_equal(terms[k].m, o.terms[k].m)) return false;
    return true;
}

int poly_compare(const Poly& x, const Poly& y) {
    std::size_t m = std::min(x.terms.size(), y.terms.size());
    for (std::size_t k = 0; k < m; ++k) {
        int c = monomial_compare(x.terms[k].m, y.terms[k].m);
        if (c != 0) return c;
        int d = cmp(x.terms[k].c, y.terms[k].c);
        if (d != 0) return d < 0 ? -1 : 1;
    }
    if (x.terms.size() != y.terms.size()) return x.terms.size() < y.terms.size() ? -1 : 1;
    return 0;
}

Poly poly_add(const Poly& x, const Poly& y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    Poly out;
    out.terms.reserve(x.terms.size() + y.terms.size());
    std::size_t i = 0, j = 0;
    while (i < x.terms.size() && j < y.terms.size()) {
        int c = monomial_compare(x.terms[i].m, y.terms[j].m);
        if (c == 0) {
            Rational s = x.terms[i].c + y.terms[j].c;
            if (s != 0) out.terms.push_back(Term{x.terms[i].m, s});
            ++i;
            ++j;
        } else if (c > 0) {
            out.terms.push_back(x.terms[i++]);
        } else {
            out.terms.push_back(y.terms[j++]);
        }
    }
    while (i < x.terms.size()) out.terms.push_back(x.terms[i++]);
    while (j < y.terms.size()) out.terms.push_back(y.terms[j++]);
    return out;
}

Poly poly_scale(const Poly& x, const Rational& c) {
    if (c == 0) return Poly{};
    Poly out = x;
    for (auto& t : out.terms) t.c *= c;
    return out;
}

Poly poly_neg(const Poly& x) { return poly_scale(x, Rational(-1)); }
Poly poly_sub(const Poly& x, const Poly& y) { return poly_add(x, poly_neg(y)); }

Poly poly_mul_term(const Poly& x, const Monomial& m, const Rational& c) {
    PolyBuilder b;
    for (const auto& t : x.terms) b.add(mono_mul(t.m, m), t.c * c);
    return b.take();
}

Poly poly_mul(const Poly& x, const Poly& y) {
    if (x.is_zero() || y.is_zero()) return Poly{};
    if (x.is_constant()) return poly_scale(y, x.constant_value());
    if (y.is_constant()) return poly_scale(x, y.constant_value());
    PolyBuilder b;
    b.acc.reserve(x.terms.size() * y.terms.size());
    Rational tmp;
    for (const auto& s : x.terms)
        for (const auto& t : y.terms) {
            tmp = s.c * t.c;
            b.add(mono_mul(s.m, t.m), tmp);
        }
    return b.take();
}

bool poly_divide(const Poly& n, const Poly& p, Poly& quotient) {
    quotient = Poly{};
    if (n.is_zero()) return true;
    if (p.is_zero()) return false;
    const Term& lt = p.terms.front();
    Monomial lt_inv = mono_pow(lt.m, Affine::of(-1));
    Monomial bound = mono_mul(n.terms.back().m, mono_pow(p.terms.back().m, Affine::of(-1)));
    Rational lc_inv = Rational(1) / lt.c;
    Poly r = n;
    std::vector<Term> q;
    for (int step = 0; step < 4000; ++step) {
        if (r.is_zero()) {
            PolyBuilder b;
            for (auto& t : q) b.add(std::move(t.m), t.c);
            quotient = b.take();
            return true;
        }
        Monomial m = mono_mul(r.terms.front().m, lt_inv);
        if (needs_fixup(m) || monomial_compare(m, bound) < 0) return false;
        Rational c = r.terms.front().c * lc_inv;
        Poly prod = poly_mul_term(p, m, c);
        for (const auto& t : prod.terms)
            if (needs_fixup(t.m)) return false;
        r = poly_sub(r, prod);
        q.push_back(Term{std::move(m), c});
    }
    return false;
}

// ---------------------------------------------------------------- RatFunc

namespace {

std::vector<DenFactor> merge_den(const std::vector<DenFactor>& x, const std::vector<DenFactor>& y) {
    std::vector<DenFactor> out;
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        int c = poly_compare(x[i].p, y[j].p);
        if (c == 0) {
            out.push_back(DenFactor{x[i].p, x[i].k + y[j].k});
            ++i;
            ++j;
        } else if (c < 0) {
            out.push_back(x[i++]);
        } else {
            out.push_back(y[j++]);
        }
    }
    while (i < x.size()) out.push_back(x[i++]);
    while (j < y.size()) out.push_back(y[j++]);
    return out;
}

void cancel(RatFunc& f) {
    if (f.num.is_zero()) {
        f.den.clear();
        return;
    }
    std::vector<DenFactor> kept;
    for (auto& d : f.den) {
        int k = d.k;
        Poly q;
        while (k > 0 && poly_divide(f.num, d.p, q)) {
            f.num = std::move(q);
            --k;
        }
        if (k > 0) kept.push_back(DenFactor{d.p, k});
    }
    f.den = std::move(kept);
}

// Splits n = c * m * p with p normalized. With monic set the leading coefficient
// of p is 1, otherwise only its absolute value is removed.
void split_content(const Poly& n, bool monic, Rational& c, Monomial& m, Poly& p) {
    m.clear();
    if (n.terms.size() == 1) {
        c = n.terms[0].c;
        m = n.terms[0].m;
        p = Poly::constant(1);
        return;
    }
    static const Affine zero{};
    // Content atoms: those that never need merging or range normalization.
    std::vector<Expr> atoms;
    for (const auto& t : n.terms)
        for (const auto& f : t.m)
            if (!is_exp_atom(f.atom) && !is_base_atom(f.atom) &&
                std::none_of(atoms.begin(), atoms.end(), [&](const Expr& a) { return a == f.atom; }))
                atoms.push_back(f.atom);
    std::vector<Factor> mins;
    for (const auto& a : atoms) {
        Affine mn;
        bool first = true;
        for (const auto& t : n.terms) {
            Affine e = zero;
            for (const auto& f : t.m)
                if (f.atom == a) e = f.e;
            if (first || e.compare(mn) < 0) mn = e;
            first = false;
        }
        mins.push_back(Factor{a, mn});
    }
    for (const auto& x : mins)
        if (!x.e.is_zero()) insert_factor(m, x);
    Monomial minv = mono_pow(m, Affine::of(-1));
    p = poly_mul_term(n, minv, Rational(1));
    c = p.terms.front().c;
    if (!monic && c < 0) c = -c;
    p = poly_scale(p, Rational(1) / c);
}

// Resolves integer parts of exponents on constant and sum bases.
RatFunc fixup(Poly p) {
    bool any = false;
    for (const auto& t : p.terms)
        if (needs_fixup(t.m)) {
            any = true;
            break;
        }
    if (!any) return RatFunc{std::move(p), {}};
    Poly good;
    std::vector<RatFunc> extra;
    for (auto& t : p.terms) {
        if (!needs_fixup(t.m)) {
            good.terms.push_back(t);
            continue;
        }
        Monomial m;
        Rational c = t.c;
        std::vector<std::pair<Poly, std::int64_t>> sums;
        for (const auto& f : t.m) {
            if (!is_base_atom(f.atom)) {
                m.push_back(f);
                continue;
            }
            std::int64_t k = f.e.floor_const();
            Affine rest = f.e - Affine::of(k);
            if (f.atom.kind() == Kind::Const) {
                const Rational& base = f.atom.value();
                c *= pow(base, static_cast<long>(k));
                Rational root;
                if (!rest.is_zero() && rest.is_rational() &&
                    exact_root(base, static_cast<unsigned long>(rest.d), root)) {
                    c *= pow(root, static_cast<long>(rest.a));
                } else if (!rest.is_zero()) {
                    m.push_back(Factor{f.atom, rest});
                }
            } else {
                if (!rest.is_zero()) m.push_back(Factor{f.atom, rest});
                if (k != 0) sums.emplace_back(to_nf(f.atom).num, k);
            }
        }
        RatFunc part{Poly{{Term{std::move(m), c}}}, {}};
        for (auto& [sp, k] : sums) part = mul(part, power(RatFunc{sp, {}}, Affine::of(k)));
        extra.push_back(std::move(part));
    }
    std::sort(good.terms.begin(), good.terms.end(),
              [](const Term& x, const Term& y) { return monomial_compare(x.m, y.m) > 0; });
    extra.push_back(RatFunc{std::move(good), {}});
    return sum(extra);
}

Poly den_product(const std::vector<DenFactor>& den, const std::vector<DenFactor>& have) {
    // Product of den factors in `den` exceeding those already in `have`.
    Poly out = Poly::constant(1);
    for (const auto& d : den) {
        int k = d.k;
        for (const auto& h : have)
            if (h.p == d.p) k -= h.k;
        for (int i = 0; i < k; ++i) out = poly_mul(out, d.p);
    }
    return out;
}

}  // namespace

RatFunc RatFunc::from_poly(Poly p) { return fixup(std::move(p)); }

RatFunc scale(const RatFunc& x, const Rational& c) {
    if (c == 0) return RatFunc{};
    return RatFunc{poly_scale(x.num, c), x.den};
}

RatFunc sum(const std::vector<RatFunc>& xs) {
    std::vector<const RatFunc*> live;
    for (const auto& x : xs)
        if (!x.is_zero()) live.push_back(&x);
    if (live.empty()) return RatFunc{};
    if (live.size() == 1) return *live[0];
    std::vector<DenFactor> lcm;
    for (const auto* x : live) {
        std::vector<DenFactor> merged;
        std::size_t i = 0, j = 0;
        while (i < lcm.size() && j < x->den.size()) {
            int c = poly_compare(lcm[i].p, x->den[j].p);
            if (c == 0) {
                merged.push_back(DenFactor{lcm[i].p, std::max(lcm[i].k, x->den[j].k)});
                ++i;
                ++j;
            } else if (c < 0) {
                merged.push_back(lcm[i++]);
            } else {
                merged.push_back(x->den[j++]);
            }
        }
        while (i < lcm.size()) merged.push_back(lcm[i++]);
        while (j < x->den.size()) merged.push_back(x->den[j++]);
        lcm = std::move(merged);
    }
    PolyBuilder b;
    std::vector<RatFunc> fixed;
    for (const auto* x : live) {
        Poly scaled = x->num;
        if (!lcm.empty()) {
            Poly mult = den_product(lcm, x->den);
            if (!mult.is_constant() || mult.constant_value() != 1) {
                RatFunc r = fixup(poly_mul(scaled, mult));
                if (!r.den.empty()) {
                    fixed.push_back(mul(r, RatFunc{Poly::constant(1), lcm}));
                    continue;
                }
                scaled = std::move(r.num);
            }
        }
        for (const auto& t : scaled.terms) b.add(t.m, t.c);
    }
    RatFunc out{b.take(), lcm};
    cancel(out);
    if (!fixed.empty()) {
        fixed.push_back(std::move(out));
        return sum(fixed);
    }
    return out;
}

RatFunc add(const RatFunc& x, const RatFunc& y) { return sum({x, y}); }
RatFunc sub(const RatFunc& x, const RatFunc& y) { return sum({x, scale(y, Rational(-1))}); }

RatFunc mul(const RatFunc& x, const RatFunc& y) {
    if (x.is_zero() || y.is_zero()) return RatFunc{};
    RatFunc t = fixup(poly_mul(x.num, y.num));
    std::vector<DenFactor> den = merge_den(merge_den(x.den, y.den), t.den);
    RatFunc out{std::move(t.num), std::move(den)};
    if (!out.den.empty()) cancel(out);
    return out;
}

RatFunc inv(const RatFunc& x) {
    if (x.is_zero()) throw DomainError("division by zero");
    Rational c;
    Monomial m;
    Poly p;
    split_content(x.num, true, c, m, p);
    Poly num = Poly::constant(Rational(1) / c);
    for (const auto& d : x.den)
        for (int i = 0; i < d.k; ++i) num = poly_mul(num, d.p);
    RatFunc out = fixup(std::move(num));
    RatFunc mi = fixup(Poly{{Term{mono_pow(m, Affine::of(-1)), 1}}});
    out = mul(out, mi);
    if (!p.is_constant()) out = mul(out, RatFunc{Poly::constant(1), {DenFactor{p, 1}}});
    return out;
}

RatFunc power(const RatFunc& x, const Affine& e) {
    if (e.is_zero()) return RatFunc::constant(1);
    if (e.is_integer()) {
        std::int64_t k = e.a;
        if (k < 0) return power(inv(x), Affine::of(-k));
        RatFunc result = RatFunc::constant(1), base = x;
        while (k > 0) {
            if (k & 1) result = mul(result, base);
            k >>= 1;
            if (k > 0) base = mul(base, base);
        }
        return result;
    }
    if (x.is_zero()) return RatFunc{};
    Rational c;
    Monomial m;
    Poly p;
    split_content(x.num, false, c, m, p);
    RatFunc out = RatFunc::constant(1);
    if (c != 1) {
        // Integer bases only, so that (1/3)^e * 3^e cancels.
        Rational num(c.get_num()), den(c.get_den());
        if (num < 0) {
            out = fixup(Poly::atom(Expr(-1), e));
            num = -num;
        }
        if (num != 1) out = mul(out, fixup(Poly::atom(Expr(num), e)));
        if (den != 1) out = mul(out, fixup(Poly::atom(Expr(den), e * Affine::of(-1))));
    }
    if (!m.empty()) out = mul(out, fixup(Poly{{Term{mono_pow(m, e), 1}}}));
    if (!p.is_constant()) {
        out = mul(out, fixup(Poly::atom(poly_tree(p), e)));
    } else if (p.constant_value() == -1) {
        out = mul(out, fixup(Poly::atom(Expr(-1), e)));
    }
    for (const auto& d : x.den) {
        Affine de = e * Affine::of(-d.k);
        out = mul(out, fixup(Poly::atom(poly_tree(d.p), de)));
    }
    return out;
}

RatFunc make_exp(const RatFunc& arg) {
    if (arg.is_zero()) return RatFunc::constant(1);
    if (!arg.den.empty()) return RatFunc{Poly::atom(Expr::apply(Fn::Exp, to_tree(arg))), {}};
    Poly rest;
    std::vector<RatFunc> parts;
    for (const auto& t : arg.num.terms) {
        if (t.m.size() == 1 && is_ln_atom(t.m[0].atom) && t.m[0].e.is_one() && t.c.get_num().fits_slong_p() &&
            t.c.get_den().fits_slong_p()) {
            parts.push_back(power(to_nf(t.m[0].atom.args()[0]), Affine::of(t.c)));
        } else {
            rest.terms.push_back(t);
        }
    }
    RatFunc out = RatFunc::constant(1);
    for (const auto& p : parts) out = mul(out, p);
    if (!rest.is_zero()) out = mul(out, RatFunc{Poly::atom(Expr::apply(Fn::Exp, poly_tree(rest))), {}});
    return out;
}

RatFunc make_ln(const RatFunc& arg) {
    if (arg.is_zero()) throw DomainError("logarithm of zero");
    if (arg.is_constant() && arg.num.constant_value() == 1) return RatFunc{};
    if (arg.den.empty() && arg.num.terms.size() == 1 && arg.num.terms[0].c == 1) {
        const Monomial& m = arg.num.terms[0].m;
        if (m.size() == 1 && is_exp_atom(m[0].atom) && m[0].e.is_one()) return to_nf(m[0].atom.args()[0]);
    }
    return RatFunc{Poly::atom(Expr::apply(Fn::Ln, to_tree(arg))), {}};
}

RatFunc make_arctan(const RatFunc& arg) {
    if (arg.is_zero()) return RatFunc{};
    return RatFunc{Poly::atom(Expr::apply(Fn::Arctan, to_tree(arg))), {}};
}

// ---------------------------------------------------------------- conversion

Affine affine_from_expr(const Expr& e) {
    if (e.is_const()) return Affine::of(e.value());
    RatFunc f = to_nf(e);
    if (!f.den.empty()) throw ValueError("exponent must be affine in q, r: " + e.str());
    Rational c0, cq, cr;
    for (const auto& t : f.num.terms) {
        if (t.m.empty()) c0 = t.c;
        else if (t.m.size() == 1 && t.m[0].e.is_one() && t.m[0].atom == param_q()) cq = t.c;
        else if (t.m.size() == 1 && t.m[0].e.is_one() && t.m[0].atom == param_r()) cr = t.c;
        else throw ValueError("exponent must be affine in q, r: " + e.str());
    }
    Affine a = Affine::of(c0);
    if (cq != 0) a = a + Affine::of(cq) * Affine{0, 1, 0, 1};
    if (cr != 0) a = a + Affine::of(cr) * Affine{0, 0, 1, 1};
    return a;
}

RatFunc to_nf(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Const: return RatFunc::constant(n.value);
        case Kind::Coord:
        case Kind::Time:
        case Kind::Dep:
        case Kind::Jet:
        case Kind::Param:
        case Kind::Func: return RatFunc{Poly::atom(e), {}};
        case Kind::Add: {
            std::vector<RatFunc> parts;
            parts.reserve(n.args.size());
            for (const auto& a : n.args) parts.push_back(to_nf(a));
            return sum(parts);
        }
        case Kind::Mul: {
            RatFunc out = RatFunc::constant(1);
            for (const auto& a : n.args) {
                out = mul(out, to_nf(a));
                if (out.is_zero()) break;
            }
            return out;
        }
        case Kind::Pow: return power(to_nf(n.args[0]), affine_from_expr(n.args[1]));
        case Kind::Apply: {
            RatFunc a = to_nf(n.args[0]);
            switch (n.fn) {
                case Fn::Exp: return make_exp(a);
                case Fn::Ln: return make_ln(a);
                case Fn::Arctan: return make_arctan(a);
            }
        }
    }
    throw ValueError("unknown node kind");
}

Expr affine_tree(const Affine& e) { return poly_tree(Poly::from_affine(e)); }

namespace {

Expr term_tree(const Term& t, std::vector<Expr>* extra) {
    std::vector<Expr> fs;
    if (t.c != 1 || (t.m.empty() && (!extra || extra->empty()))) fs.push_back(Expr(t.c));
    for (const auto& f : t.m) fs.push_back(f.e.is_one() ? f.atom : Expr::pow(f.atom, affine_tree(f.e)));
    if (extra)
        for (auto& x : *extra) fs.push_back(x);
    if (fs.size() == 1) return fs[0];
    return Expr::mul(fs);
}

}  // namespace

Expr poly_tree(const Poly& p) {
    if (p.is_zero()) return Expr();
    if (p.terms.size() == 1) return term_tree(p.terms[0], nullptr);
    std::vector<Expr> ts;
    ts.reserve(p.terms.size());
    for (const auto& t : p.terms) ts.push_back(term_tree(t, nullptr));
    return Expr::add(ts);
}

Expr to_tree(const RatFunc& f) {
    if (f.den.empty() || f.num.is_zero()) return poly_tree(f.num);
    std::vector<Expr> dens;
    for (const auto& d : f.den) dens.push_back(Expr::pow(poly_tree(d.p), Expr(-d.k)));
    if (f.num.terms.size() == 1) return term_tree(f.num.terms[0], &dens);
    std::vector<Expr> fs{poly_tree(f.num)};
    for (auto& d : dens) fs.push_back(d);
    return Expr::mul(fs);
}

// ---------------------------------------------------------------- calculus

namespace {

bool tree_mentions(const Expr& e, const Expr& v) {
    if (e == v) return true;
    for (const auto& a : e.args())
        if (tree_mentions(a, v)) return true;
    return false;
}

RatFunc atom_partial(const Expr& atom, const Expr& v) {
    const Node& n = atom.node();
    if (is_symbol_kind(n.kind)) return RatFunc::constant(atom == v ? 1 : 0);
    switch (n.kind) {
        case Kind::Const: return RatFunc{};
        case Kind::Func: {
            FuncDeps deps = func_deps(n.func);
            int slot = -1;
            if (v.kind() == Kind::Coord && deps.x) slot = v.node().index;
            else if (v.kind() == Kind::Time && deps.t) slot = kTSlot;
            else if (v.kind() == Kind::Dep && deps.u) slot = kUSlot;
            if (slot < 0) return RatFunc{};
            DerivCounts d = n.deriv;
            ++d[slot];
            return RatFunc{Poly::atom(Expr::func(n.func, n.index, d)), {}};
        }
        case Kind::Add: {
            if (!tree_mentions(atom, v)) return RatFunc{};
            return partial(to_nf(atom), v);
        }
        case Kind::Apply: {
            if (!tree_mentions(atom, v)) return RatFunc{};
            RatFunc a = to_nf(n.args[0]);
            RatFunc da = partial(a, v);
            if (da.is_zero()) return RatFunc{};
            switch (n.fn) {
                case Fn::Exp: return mul(RatFunc{Poly::atom(atom), {}}, da);
                case Fn::Ln: return mul(da, inv(a));
                case Fn::Arctan: return mul(da, inv(add(RatFunc::constant(1), mul(a, a))));
            }
        }
        default: break;
    }
    return RatFunc{};
}

Poly poly_partial_simple(const Poly& p, const Expr& v, std::vector<RatFunc>& complex) {
    PolyBuilder b;
    std::vector<std::pair<Expr, RatFunc>> cache;
    auto datom = [&](const Expr& a) -> const RatFunc& {
        for (const auto& [k, val] : cache)
            if (k == a) return val;
        cache.emplace_back(a, atom_partial(a, v));
        return cache.back().second;
    };
    bool exponent_var = v == param_q() || v == param_r();
    for (const auto& t : p.terms) {
        for (std::size_t k = 0; k < t.m.size(); ++k) {
            const Factor& f = t.m[k];
            if (exponent_var) {
                Rational de = v == param_q() ? f.e.q_part() : f.e.r_part();
                if (de != 0) {
                    RatFunc lnb = make_ln(to_nf(f.atom));
                    complex.push_back(mul(scale(fixup(Poly{{t}}), de), lnb));
                }
            }
            const RatFunc& da = datom(f.atom);
            if (da.is_zero()) continue;
            Monomial rest;
            rest.reserve(t.m.size());
            for (std::size_t j = 0; j < t.m.size(); ++j) {
                if (j != k) {
                    rest.push_back(t.m[j]);
                } else {
                    Affine e1 = f.e - Affine::of(1);
                    if (!e1.is_zero()) rest.push_back(Factor{f.atom, e1});
                }
            }
            bool simple = !is_base_atom(f.atom) && f.e.is_rational() && da.den.empty() && da.num.terms.size() == 1;
            if (simple) {
                Monomial nm = mono_mul(rest, da.num.terms[0].m);
                if (!needs_fixup(nm)) {
                    b.add(std::move(nm), t.c * f.e.const_part() * da.num.terms[0].c);
                    continue;
                }
            }
            RatFunc part = fixup(Poly{{Term{std::move(rest), t.c}}});
            part = mul(part, RatFunc::from_poly(Poly::from_affine(f.e)));
            complex.push_back(mul(part, da));
        }
    }
    return b.take();
}

RatFunc poly_partial(const Poly& p, const Expr& v) {
    std::vector<RatFunc> complex;
    Poly simple = poly_partial_simple(p, v, complex);
    complex.push_back(RatFunc{std::move(simple), {}});
    return sum(complex);
}

}  // namespace

RatFunc partial(const RatFunc& f, const Expr& v) {
    RatFunc dn = poly_partial(f.num, v);
    if (f.den.empty()) return dn;
    RatFunc invden{Poly::constant(1), f.den};
    std::vector<RatFunc> parts{mul(dn, invden)};
    for (const auto& d : f.den) {
        RatFunc dp = poly_partial(d.p, v);
        if (dp.is_zero()) continue;
        RatFunc term = mul(RatFunc{poly_scale(f.num, Rational(-d.k)), {}}, dp);
        std::vector<DenFactor> den = f.den;
        for (auto& x : den)
            if (x.p == d.p) x.k += 1;
        parts.push_back(mul(term, RatFunc{Poly::constant(1), den}));
    }
    return sum(parts);
}

namespace {

Expr subst_tree(const Expr& e, const std::vector<std::pair<Expr, Expr>>& subs) {
    if (is_symbol_kind(e.kind())) {
        for (const auto& [k, v] : subs)
            if (k == e) return v;
        return e;
    }
    if (e.args().empty()) return e;
    std::vector<Expr> args;
    bool changed = false;
    for (const auto& a : e.args()) {
        args.push_back(subst_tree(a, subs));
        if (args.back().get() != a.get()) changed = true;
    }
    if (!changed) return e;
    switch (e.kind()) {
        case Kind::Add: return Expr::add(args);
        case Kind::Mul: return Expr::mul(args);
        case Kind::Pow: return Expr::pow(args[0], args[1]);
        case Kind::Apply: return Expr::apply(e.node().fn, args[0]);
        default: return e;
    }
}

}  // namespace

RatFunc substitute(const RatFunc& f, const std::vector<std::pair<Expr, RatFunc>>& subs) {
    if (subs.empty()) return f;
    bool touches_exponents = false, touches_funcs = false;
    for (const auto& [s, v] : subs) {
        if (s == param_q() || s == param_r()) touches_exponents = true;
        if (s.kind() == Kind::Coord || s.kind() == Kind::Time || s.kind() == Kind::Dep) touches_funcs = true;
    }
    std::vector<std::pair<Expr, Expr>> tree_subs;
    auto tree_subs_ready = [&]() {
        if (tree_subs.empty())
            for (const auto& [s, v] : subs) tree_subs.emplace_back(s, to_tree(v));
    };
    auto mentions = [&](const Expr& a) {
        for (const auto& [s, v] : subs)
            if (tree_mentions(a, s)) return true;
        return false;
    };
    struct Cached {
        Expr atom;
        Affine e;
        RatFunc value;
    };
    std::vector<Cached> cache;
    auto replaced = [&](const Factor& fac) -> RatFunc {
        for (const auto& c : cache)
            if (c.e == fac.e && c.atom == fac.atom) return c.value;
        Affine e = fac.e;
        if (touches_exponents && !e.is_rational()) {
            tree_subs_ready();
            e = affine_from_expr(subst_tree(affine_tree(e), tree_subs));
        }
        RatFunc base;
        bool found = false;
        for (const auto& [s, v] : subs)
            if (s == fac.atom) {
                base = v;
                found = true;
            }
        if (!found) {
            if (fac.atom.kind() == Kind::Func) {
                if (touches_funcs) throw ValueError("cannot substitute into opaque function " + fac.atom.str());
                base = RatFunc{Poly::atom(fac.atom), {}};
            } else if (mentions(fac.atom)) {
                tree_subs_ready();
                base = to_nf(subst_tree(fac.atom, tree_subs));
            } else {
                base = RatFunc{Poly::atom(fac.atom), {}};
                if (e == fac.e) return RatFunc{Poly{{Term{{fac}, 1}}}, {}};
            }
        }
        RatFunc val = power(base, e);
        cache.push_back(Cached{fac.atom, fac.e, val});
        return val;
    };
    auto affected = [&](const Factor& fac) {
        if (touches_exponents && !fac.e.is_rational()) return true;
        for (const auto& [s, v] : subs)
            if (s == fac.atom) return true;
        if (fac.atom.kind() == Kind::Func) return touches_funcs;
        return !is_symbol_kind(fac.atom.kind()) && mentions(fac.atom);
    };
    auto subst_poly = [&](const Poly& p) -> RatFunc {
        PolyBuilder b;
        std::vector<RatFunc> parts;
        for (const auto& t : p.terms) {
            Monomial keep;
            RatFunc acc = RatFunc::constant(t.c);
            bool hit = false;
            for (const auto& fac : t.m) {
                if (affected(fac)) {
                    hit = true;
                    acc = mul(acc, replaced(fac));
                } else {
                    keep.push_back(fac);
                }
            }
            if (!hit) {
                b.add(t.m, t.c);
                continue;
            }
            parts.push_back(mul(acc, RatFunc{Poly{{Term{std::move(keep), 1}}}, {}}));
        }
        parts.push_back(RatFunc{b.take(), {}});
        return sum(parts);
    };
    RatFunc out = subst_poly(f.num);
    for (const auto& d : f.den) {
        RatFunc dv = subst_poly(d.p);
        out = mul(out, power(dv, Affine::of(-d.k)));
    }
    return out;
}

void for_each_atom(const RatFunc& f, const std::function<void(const Expr&)>& fn, bool deep) {
    std::function<void(const Expr&)> walk = [&](const Expr& e) {
        fn(e);
        if (deep)
            for (const auto& a : e.args()) walk(a);
    };
    for (const auto& t : f.num.terms)
        for (const auto& fac : t.m) walk(fac.atom);
    for (const auto& d : f.den)
        for (const auto& t : d.p.terms)
            for (const auto& fac : t.m) walk(fac.atom);
}

RatFunc map_terms(const RatFunc& f, const std::function<RatFunc(const Term&)>& fn) {
    std::vector<RatFunc> parts;
    parts.reserve(f.num.terms.size());
    for (const auto& t : f.num.terms) parts.push_back(fn(t));
    RatFunc s = sum(parts);
    if (f.den.empty()) return s;
    return mul(s, RatFunc{Poly::constant(1), f.den});
}

}  // namespace liesym::nf
