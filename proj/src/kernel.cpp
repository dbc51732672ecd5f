#include "liesym/kernel.hpp"

#include "liesym/errors.hpp"
#include "normal_form.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace liesym {

using nf::Affine;
using nf::Factor;
using nf::Monomial;
using nf::Poly;
using nf::RatFunc;

std::string case_name(CaseAssumption c) {
    switch (c) {
        case CaseAssumption::Generic: return "Generic";
        case CaseAssumption::QeqRplus1: return "QeqRplus1";
        case CaseAssumption::Qeq1: return "Qeq1";
        case CaseAssumption::Req0: return "Req0";
        case CaseAssumption::QeqRplus1eq1: return "QeqRplus1eq1";
    }
    return "Generic";
}

CaseAssumption parse_case(const std::string& text) {
    std::string s;
    for (char ch : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (s == "generic" || s == "case1") return CaseAssumption::Generic;
    if (s == "qeqrplus1" || s == "qr1" || s == "case2") return CaseAssumption::QeqRplus1;
    if (s == "qeq1" || s == "q1" || s == "case3") return CaseAssumption::Qeq1;
    if (s == "req0" || s == "r0" || s == "case4") return CaseAssumption::Req0;
    if (s == "qeqrplus1eq1" || s == "q1r0" || s == "case5") return CaseAssumption::QeqRplus1eq1;
    throw ValueError("unknown case '" + text + "'");
}

std::vector<std::pair<Expr, Expr>> case_substitution(CaseAssumption c) {
    Expr q = Expr::param("q"), r = Expr::param("r");
    switch (c) {
        case CaseAssumption::Generic: return {};
        case CaseAssumption::QeqRplus1: return {{q, r + Expr(1)}};
        case CaseAssumption::Qeq1: return {{q, Expr(1)}};
        case CaseAssumption::Req0: return {{r, Expr(0)}};
        case CaseAssumption::QeqRplus1eq1: return {{q, Expr(1)}, {r, Expr(0)}};
    }
    return {};
}

Expr apply_case(const Expr& e, CaseAssumption c) {
    auto subs = case_substitution(c);
    if (subs.empty()) return simplify(e);
    return substitute(e, subs);
}

Expr simplify(const Expr& e) { return nf::to_tree(nf::to_nf(e)); }

bool is_zero(const Expr& e) { return nf::to_nf(e).is_zero(); }

namespace {

void check_variable(const Expr& v) {
    if (!nf::is_symbol_kind(v.kind())) throw ValueError("cannot differentiate with respect to " + v.str());
}

Expr slot_symbol(int slot) {
    if (slot == kTSlot) return Expr::time();
    if (slot == kUSlot) return Expr::dep();
    return Expr::coord(slot);
}

void collect_atoms(const Expr& e, std::vector<Expr>& out, Kind k) {
    if (e.kind() == k) {
        if (std::none_of(out.begin(), out.end(), [&](const Expr& x) { return x == e; })) out.push_back(e);
        return;
    }
    for (const auto& a : e.args()) collect_atoms(a, out, k);
}

}  // namespace

Expr partial(const Expr& e, const Expr& v) {
    check_variable(v);
    return nf::to_tree(nf::partial(nf::to_nf(e), v));
}

Expr total_derivative(const Expr& e, int slot, int max_order) {
    if (slot != kTSlot && (slot < 1 || slot > kMaxDim)) throw IndexError("invalid derivative index");
    RatFunc f = nf::to_nf(e);
    std::vector<Expr> jets;
    collect_atoms(nf::to_tree(f), jets, Kind::Jet);
    std::vector<RatFunc> parts;
    parts.push_back(nf::partial(f, slot_symbol(slot)));
    RatFunc du = nf::partial(f, Expr::dep());
    if (!du.is_zero()) parts.push_back(nf::mul(nf::to_nf(Expr::jet(JetIndex::make({slot}))), du));
    for (const auto& j : jets) {
        RatFunc dj = nf::partial(f, j);
        if (dj.is_zero()) continue;
        JetIndex next = j.node().jet.with(slot);
        if (next.order > max_order)
            throw OrderOverflow("total derivative of " + j.str() + " needs jets of order " + std::to_string(next.order));
        parts.push_back(nf::mul(nf::to_nf(Expr::jet(next)), dj));
    }
    return nf::to_tree(nf::sum(parts));
}

Expr substitute(const Expr& e, const std::vector<std::pair<Expr, Expr>>& subs) {
    std::vector<std::pair<Expr, RatFunc>> s;
    for (const auto& [k, v] : subs) {
        if (!nf::is_symbol_kind(k.kind())) throw ValueError("can only substitute symbols, got " + k.str());
        s.emplace_back(k, nf::to_nf(v));
    }
    return nf::to_tree(nf::substitute(nf::to_nf(e), s));
}

namespace {

Expr map_funcs(const Expr& e, const std::function<std::optional<Expr>(const Expr&)>& fn) {
    if (e.kind() == Kind::Func) {
        auto r = fn(e);
        return r ? *r : e;
    }
    if (e.args().empty()) return e;
    std::vector<Expr> args;
    bool changed = false;
    for (const auto& a : e.args()) {
        args.push_back(map_funcs(a, fn));
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

Expr substitute_functions(const Expr& e, const FunctionRule& rule) {
    std::map<std::pair<int, int>, std::optional<RatFunc>> bases;
    std::vector<std::pair<Expr, Expr>> done;
    auto fn = [&](const Expr& atom) -> std::optional<Expr> {
        for (const auto& [k, v] : done)
            if (k == atom) return v;
        const Node& n = atom.node();
        auto key = std::make_pair(static_cast<int>(n.func), n.index);
        auto it = bases.find(key);
        if (it == bases.end()) {
            auto r = rule(n.func, n.index);
            it = bases.emplace(key, r ? std::optional<RatFunc>(nf::to_nf(*r)) : std::nullopt).first;
        }
        if (!it->second) return std::nullopt;
        RatFunc v = *it->second;
        for (int slot = 1; slot < static_cast<int>(n.deriv.size()); ++slot)
            for (int c = 0; c < n.deriv[slot]; ++c) v = nf::partial(v, slot_symbol(slot));
        Expr out = nf::to_tree(v);
        done.emplace_back(atom, out);
        return out;
    };
    return simplify(map_funcs(e, fn));
}

Expr zero_function_derivatives(const Expr& e, const std::vector<Expr>& atoms) {
    auto fn = [&](const Expr& a) -> std::optional<Expr> {
        const Node& n = a.node();
        for (const auto& z : atoms) {
            const Node& m = z.node();
            if (m.func != n.func || m.index != n.index) continue;
            bool dominates = true;
            for (std::size_t s = 0; s < n.deriv.size(); ++s)
                if (n.deriv[s] < m.deriv[s]) dominates = false;
            if (dominates) return Expr();
        }
        return std::nullopt;
    };
    return simplify(map_funcs(e, fn));
}

namespace {

struct SplitTerm {
    Monomial jets;
    Affine u_exp;
    Monomial rest;
};

SplitTerm split_term(const nf::Term& t) {
    SplitTerm s;
    for (const auto& f : t.m) {
        if (f.atom.kind() == Kind::Jet) {
            if (!f.e.is_integer() || f.e.a < 0)
                throw NonPolynomialJet("jet " + f.atom.str() + " appears with exponent " + nf::affine_tree(f.e).str());
            s.jets.push_back(f);
        } else if (f.atom.kind() == Kind::Dep) {
            s.u_exp = f.e;
        } else {
            s.rest.push_back(f);
        }
    }
    return s;
}

void check_den(const RatFunc& f) {
    for (const auto& d : f.den)
        for (const auto& t : d.p.terms)
            for (const auto& fac : t.m)
                if (fac.atom.kind() == Kind::Jet) throw NonPolynomialJet("jet variable in a denominator");
    bool deep_jet = false;
    for (const auto& t : f.num.terms)
        for (const auto& fac : t.m)
            if (fac.atom.kind() != Kind::Jet && mentions_kind(fac.atom, Kind::Jet)) deep_jet = true;
    if (deep_jet) throw NonPolynomialJet("jet variable inside a non-polynomial subexpression");
}

Expr rest_tree(const RatFunc& f, const std::vector<nf::Term>& terms) {
    Poly p;
    p.terms = terms;
    std::sort(p.terms.begin(), p.terms.end(),
              [](const nf::Term& x, const nf::Term& y) { return nf::monomial_compare(x.m, y.m) > 0; });
    return nf::to_tree(nf::mul(RatFunc{p, {}}, RatFunc{Poly::constant(1), f.den}));
}

Monomial with_u(const Monomial& m, const Affine& e) {
    Monomial out = m;
    if (e.is_zero()) return out;
    Factor f{Expr::dep(), e};
    auto it = std::lower_bound(out.begin(), out.end(), f.atom,
                               [](const Factor& x, const Expr& a) { return compare(x.atom, a) < 0; });
    out.insert(it, f);
    return out;
}

}  // namespace

Collection collect(const Expr& e, const std::vector<Expr>& monomials, CaseAssumption a) {
    RatFunc f = nf::to_nf(apply_case(e, a));
    check_den(f);
    struct Want {
        Monomial jets;
        bool has_u;
        Affine u_exp;
        std::vector<nf::Term> terms;
    };
    std::vector<Want> wants;
    for (const auto& m : monomials) {
        RatFunc mf = nf::to_nf(apply_case(m, a));
        if (!mf.den.empty() || mf.num.terms.size() != 1) throw ValueError("not a monomial: " + m.str());
        SplitTerm s = split_term(mf.num.terms[0]);
        if (!s.rest.empty()) throw ValueError("monomial may only contain jets and a power of u: " + m.str());
        bool has_u = std::any_of(mf.num.terms[0].m.begin(), mf.num.terms[0].m.end(),
                                 [](const Factor& x) { return x.atom.kind() == Kind::Dep; });
        wants.push_back(Want{s.jets, has_u, s.u_exp, {}});
    }
    std::vector<nf::Term> remainder;
    for (const auto& t : f.num.terms) {
        SplitTerm s = split_term(t);
        bool matched = false;
        for (auto& w : wants) {
            if (!nf::monomial_equal(w.jets, s.jets)) continue;
            if (w.has_u && !(w.u_exp == s.u_exp)) continue;
            Monomial m = w.has_u ? s.rest : with_u(s.rest, s.u_exp);
            w.terms.push_back(nf::Term{m, t.c});
            matched = true;
            break;
        }
        if (!matched) remainder.push_back(t);
    }
    Collection out;
    for (std::size_t k = 0; k < wants.size(); ++k) out.coefficients.emplace_back(monomials[k], rest_tree(f, wants[k].terms));
    out.remainder = rest_tree(f, remainder);
    return out;
}

std::vector<std::pair<Expr, Expr>> jet_coefficients(const Expr& e) {
    RatFunc f = nf::to_nf(e);
    check_den(f);
    std::vector<std::pair<Monomial, std::vector<nf::Term>>> groups;
    for (const auto& t : f.num.terms) {
        SplitTerm s = split_term(t);
        Monomial rest = with_u(s.rest, s.u_exp);
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return nf::monomial_equal(g.first, s.jets); });
        if (it == groups.end()) {
            groups.emplace_back(s.jets, std::vector<nf::Term>{});
            it = groups.end() - 1;
        }
        it->second.push_back(nf::Term{rest, t.c});
    }
    std::sort(groups.begin(), groups.end(),
              [](const auto& x, const auto& y) { return nf::monomial_compare(x.first, y.first) > 0; });
    std::vector<std::pair<Expr, Expr>> out;
    for (const auto& [m, terms] : groups) {
        Expr mono = nf::poly_tree(Poly{{nf::Term{m, 1}}});
        out.emplace_back(mono, rest_tree(f, terms));
    }
    return out;
}

std::vector<std::pair<Expr, Expr>> u_power_coefficients(const Expr& e, CaseAssumption a) {
    RatFunc f = nf::to_nf(apply_case(e, a));
    for (const auto& d : f.den)
        for (const auto& t : d.p.terms)
            for (const auto& fac : t.m)
                if (fac.atom.kind() == Kind::Dep) throw ValueError("u appears in a denominator sum");
    std::vector<std::pair<Affine, std::vector<nf::Term>>> groups;
    for (const auto& t : f.num.terms) {
        Monomial rest;
        Affine ue;
        for (const auto& fac : t.m) {
            if (fac.atom.kind() == Kind::Dep) ue = fac.e;
            else {
                if (mentions_kind(fac.atom, Kind::Dep)) throw ValueError("u inside " + fac.atom.str());
                rest.push_back(fac);
            }
        }
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == ue; });
        if (it == groups.end()) {
            groups.emplace_back(ue, std::vector<nf::Term>{});
            it = groups.end() - 1;
        }
        it->second.push_back(nf::Term{rest, t.c});
    }
    std::sort(groups.begin(), groups.end(), [](const auto& x, const auto& y) { return x.first.compare(y.first) > 0; });
    std::vector<std::pair<Expr, Expr>> out;
    for (const auto& [ue, terms] : groups) {
        Expr mono = nf::poly_tree(Poly{{nf::Term{with_u({}, ue), 1}}});
        out.emplace_back(mono, rest_tree(f, terms));
    }
    return out;
}

bool mentions_kind(const Expr& e, Kind k) {
    if (e.kind() == k) return true;
    for (const auto& a : e.args())
        if (mentions_kind(a, k)) return true;
    return false;
}

bool has_jets(const Expr& e) { return mentions_kind(e, Kind::Jet); }

bool mentions(const Expr& e, const Expr& symbol) {
    if (e == symbol) return true;
    for (const auto& a : e.args())
        if (mentions(a, symbol)) return true;
    return false;
}

std::vector<Expr> function_atoms(const Expr& e) {
    std::vector<Expr> out;
    collect_atoms(e, out, Kind::Func);
    std::sort(out.begin(), out.end(), ExprLess{});
    return out;
}

Expr numerator(const Expr& e) { return nf::poly_tree(nf::to_nf(e).num); }

Expr normalize_equation(const Expr& e, const std::vector<Expr>& divisors) {
    Poly p = nf::to_nf(e).num;
    if (p.is_zero()) return Expr();
    // Monomial content in x, t and u.
    std::vector<Expr> atoms;
    for (const auto& t : p.terms)
        for (const auto& f : t.m) {
            Kind k = f.atom.kind();
            if ((k == Kind::Coord || k == Kind::Time || k == Kind::Dep) &&
                std::none_of(atoms.begin(), atoms.end(), [&](const Expr& a) { return a == f.atom; }))
                atoms.push_back(f.atom);
        }
    Monomial inv_content;
    for (const auto& a : atoms) {
        Affine mn;
        bool first = true;
        for (const auto& t : p.terms) {
            Affine ex;
            for (const auto& f : t.m)
                if (f.atom == a) ex = f.e;
            if (first || ex.compare(mn) < 0) mn = ex;
            first = false;
        }
        if (!mn.is_zero()) inv_content.push_back(Factor{a, -mn});
    }
    std::sort(inv_content.begin(), inv_content.end(),
              [](const Factor& x, const Factor& y) { return compare(x.atom, y.atom) < 0; });
    if (!inv_content.empty()) p = nf::poly_mul_term(p, inv_content, Rational(1));
    for (const auto& d : divisors) {
        RatFunc df = nf::to_nf(d);
        if (!df.den.empty() || df.num.terms.size() < 2) continue;
        Poly q;
        while (nf::poly_divide(p, df.num, q)) p = q;
    }
    Rational lc = p.terms.front().c;
    p = nf::poly_scale(p, Rational(1) / lc);
    return nf::poly_tree(p);
}

}  // namespace liesym
