#include "liesym/expr.hpp"

#include "liesym/errors.hpp"

#include <algorithm>
#include <cmath>

namespace liesym {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t compute_hash(const Node& n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 1000003u;
    switch (n.kind) {
        case Kind::Const: h = mix(h, hash_value(n.value)); break;
        case Kind::Coord: h = mix(h, static_cast<std::size_t>(n.index)); break;
        case Kind::Time:
        case Kind::Dep: break;
        case Kind::Jet: h = mix(h, n.jet.code()); break;
        case Kind::Param: h = mix(h, std::hash<std::string>{}(n.name)); break;
        case Kind::Func:
            h = mix(h, static_cast<std::size_t>(n.func));
            h = mix(h, static_cast<std::size_t>(n.index));
            for (auto c : n.deriv) h = mix(h, c);
            break;
        case Kind::Apply: h = mix(h, static_cast<std::size_t>(n.fn)); break;
        default: break;
    }
    for (const auto& a : n.args) h = mix(h, a.hash());
    return h;
}

Expr make(Node n) {
    n.hash = compute_hash(n);
    return Expr(std::make_shared<const Node>(std::move(n)));
}

const Expr& zero_expr() {
    static const Expr z = [] {
        Node n;
        n.kind = Kind::Const;
        n.value = 0;
        return make(std::move(n));
    }();
    return z;
}

const Expr& one_expr() {
    static const Expr o = [] {
        Node n;
        n.kind = Kind::Const;
        n.value = 1;
        return make(std::move(n));
    }();
    return o;
}

int total_order(const DerivCounts& d) {
    int s = 0;
    for (auto c : d) s += c;
    return s;
}

}  // namespace

JetIndex JetIndex::make(std::vector<int> slots) {
    if (slots.size() > 3) throw OrderOverflow("jet order above 3 is not supported");
    std::sort(slots.begin(), slots.end());
    JetIndex j;
    j.order = static_cast<std::uint8_t>(slots.size());
    for (std::size_t k = 0; k < slots.size(); ++k) j.idx[k] = static_cast<std::uint8_t>(slots[k]);
    return j;
}

JetIndex JetIndex::with(int slot) const {
    std::vector<int> s(idx.begin(), idx.begin() + order);
    s.push_back(slot);
    return make(s);
}

bool JetIndex::has_time() const {
    for (int k = 0; k < order; ++k)
        if (idx[k] == kTSlot) return true;
    return false;
}

FuncDeps func_deps(FuncName f) {
    switch (f) {
        case FuncName::Alpha: return {true, true, false};
        case FuncName::Lam: return {true, false, false};
        default: return {true, true, true};
    }
}

const char* func_base_name(FuncName f) {
    switch (f) {
        case FuncName::Xi: return "xi";
        case FuncName::Eta: return "eta";
        case FuncName::Phi: return "phi";
        case FuncName::Alpha: return "alpha";
        case FuncName::Lam: return "lam";
    }
    return "?";
}

Expr::Expr() : p_(zero_expr().p_) {}
Expr::Expr(long v) : Expr(constant(Rational(v))) {}
Expr::Expr(const Rational& q) : Expr(constant(q)) {}

Expr Expr::constant(const Rational& q0) {
    Rational q = q0;
    q.canonicalize();
    if (q == 0) return zero_expr();
    if (q == 1) return one_expr();
    Node n;
    n.kind = Kind::Const;
    n.value = q;
    return make(std::move(n));
}

Expr Expr::coord(int i) {
    if (i < 1 || i > kMaxDim) throw IndexError("coordinate index " + std::to_string(i) + " out of range");
    Node n;
    n.kind = Kind::Coord;
    n.index = i;
    return make(std::move(n));
}

Expr Expr::time() {
    static const Expr e = [] {
        Node n;
        n.kind = Kind::Time;
        return make(std::move(n));
    }();
    return e;
}

Expr Expr::dep() {
    static const Expr e = [] {
        Node n;
        n.kind = Kind::Dep;
        return make(std::move(n));
    }();
    return e;
}

Expr Expr::jet(const JetIndex& j) {
    if (j.order == 0) return dep();
    Node n;
    n.kind = Kind::Jet;
    n.jet = j;
    return make(std::move(n));
}

Expr Expr::param(const std::string& name) {
    Node n;
    n.kind = Kind::Param;
    n.name = name;
    return make(std::move(n));
}

Expr Expr::func(FuncName f, int index, DerivCounts d) {
    Node n;
    n.kind = Kind::Func;
    n.func = f;
    n.index = f == FuncName::Xi ? index : 0;
    n.deriv = d;
    return make(std::move(n));
}

Expr Expr::add(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    for (auto& t : terms) {
        if (t.kind() == Kind::Add) {
            for (const auto& c : t.args()) flat.push_back(c);
        } else if (!t.is_zero_const()) {
            flat.push_back(std::move(t));
        }
    }
    if (flat.empty()) return Expr();
    if (flat.size() == 1) return flat[0];
    Node n;
    n.kind = Kind::Add;
    n.args = std::move(flat);
    return make(std::move(n));
}

Expr Expr::mul(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    for (auto& f : factors) {
        if (f.kind() == Kind::Mul) {
            for (const auto& c : f.args()) flat.push_back(c);
        } else if (f.is_zero_const()) {
            return Expr();
        } else if (!f.is_one_const()) {
            flat.push_back(std::move(f));
        }
    }
    if (flat.empty()) return Expr(1);
    if (flat.size() == 1) return flat[0];
    Node n;
    n.kind = Kind::Mul;
    n.args = std::move(flat);
    return make(std::move(n));
}

Expr Expr::pow(Expr base, Expr exponent) {
    if (exponent.is_one_const()) return base;
    Node n;
    n.kind = Kind::Pow;
    n.args = {std::move(base), std::move(exponent)};
    return make(std::move(n));
}

Expr Expr::apply(Fn fn, Expr arg) {
    Node n;
    n.kind = Kind::Apply;
    n.fn = fn;
    n.args = {std::move(arg)};
    return make(std::move(n));
}

Kind Expr::kind() const { return p_->kind; }
std::size_t Expr::hash() const { return p_->hash; }
bool Expr::is_zero_const() const { return p_->kind == Kind::Const && p_->value == 0; }
bool Expr::is_one_const() const { return p_->kind == Kind::Const && p_->value == 1; }
const Rational& Expr::value() const { return p_->value; }
const std::vector<Expr>& Expr::args() const { return p_->args; }

int compare(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return 0;
    const Node& x = a.node();
    const Node& y = b.node();
    if (x.kind != y.kind) return x.kind < y.kind ? -1 : 1;
    switch (x.kind) {
        case Kind::Const: {
            int c = cmp(x.value, y.value);
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case Kind::Coord: return x.index < y.index ? -1 : (x.index > y.index ? 1 : 0);
        case Kind::Time:
        case Kind::Dep: return 0;
        case Kind::Jet: return x.jet.code() < y.jet.code() ? -1 : (x.jet.code() > y.jet.code() ? 1 : 0);
        case Kind::Param: return x.name < y.name ? -1 : (x.name > y.name ? 1 : 0);
        case Kind::Func: {
            if (x.func != y.func) return x.func < y.func ? -1 : 1;
            if (x.index != y.index) return x.index < y.index ? -1 : 1;
            int ox = total_order(x.deriv), oy = total_order(y.deriv);
            if (ox != oy) return ox < oy ? -1 : 1;
            for (std::size_t s = 0; s < x.deriv.size(); ++s)
                if (x.deriv[s] != y.deriv[s]) return x.deriv[s] > y.deriv[s] ? -1 : 1;
            return 0;
        }
        case Kind::Apply:
            if (x.fn != y.fn) return x.fn < y.fn ? -1 : 1;
            break;
        default: break;
    }
    std::size_t m = std::min(x.args.size(), y.args.size());
    for (std::size_t k = 0; k < m; ++k) {
        int c = compare(x.args[k], y.args[k]);
        if (c != 0) return c;
    }
    if (x.args.size() != y.args.size()) return x.args.size() < y.args.size() ? -1 : 1;
    return 0;
}

bool operator==(const Expr& a, const Expr& b) {
    return a.get() == b.get() || (a.hash() == b.hash() && compare(a, b) == 0);
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::add({a, -b}); }
Expr operator-(const Expr& a) {
    if (a.is_const()) return Expr(-a.value());
    return Expr::mul({Expr(-1), a});
}
Expr operator*(const Expr& a, const Expr& b) { return Expr::mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_const() && b.value() != 0) return Expr::mul({Expr(Rational(1) / b.value()), a});
    return Expr::mul({a, Expr::pow(b, Expr(-1))});
}
Expr pow(const Expr& base, const Expr& exponent) { return Expr::pow(base, exponent); }
Expr arctan(const Expr& a) { return Expr::apply(Fn::Arctan, a); }
Expr ln(const Expr& a) { return Expr::apply(Fn::Ln, a); }
Expr exp(const Expr& a) { return Expr::apply(Fn::Exp, a); }

std::string jet_name(const JetIndex& j) {
    std::string s = "u_";
    for (int k = 0; k < j.order; ++k) s += j.idx[k] == kTSlot ? 't' : static_cast<char>('0' + j.idx[k]);
    return s;
}

std::string symbol_name(const Node& n) {
    switch (n.kind) {
        case Kind::Coord: return "x" + std::to_string(n.index);
        case Kind::Time: return "t";
        case Kind::Dep: return "u";
        case Kind::Jet: return jet_name(n.jet);
        case Kind::Param: return n.name;
        case Kind::Func: {
            std::string s = func_base_name(n.func);
            if (n.func == FuncName::Xi) s += std::to_string(n.index);
            std::string suffix;
            for (int slot = 1; slot <= kMaxDim; ++slot) suffix.append(n.deriv[slot], static_cast<char>('0' + slot));
            suffix.append(n.deriv[kTSlot], 't');
            suffix.append(n.deriv[kUSlot], 'u');
            if (!suffix.empty()) s += "_" + suffix;
            return s;
        }
        default: return "";
    }
}

namespace {

double checked(double v, const Expr& e) {
    if (!std::isfinite(v)) throw EvaluationError("non-finite value at " + e.str());
    return v;
}

}  // namespace

double evaluate(const Expr& e, const EvalEnv& env) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Const: return to_double(n.value);
        case Kind::Coord:
            if (n.index > static_cast<int>(env.x.size())) throw EvaluationError("no value for " + e.str());
            return env.x[n.index - 1];
        case Kind::Time: return env.t;
        case Kind::Dep: return env.u;
        case Kind::Jet: {
            auto it = env.jets.find(n.jet.code());
            if (it == env.jets.end()) throw EvaluationError("no value for " + e.str());
            return it->second;
        }
        case Kind::Param: {
            auto it = env.params.find(n.name);
            if (it == env.params.end()) throw EvaluationError("no value for " + e.str());
            return it->second;
        }
        case Kind::Func: throw EvaluationError("opaque function " + e.str() + " cannot be evaluated");
        case Kind::Add: {
            double s = 0;
            for (const auto& a : n.args) s += evaluate(a, env);
            return checked(s, e);
        }
        case Kind::Mul: {
            double p = 1;
            for (const auto& a : n.args) p *= evaluate(a, env);
            return checked(p, e);
        }
        case Kind::Pow: {
            double b = evaluate(n.args[0], env);
            const Expr& ex = n.args[1];
            if (ex.is_const() && is_integer(ex.value()) && abs(ex.value()) < 1000) {
                long k = ex.value().get_num().get_si();
                if (k < 0 && b == 0) throw EvaluationError("division by zero at " + e.str());
                return checked(std::pow(b, static_cast<double>(k)), e);
            }
            return checked(std::pow(b, evaluate(ex, env)), e);
        }
        case Kind::Apply: {
            double a = evaluate(n.args[0], env);
            switch (n.fn) {
                case Fn::Arctan: return std::atan(a);
                case Fn::Ln:
                    if (a <= 0) throw EvaluationError("logarithm of nonpositive value at " + e.str());
                    return std::log(a);
                case Fn::Exp: return checked(std::exp(a), e);
            }
        }
    }
    throw EvaluationError("unknown node");
}

}  // namespace liesym
