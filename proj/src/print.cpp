#include "liesym/expr.hpp"

namespace liesym {

namespace {

std::string print(const Expr& e);

bool is_atomic(const Expr& e) {
    switch (e.kind()) {
        case Kind::Const: return e.value() >= 0 && is_integer(e.value());
        case Kind::Add:
        case Kind::Mul:
        case Kind::Pow: return false;
        default: return true;
    }
}

std::string wrap(const Expr& e) { return is_atomic(e) ? print(e) : "(" + print(e) + ")"; }

std::string print_exponent(const Expr& e) {
    if (e.kind() == Kind::Param || (e.is_const() && e.value() >= 0 && is_integer(e.value()))) return print(e);
    return "(" + print(e) + ")";
}

// Prints the absolute value of a term and reports whether it carried a negative sign.
std::string print_term(const Expr& e, bool& negative) {
    negative = false;
    if (e.is_const() && e.value() < 0) {
        negative = true;
        return to_string(Rational(-e.value()));
    }
    if (e.kind() == Kind::Mul && e.args()[0].is_const() && e.args()[0].value() < 0) {
        negative = true;
        std::vector<Expr> rest(e.args().begin() + 1, e.args().end());
        Rational c = -e.args()[0].value();
        if (c != 1) rest.insert(rest.begin(), Expr(c));
        Expr body = Expr::mul(rest);
        return body.kind() == Kind::Add ? "(" + print(body) + ")" : print(body);
    }
    return print(e);
}

std::string print(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Const: return to_string(n.value);
        case Kind::Apply: {
            const char* name = n.fn == Fn::Arctan ? "arctan" : (n.fn == Fn::Ln ? "ln" : "exp");
            return std::string(name) + "(" + print(n.args[0]) + ")";
        }
        case Kind::Pow: return wrap(n.args[0]) + "^" + print_exponent(n.args[1]);
        case Kind::Mul: {
            std::string s;
            std::size_t start = 0;
            if (n.args[0].is_const()) {
                const Rational& c = n.args[0].value();
                start = 1;
                if (c == -1) s = "-";
                else s = to_string(c) + "*";
            }
            for (std::size_t k = start; k < n.args.size(); ++k) {
                if (k > start) s += "*";
                const Expr& f = n.args[k];
                if (f.kind() == Kind::Add || f.kind() == Kind::Mul || f.is_const()) s += "(" + print(f) + ")";
                else s += print(f);
            }
            return s;
        }
        case Kind::Add: {
            std::string s;
            for (std::size_t k = 0; k < n.args.size(); ++k) {
                bool neg = false;
                const Expr& t = n.args[k];
                std::string body = t.kind() == Kind::Add ? "(" + print(t) + ")" : print_term(t, neg);
                if (k == 0) s = neg ? "-" + body : body;
                else s += (neg ? " - " : " + ") + body;
            }
            return s;
        }
        default: return symbol_name(n);
    }
}

}  // namespace

std::string Expr::str() const { return print(*this); }

}  // namespace liesym
